//! Separability and entanglement of two-mode Gaussian states.
//!
//! The PPT test appears twice: as the Simon function S (separable iff
//! S ≥ 0) and through the smallest symplectic eigenvalue ν̃₋ of the partially
//! transposed covariance matrix, which also gives the logarithmic negativity
//! L = max{0, −log₂ 2ν̃₋}. For thermal environments the t → ∞ values have
//! closed forms, implemented at the bottom of this module.

use nalgebra::{Matrix2, Matrix4};
use serde::Serialize;

use crate::dynamics::steady_covariance;
use crate::error::{Error, Result};
use crate::linalg::det4;
use crate::types::{CovarianceMatrix, EnvironmentSpec};

/// |S| at or below this is reported as a boundary value.
pub const PPT_BAND: f64 = 1e-12;

/// The 2×2 symplectic form.
pub fn symplectic_j() -> Matrix2<f64> {
    Matrix2::new(0.0, 1.0, -1.0, 0.0)
}

/// Simon function
/// S = det A det B + (1/4 − |det C|)² − Tr[AJCJBJCᵀJ] − (det A + det B)/4.
pub fn simon_function(sigma: &CovarianceMatrix) -> f64 {
    let (a, b, c) = (sigma.a(), sigma.b(), sigma.c());
    let j = symplectic_j();
    let (det_a, det_b, det_c) = (a.determinant(), b.determinant(), c.determinant());
    let trace = (a * j * c * j * b * j * c.transpose() * j).trace();
    det_a * det_b + (0.25 - det_c.abs()).powi(2) - trace - 0.25 * (det_a + det_b)
}

/// Squared symplectic eigenvalues of a two-mode covariance matrix, or the
/// complex-pair condition when the discriminant is negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymplecticPair {
    Real { minus_sq: f64, plus_sq: f64 },
    ComplexPair { discriminant: f64 },
}

impl SymplecticPair {
    fn from_invariants(delta: f64, det_sigma: f64) -> Self {
        let discriminant = delta * delta - 4.0 * det_sigma;
        if discriminant < 0.0 {
            return Self::ComplexPair { discriminant };
        }
        let root = discriminant.sqrt();
        Self::Real {
            minus_sq: 0.5 * (delta - root),
            plus_sq: 0.5 * (delta + root),
        }
    }

    pub fn minus_sq(&self) -> Option<f64> {
        match *self {
            Self::Real { minus_sq, .. } => Some(minus_sq),
            Self::ComplexPair { .. } => None,
        }
    }

    pub fn plus_sq(&self) -> Option<f64> {
        match *self {
            Self::Real { plus_sq, .. } => Some(plus_sq),
            Self::ComplexPair { .. } => None,
        }
    }

    /// The smaller eigenvalue is zero or negative, i.e. the matrix cannot be
    /// the (partially transposed) covariance of any state.
    pub fn nonpositive_minus(&self) -> bool {
        matches!(*self, Self::Real { minus_sq, .. } if minus_sq <= 0.0)
    }
}

/// Symplectic invariant (Δ or Δ̃) plus the spectrum built from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymplecticSpectrum {
    pub invariant: f64,
    pub det_sigma: f64,
    pub pair: SymplecticPair,
}

/// Spectrum of σ itself: Δ = det A + det B + 2 det C.
pub fn symplectic_spectrum(sigma: &CovarianceMatrix) -> SymplecticSpectrum {
    let det_c = sigma.c().determinant();
    spectrum_with_cross_sign(sigma, 2.0 * det_c)
}

/// Spectrum of the partial transpose: Δ̃ = det A + det B − 2 det C.
pub fn symplectic_spectrum_pt(sigma: &CovarianceMatrix) -> SymplecticSpectrum {
    let det_c = sigma.c().determinant();
    spectrum_with_cross_sign(sigma, -2.0 * det_c)
}

fn spectrum_with_cross_sign(sigma: &CovarianceMatrix, cross: f64) -> SymplecticSpectrum {
    let invariant = sigma.a().determinant() + sigma.b().determinant() + cross;
    let det_sigma = det4(sigma.matrix());
    SymplecticSpectrum {
        invariant,
        det_sigma,
        pair: SymplecticPair::from_invariants(invariant, det_sigma),
    }
}

/// f(σ) = (det A + det B)/2 − det C − √([(det A + det B)/2 − det C]² − det σ).
///
/// Algebraically ν̃₋², evaluated in the arrangement used for the logarithmic
/// negativity. NaN when the radicand is negative.
pub fn negativity_f(sigma: &CovarianceMatrix) -> f64 {
    let half = 0.5 * (sigma.a().determinant() + sigma.b().determinant()) - sigma.c().determinant();
    let radicand = half * half - det4(sigma.matrix());
    if radicand < 0.0 {
        return f64::NAN;
    }
    half - radicand.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UndefinedReason {
    /// ν̃₋² ≤ 0: unphysical input or a degenerate boundary.
    NonPositive,
    /// Δ̃² < 4 det σ.
    ComplexSpectrum,
}

/// Logarithmic negativity, or a marker where it has no meaning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum LogNegativity {
    Defined(f64),
    Undefined(UndefinedReason),
}

impl LogNegativity {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Self::Defined(v) => Some(v),
            Self::Undefined(_) => None,
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, Self::Defined(_))
    }
}

/// L = max{0, −½ log₂(4f)} with f from [`negativity_f`].
pub fn log_negativity(sigma: &CovarianceMatrix) -> LogNegativity {
    log_negativity_from_f(negativity_f(sigma))
}

fn log_negativity_from_f(f: f64) -> LogNegativity {
    if f.is_nan() {
        LogNegativity::Undefined(UndefinedReason::ComplexSpectrum)
    } else if f <= 0.0 {
        LogNegativity::Undefined(UndefinedReason::NonPositive)
    } else {
        LogNegativity::Defined((-0.5 * (4.0 * f).log2()).max(0.0))
    }
}

/// Everything the PPT analysis says about one covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntanglementMetrics {
    pub simon_s: f64,
    pub seralian_tilde: f64,
    /// None when the PT spectrum is a complex pair.
    pub nu_tilde_minus_sq: Option<f64>,
    pub nu_tilde_plus_sq: Option<f64>,
    pub log_negativity: LogNegativity,
    /// S ≥ 0.
    pub separable: bool,
    /// |S| ≤ [`PPT_BAND`].
    pub boundary: bool,
    pub complex_pair: bool,
}

impl EntanglementMetrics {
    pub fn entangled(&self) -> bool {
        !self.separable
    }
}

pub fn metrics(sigma: &CovarianceMatrix) -> EntanglementMetrics {
    let simon_s = simon_function(sigma);
    let spectrum = symplectic_spectrum_pt(sigma);
    let f = negativity_f(sigma);
    if let (Some(nu_sq), false) = (spectrum.pair.minus_sq(), f.is_nan()) {
        debug_assert!(
            (nu_sq - f).abs() <= 1e-12 * spectrum.invariant.abs().max(1.0),
            "f(σ) = {f} disagrees with ν̃₋² = {nu_sq}"
        );
    }
    EntanglementMetrics {
        simon_s,
        seralian_tilde: spectrum.invariant,
        nu_tilde_minus_sq: spectrum.pair.minus_sq(),
        nu_tilde_plus_sq: spectrum.pair.plus_sq(),
        log_negativity: log_negativity_from_f(f),
        separable: simon_s >= 0.0,
        boundary: simon_s.abs() <= PPT_BAND,
        complex_pair: matches!(spectrum.pair, SymplecticPair::ComplexPair { .. }),
    }
}

/// Partial transpose: flips the sign of p_y.
pub fn partial_transpose(sigma: &CovarianceMatrix) -> CovarianceMatrix {
    let flip = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0));
    CovarianceMatrix::new(flip * sigma.matrix() * flip).expect("conjugation preserves symmetry")
}

// ---------------------------------------------------------------------------
// Asymptotic closed forms (thermal environments)
// ---------------------------------------------------------------------------

struct AsymptoticParts {
    /// (C² − 1)/4
    k: f64,
    c_sq: f64,
    /// D_xpy²/(λ² + ω²)
    delta: f64,
    /// (mωD_xy/λ)²
    g_sq: f64,
}

fn asymptotic_parts(env: &EnvironmentSpec) -> Result<AsymptoticParts> {
    env.ensure_thermal()?;
    let c_sq = env.thermal_c * env.thermal_c;
    let g = env.m * env.omega * env.d_xy / env.lambda;
    Ok(AsymptoticParts {
        k: 0.25 * (c_sq - 1.0),
        c_sq,
        delta: env.d_xpy * env.d_xpy / (env.lambda * env.lambda + env.omega * env.omega),
        g_sq: g * g,
    })
}

/// S(∞) for a thermal environment, valid for any sign of det C(∞).
///
/// With δ = D_xpy²/(λ²+ω²) and g = mωD_xy/λ the stationary cross block has
/// det C(∞) = g² − δ, giving
/// S(∞) = ((C²−1)/4 + |δ − g²|)² − C²·max(δ, g²).
pub fn asymptotic_simon(env: &EnvironmentSpec) -> Result<f64> {
    let p = asymptotic_parts(env)?;
    let spread = (p.delta - p.g_sq).abs();
    Ok((p.k + spread).powi(2) - p.c_sq * p.delta.max(p.g_sq))
}

/// S(∞) = ((C²−1)/4 − m²ω²D_xy²/λ² + δ)² − δC², the form that assumes
/// det C(∞) ≤ 0. Agrees with [`asymptotic_simon`] exactly on that domain
/// (in particular whenever D_xy = 0).
pub fn asymptotic_simon_reduced_form(env: &EnvironmentSpec) -> Result<f64> {
    let p = asymptotic_parts(env)?;
    Ok((p.k - p.g_sq + p.delta).powi(2) - p.delta * p.c_sq)
}

/// 2D_xpy/√(λ²+ω²).
fn scaled_cross(env: &EnvironmentSpec) -> f64 {
    2.0 * env.d_xpy / (env.lambda * env.lambda + env.omega * env.omega).sqrt()
}

fn ensure_no_xy(env: &EnvironmentSpec) -> Result<()> {
    env.ensure_thermal()?;
    if env.d_xy != 0.0 {
        return Err(Error::CrossDiffusionNonZero(env.d_xy));
    }
    Ok(())
}

/// Where the asymptotic state switches from entangled to separable (D_xy = 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticThreshold {
    /// C − 1 < 2D_xpy/√(λ²+ω²) at this environment's C.
    pub lower_holds: bool,
    /// 2D_xpy/√(λ²+ω²) < C + 1 at this environment's C.
    pub upper_holds: bool,
    /// S(∞) < 0 exactly for C below this value.
    pub c_threshold: f64,
    /// (λ/2)C ≥ |D_xpy|.
    pub constraint_ok: bool,
}

impl AsymptoticThreshold {
    pub fn entangled_at_infinity(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

pub fn asymptotic_threshold(env: &EnvironmentSpec) -> Result<AsymptoticThreshold> {
    ensure_no_xy(env)?;
    let x = scaled_cross(env);
    Ok(AsymptoticThreshold {
        lower_holds: env.thermal_c - 1.0 < x,
        upper_holds: x < env.thermal_c + 1.0,
        c_threshold: 1.0 + x,
        constraint_ok: 0.5 * env.lambda * env.thermal_c >= env.d_xpy.abs(),
    })
}

/// −log₂|C − 2D_xpy/√(λ²+ω²)| before clamping at zero.
pub fn asymptotic_log_negativity_raw(env: &EnvironmentSpec) -> Result<Option<f64>> {
    ensure_no_xy(env)?;
    let arg = (env.thermal_c - scaled_cross(env)).abs();
    if arg == 0.0 {
        return Ok(None);
    }
    Ok(Some(-arg.log2()))
}

/// L(∞), clamped at zero like [`log_negativity`].
pub fn asymptotic_log_negativity(env: &EnvironmentSpec) -> Result<LogNegativity> {
    Ok(match asymptotic_log_negativity_raw(env)? {
        Some(raw) => LogNegativity::Defined(raw.max(0.0)),
        None => LogNegativity::Undefined(UndefinedReason::NonPositive),
    })
}

/// Summary of the t → ∞ state of a thermal environment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticEntanglement {
    pub s_infinity: f64,
    pub l_infinity: LogNegativity,
    pub entangled_at_infinity: bool,
    /// Only defined for D_xy = 0.
    pub c_threshold: Option<f64>,
}

pub fn asymptotic_entanglement(env: &EnvironmentSpec) -> Result<AsymptoticEntanglement> {
    let s_infinity = asymptotic_simon(env)?;
    let (l_infinity, c_threshold) = if env.d_xy == 0.0 {
        (
            asymptotic_log_negativity(env)?,
            Some(asymptotic_threshold(env)?.c_threshold),
        )
    } else {
        (log_negativity(&steady_covariance(env)?), None)
    };
    Ok(AsymptoticEntanglement {
        s_infinity,
        l_infinity,
        entangled_at_infinity: s_infinity < 0.0,
        c_threshold,
    })
}
