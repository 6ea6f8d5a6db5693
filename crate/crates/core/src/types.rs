//! Domain types: the environment, its drift and diffusion matrices, and the
//! two-mode covariance matrix.
//!
//! Units are ħ = k = 1. Phase-space ordering is fixed to (x, p_x, y, p_y)
//! everywhere in the crate.

use nalgebra::{Matrix2, Matrix4};
use serde::Serialize;

use crate::error::{Error, Result};

/// Asymmetry below this (relative to the largest entry) is folded away by
/// symmetrization; anything larger is rejected.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Parameters of the common bath seen by both oscillators.
///
/// Only the mode-x coefficients and the cross coefficients are stored. The
/// mode-y coefficients follow from the symmetric-environment reduction
/// D_yy = D_xx, D_yp_y = D_xp_x, D_p_yp_y = D_p_xp_x and D_yp_x = D_xp_y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvironmentSpec {
    pub m: f64,
    pub omega: f64,
    pub lambda: f64,
    /// C = coth(ω / 2T).
    pub thermal_c: f64,
    pub d_xx: f64,
    pub d_xpx: f64,
    pub d_pxpx: f64,
    pub d_xy: f64,
    pub d_xpy: f64,
    pub d_pxpy: f64,
}

/// Raw coefficient set accepted by [`EnvironmentSpec::new`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvironmentParams {
    pub m: f64,
    pub omega: f64,
    pub lambda: f64,
    pub thermal_c: f64,
    pub d_xx: f64,
    pub d_xpx: f64,
    pub d_pxpx: f64,
    pub d_xy: f64,
    pub d_xpy: f64,
    pub d_pxpy: f64,
}

fn check_common(m: f64, omega: f64, lambda: f64, thermal_c: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
            reason: "dissipation must be positive so that exp(Yt) decays",
        });
    }
    if !(thermal_c >= 1.0) || !thermal_c.is_finite() {
        return Err(Error::InvalidParameter {
            name: "thermal_c",
            value: thermal_c,
            reason: "coth of a positive argument is at least 1",
        });
    }
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::InvalidParameter {
            name: "m",
            value: m,
            reason: "mass must be positive",
        });
    }
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidParameter {
            name: "omega",
            value: omega,
            reason: "frequency must be positive",
        });
    }
    Ok(())
}

impl EnvironmentSpec {
    /// General environment with arbitrary (finite) diffusion coefficients.
    pub fn new(p: EnvironmentParams) -> Result<Self> {
        check_common(p.m, p.omega, p.lambda, p.thermal_c)?;
        let coeffs = [
            ("d_xx", p.d_xx),
            ("d_xpx", p.d_xpx),
            ("d_pxpx", p.d_pxpx),
            ("d_xy", p.d_xy),
            ("d_xpy", p.d_xpy),
            ("d_pxpy", p.d_pxpy),
        ];
        for (name, value) in coeffs {
            if !value.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "diffusion coefficients must be finite",
                });
            }
        }
        Ok(Self {
            m: p.m,
            omega: p.omega,
            lambda: p.lambda,
            thermal_c: p.thermal_c,
            d_xx: p.d_xx,
            d_xpx: p.d_xpx,
            d_pxpx: p.d_pxpx,
            d_xy: p.d_xy,
            d_xpy: p.d_xpy,
            d_pxpy: p.d_pxpy,
        })
    }

    /// Environment whose asymptotic state is a Gibbs state:
    /// mωD_xx = D_pxpx/(mω) = (λ/2)C, D_xpx = 0 and D_pxpy = m²ω²D_xy.
    pub fn thermal(
        lambda: f64,
        thermal_c: f64,
        d_xy: f64,
        d_xpy: f64,
        m: f64,
        omega: f64,
    ) -> Result<Self> {
        check_common(m, omega, lambda, thermal_c)?;
        let m_omega = m * omega;
        Self::new(EnvironmentParams {
            m,
            omega,
            lambda,
            thermal_c,
            d_xx: 0.5 * lambda * thermal_c / m_omega,
            d_xpx: 0.0,
            d_pxpx: 0.5 * lambda * thermal_c * m_omega,
            d_xy,
            d_xpy,
            d_pxpy: m_omega * m_omega * d_xy,
        })
    }

    /// Same thermal environment at another value of C.
    pub fn with_thermal_c(&self, thermal_c: f64) -> Result<Self> {
        self.ensure_thermal()?;
        Self::thermal(
            self.lambda,
            thermal_c,
            self.d_xy,
            self.d_xpy,
            self.m,
            self.omega,
        )
    }

    pub fn d_yy(&self) -> f64 {
        self.d_xx
    }
    pub fn d_ypy(&self) -> f64 {
        self.d_xpx
    }
    pub fn d_pypy(&self) -> f64 {
        self.d_pxpx
    }
    pub fn d_ypx(&self) -> f64 {
        self.d_xpy
    }

    /// Whether the coefficients obey the Gibbs-state relations for `thermal_c`.
    pub fn is_thermal(&self) -> bool {
        self.ensure_thermal().is_ok()
    }

    pub(crate) fn ensure_thermal(&self) -> Result<()> {
        let m_omega = self.m * self.omega;
        let target = 0.5 * self.lambda * self.thermal_c;
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()));
        if !close(m_omega * self.d_xx, target) || !close(self.d_pxpx / m_omega, target) {
            return Err(Error::NonThermal(
                "mωD_xx and D_pxpx/(mω) must both equal λC/2",
            ));
        }
        if self.d_xpx != 0.0 {
            return Err(Error::NonThermal("D_xpx must vanish"));
        }
        if !close(m_omega * m_omega * self.d_xy, self.d_pxpy) {
            return Err(Error::NonThermal("D_pxpy must equal m²ω²D_xy"));
        }
        Ok(())
    }

    pub fn drift(&self) -> DriftMatrix {
        DriftMatrix::from_env(self)
    }

    pub fn diffusion(&self) -> DiffusionMatrix {
        DiffusionMatrix::from_env(self)
    }
}

/// C = coth(ω / 2T). `temperature == 0` maps to C = 1.
pub fn thermal_c_from_temperature(omega: f64, temperature: f64) -> Result<f64> {
    if !(temperature >= 0.0) || !temperature.is_finite() {
        return Err(Error::InvalidParameter {
            name: "temperature",
            value: temperature,
            reason: "temperature must be finite and non-negative",
        });
    }
    if temperature == 0.0 {
        return Ok(1.0);
    }
    Ok(1.0 / (omega / (2.0 * temperature)).tanh())
}

/// Inverse of [`thermal_c_from_temperature`].
pub fn temperature_from_thermal_c(omega: f64, thermal_c: f64) -> Result<f64> {
    if !(thermal_c >= 1.0) || !thermal_c.is_finite() {
        return Err(Error::InvalidParameter {
            name: "thermal_c",
            value: thermal_c,
            reason: "coth of a positive argument is at least 1",
        });
    }
    if thermal_c == 1.0 {
        return Ok(0.0);
    }
    Ok(omega / (2.0 * (1.0 / thermal_c).atanh()))
}

/// Drift matrix Y: two copies of the damped-oscillator block
/// `[[-λ, 1/m], [-mω², -λ]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix(Matrix4<f64>);

impl DriftMatrix {
    pub fn from_env(env: &EnvironmentSpec) -> Self {
        let mut y = Matrix4::zeros();
        let block = Self::mode_block(env);
        y.fixed_view_mut::<2, 2>(0, 0).copy_from(&block);
        y.fixed_view_mut::<2, 2>(2, 2).copy_from(&block);
        Self(y)
    }

    pub fn mode_block(env: &EnvironmentSpec) -> Matrix2<f64> {
        Matrix2::new(
            -env.lambda,
            1.0 / env.m,
            -env.m * env.omega * env.omega,
            -env.lambda,
        )
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }
}

/// Diffusion matrix D, symmetric, in (x, p_x, y, p_y) ordering.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionMatrix(Matrix4<f64>);

impl DiffusionMatrix {
    pub fn from_env(env: &EnvironmentSpec) -> Self {
        #[rustfmt::skip]
        let d = Matrix4::new(
            env.d_xx,   env.d_xpx,   env.d_xy,    env.d_xpy,
            env.d_xpx,  env.d_pxpx,  env.d_ypx(), env.d_pxpy,
            env.d_xy,   env.d_ypx(), env.d_yy(),  env.d_ypy(),
            env.d_xpy,  env.d_pxpy,  env.d_ypy(), env.d_pypy(),
        );
        Self(d)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }
}

/// Largest |M - Mᵀ| entry.
pub fn asymmetry(m: &Matrix4<f64>) -> f64 {
    (m - m.transpose()).amax()
}

/// The 4×4 covariance matrix of a two-mode Gaussian state.
///
/// Always exactly symmetric. Block layout is `[[A, C], [Cᵀ, B]]` with A the
/// (x, p_x) block, B the (y, p_y) block and C the cross correlations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix(Matrix4<f64>);

impl CovarianceMatrix {
    /// Symmetrizes `m` when its asymmetry is at rounding level, rejects it
    /// otherwise.
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "sigma",
                value: f64::NAN,
                reason: "covariance entries must be finite",
            });
        }
        let residual = asymmetry(&m);
        if residual > SYMMETRY_TOLERANCE * m.amax().max(1.0) {
            return Err(Error::Asymmetric { residual });
        }
        Ok(Self::symmetrized(m))
    }

    pub(crate) fn symmetrized(m: Matrix4<f64>) -> Self {
        Self((m + m.transpose()) * 0.5)
    }

    /// Builds σ from its ten independent entries.
    #[allow(clippy::too_many_arguments)]
    pub fn from_entries(
        xx: f64,
        xpx: f64,
        xy: f64,
        xpy: f64,
        pxpx: f64,
        ypx: f64,
        pxpy: f64,
        yy: f64,
        ypy: f64,
        pypy: f64,
    ) -> Result<Self> {
        #[rustfmt::skip]
        let m = Matrix4::new(
            xx,  xpx,  xy,  xpy,
            xpx, pxpx, ypx, pxpy,
            xy,  ypx,  yy,  ypy,
            xpy, pxpy, ypy, pypy,
        );
        Self::new(m)
    }

    /// The ten independent entries in the order taken by [`Self::from_entries`].
    pub fn independent_entries(&self) -> [f64; 10] {
        let s = &self.0;
        [
            s[(0, 0)],
            s[(0, 1)],
            s[(0, 2)],
            s[(0, 3)],
            s[(1, 1)],
            s[(1, 2)],
            s[(1, 3)],
            s[(2, 2)],
            s[(2, 3)],
            s[(3, 3)],
        ]
    }

    /// Names matching [`Self::independent_entries`].
    pub const ENTRY_NAMES: [&'static str; 10] = [
        "xx", "xpx", "xy", "xpy", "pxpx", "ypx", "pxpy", "yy", "ypy", "pypy",
    ];

    /// Symmetric state with A = B = diag(xx, pxpx) and cross block
    /// diag(xy, pxpy); the shape of every figure preset.
    pub fn symmetric_modes(xx: f64, pxpx: f64, xy: f64, pxpy: f64) -> Result<Self> {
        Self::from_entries(xx, 0.0, xy, 0.0, pxpx, 0.0, pxpy, xx, 0.0, pxpx)
    }

    /// σ = I₄/2.
    pub fn vacuum() -> Self {
        Self(Matrix4::identity() * 0.5)
    }

    pub fn from_blocks(a: &Matrix2<f64>, b: &Matrix2<f64>, c: &Matrix2<f64>) -> Result<Self> {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(b);
        m.fixed_view_mut::<2, 2>(0, 2).copy_from(c);
        m.fixed_view_mut::<2, 2>(2, 0).copy_from(&c.transpose());
        Self::new(m)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn a(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn b(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(2, 2).into_owned()
    }

    pub fn c(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(0, 2).into_owned()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[(row, col)]
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.0 - other.0).amax()
    }
}

impl From<CovarianceMatrix> for Matrix4<f64> {
    fn from(s: CovarianceMatrix) -> Self {
        s.0
    }
}
