//! Physicality checks for environments and covariance matrices.
//!
//! Checks are reported, never thrown. [`Strictness`] decides what a failed
//! report means for the caller.

use std::fmt;

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::entanglement::{symplectic_spectrum, SymplecticPair};
use crate::error::{Error, Result};
use crate::types::{asymmetry, CovarianceMatrix, EnvironmentSpec};

/// Absolute slack granted to inequalities that hold with equality in exact
/// arithmetic (thermal baths at C = 1, pure states).
pub const MARGIN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    /// Failing it makes the report fail.
    Gate,
    /// Reported as a warning only.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Signed slack: non-negative (up to [`MARGIN_TOLERANCE`]) means satisfied.
    pub margin: f64,
    pub passed: bool,
    pub severity: Severity,
}

impl Check {
    fn margin(name: impl Into<String>, margin: f64, severity: Severity) -> Self {
        Self {
            name: name.into(),
            margin,
            passed: margin >= -MARGIN_TOLERANCE,
            severity,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    /// All gating checks hold.
    pub fn passed(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| c.severity == Severity::Gate)
            .all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:<5} {:<28} margin {:+.6e}{}",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.margin,
                if c.severity == Severity::Info {
                    " (info)"
                } else {
                    ""
                }
            )?;
        }
        Ok(())
    }
}

/// The six Cauchy–Schwarz inequalities on the diffusion coefficients, plus an
/// informational test that the full Hermitian coefficient matrix is positive
/// semidefinite (smallest principal minor).
pub fn validate_diffusion(env: &EnvironmentSpec) -> ValidationReport {
    let quarter_l2 = 0.25 * env.lambda * env.lambda;
    let checks = vec![
        Check::margin(
            "xx*pxpx - xpx^2 >= l^2/4",
            env.d_xx * env.d_pxpx - env.d_xpx.powi(2) - quarter_l2,
            Severity::Gate,
        ),
        Check::margin(
            "yy*pypy - ypy^2 >= l^2/4",
            env.d_yy() * env.d_pypy() - env.d_ypy().powi(2) - quarter_l2,
            Severity::Gate,
        ),
        Check::margin(
            "xx*yy - xy^2 >= 0",
            env.d_xx * env.d_yy() - env.d_xy.powi(2),
            Severity::Gate,
        ),
        Check::margin(
            "pxpx*pypy - pxpy^2 >= 0",
            env.d_pxpx * env.d_pypy() - env.d_pxpy.powi(2),
            Severity::Gate,
        ),
        Check::margin(
            "xx*pypy - xpy^2 >= 0",
            env.d_xx * env.d_pypy() - env.d_xpy.powi(2),
            Severity::Gate,
        ),
        Check::margin(
            "yy*pxpx - ypx^2 >= 0",
            env.d_yy() * env.d_pxpx - env.d_ypx().powi(2),
            Severity::Gate,
        ),
        Check::margin(
            "coefficient_matrix_psd",
            min_principal_minor(&coefficient_matrix(env)),
            Severity::Info,
        ),
    ];
    ValidationReport { checks }
}

/// Hermitian matrix of scalar products of the Lindblad coefficient vectors.
pub fn coefficient_matrix(env: &EnvironmentSpec) -> DMatrix<Complex<f64>> {
    let r = |v: f64| Complex::new(v, 0.0);
    let h = Complex::new(0.0, 0.5 * env.lambda);
    #[rustfmt::skip]
    let entries = [
        r(env.d_xx),            -r(env.d_xpx) - h,   r(env.d_xy),            -r(env.d_xpy),
        -r(env.d_xpx) + h,      r(env.d_pxpx),       -r(env.d_ypx()),        r(env.d_pxpy),
        r(env.d_xy),            -r(env.d_ypx()),     r(env.d_yy()),          -r(env.d_ypy()) - h,
        -r(env.d_xpy),          r(env.d_pxpy),       -r(env.d_ypy()) + h,    r(env.d_pypy()),
    ];
    DMatrix::from_row_slice(4, 4, &entries)
}

/// Smallest principal minor over all non-empty index subsets.
pub fn min_principal_minor(m: &DMatrix<Complex<f64>>) -> f64 {
    let n = m.nrows();
    (1u32..(1 << n))
        .map(|mask| {
            let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let sub = DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])]);
            sub.determinant().re
        })
        .fold(f64::INFINITY, f64::min)
}

/// Symmetry, positivity and the uncertainty relation ν₋ ≥ 1/2 for σ.
pub fn check_physical_state(sigma: &CovarianceMatrix) -> ValidationReport {
    let m = sigma.matrix();
    let min_eig = SymmetricEigen::new(*m).eigenvalues.min();
    let spectrum = symplectic_spectrum(sigma);
    let (nu_minus, nu_plus) = match spectrum.pair {
        SymplecticPair::Real { minus_sq, plus_sq } => (signed_sqrt(minus_sq), signed_sqrt(plus_sq)),
        SymplecticPair::ComplexPair { .. } => (f64::NAN, f64::NAN),
    };
    let checks = vec![
        Check::margin("symmetric", -asymmetry(m), Severity::Gate),
        Check::margin("positive_semidefinite", min_eig, Severity::Gate),
        uncertainty_check("nu_minus >= 1/2", nu_minus),
        uncertainty_check("nu_plus >= 1/2", nu_plus),
    ];
    ValidationReport { checks }
}

/// √x carrying the sign of x, so that a negative ν² shows as a negative margin.
fn signed_sqrt(x: f64) -> f64 {
    x.signum() * x.abs().sqrt()
}

fn uncertainty_check(name: &str, nu: f64) -> Check {
    if nu.is_nan() {
        return Check {
            name: name.to_string(),
            margin: f64::NAN,
            passed: false,
            severity: Severity::Gate,
        };
    }
    Check::margin(name, nu - 0.5, Severity::Gate)
}

/// How failed physicality reports are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strictness {
    /// Reject.
    Strict,
    /// Warn and proceed.
    #[default]
    Lenient,
}

impl Strictness {
    /// Returns warning lines for a failed report in lenient mode, or an error
    /// in strict mode.
    pub fn enforce(self, what: &str, report: &ValidationReport) -> Result<Vec<String>> {
        let failed: Vec<String> = report
            .failures()
            .map(|c| format!("{what}: {} violated (margin {:.6e})", c.name, c.margin))
            .collect();
        if report.passed() || self == Strictness::Lenient {
            return Ok(failed);
        }
        Err(Error::Unphysical(failed.join("; ")))
    }
}

/// Strict constructor: the covariance matrix must describe a physical state.
pub fn physical_state(sigma: CovarianceMatrix) -> Result<CovarianceMatrix> {
    Strictness::Strict.enforce("initial state", &check_physical_state(&sigma))?;
    Ok(sigma)
}

/// Strict constructor: the diffusion coefficients must satisfy the six
/// inequalities.
pub fn physical_environment(env: EnvironmentSpec) -> Result<EnvironmentSpec> {
    let report = validate_diffusion(&env);
    if !report.passed() {
        let failed: Vec<_> = report
            .failures()
            .filter(|c| c.severity == Severity::Gate)
            .map(|c| c.name.clone())
            .collect();
        return Err(Error::Unphysical(format!(
            "diffusion coefficients violate {}",
            failed.join(", ")
        )));
    }
    Ok(env)
}
