//! Two identical, uncoupled harmonic oscillators in a common thermal bath,
//! described by their two-mode Gaussian covariance matrix.
//!
//! The crate evolves the covariance matrix exactly, finds its stationary
//! state, and tracks separability (Simon function) and the logarithmic
//! negativity along trajectories and across bath temperatures.
//!
//! Units are ħ = k = 1 and phase-space ordering is (x, p_x, y, p_y).

// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod presets;
pub mod types;
pub mod validation;

pub use dynamics::{
    evolve, ode_residual, propagator, sample_trajectory, steady_covariance,
    steady_covariance_closed_form, Dynamics, Propagator, Trajectory,
};
pub use entanglement::{
    asymptotic_entanglement, asymptotic_log_negativity, asymptotic_simon, asymptotic_threshold,
    log_negativity, metrics, simon_function, symplectic_spectrum_pt, AsymptoticEntanglement,
    EntanglementMetrics, LogNegativity,
};
pub use error::{Error, Result};
pub use experiments::{
    asymptotic_phase_diagram, classify_phase, sweep, PhaseCell, PhaseClassification, PhaseLabel,
    SweepResult, SweepSpec,
};
pub use presets::{fig_environment, Preset};
pub use types::{CovarianceMatrix, DiffusionMatrix, DriftMatrix, EnvironmentSpec};
pub use validation::{check_physical_state, validate_diffusion, Strictness, ValidationReport};

/// Convenience alias for [`EnvironmentSpec::thermal`].
pub fn thermal_environment(
    lambda: f64,
    thermal_c: f64,
    d_xy: f64,
    d_xpy: f64,
    m: f64,
    omega: f64,
) -> Result<EnvironmentSpec> {
    EnvironmentSpec::thermal(lambda, thermal_c, d_xy, d_xpy, m, omega)
}
