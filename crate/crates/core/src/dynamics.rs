//! Exact time evolution of the covariance matrix.
//!
//! dσ/dt = Yσ + σYᵀ + 2D has the solution
//! σ(t) = M(t)[σ(0) − σ(∞)]M(t)ᵀ + σ(∞), with M(t) = exp(Yt) known in closed
//! form and σ(∞) the solution of the Lyapunov equation Yσ + σYᵀ = −2D.
//! Every sample is computed directly from t = 0, so nothing accumulates.

use nalgebra::{Matrix2, Matrix4, SMatrix, SVector};

use crate::error::{Error, Result};
use crate::linalg::lu_solve;
use crate::types::{CovarianceMatrix, DiffusionMatrix, DriftMatrix, EnvironmentSpec};

/// M(t) = exp(Yt).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator(Matrix4<f64>);

impl Propagator {
    /// The 2×2 block e^{−λt}·[[cos ωt, sin ωt/(mω)], [−mω sin ωt, cos ωt]].
    pub fn mode_block(env: &EnvironmentSpec, t: f64) -> Result<Matrix2<f64>> {
        check_time(t)?;
        let decay = (-env.lambda * t).exp();
        let (sin, cos) = (env.omega * t).sin_cos();
        let m_omega = env.m * env.omega;
        Ok(Matrix2::new(cos, sin / m_omega, -m_omega * sin, cos) * decay)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    /// det M(t) = e^{−4λt}.
    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }
}

fn check_time(t: f64) -> Result<()> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::NegativeTime(t));
    }
    Ok(())
}

pub fn propagator(env: &EnvironmentSpec, t: f64) -> Result<Propagator> {
    if t == 0.0 {
        return Ok(Propagator(Matrix4::identity()));
    }
    let block = Propagator::mode_block(env, t)?;
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&block);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&block);
    Ok(Propagator(m))
}

/// Solves Yσ + σYᵀ = rhs through the vectorized 16×16 system
/// (I ⊗ Y + Y ⊗ I) vec σ = vec rhs.
pub fn solve_lyapunov(y: &Matrix4<f64>, rhs: &Matrix4<f64>) -> Result<Matrix4<f64>> {
    let mut op = SMatrix::<f64, 16, 16>::zeros();
    for i in 0..4 {
        for j in 0..4 {
            let row = i + 4 * j;
            for l in 0..4 {
                op[(row, l + 4 * j)] += y[(i, l)];
                op[(row, i + 4 * l)] += y[(j, l)];
            }
        }
    }
    let b = SVector::<f64, 16>::from_iterator(rhs.iter().copied());
    let x = lu_solve(op, b)?;
    Ok(Matrix4::from_iterator(x.iter().copied()))
}

/// Max-norm residual of Yσ + σYᵀ + 2D.
pub fn lyapunov_residual(env: &EnvironmentSpec, sigma: &CovarianceMatrix) -> f64 {
    let y = DriftMatrix::from_env(env);
    let y = y.matrix();
    let d = DiffusionMatrix::from_env(env);
    let s = sigma.matrix();
    (y * s + s * y.transpose() + d.matrix() * 2.0).amax()
}

/// σ(∞) from the Lyapunov equation. Works for any diffusion matrix.
pub fn steady_covariance(env: &EnvironmentSpec) -> Result<CovarianceMatrix> {
    if !(env.lambda > 0.0) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: env.lambda,
            reason: "no stable fixed point without dissipation",
        });
    }
    let y = DriftMatrix::from_env(env);
    let d = DiffusionMatrix::from_env(env);
    let solution = solve_lyapunov(y.matrix(), &(d.matrix() * -2.0))?;
    Ok(CovarianceMatrix::symmetrized(solution))
}

/// σ(∞) entries written out for a thermal environment:
/// mωσ_xx = σ_pxpx/(mω) = C/2, σ_xpx = 0 and the cross block
///
/// σ_xy = D_xy/λ + D_xpy/(m(λ²+ω²)),
/// σ_xpy = σ_ypx = λD_xpy/(λ²+ω²),
/// σ_pxpy = m²ω²D_xy/λ − mω²D_xpy/(λ²+ω²).
pub fn steady_covariance_closed_form(env: &EnvironmentSpec) -> Result<CovarianceMatrix> {
    env.ensure_thermal()?;
    let EnvironmentSpec {
        m,
        omega,
        lambda,
        thermal_c,
        d_xy,
        d_xpy,
        ..
    } = *env;
    let m_omega = m * omega;
    let l2w2 = lambda * lambda + omega * omega;
    let xx = 0.5 * thermal_c / m_omega;
    let pxpx = 0.5 * thermal_c * m_omega;
    let xy = (m * m * l2w2 * d_xy + m * lambda * d_xpy) / (m * m * lambda * l2w2);
    let xpy = lambda * d_xpy / l2w2;
    let pxpy = (m * m * omega * omega * l2w2 * d_xy - m * omega * omega * lambda * d_xpy)
        / (lambda * l2w2);
    CovarianceMatrix::from_entries(xx, 0.0, xy, xpy, pxpx, xpy, pxpy, xx, 0.0, pxpx)
}

/// Environment plus its stationary state, for repeated evaluation of σ(t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dynamics {
    env: EnvironmentSpec,
    steady: CovarianceMatrix,
}

impl Dynamics {
    pub fn new(env: EnvironmentSpec) -> Result<Self> {
        let steady = steady_covariance(&env)?;
        Ok(Self { env, steady })
    }

    pub fn env(&self) -> &EnvironmentSpec {
        &self.env
    }

    pub fn steady(&self) -> &CovarianceMatrix {
        &self.steady
    }

    pub fn evolve(&self, initial: &CovarianceMatrix, t: f64) -> Result<CovarianceMatrix> {
        check_time(t)?;
        if t == 0.0 {
            return Ok(*initial);
        }
        let m = propagator(&self.env, t)?;
        let m = m.matrix();
        let steady = self.steady.matrix();
        let out = m * (initial.matrix() - steady) * m.transpose() + steady;
        Ok(CovarianceMatrix::symmetrized(out))
    }
}

/// σ(t) = M(t)[σ(0) − σ(∞)]M(t)ᵀ + σ(∞).
pub fn evolve(
    initial: &CovarianceMatrix,
    env: &EnvironmentSpec,
    t: f64,
) -> Result<CovarianceMatrix> {
    check_time(t)?;
    Dynamics::new(*env)?.evolve(initial, t)
}

/// Covariance matrices sampled on a uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<CovarianceMatrix>,
    pub env: EnvironmentSpec,
    pub initial: CovarianceMatrix,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// `n` points evenly spaced over [0, t_max], endpoints exact.
pub fn uniform_grid(t_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => {
            let last = (n - 1) as f64;
            (0..n)
                .map(|k| {
                    if k == n - 1 {
                        t_max
                    } else {
                        t_max * k as f64 / last
                    }
                })
                .collect()
        }
    }
}

/// n_steps + 1 samples over [0, t_max].
pub fn sample_trajectory(
    initial: &CovarianceMatrix,
    env: &EnvironmentSpec,
    t_max: f64,
    n_steps: usize,
) -> Result<Trajectory> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::InvalidGrid(format!(
            "t_max must be positive, got {t_max}"
        )));
    }
    if n_steps < 2 {
        return Err(Error::InvalidGrid(format!(
            "need at least 2 steps, got {n_steps}"
        )));
    }
    let dynamics = Dynamics::new(*env)?;
    let times = uniform_grid(t_max, n_steps + 1);
    let states = times
        .iter()
        .map(|&t| dynamics.evolve(initial, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory {
        times,
        states,
        env: *env,
        initial: *initial,
    })
}

/// Largest max-norm of dσ/dt − (Yσ + σYᵀ + 2D) over interior samples, with
/// dσ/dt from centered differences. Second order in the step size.
pub fn ode_residual(trajectory: &Trajectory) -> Result<f64> {
    if trajectory.len() < 3 {
        return Err(Error::InvalidGrid(format!(
            "need at least 3 samples, got {}",
            trajectory.len()
        )));
    }
    let y = DriftMatrix::from_env(&trajectory.env);
    let y = y.matrix();
    let two_d = DiffusionMatrix::from_env(&trajectory.env).matrix() * 2.0;
    let (t, s) = (&trajectory.times, &trajectory.states);
    let worst = (1..t.len() - 1)
        .map(|k| {
            let derivative = (s[k + 1].matrix() - s[k - 1].matrix()) / (t[k + 1] - t[k - 1]);
            let sigma = s[k].matrix();
            let rhs = y * sigma + sigma * y.transpose() + two_d;
            (derivative - rhs).amax()
        })
        .fold(0.0, f64::max);
    Ok(worst)
}
