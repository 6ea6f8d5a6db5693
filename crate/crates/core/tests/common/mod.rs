//! Reference implementations that share no code with the library.

#![allow(dead_code)]

use nalgebra::{Matrix2, Matrix4};
use rand::Rng;

/// exp(A) by scaling and squaring with a truncated Taylor series.
pub fn expm(a: &Matrix4<f64>) -> Matrix4<f64> {
    let norm = a.abs().row_sum().max();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale *= 0.5;
        squarings += 1;
    }
    let a = a * scale;
    let mut term = Matrix4::identity();
    let mut sum = Matrix4::identity();
    for k in 1..=30 {
        term = term * a / k as f64;
        sum += term;
        if term.abs().max() < 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// Drift of two identical damped oscillators, written out entry by entry.
pub fn drift(lambda: f64, omega: f64, m: f64) -> Matrix4<f64> {
    let k = m * omega * omega;
    Matrix4::new(
        -lambda,
        1.0 / m,
        0.0,
        0.0, //
        -k,
        -lambda,
        0.0,
        0.0, //
        0.0,
        0.0,
        -lambda,
        1.0 / m, //
        0.0,
        0.0,
        -k,
        -lambda,
    )
}

fn det2(m: &Matrix2<f64>) -> f64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// Separability function expanded term by term from the 2x2 blocks.
pub fn simon_brute_force(s: &Matrix4<f64>) -> f64 {
    let a = Matrix2::new(s[(0, 0)], s[(0, 1)], s[(1, 0)], s[(1, 1)]);
    let b = Matrix2::new(s[(2, 2)], s[(2, 3)], s[(3, 2)], s[(3, 3)]);
    let c = Matrix2::new(s[(0, 2)], s[(0, 3)], s[(1, 2)], s[(1, 3)]);
    let j = Matrix2::new(0.0, 1.0, -1.0, 0.0);
    let (da, db, dc) = (det2(&a), det2(&b), det2(&c));
    let chain = a * j * c * j * b * j * c.transpose() * j;
    da * db + (0.25 - dc.abs()).powi(2) - chain.trace() - 0.25 * (da + db)
}

/// Smallest partially-transposed symplectic eigenvalue squared, from the
/// eigenvalues of Ω σ̃ (which come in pairs ±iν).
pub fn nu_tilde_minus_sq_eigen(s: &Matrix4<f64>) -> f64 {
    let pt = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0));
    let sigma_t = pt * s * pt;
    let omega = Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, -1.0, 0.0,
    );
    let ev = (omega * sigma_t).complex_eigenvalues();
    ev.iter()
        .map(|z| z.norm_sqr())
        .fold(f64::INFINITY, f64::min)
}

pub fn two_mode_squeezed(r: f64) -> Matrix4<f64> {
    let (ch, sh) = ((2.0 * r).cosh() / 2.0, (2.0 * r).sinh() / 2.0);
    Matrix4::new(
        ch, 0.0, sh, 0.0, //
        0.0, ch, 0.0, -sh, //
        sh, 0.0, ch, 0.0, //
        0.0, -sh, 0.0, ch,
    )
}

fn local(theta1: f64, r1: f64, theta2: f64, r2: f64) -> Matrix4<f64> {
    let block = |theta: f64, r: f64| {
        let (c, s) = (theta.cos(), theta.sin());
        Matrix2::new(c, s, -s, c) * Matrix2::new(r.exp(), 0.0, 0.0, (-r).exp())
    };
    let mut out = Matrix4::zeros();
    out.fixed_view_mut::<2, 2>(0, 0)
        .copy_from(&block(theta1, r1));
    out.fixed_view_mut::<2, 2>(2, 2)
        .copy_from(&block(theta2, r2));
    out
}

fn beam_splitter(theta: f64) -> Matrix4<f64> {
    let (c, s) = (theta.cos(), theta.sin());
    Matrix4::new(
        c, 0.0, s, 0.0, //
        0.0, c, 0.0, s, //
        -s, 0.0, c, 0.0, //
        0.0, -s, 0.0, c,
    )
}

fn two_mode_squeezer(r: f64) -> Matrix4<f64> {
    let (c, s) = (r.cosh(), r.sinh());
    Matrix4::new(
        c, 0.0, s, 0.0, //
        0.0, c, 0.0, -s, //
        s, 0.0, c, 0.0, //
        0.0, -s, 0.0, c,
    )
}

/// Symplectic image of a thermal state diag(ν₁, ν₁, ν₂, ν₂), ν ≥ 1/2.
pub fn random_physical_state<R: Rng>(rng: &mut R) -> Matrix4<f64> {
    let nu1 = 0.5 + rng.random_range(0.0..1.5);
    let nu2 = 0.5 + rng.random_range(0.0..1.5);
    let thermal = Matrix4::from_diagonal(&nalgebra::Vector4::new(nu1, nu1, nu2, nu2));
    let tau = std::f64::consts::TAU;
    let mut s = local(
        rng.random_range(0.0..tau),
        rng.random_range(-0.6..0.6),
        rng.random_range(0.0..tau),
        rng.random_range(-0.6..0.6),
    );
    s = beam_splitter(rng.random_range(0.0..tau)) * s;
    s = two_mode_squeezer(rng.random_range(-1.0..1.0)) * s;
    s = local(
        rng.random_range(0.0..tau),
        rng.random_range(-0.4..0.4),
        rng.random_range(0.0..tau),
        rng.random_range(-0.4..0.4),
    ) * s;
    let out = s * thermal * s.transpose();
    (out + out.transpose()) * 0.5
}

pub fn max_abs(m: &Matrix4<f64>) -> f64 {
    m.abs().max()
}
