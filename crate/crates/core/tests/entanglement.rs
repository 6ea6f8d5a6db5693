mod common;

use gauss_ent::entanglement::{
    asymptotic_log_negativity_raw, asymptotic_simon_reduced_form, negativity_f, partial_transpose,
};
use gauss_ent::{
    asymptotic_entanglement, asymptotic_log_negativity, asymptotic_simon, asymptotic_threshold,
    evolve, fig_environment, log_negativity, metrics, simon_function, steady_covariance,
    CovarianceMatrix, EnvironmentSpec, LogNegativity, Preset,
};
use nalgebra::{Matrix2, Matrix4};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn exact_threshold() -> f64 {
    1.0 + 2.0 * 0.049 / 1.01f64.sqrt()
}

#[test]
fn fig3_simon_value_is_exact() {
    let sigma = Preset::Fig3.initial();
    let expected = -133.0 / 576.0;
    let brute = common::simon_brute_force(sigma.matrix());
    assert!(((brute - expected) / expected).abs() <= 1e-15);
    let got = simon_function(&sigma);
    assert!(((got - expected) / expected).abs() <= 1e-15, "{got}");
}

#[test]
fn fig4_has_undefined_negativity() {
    let m = metrics(&Preset::Fig4.initial());
    assert!(m.simon_s < 0.0);
    assert!(!m.log_negativity.is_defined());
}

#[test]
fn two_mode_squeezed_state_matches_closed_form() {
    let r = 0.5;
    let sigma = CovarianceMatrix::new(common::two_mode_squeezed(r)).unwrap();
    let m = metrics(&sigma);
    let nu = (-2.0f64 * r).exp() / 2.0;
    assert!((m.nu_tilde_minus_sq.unwrap() - nu * nu).abs() <= 1e-14);
    assert!((common::nu_tilde_minus_sq_eigen(sigma.matrix()) - nu * nu).abs() <= 1e-14);
    let l = log_negativity(&sigma).value().unwrap();
    assert!((l - 2.0 * r / std::f64::consts::LN_2).abs() <= 1e-12, "{l}");
    assert!(m.simon_s < 0.0);
}

#[test]
fn vacuum_is_a_separable_boundary_state() {
    let m = metrics(&CovarianceMatrix::vacuum());
    assert_eq!(m.simon_s, 0.0);
    assert!(m.separable && m.boundary);
    assert_eq!(m.log_negativity, LogNegativity::Defined(0.0));
}

#[test]
fn partial_transpose_flips_cross_momentum() {
    let sigma = Preset::Fig3.initial();
    let pt = partial_transpose(&sigma);
    assert_eq!(pt.get(1, 3), -sigma.get(1, 3));
    assert_eq!(pt.get(0, 2), sigma.get(0, 2));
    assert_eq!(partial_transpose(&pt), sigma);
}

fn asymptotic_grid() -> Vec<EnvironmentSpec> {
    let mut out = Vec::new();
    for &lambda in &[0.05, 0.1, 0.2] {
        for &c in &[1.0, 1.1, 1.5, 2.0] {
            for &d_xpy in &[0.0, 0.02, 0.049] {
                for &d_xy in &[0.0, 0.005] {
                    out.push(EnvironmentSpec::thermal(lambda, c, d_xy, d_xpy, 1.0, 1.0).unwrap());
                }
            }
        }
    }
    out
}

#[test]
fn asymptotic_simon_agrees_with_lyapunov_route() {
    let grid = asymptotic_grid();
    assert_eq!(grid.len(), 72);
    for env in grid {
        let closed = asymptotic_simon(&env).unwrap();
        let numeric = common::simon_brute_force(steady_covariance(&env).unwrap().matrix());
        assert!(
            (closed - numeric).abs() <= 1e-10,
            "{env:?}: {closed} vs {numeric}"
        );
    }
}

#[test]
fn simplified_form_agrees_when_cross_block_determinant_is_nonpositive() {
    for env in asymptotic_grid() {
        let c = steady_covariance(&env).unwrap().c();
        if c.determinant() <= 0.0 {
            let a = asymptotic_simon(&env).unwrap();
            let b = asymptotic_simon_reduced_form(&env).unwrap();
            assert!((a - b).abs() <= 1e-14);
        }
    }
}

#[test]
fn reference_asymptotic_value() {
    let d = 0.049f64 * 0.049 / 1.01;
    let s = asymptotic_simon(&fig_environment(1.0).unwrap()).unwrap();
    assert!((s - (d * d - d)).abs() < 1e-16);
    assert!((s + 2.37158e-3).abs() < 1e-8);
}

#[test]
fn bisection_root_matches_threshold() {
    let s = |c: f64| asymptotic_simon(&fig_environment(c).unwrap()).unwrap();
    let (mut lo, mut hi) = (1.0, 1.5);
    assert!(s(lo) < 0.0 && s(hi) > 0.0);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if s(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    assert!((root - exact_threshold()).abs() <= 1e-10, "{root}");
    let env = fig_environment(exact_threshold()).unwrap();
    assert!((asymptotic_threshold(&env).unwrap().c_threshold - exact_threshold()).abs() < 1e-15);
    let l = asymptotic_log_negativity(&env).unwrap().value().unwrap();
    assert!(l.abs() <= 1e-10);
}

#[test]
fn asymptotic_negativity_is_independent_of_initial_state() {
    let env = fig_environment(1.0).unwrap();
    let expected = -(1.0 - 2.0 * 0.049 / 1.01f64.sqrt()).log2();
    assert!((asymptotic_log_negativity_raw(&env).unwrap().unwrap() - expected).abs() < 1e-15);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut states = vec![
        Preset::Fig1.initial(),
        Preset::Fig2.initial(),
        CovarianceMatrix::vacuum(),
    ];
    states.push(CovarianceMatrix::new(common::random_physical_state(&mut rng)).unwrap());
    for s0 in states {
        let l = log_negativity(&evolve(&s0, &env, 300.0 / 0.1).unwrap())
            .value()
            .unwrap();
        assert!((l - expected).abs() <= 1e-6, "{l} vs {expected}");
    }
}

#[test]
fn asymptotic_summary_for_fig_bath() {
    let cold = asymptotic_entanglement(&fig_environment(1.0).unwrap()).unwrap();
    assert!(cold.entangled_at_infinity);
    assert!(cold.l_infinity.value().unwrap() > 0.14);
    let hot = asymptotic_entanglement(&fig_environment(1.5).unwrap()).unwrap();
    assert!(!hot.entangled_at_infinity);
    assert_eq!(hot.l_infinity, LogNegativity::Defined(0.0));
}

#[test]
fn threshold_requires_zero_position_cross_diffusion() {
    let env = EnvironmentSpec::thermal(0.1, 1.0, 0.005, 0.049, 1.0, 1.0).unwrap();
    assert!(asymptotic_threshold(&env).is_err());
    assert!(asymptotic_entanglement(&env).unwrap().c_threshold.is_none());
}

fn check_ppt_consistency(raw: &Matrix4<f64>) {
    let sigma = CovarianceMatrix::new(*raw).unwrap();
    let m = metrics(&sigma);
    let f = negativity_f(&sigma);
    let nu_sq = m
        .nu_tilde_minus_sq
        .expect("physical states have a real PT spectrum");
    assert!((f - nu_sq).abs() <= 1e-12, "f {f} vs {nu_sq}");
    let oracle = common::nu_tilde_minus_sq_eigen(raw);
    assert!((nu_sq - oracle).abs() <= 1e-12, "{nu_sq} vs eigen {oracle}");
    let l = m.log_negativity.value().unwrap();
    if m.simon_s < -1e-12 {
        assert!(l > 0.0, "S = {} but L = {l}", m.simon_s);
    } else if m.simon_s > 1e-12 {
        assert_eq!(l, 0.0, "S = {}", m.simon_s);
    }
}

#[test]
fn ppt_criteria_agree_on_a_thousand_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut entangled = 0;
    for _ in 0..1000 {
        let raw = common::random_physical_state(&mut rng);
        check_ppt_consistency(&raw);
        entangled += usize::from(simon_function(&CovarianceMatrix::new(raw).unwrap()) < 0.0);
    }
    // the sample must exercise both sides of the criterion
    assert!(entangled > 100 && entangled < 900, "{entangled}");
}

fn local_symplectic(theta: f64, r: f64, shear: f64) -> Matrix2<f64> {
    let (c, s) = (theta.cos(), theta.sin());
    Matrix2::new(c, s, -s, c)
        * Matrix2::new(r.exp(), 0.0, 0.0, (-r).exp())
        * Matrix2::new(1.0, shear, 0.0, 1.0)
}

proptest! {
    #[test]
    fn ppt_consistency_holds(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        check_ppt_consistency(&common::random_physical_state(&mut rng));
    }

    #[test]
    fn simon_function_is_local_symplectic_invariant(
        seed in any::<u64>(),
        t1 in 0.0f64..6.3, r1 in -0.5f64..0.5, h1 in -0.5f64..0.5,
        t2 in 0.0f64..6.3, r2 in -0.5f64..0.5, h2 in -0.5f64..0.5,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw = common::random_physical_state(&mut rng);
        let mut s = Matrix4::zeros();
        s.fixed_view_mut::<2, 2>(0, 0).copy_from(&local_symplectic(t1, r1, h1));
        s.fixed_view_mut::<2, 2>(2, 2).copy_from(&local_symplectic(t2, r2, h2));
        let moved = s * raw * s.transpose();
        let moved = CovarianceMatrix::new((moved + moved.transpose()) * 0.5).unwrap();
        let before = simon_function(&CovarianceMatrix::new(raw).unwrap());
        prop_assert!((simon_function(&moved) - before).abs() <= 1e-10);
    }

    #[test]
    fn simon_function_matches_term_by_term_expansion(
        entries in proptest::array::uniform10(-2.0f64..2.0),
    ) {
        let [xx, xpx, xy, xpy, pxpx, ypx, pxpy, yy, ypy, pypy] = entries;
        let sigma = CovarianceMatrix::from_entries(xx, xpx, xy, xpy, pxpx, ypx, pxpy, yy, ypy, pypy).unwrap();
        let brute = common::simon_brute_force(sigma.matrix());
        prop_assert!((simon_function(&sigma) - brute).abs() <= 1e-12 * (1.0 + brute.abs()));
    }

    #[test]
    fn asymptotic_simon_matches_lyapunov_anywhere(
        lambda in 0.02f64..1.0,
        c in 1.0f64..3.0,
        d_xy in -0.02f64..0.02,
        d_xpy in -0.1f64..0.1,
        m in 0.5f64..2.0,
        omega in 0.5f64..2.0,
    ) {
        let env = EnvironmentSpec::thermal(lambda, c, d_xy, d_xpy, m, omega).unwrap();
        let closed = asymptotic_simon(&env).unwrap();
        let numeric = common::simon_brute_force(steady_covariance(&env).unwrap().matrix());
        prop_assert!((closed - numeric).abs() <= 1e-10 * (1.0 + numeric.abs()), "{} vs {}", closed, numeric);
    }
}
