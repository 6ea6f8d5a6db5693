mod common;

use gauss_ent::dynamics::{lyapunov_residual, solve_lyapunov};
use gauss_ent::{
    evolve, fig_environment, ode_residual, propagator, sample_trajectory, steady_covariance,
    steady_covariance_closed_form, CovarianceMatrix, Dynamics, EnvironmentSpec, Preset,
};
use nalgebra::Matrix4;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LAMBDAS: [f64; 3] = [0.01, 0.1, 1.0];
const OMEGAS: [f64; 3] = [0.5, 1.0, 2.0];
const MASSES: [f64; 3] = [0.5, 1.0, 2.0];

fn env(lambda: f64, omega: f64, m: f64) -> EnvironmentSpec {
    EnvironmentSpec::thermal(lambda, 1.2, 0.0, 0.01, m, omega).unwrap()
}

#[test]
fn closed_form_propagator_matches_series_oracle() {
    let mut worst: f64 = 0.0;
    for &lambda in &LAMBDAS {
        for &omega in &OMEGAS {
            for &m in &MASSES {
                let e = env(lambda, omega, m);
                for &t in &[0.1, 1.0, 10.0, 100.0] {
                    let oracle = common::expm(&(common::drift(lambda, omega, m) * t));
                    let got = propagator(&e, t).unwrap();
                    worst = worst.max(common::max_abs(&(got.matrix() - oracle)));
                }
            }
        }
    }
    assert!(worst <= 1e-12, "max deviation {worst:e}");
}

#[test]
fn propagator_determinant_is_exp_minus_four_lambda_t() {
    let e = env(0.3, 1.7, 0.8);
    for &t in &[0.0, 0.5, 2.0, 7.0] {
        let det = propagator(&e, t).unwrap().determinant();
        assert!((det - (-4.0 * 0.3 * t).exp()).abs() < 1e-14);
    }
}

#[test]
fn negative_time_is_rejected() {
    let e = env(0.1, 1.0, 1.0);
    assert!(propagator(&e, -1.0).is_err());
    assert!(evolve(&CovarianceMatrix::vacuum(), &e, -0.5).is_err());
}

#[test]
fn steady_state_solves_lyapunov_on_thermal_grid() {
    for &lambda in &[0.05, 0.1, 0.2] {
        for &c in &[1.0, 1.1, 1.5, 2.0] {
            for &d_xpy in &[0.0, 0.02, 0.049] {
                for &d_xy in &[0.0, 0.005] {
                    let e = EnvironmentSpec::thermal(lambda, c, d_xy, d_xpy, 1.0, 1.0).unwrap();
                    let sigma = steady_covariance(&e).unwrap();
                    let d_max = e.diffusion().matrix().abs().max();
                    let res = lyapunov_residual(&e, &sigma);
                    assert!(res <= 1e-12 * (1.0 + d_max), "residual {res:e}");
                    let closed = steady_covariance_closed_form(&e).unwrap();
                    assert!(sigma.max_abs_diff(&closed) <= 1e-12);
                }
            }
        }
    }
}

#[test]
fn steady_state_entries_match_hand_formulas() {
    // λ = 0.1, ω = m = 1, C = 1, D_xy = 0, D_xpy = 0.049
    let e = fig_environment(1.0).unwrap();
    let s = steady_covariance(&e).unwrap();
    let denom = 0.1f64 * 0.1 + 1.0;
    assert!((s.get(0, 0) - 0.5).abs() < 1e-14);
    assert!((s.get(1, 1) - 0.5).abs() < 1e-14);
    assert!((s.get(0, 2) - 0.049 / denom).abs() < 1e-14);
    assert!((s.get(0, 3) - 0.1 * 0.049 / denom).abs() < 1e-14);
    assert!((s.get(1, 3) + 0.049 / denom).abs() < 1e-14);
    assert!((s.get(0, 2) - 0.004851485148514851 * 10.0).abs() < 1e-15);
}

#[test]
fn lyapunov_solver_recovers_known_solution() {
    let y = common::drift(0.2, 1.3, 0.7);
    let x = Matrix4::new(
        1.0, 0.2, -0.1, 0.3, //
        0.2, 2.0, 0.4, 0.0, //
        -0.1, 0.4, 1.5, -0.2, //
        0.3, 0.0, -0.2, 0.9,
    );
    let rhs = y * x + x * y.transpose();
    let got = solve_lyapunov(&y, &rhs).unwrap();
    assert!(common::max_abs(&(got - x)) < 1e-12);
}

#[test]
fn steady_state_is_a_fixed_point() {
    let e = fig_environment(1.0).unwrap();
    let s = steady_covariance(&e).unwrap();
    for &t in &[1.0, 10.0, 100.0] {
        assert!(evolve(&s, &e, t).unwrap().max_abs_diff(&s) <= 1e-12);
    }
}

#[test]
fn evolution_at_zero_is_identity() {
    let e = fig_environment(1.3).unwrap();
    for p in Preset::ALL {
        assert_eq!(evolve(&p.initial(), &e, 0.0).unwrap(), p.initial());
    }
}

#[test]
fn flow_composes_on_random_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let e = EnvironmentSpec::thermal(
            rng.random_range(0.01..1.0),
            rng.random_range(1.0..3.0),
            rng.random_range(-0.01..0.01),
            rng.random_range(-0.05..0.05),
            rng.random_range(0.5..2.0),
            rng.random_range(0.5..2.0),
        )
        .unwrap();
        let dynamics = Dynamics::new(e).unwrap();
        let s0 = CovarianceMatrix::new(common::random_physical_state(&mut rng)).unwrap();
        let (t1, t2) = (rng.random_range(0.0..20.0), rng.random_range(0.0..20.0));
        let direct = dynamics.evolve(&s0, t1 + t2).unwrap();
        let stepped = dynamics
            .evolve(&dynamics.evolve(&s0, t1).unwrap(), t2)
            .unwrap();
        assert!(direct.max_abs_diff(&stepped) <= 1e-11);
    }
}

#[test]
fn identical_modes_stay_identical() {
    let e = fig_environment(1.2).unwrap();
    for p in Preset::ALL {
        for &t in &[0.3, 4.0, 60.0] {
            let s = evolve(&p.initial(), &e, t).unwrap();
            assert!((s.a() - s.b()).abs().max() < 1e-14);
        }
    }
}

#[test]
fn ode_residual_is_second_order() {
    let e = fig_environment(1.0).unwrap();
    let initial = Preset::Fig1.initial();
    let coarse = sample_trajectory(&initial, &e, 20.0, 2000).unwrap();
    let fine = sample_trajectory(&initial, &e, 20.0, 4000).unwrap();
    let ratio = ode_residual(&coarse).unwrap() / ode_residual(&fine).unwrap();
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn trajectory_grid_has_exact_endpoints() {
    let e = EnvironmentSpec::thermal(0.1, 1.0, 0.0, 0.0, 1.0, 1.0).unwrap();
    let traj = sample_trajectory(&CovarianceMatrix::vacuum(), &e, 10.0, 10).unwrap();
    assert_eq!(traj.len(), 11);
    assert_eq!(traj.times[0], 0.0);
    assert_eq!(traj.times[10], 10.0);
    assert_eq!(traj.states[0], CovarianceMatrix::vacuum());
    assert!(sample_trajectory(&CovarianceMatrix::vacuum(), &e, 0.0, 10).is_err());
    assert!(sample_trajectory(&CovarianceMatrix::vacuum(), &e, 1.0, 1).is_err());
}

proptest! {
    #[test]
    fn propagator_is_a_semigroup(
        lambda in 0.01f64..1.0,
        omega in 0.5f64..2.0,
        m in 0.5f64..2.0,
        t1 in 0.0f64..50.0,
        t2 in 0.0f64..50.0,
    ) {
        let e = env(lambda, omega, m);
        let lhs = *propagator(&e, t1 + t2).unwrap().matrix();
        let rhs = propagator(&e, t1).unwrap().matrix() * propagator(&e, t2).unwrap().matrix();
        prop_assert!(common::max_abs(&(lhs - rhs)) <= 1e-12);
    }

    #[test]
    fn propagator_matches_oracle_anywhere(
        lambda in 0.01f64..1.0,
        omega in 0.5f64..2.0,
        m in 0.5f64..2.0,
        t in 0.0f64..100.0,
    ) {
        let oracle = common::expm(&(common::drift(lambda, omega, m) * t));
        let got = *propagator(&env(lambda, omega, m), t).unwrap().matrix();
        prop_assert!(common::max_abs(&(got - oracle)) <= 1e-12);
    }

    #[test]
    fn evolution_preserves_symmetry_and_relaxes(
        c in 1.0f64..2.5,
        d_xpy in -0.04f64..0.04,
        t in 0.0f64..200.0,
        seed in any::<u64>(),
    ) {
        let e = EnvironmentSpec::thermal(0.1, c, 0.0, d_xpy, 1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s0 = CovarianceMatrix::new(common::random_physical_state(&mut rng)).unwrap();
        let s = evolve(&s0, &e, t).unwrap();
        prop_assert_eq!(*s.matrix(), s.matrix().transpose());
        let steady = steady_covariance(&e).unwrap();
        let gap0 = s0.max_abs_diff(&steady);
        // every entry of σ − σ(∞) is damped by at least e^{−2λt} times a bounded rotation
        prop_assert!(s.max_abs_diff(&steady) <= 4.0 * gap0 * (-0.2 * t).exp() + 1e-12);
    }
}
