mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use nlevel_gauge::adjoint::{adjoint_residual, integrate_adjoint, mean_values, semisimple_norm};
use nlevel_gauge::gauge::{gauge_transform_pair, seed_constant, seed_diagonal, Connection};
use nlevel_gauge::lie::{su2_basis, un_basis, GroupPath, Sign};
use nlevel_gauge::ode::OdeOptions;
use nlevel_gauge::spinhalf::{bloch_vector, example_constant_to_rotating, RotatingExample};
use nlevel_gauge::timefn::VectorTimeFunction;
use nlevel_gauge::verify::uniform_grid;
use proptest::prelude::*;

/// Rodrigues rotation of `v` by angle `theta` about unit `k`.
fn rotate(v: [f64; 3], k: [f64; 3], theta: f64) -> [f64; 3] {
    let (s, c) = theta.sin_cos();
    let kxv = [
        k[1] * v[2] - k[2] * v[1],
        k[2] * v[0] - k[0] * v[2],
        k[0] * v[1] - k[1] * v[0],
    ];
    let kv = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
    std::array::from_fn(|i| v[i] * c + kxv[i] * s + k[i] * kv * (1.0 - c))
}

#[test]
fn constant_su2_connection_rotates_rigidly() {
    let mut rng = common::rng(21);
    let basis = Arc::new(su2_basis());
    for _ in 0..5 {
        let axis = common::unit_vector(&mut rng);
        let rate = common::uniform(&mut rng, 0.3, 2.0);
        let a = axis.map(|x| x * rate);
        let lambda0 = common::unit_vector(&mut rng).map(|x| 0.5 * x);
        let period = 2.0 * PI / rate;
        let conn = Connection::constant(basis.assemble(&a));
        let traj = integrate_adjoint(
            &conn,
            basis.clone(),
            &lambda0,
            (0.0, period),
            &OdeOptions::default(),
        )
        .unwrap();
        // dλ/dt = −A × λ: rotation about â by −|A|t
        for t in [0.3 * period, 0.71 * period, period] {
            let got = traj.value(t).unwrap();
            let want = rotate(lambda0, axis, -rate * t);
            for i in 0..3 {
                assert!(
                    (got[i] - want[i]).abs() < 1e-8,
                    "t={t}: {got:?} vs {want:?}"
                );
            }
        }
        let end = traj.value(period).unwrap();
        assert!((0..3).all(|i| (end[i] - lambda0[i]).abs() < 1e-8));
    }
}

fn transformed(seed: u64, n: usize) -> nlevel_gauge::SolutionPair {
    let mut rng = common::rng(seed);
    let psi0 = common::state(&mut rng, n);
    let pair = if seed.is_multiple_of(2) {
        seed_constant(
            &common::hermitian(&mut rng, n, 1.0),
            &psi0,
            (0.0, 10.0),
            1.0,
        )
        .unwrap()
    } else {
        let e: Vec<_> = (0..n).map(|_| common::smooth(&mut rng, 1.0)).collect();
        seed_diagonal(&e, &psi0, (0.0, 10.0), 1.0).unwrap()
    };
    let alpha =
        VectorTimeFunction::new((0..n * n).map(|_| common::smooth(&mut rng, 0.6)).collect());
    gauge_transform_pair(
        &pair,
        &GroupPath::axis_angle(alpha, Sign::Plus, Arc::new(un_basis(n))).unwrap(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn mean_values_obey_adjoint_equation(seed in 0u64..100_000, n in 2usize..5) {
        let pair = transformed(seed, n);
        let basis = Arc::new(un_basis(n));
        let traj = mean_values(&pair, basis.clone()).unwrap();
        let grid = uniform_grid((0.0, 10.0), 60);
        prop_assert!(adjoint_residual(&traj, &pair.connection, &grid).unwrap() < 1e-9);

        let numeric = integrate_adjoint(&pair.connection, basis.clone(), &traj.value(0.0).unwrap(), (0.0, 10.0), &OdeOptions::default()).unwrap();
        for t in [2.0, 5.0, 10.0] {
            let (a, b) = (traj.value(t).unwrap(), numeric.value(t).unwrap());
            let gap = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            prop_assert!(gap < 1e-8, "gap {gap:e}");
        }
        let s0 = semisimple_norm(&traj.value(0.0).unwrap(), &basis);
        for t in [3.0, 9.0] {
            prop_assert!((semisimple_norm(&traj.value(t).unwrap(), &basis) - s0).abs() < 1e-12);
        }
    }
}

#[test]
fn mismatched_connection_breaks_adjoint_equation() {
    let pair = transformed(4, 3);
    let other = transformed(5, 3);
    let traj = mean_values(&pair, Arc::new(un_basis(3))).unwrap();
    let r = adjoint_residual(&traj, &other.connection, &uniform_grid((0.0, 10.0), 40)).unwrap();
    assert!(r > 1e-3, "{r:e}");
}

#[test]
fn seed_mean_values_have_small_residual() {
    let mut rng = common::rng(8);
    let pair = seed_constant(
        &common::hermitian(&mut rng, 3, 1.0),
        &common::state(&mut rng, 3),
        (0.0, 10.0),
        1.0,
    )
    .unwrap();
    let traj = mean_values(&pair, Arc::new(un_basis(3))).unwrap();
    assert!(
        adjoint_residual(&traj, &pair.connection, &uniform_grid((0.0, 10.0), 100)).unwrap() < 1e-10
    );
}

#[test]
fn spin_mean_values_are_half_bloch_vector() {
    let pair = example_constant_to_rotating(&RotatingExample::reference(Sign::Minus)).unwrap();
    let traj = mean_values(&pair, Arc::new(su2_basis())).unwrap();
    for t in [0.0, 10.0, 40.0] {
        let n = bloch_vector(&pair.state.value(t).unwrap()).unwrap().0;
        let l = traj.value(t).unwrap();
        assert!((0..3).all(|i| (2.0 * l[i] - n[i]).abs() < 1e-14));
        assert!((n.iter().map(|x| x * x).sum::<f64>().sqrt() - 1.0).abs() < 1e-10);
    }
}
