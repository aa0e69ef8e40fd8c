mod common;

use std::sync::Arc;

use nalgebra::DVector;
use nlevel_gauge::gauge::{
    gauge_transform_pair, seed_constant, Connection, Provenance, SolutionPair, StatePath,
};
use nlevel_gauge::lie::{un_basis, GroupPath, Sign};
use nlevel_gauge::linalg::{self, c, CMatrix, CVector};
use nlevel_gauge::ode::integrate_fixed;
use nlevel_gauge::spinhalf::{example_constant_to_rotating, RotatingExample};
use nlevel_gauge::timefn::VectorTimeFunction;
use nlevel_gauge::verify::{certify, integrate_schrodinger, Tolerances};

fn fixed_error(a: &CMatrix, psi0: &CVector, t1: f64, steps: usize) -> f64 {
    let exact = common::taylor_expm(&(a * c(-t1, 0.0))) * psi0;
    let y = integrate_fixed(|_, y: &DVector<_>| Ok(-(a * y)), psi0, (0.0, t1), steps).unwrap();
    linalg::norm(&(y - exact))
}

#[test]
fn fixed_step_integrator_is_fifth_order() {
    let mut rng = common::rng(3);
    let a = common::skew_hermitian(&mut rng, 3, 1.0);
    let psi0 = common::state(&mut rng, 3);
    let (e1, e2) = (
        fixed_error(&a, &psi0, 4.0, 40),
        fixed_error(&a, &psi0, 4.0, 80),
    );
    let order = (e1 / e2).log2();
    assert!(
        (4.5..=5.5).contains(&order),
        "observed order {order} ({e1:e}, {e2:e})"
    );
}

#[test]
fn constant_connection_phases() {
    let mut rng = common::rng(5);
    let h0 = common::hermitian(&mut rng, 4, 1.0);
    let psi0 = common::state(&mut rng, 4);
    let numeric = integrate_schrodinger(
        &Connection::constant(&h0 * c(0.0, 1.0)),
        &psi0,
        (0.0, 20.0),
        1e-11,
        1e-13,
    )
    .unwrap();
    let exact = seed_constant(&h0, &psi0, (0.0, 20.0), 1.0).unwrap();
    for t in [1.0, 7.7, 20.0] {
        let d = numeric.at(t).unwrap() - exact.state.value(t).unwrap();
        assert!(linalg::norm(&d) < 1e-9);
    }
}

fn gauged(seed: u64, n: usize, interval: (f64, f64)) -> SolutionPair {
    gauged_scaled(seed, n, interval, 1.0)
}

fn gauged_scaled(seed: u64, n: usize, interval: (f64, f64), scale: f64) -> SolutionPair {
    let mut rng = common::rng(seed);
    let h0 = common::hermitian(&mut rng, n, scale);
    let pair = seed_constant(&h0, &common::state(&mut rng, n), interval, 1.0).unwrap();
    let basis = Arc::new(un_basis(n));
    let alpha = VectorTimeFunction::new(
        (0..n * n)
            .map(|_| common::smooth(&mut rng, 0.5 * scale))
            .collect(),
    );
    gauge_transform_pair(
        &pair,
        &GroupPath::axis_angle(alpha, Sign::Plus, basis).unwrap(),
    )
    .unwrap()
}

fn long_run_drift(pair: &SolutionPair) -> f64 {
    let psi0 = pair.state.initial().unwrap();
    let n0 = linalg::norm(&psi0);
    let sol = integrate_schrodinger(&pair.connection, &psi0, (0.0, 100.0), 1e-10, 1e-12).unwrap();
    sol.mesh()
        .iter()
        .map(|&t| (linalg::norm(&sol.at(t).unwrap()) - n0).abs())
        .fold(0.0, f64::max)
}

#[test]
fn integrator_preserves_norm_over_long_runs() {
    let spin = example_constant_to_rotating(&RotatingExample {
        interval: (0.0, 100.0),
        ..RotatingExample::reference(Sign::Minus)
    })
    .unwrap();
    assert!(long_run_drift(&spin) < 1e-9);
    for seed in 0..4 {
        for n in 2..5 {
            let d = long_run_drift(&gauged_scaled(seed, n, (0.0, 100.0), 0.25));
            assert!(d < 1e-9, "seed {seed} n {n}: {d:e}");
        }
    }
}

#[test]
fn corrupted_state_fails_certification() {
    let pair = gauged(13, 2, (0.0, 10.0));
    let inner = pair.state.clone();
    let grown = StatePath::new(
        2,
        (0.0, 10.0),
        Arc::new(move |t| {
            let (v, dv) = inner.jet(t)?;
            let s = c((0.01 * t).exp(), 0.0);
            Ok((&v * s, &dv * s + &v * (s * 0.01)))
        }),
    )
    .unwrap();
    let bad = SolutionPair::new(
        pair.connection.clone(),
        grown,
        Provenance::Seed("grown".into()),
    )
    .unwrap();
    let r = certify(&bad, (0.0, 10.0), &Tolerances::default());
    assert!(!r.pass);
    assert!(r.max_schrodinger_residual > 1e-3 && r.norm_drift > 0.1);
    assert!(r.diagnostic.is_some());
}

#[test]
fn gauge_transform_keeps_certification() {
    let tol = Tolerances::default();
    let loose = Tolerances {
        residual: 10.0 * tol.residual,
        fidelity: 10.0 * tol.fidelity,
        norm: 10.0 * tol.norm,
        ..tol
    };
    for seed in 0..5 {
        let mut rng = common::rng(seed);
        let pair = seed_constant(
            &common::hermitian(&mut rng, 3, 1.0),
            &common::state(&mut rng, 3),
            (0.0, 10.0),
            1.0,
        )
        .unwrap();
        let basis = Arc::new(un_basis(3));
        let alpha =
            VectorTimeFunction::new((0..9).map(|_| common::smooth(&mut rng, 0.5)).collect());
        let moved = gauge_transform_pair(
            &pair,
            &GroupPath::axis_angle(alpha, Sign::Plus, basis).unwrap(),
        )
        .unwrap();
        assert!(certify(&pair, (0.0, 10.0), &tol).pass);
        let r = certify(&moved, (0.0, 10.0), &loose);
        assert!(r.pass, "{r:?}");
    }
}
