mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use nlevel_gauge::gauge::{gauge_transform_connection, Provenance, SolutionPair, StatePath};
use nlevel_gauge::lie::{su2_basis, GroupPath, Sign};
use nlevel_gauge::linalg::{self, c, CVector};
use nlevel_gauge::spinhalf::{
    b_prime_at, b_prime_closed_form, bloch_vector, constant_field_seed,
    example_constant_to_rotating, field_to_connection, FieldPath, RotatingExample,
};
use nlevel_gauge::timefn::{TimeFunction, VectorTimeFunction};
use nlevel_gauge::verify::{certify, schrodinger_residual, uniform_grid, Tolerances};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotation_part_preserves_field_magnitude(seed in 0u64..100_000, mu in 0.2..5.0f64) {
        let mut rng = common::rng(seed);
        let scale = common::uniform(&mut rng, 0.1, 3.0);
        let b = common::unit_vector(&mut rng).map(|x| x * scale);
        let axis = common::unit_vector(&mut rng);
        let angle = common::uniform(&mut rng, -7.0, 7.0);
        let rate = common::uniform(&mut rng, -2.0, 2.0);
        let alpha = axis.map(|x| x * angle);
        let alpha_dot = axis.map(|x| x * rate);
        for sign in [Sign::Plus, Sign::Minus] {
            let bp = b_prime_at(b, alpha, alpha_dot, mu, sign);
            let rot: Vec<f64> = (0..3).map(|i| bp[i] - sign.value() * alpha_dot[i] / mu).collect();
            let lhs = rot.iter().map(|x| x * x).sum::<f64>().sqrt();
            let rhs = b.iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!((lhs - rhs).abs() < 1e-11);
        }
    }

    #[test]
    fn bloch_vector_has_unit_length(seed in 0u64..100_000) {
        let mut rng = common::rng(seed);
        let psi = common::state(&mut rng, 2);
        prop_assert!((bloch_vector(&psi).unwrap().norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn closed_form_matches_matrix_route(seed in 0u64..100_000, mu in 0.3..3.0f64) {
        let mut rng = common::rng(seed);
        let axis = common::unit_vector(&mut rng);
        let angle = common::smooth(&mut rng, 1.5);
        let alpha = VectorTimeFunction::new(axis.iter().map(|&a| TimeFunction::scaled(a, angle.clone())).collect());
        let b = VectorTimeFunction::new((0..3).map(|_| common::smooth(&mut rng, 1.0)).collect());
        let fp = FieldPath::new(b, mu).unwrap();
        let g = GroupPath::axis_angle(alpha.clone(), Sign::Plus, Arc::new(su2_basis())).unwrap();
        let matrix = gauge_transform_connection(&field_to_connection(&fp), &g).unwrap();
        let closed = field_to_connection(&b_prime_closed_form(&fp, &alpha, Sign::Minus).unwrap());
        for t in [0.0, 1.3, 4.4, 9.0] {
            prop_assert!(linalg::frobenius(&(matrix.at(t).unwrap() - closed.at(t).unwrap())) < 1e-12);
        }
    }
}

#[test]
fn rotating_example_state_at_half_period() {
    // G(π/ω) = −iσ₁, so ψ'(π/ω) = −i (ψ₂(π/ω), ψ₁(π/ω)).
    let (b0, omega, mu) = (1.3, 0.4, 0.9);
    let (p1, p2) = (c(0.6, 0.0), c(0.0, 0.8));
    let params = RotatingExample {
        b0,
        omega,
        psi10: p1,
        psi20: p2,
        mu,
        sign: Sign::Minus,
        interval: (0.0, 4.0 * PI / omega),
    };
    let pair = example_constant_to_rotating(&params).unwrap();
    let t = PI / omega;
    let w = 0.5 * mu * b0 * t;
    let up = c(0.0, w).exp() * p1;
    let down = c(0.0, -w).exp() * p2;
    let expected = CVector::from_vec(vec![c(0.0, -1.0) * down, c(0.0, -1.0) * up]);
    assert!(linalg::norm(&(pair.state.value(t).unwrap() - expected)) < 1e-12);

    let bp = params.transformed_field().unwrap().at(t).unwrap();
    let want = [-omega / mu, 0.0, -b0];
    for i in 0..3 {
        assert!((bp[i] - want[i]).abs() < 1e-12, "{bp:?}");
    }
}

#[test]
fn rotating_example_certifies_only_with_minus() {
    let minus = example_constant_to_rotating(&RotatingExample::reference(Sign::Minus)).unwrap();
    let plus = example_constant_to_rotating(&RotatingExample::reference(Sign::Plus)).unwrap();
    let tol = Tolerances::default();
    let rm = certify(&minus, minus.interval(), &tol);
    let rp = certify(&plus, plus.interval(), &tol);
    assert!(rm.pass, "{rm:?}");
    assert!(!rp.pass);
    // ‖(2ω/μ)J₁ψ‖ = ω/μ for a unit state
    assert!((rp.max_schrodinger_residual - 0.3).abs() < 1e-9);
}

#[test]
fn seed_residual_vanishes() {
    let pair = constant_field_seed(2.0, c(0.6, 0.0), c(0.0, 0.8), 0.7, (0.0, 30.0)).unwrap();
    assert!(schrodinger_residual(&pair, &uniform_grid((0.0, 30.0), 300)).unwrap() < 1e-14);
}

#[test]
fn printed_seed_phases_miss_by_mu_b0() {
    // ψ = (e^{−iμB₀t/2}, 0) against A = μB₀J₃ leaves ψ̇ + Aψ = −iμB₀ψ.
    let (b0, mu) = (1.5, 0.8);
    let w = 0.5 * mu * b0;
    let state = StatePath::new(
        2,
        (0.0, 10.0),
        Arc::new(move |t| {
            let up = c(0.0, -w * t).exp();
            Ok((
                CVector::from_vec(vec![up, c(0.0, 0.0)]),
                CVector::from_vec(vec![c(0.0, -w) * up, c(0.0, 0.0)]),
            ))
        }),
    )
    .unwrap();
    let field = FieldPath::constant([0.0, 0.0, b0], mu).unwrap();
    let pair = SolutionPair::new(
        field_to_connection(&field),
        state,
        Provenance::Seed("printed".into()),
    )
    .unwrap();
    let r = schrodinger_residual(&pair, &uniform_grid((0.0, 10.0), 50)).unwrap();
    assert!((r - mu * b0).abs() < 1e-13, "{r}");
}

#[test]
fn rotating_axis_is_rejected_by_closed_form() {
    let alpha = VectorTimeFunction::new(vec![
        TimeFunction::linear(1.0, 0.0),
        TimeFunction::constant(1.0),
        TimeFunction::constant(0.0),
    ]);
    let fp = b_prime_closed_form(
        &FieldPath::constant([0.0, 0.0, 1.0], 1.0).unwrap(),
        &alpha,
        Sign::Minus,
    )
    .unwrap();
    assert!(fp.at(0.5).is_err());
}
