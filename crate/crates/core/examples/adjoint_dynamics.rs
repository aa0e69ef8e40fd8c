//! Mean values `λ^i = ⟨ψ|iJ_i|ψ⟩` of a gauge-transformed spin solve the
//! adjoint equation for the transformed connection; integrating that
//! equation directly reproduces them.

use std::sync::Arc;

use nlevel_gauge::adjoint::{adjoint_residual, integrate_adjoint, mean_values};
use nlevel_gauge::lie::su2_basis;
use nlevel_gauge::ode::OdeOptions;
use nlevel_gauge::spinhalf::{example_constant_to_rotating, RotatingExample};
use nlevel_gauge::verify::{resolve_sign_convention, uniform_grid};

fn main() -> nlevel_gauge::Result<()> {
    let params = RotatingExample {
        psi10: nlevel_gauge::linalg::c(0.6, 0.0),
        psi20: nlevel_gauge::linalg::c(0.0, 0.8),
        ..RotatingExample::reference(resolve_sign_convention()?)
    };
    let pair = example_constant_to_rotating(&params)?;
    let basis = Arc::new(su2_basis());
    let exact = mean_values(&pair, basis.clone())?;
    let grid = uniform_grid(params.interval, 200);
    println!(
        "adjoint residual of exact mean values: {:.2e}",
        adjoint_residual(&exact, &pair.connection, &grid)?
    );

    let numeric = integrate_adjoint(
        &pair.connection,
        basis,
        &exact.value(params.interval.0)?,
        params.interval,
        &OdeOptions::default(),
    )?;
    let mut worst: f64 = 0.0;
    for &t in &grid {
        let (a, b) = (exact.value(t)?, numeric.value(t)?);
        worst = worst.max(
            a.iter()
                .zip(&b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max),
        );
    }
    println!("max |λ_exact - λ_integrated| = {worst:.2e}");
    for t in [0.0, 10.0, 30.0, 60.0] {
        let l = exact.value(t)?;
        let n: f64 = 2.0 * l.iter().map(|x| x * x).sum::<f64>().sqrt();
        println!(
            "t = {t:5.1}  n = 2λ = [{:+.6}, {:+.6}, {:+.6}]  |n| = {n:.15}",
            2.0 * l[0],
            2.0 * l[1],
            2.0 * l[2]
        );
    }
    Ok(())
}
