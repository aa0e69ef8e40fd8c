//! The closed-form transformed field against the general connection law
//! `A' = G A G⁻¹ + G dG⁻¹/dt` for a fixed-axis gauge and a time-dependent
//! field.

use std::sync::Arc;

use nlevel_gauge::gauge::gauge_transform_connection;
use nlevel_gauge::lie::{su2_basis, GroupPath, Sign};
use nlevel_gauge::spinhalf::{b_prime_closed_form, field_to_connection, FieldPath};
use nlevel_gauge::timefn::{TimeFunction, VectorTimeFunction};
use nlevel_gauge::verify::resolve_sign_convention;

fn main() -> nlevel_gauge::Result<()> {
    let mu = 1.7;
    let field = FieldPath::new(
        VectorTimeFunction::new(vec![
            TimeFunction::sinusoid(0.4, 2.0, 0.1),
            TimeFunction::polynomial([0.2, -0.05]),
            TimeFunction::constant(1.1),
        ]),
        mu,
    )?;
    // α(t) n̂ with n̂ = (2, -1, 2)/3
    let profile = TimeFunction::sum([
        TimeFunction::linear(0.8, 0.0),
        TimeFunction::sinusoid(0.5, 1.3, 0.0),
    ]);
    let axis = [2.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0];
    let alpha = VectorTimeFunction::new(
        axis.iter()
            .map(|&n| TimeFunction::scaled(n, profile.clone()))
            .collect(),
    );

    let sign = resolve_sign_convention()?;
    let closed = b_prime_closed_form(&field, &alpha, sign)?;
    let basis = Arc::new(su2_basis());
    let g = GroupPath::axis_angle(alpha, Sign::Plus, basis.clone())?;
    let matrix = gauge_transform_connection(&field_to_connection(&field), &g)?;

    let mut worst: f64 = 0.0;
    for k in 0..=50 {
        let t = 0.2 * k as f64;
        let b = closed.at(t)?;
        let a = matrix.coefficients(t, &basis)?;
        for i in 0..3 {
            worst = worst.max((b[i] - a[i] / mu).abs());
        }
        if k % 10 == 0 {
            println!(
                "t = {t:4.1}  B' = [{:9.6}, {:9.6}, {:9.6}]",
                b[0], b[1], b[2]
            );
        }
    }
    println!("max |closed form - matrix route| = {worst:.2e}");
    Ok(())
}
