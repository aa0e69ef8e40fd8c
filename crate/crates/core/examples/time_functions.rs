//! Time-function building blocks: exact derivatives, closed-form and
//! quadrature integrals, sampled splines and serialization.

use nlevel_gauge::timefn::TimeFunction;

fn main() -> nlevel_gauge::Result<()> {
    let chirp = TimeFunction::product(
        TimeFunction::linear(0.5, 1.0),
        TimeFunction::sinusoid(2.0, 3.0, 0.0),
    );
    let d = chirp.derivative()?;
    println!(
        "f(1) = {:.12}, f'(1) = {:.12}",
        chirp.evaluate(1.0)?,
        d.evaluate(1.0)?
    );
    println!(
        "∫₀² f dt (quadrature) = {:.12}",
        chirp.antiderivative(0.0, 2.0)?
    );

    let poly = TimeFunction::polynomial([1.0, -2.0, 0.5]);
    println!(
        "∫₀³ (1 - 2t + t²/2) dt = {:.12} (exact -1.5)",
        poly.antiderivative(0.0, 3.0)?
    );

    let grid: Vec<f64> = (0..=40).map(|k| k as f64 * 0.25).collect();
    let values = grid.iter().map(|t| t.sin()).collect();
    let spline = TimeFunction::sampled(grid, values, 3)?;
    println!(
        "spline sin(2.1) = {:.8} (exact {:.8})",
        spline.evaluate(2.1)?,
        2.1f64.sin()
    );
    println!("outside the grid: {}", spline.evaluate(11.0).unwrap_err());

    let pulse = TimeFunction::piecewise(
        vec![1.0, 3.0],
        vec![
            TimeFunction::constant(0.0),
            TimeFunction::sinusoid(1.0, 1.5, 0.0),
            TimeFunction::constant(0.0),
        ],
    )?;
    println!("pulse area = {:.12}", pulse.antiderivative(0.0, 5.0)?);
    println!("{}", serde_json::to_string(&pulse).expect("serializes"));
    Ok(())
}
