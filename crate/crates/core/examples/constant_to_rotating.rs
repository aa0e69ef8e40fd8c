//! A constant field along z, rotated about x at rate ω, becomes a field
//! rotating in the y-z plane plus a static x component. The rotated spinor
//! is an exact solution for the new field.

use nlevel_gauge::lie::Sign;
use nlevel_gauge::spinhalf::{bloch_vector, example_constant_to_rotating, RotatingExample};
use nlevel_gauge::verify::{certify, resolve_sign_convention, Tolerances};

fn main() -> nlevel_gauge::Result<()> {
    let sign = resolve_sign_convention()?;
    let params = RotatingExample::reference(sign);
    let pair = example_constant_to_rotating(&params)?;
    let field = params.transformed_field()?;

    println!(
        "B0 = {}, omega = {}, mu = {}, sign = {sign}",
        params.b0, params.omega, params.mu
    );
    println!(
        "{:>8} {:>10} {:>10} {:>10}   {:>10} {:>10} {:>10}",
        "t", "B'x", "B'y", "B'z", "nx", "ny", "nz"
    );
    let (t0, t1) = params.interval;
    for k in 0..=8 {
        let t = t0 + (t1 - t0) * k as f64 / 8.0;
        let b = field.at(t)?;
        let n = bloch_vector(&pair.state.value(t)?)?.0;
        println!(
            "{t:8.3} {:10.6} {:10.6} {:10.6}   {:10.6} {:10.6} {:10.6}",
            b[0], b[1], b[2], n[0], n[1], n[2]
        );
    }

    let report = certify(&pair, params.interval, &Tolerances::default()).with_sign(sign);
    println!(
        "certified: {} (residual {:.2e}, fidelity gap {:.2e})",
        report.pass,
        report.max_schrodinger_residual,
        1.0 - report.min_fidelity
    );
    debug_assert_eq!(sign, Sign::Minus);
    Ok(())
}
