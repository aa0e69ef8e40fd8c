//! Certifies the rotating-field construction under both signs of the
//! `(1/μ) dα/dt` term and shows that exactly one of them is exact.

use nlevel_gauge::lie::Sign;
use nlevel_gauge::spinhalf::{example_constant_to_rotating, RotatingExample};
use nlevel_gauge::verify::{certify, resolve_sign_convention, Tolerances};

fn main() -> nlevel_gauge::Result<()> {
    let tol = Tolerances::default();
    for sign in [Sign::Plus, Sign::Minus] {
        let params = RotatingExample::reference(sign);
        let report = certify(
            &example_constant_to_rotating(&params)?,
            params.interval,
            &tol,
        );
        println!(
            "sign {sign}: pass = {:5}  residual = {:.3e}  min fidelity = {:.12}",
            report.pass, report.max_schrodinger_residual, report.min_fidelity
        );
    }
    println!("resolved: {}", resolve_sign_convention()?);
    Ok(())
}
