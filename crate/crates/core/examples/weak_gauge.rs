//! Shifting the connection along the mean values, `A' = A + c(t) λ(t)`,
//! leaves the adjoint dynamics unchanged. A shift perpendicular to λ does
//! not.

use std::sync::Arc;

use nlevel_gauge::adjoint::{integrate_adjoint, mean_values};
use nlevel_gauge::gauge::Connection;
use nlevel_gauge::gaugecond::{check_weak, weak_shift};
use nlevel_gauge::lie::su2_basis;
use nlevel_gauge::linalg::c;
use nlevel_gauge::ode::OdeOptions;
use nlevel_gauge::spinhalf::constant_field_seed;
use nlevel_gauge::timefn::TimeFunction;
use nlevel_gauge::verify::uniform_grid;

fn main() -> nlevel_gauge::Result<()> {
    let interval = (0.0, 10.0);
    let pair = constant_field_seed(1.0, c(1.0, 0.0), c(0.0, 0.0), 1.0, interval)?;
    let basis = Arc::new(su2_basis());
    let traj = mean_values(&pair, basis.clone())?;
    let grid = uniform_grid(interval, 200);
    let lambda0 = traj.value(0.0)?;
    let opts = OdeOptions::default();
    let reference = integrate_adjoint(&pair.connection, basis.clone(), &lambda0, interval, &opts)?;

    let profile = TimeFunction::sum([
        TimeFunction::constant(0.4),
        TimeFunction::sinusoid(1.5, 2.0, 0.0),
    ]);
    let parallel = weak_shift(&pair.connection, &pair, &profile, basis.clone())?;
    let b = basis.clone();
    let perpendicular = {
        let a = pair.connection.clone();
        let p = profile.clone();
        Connection::new(
            2,
            Arc::new(move |t| Ok(a.at(t)? + b.assemble(&[p.evaluate(t)?, 0.0, 0.0]))),
        )
    };

    for (name, shifted) in [("parallel", &parallel), ("perpendicular", &perpendicular)] {
        let moved = integrate_adjoint(shifted, basis.clone(), &lambda0, interval, &opts)?;
        let mut gap: f64 = 0.0;
        for &t in &grid {
            let (x, y) = (reference.value(t)?, moved.value(t)?);
            gap = gap.max(
                x.iter()
                    .zip(&y)
                    .map(|(p, q)| (p - q).abs())
                    .fold(0.0, f64::max),
            );
        }
        println!(
            "{name:>13}: weak-condition residual = {:.2e}, max |Δλ| = {gap:.2e}",
            check_weak(&pair.connection, shifted, &traj, &grid)?
        );
    }
    Ok(())
}
