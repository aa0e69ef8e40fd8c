//! A three-level system with time-dependent diagonal energies, gauged by a
//! smooth U(3) path. The transformed Hamiltonian is no longer diagonal, yet
//! the transformed state remains an exact solution.

use std::sync::Arc;

use nlevel_gauge::gauge::{gauge_transform_pair, normalized, seed_diagonal};
use nlevel_gauge::lie::{un_basis, GroupPath, Sign};
use nlevel_gauge::linalg::{c, CVector};
use nlevel_gauge::timefn::{TimeFunction, VectorTimeFunction};
use nlevel_gauge::verify::{certify, Tolerances};

fn main() -> nlevel_gauge::Result<()> {
    let interval = (0.0, 10.0);
    let energies = [
        TimeFunction::polynomial([0.5, 0.1]),
        TimeFunction::sinusoid(0.8, 1.3, 0.2),
        TimeFunction::constant(-0.7),
    ];
    let psi0 = normalized(&CVector::from_vec(vec![
        c(1.0, 0.0),
        c(0.0, 0.8),
        c(1.0, 0.0),
    ]));
    let seed = seed_diagonal(&energies, &psi0, interval, 1.0)?;

    let basis = Arc::new(un_basis(3));
    let alpha = VectorTimeFunction::new(
        (0..basis.dim())
            .map(|i| {
                TimeFunction::sinusoid(0.3 + 0.05 * i as f64, 0.4 + 0.1 * i as f64, 0.3 * i as f64)
            })
            .collect(),
    );
    let g = GroupPath::axis_angle(alpha, Sign::Plus, basis)?;
    let pair = gauge_transform_pair(&seed, &g)?;

    let h = pair.connection.to_hamiltonian(1.0).at(5.0)?;
    println!("H'(5) =");
    for i in 0..3 {
        let row: Vec<String> = (0..3)
            .map(|j| format!("{:+.4}{:+.4}i", h[(i, j)].re, h[(i, j)].im))
            .collect();
        println!("  {}", row.join("  "));
    }
    let tol = Tolerances::default();
    for (name, p) in [("seed", &seed), ("transformed", &pair)] {
        let r = certify(p, interval, &tol);
        println!(
            "{name:>12}: pass = {}  residual = {:.2e}  fidelity gap = {:.2e}  norm drift = {:.2e}",
            r.pass,
            r.max_schrodinger_residual,
            1.0 - r.min_fidelity,
            r.norm_drift
        );
    }
    Ok(())
}
