//! For a constant Hamiltonian `H₀` and any constant unitary `K`, the path
//! `G̃(t) = U(t) K U(t)†` with `U = exp(−iH₀t/ħ)` leaves `H₀` invariant and
//! maps solutions to other solutions of the same system.

use nlevel_gauge::gauge::HamiltonianPath;
use nlevel_gauge::gauge::Provenance;
use nlevel_gauge::gauge::{gauge_transform_state, seed_constant, SolutionPair};
use nlevel_gauge::gaugecond::{check_strong, stabilizer_constant};
use nlevel_gauge::lie::{exp_unitary, un_basis};
use nlevel_gauge::linalg::{c, CMatrix, CVector};
use nlevel_gauge::verify::{certify, uniform_grid, Tolerances};

fn main() -> nlevel_gauge::Result<()> {
    let h0 = CMatrix::from_row_slice(
        3,
        3,
        &[
            c(1.0, 0.0),
            c(0.3, -0.2),
            c(0.0, 0.1),
            c(0.3, 0.2),
            c(-0.4, 0.0),
            c(0.5, 0.0),
            c(0.0, -0.1),
            c(0.5, 0.0),
            c(0.2, 0.0),
        ],
    );
    let basis = un_basis(3);
    let k = exp_unitary(&basis.assemble(&[0.7, -0.2, 0.4, 1.1, 0.0, -0.5, 0.3, 0.9, 0.2]))?;
    let gt = stabilizer_constant(&h0, &k, 1.0)?;

    let interval = (0.0, 10.0);
    let h = HamiltonianPath::constant(h0.clone(), 1.0)?;
    println!(
        "strong-condition residual: {:.2e}",
        check_strong(&h, &gt, &uniform_grid(interval, 200))?
    );

    let psi0 = CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let seed = seed_constant(&h0, &psi0, interval, 1.0)?;
    let moved = SolutionPair::new(
        seed.connection.clone(),
        gauge_transform_state(&seed.state, &gt)?,
        Provenance::Derived {
            parent: Box::new(seed.provenance.clone()),
            note: "stabilizer image".into(),
        },
    )?;
    let r = certify(&moved, interval, &Tolerances::default());
    println!(
        "G̃ψ under the unchanged H₀: pass = {}, residual = {:.2e}",
        r.pass, r.max_schrodinger_residual
    );
    println!(
        "overlap |⟨ψ|G̃ψ⟩|² at t = 0: {:.6}",
        nlevel_gauge::verify::fidelity(&psi0, &moved.state.value(0.0)?)
    );
    Ok(())
}
