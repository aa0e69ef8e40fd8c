//! Strong and weak gauge conditions.
//!
//! A path `G̃(t)` satisfies the strong condition for `H` when the
//! transformation law returns `H` itself, so `G̃ψ` solves the same equation
//! as `ψ`. A connection shift `Ω^i` parallel to the mean values `λ^i`
//! satisfies the weak condition: it drops out of the adjoint equation and
//! leaves the mean values unchanged.

use std::sync::Arc;

use crate::adjoint::{mean_values, AdjointTrajectory};
use crate::error::{Error, Result};
use crate::gauge::{gauge_transform_hamiltonian, Connection, HamiltonianPath, SolutionPair};
use crate::lie::{GroupPath, LieBasis};
use crate::linalg::{self, c, CMatrix};
use crate::timefn::TimeFunction;

/// Tolerance on `‖K†K − I‖_F` for [`stabilizer_constant`].
pub const UNITARY_TOL: f64 = 1e-12;

/// `max_t ‖H − (G̃ H G̃⁻¹ + (ħ/i) G̃ d/dt G̃⁻¹)‖_F` over `grid`.
pub fn check_strong(h: &HamiltonianPath, gt: &GroupPath, grid: &[f64]) -> Result<f64> {
    let transformed = gauge_transform_hamiltonian(h, gt)?;
    let mut worst: f64 = 0.0;
    for &t in grid {
        worst = worst.max(linalg::frobenius(&(h.at(t)? - transformed.at(t)?)));
    }
    Ok(worst)
}

/// `G̃(t) = U(t) K U(t)†` with `U(t) = exp(−i H₀ t/ħ)`, which leaves the
/// constant Hamiltonian `H₀` invariant.
pub fn stabilizer_constant(h0: &CMatrix, k: &CMatrix, hbar: f64) -> Result<GroupPath> {
    let residual = linalg::hermitian_residual(h0);
    if residual > 1e-12 * linalg::frobenius(h0).max(1.0) {
        return Err(Error::NotHermitian { t: 0.0, residual });
    }
    if k.nrows() != h0.nrows() || k.ncols() != h0.ncols() {
        return Err(Error::DimensionMismatch {
            expected: h0.nrows(),
            got: k.nrows(),
        });
    }
    let residual = linalg::unitarity_residual(k);
    if residual > UNITARY_TOL {
        return Err(Error::NotUnitary { residual });
    }
    let (w, v) = linalg::hermitian_eigen(h0)?;
    // in the eigenbasis: K̃ = V†KV, C̃ = (−i/ħ) V†[H₀, K]V
    let kt = v.adjoint() * k * &v;
    let n = h0.nrows();
    let comm = CMatrix::from_fn(n, n, |a, b| kt[(a, b)] * c(w[a] - w[b], 0.0));
    let ct = comm * c(0.0, -1.0 / hbar);
    let conj = move |m: &CMatrix, t: f64| {
        let phases: Vec<_> = w.iter().map(|e| c(0.0, -e * t / hbar).exp()).collect();
        let inner = CMatrix::from_fn(n, n, |a, b| phases[a] * m[(a, b)] * phases[b].conj());
        &v * inner * v.adjoint()
    };
    let conj2 = conj.clone();
    Ok(GroupPath::matrix_path(
        n,
        Arc::new(move |t| Ok(conj(&kt, t))),
        Some(Arc::new(move |t| Ok(conj2(&ct, t)))),
        "stabilizer of a constant Hamiltonian",
    ))
}

/// Shift profile `Ω^i(t) = c(t) λ^i(t)` along a mean-value trajectory.
#[derive(Debug, Clone)]
pub struct WeakGaugeShift {
    pub profile: TimeFunction,
    pub trajectory: AdjointTrajectory,
}

impl WeakGaugeShift {
    pub fn omega(&self, t: f64) -> Result<Vec<f64>> {
        let ct = self.profile.evaluate(t)?;
        Ok(self
            .trajectory
            .value(t)?
            .into_iter()
            .map(|l| ct * l)
            .collect())
    }

    /// `A'^i = A^i + Ω^i`, reassembled as a matrix.
    pub fn apply(&self, a: &Connection) -> Connection {
        let shift = self.clone();
        let a = a.clone();
        let basis = self.trajectory.basis().clone();
        Connection::new(
            a.n(),
            Arc::new(move |t| Ok(a.at(t)? + basis.assemble(&shift.omega(t)?))),
        )
    }
}

/// Shifts `A` by `c(t) λ(t)` with `λ` the mean values of `pair`.
pub fn weak_shift(
    a: &Connection,
    pair: &SolutionPair,
    profile: &TimeFunction,
    basis: Arc<LieBasis>,
) -> Result<Connection> {
    profile.validate()?;
    let shift = WeakGaugeShift {
        profile: profile.clone(),
        trajectory: mean_values(pair, basis)?,
    };
    Ok(shift.apply(a))
}

/// `max_t max_i |f_jk^i (A^j − A'^j) λ^k|` over `grid`.
pub fn check_weak(
    a: &Connection,
    a_shifted: &Connection,
    traj: &AdjointTrajectory,
    grid: &[f64],
) -> Result<f64> {
    let basis = traj.basis();
    let d = basis.dim();
    let mut worst: f64 = 0.0;
    for &t in grid {
        let a0 = a.coefficients(t, basis)?;
        let a1 = a_shifted.coefficients(t, basis)?;
        let lambda = traj.value(t)?;
        for i in 0..d {
            let mut s = 0.0;
            for j in 0..d {
                let dj = a0[j] - a1[j];
                if dj == 0.0 {
                    continue;
                }
                for (k, lk) in lambda.iter().enumerate() {
                    s += basis.structure_constant(j, k, i) * dj * lk;
                }
            }
            worst = worst.max(s.abs());
        }
    }
    Ok(worst)
}
