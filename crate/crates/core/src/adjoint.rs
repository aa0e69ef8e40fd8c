//! Mean values `λ^i = ⟨ψ|iJ_i|ψ⟩` and the adjoint equation
//! `dλ^i/dt + f_jk^i A^j λ^k = 0`.
//!
//! For spin-½ in the su(2) basis `λ = n/2` with `n` the Bloch vector.

use std::sync::Arc;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::gauge::{Connection, SolutionPair};
use crate::lie::LieBasis;
use crate::linalg::{CVector, I};
use crate::ode::{self, OdeOptions};

pub type AdjointJetFn = Arc<dyn Fn(f64) -> Result<(Vec<f64>, Vec<f64>)> + Send + Sync>;

/// A mean-value path `λ(t)` with its time derivative.
#[derive(Clone)]
pub struct AdjointTrajectory {
    basis: Arc<LieBasis>,
    jet: AdjointJetFn,
}

impl std::fmt::Debug for AdjointTrajectory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AdjointTrajectory")
            .field("dim", &self.basis.dim())
            .finish()
    }
}

impl AdjointTrajectory {
    pub fn new(basis: Arc<LieBasis>, jet: AdjointJetFn) -> Self {
        AdjointTrajectory { basis, jet }
    }

    pub fn basis(&self) -> &Arc<LieBasis> {
        &self.basis
    }

    pub fn jet(&self, t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        (self.jet)(t)
    }

    pub fn value(&self, t: f64) -> Result<Vec<f64>> {
        Ok(self.jet(t)?.0)
    }

    pub fn derivative(&self, t: f64) -> Result<Vec<f64>> {
        Ok(self.jet(t)?.1)
    }
}

/// `⟨a| iJ |b⟩` for each generator, returned as complex numbers.
fn pairings(basis: &LieBasis, a: &CVector, b: &CVector) -> Vec<num_complex::Complex64> {
    basis
        .generators()
        .iter()
        .map(|j| a.dotc(&((j * I) * b)))
        .collect()
}

/// Mean values at one instant, and the largest imaginary residue seen.
pub fn mean_values_at(psi: &CVector, basis: &LieBasis) -> (Vec<f64>, f64) {
    let z = pairings(basis, psi, psi);
    let imag = z.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    (z.into_iter().map(|v| v.re).collect(), imag)
}

/// `λ(t)` from the pair's exact state; `λ̇ = 2 Re⟨ψ̇|iJ|ψ⟩` from its exact
/// derivative.
pub fn mean_values(pair: &SolutionPair, basis: Arc<LieBasis>) -> Result<AdjointTrajectory> {
    if basis.n() != pair.n() {
        return Err(Error::DimensionMismatch {
            expected: pair.n(),
            got: basis.n(),
        });
    }
    let state = pair.state.clone();
    let b = basis.clone();
    Ok(AdjointTrajectory::new(
        basis,
        Arc::new(move |t| {
            let (psi, dpsi) = state.jet(t)?;
            let lambda = pairings(&b, &psi, &psi).into_iter().map(|z| z.re).collect();
            let dlambda = pairings(&b, &dpsi, &psi)
                .into_iter()
                .map(|z| 2.0 * z.re)
                .collect();
            Ok((lambda, dlambda))
        }),
    ))
}

/// `dλ^i/dt = −f_jk^i A^j λ^k`
pub fn adjoint_rhs(a_coeffs: &[f64], lambda: &[f64], basis: &LieBasis) -> Vec<f64> {
    let d = basis.dim();
    let mut out = vec![0.0; d];
    for (j, aj) in a_coeffs.iter().enumerate() {
        if *aj == 0.0 {
            continue;
        }
        for (k, lk) in lambda.iter().enumerate() {
            if *lk == 0.0 {
                continue;
            }
            let w = aj * lk;
            for (i, o) in out.iter_mut().enumerate() {
                let f = basis.structure_constant(j, k, i);
                if f != 0.0 {
                    *o -= f * w;
                }
            }
        }
    }
    out
}

/// Numerical solution of the adjoint equation from `λ(t₀) = lambda0`.
pub fn integrate_adjoint(
    a: &Connection,
    basis: Arc<LieBasis>,
    lambda0: &[f64],
    interval: (f64, f64),
    opts: &OdeOptions,
) -> Result<AdjointTrajectory> {
    if lambda0.len() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            got: lambda0.len(),
        });
    }
    let rhs = {
        let a = a.clone();
        let b = basis.clone();
        move |t: f64, y: &DVector<f64>| -> Result<DVector<f64>> {
            let co = a.coefficients(t, &b)?;
            Ok(DVector::from_vec(adjoint_rhs(&co, y.as_slice(), &b)))
        }
    };
    let sol = ode::integrate(&rhs, &DVector::from_column_slice(lambda0), interval, opts)?;
    Ok(AdjointTrajectory::new(
        basis,
        Arc::new(move |t| {
            let y = sol.at(t)?;
            let dy = rhs(t, &y)?;
            Ok((y.as_slice().to_vec(), dy.as_slice().to_vec()))
        }),
    ))
}

/// `max_t max_i |dλ^i/dt + f_jk^i A^j λ^k|` over `grid`.
pub fn adjoint_residual(traj: &AdjointTrajectory, a: &Connection, grid: &[f64]) -> Result<f64> {
    let basis = traj.basis();
    let mut worst: f64 = 0.0;
    for &t in grid {
        let (lambda, dlambda) = traj.jet(t)?;
        let co = a.coefficients(t, basis)?;
        let rhs = adjoint_rhs(&co, &lambda, basis);
        for (d, r) in dlambda.iter().zip(rhs) {
            worst = worst.max((d - r).abs());
        }
    }
    Ok(worst)
}

/// Euclidean norm of the semisimple part (all generators except a trailing
/// central one when the basis is u(n)).
pub fn semisimple_norm(lambda: &[f64], basis: &LieBasis) -> f64 {
    let d = if basis.dim() == basis.n() * basis.n() {
        basis.dim() - 1
    } else {
        basis.dim()
    };
    lambda[..d].iter().map(|x| x * x).sum::<f64>().sqrt()
}
