//! Exact solutions of time-dependent n-level Schrödinger equations from
//! gauge transformations of known solutions.
//!
//! The Schrödinger equation `iħ ψ̇ = H ψ` is read as a covariant-derivative
//! condition `(d/dt + A) ψ = 0` with the skew-Hermitian connection
//! `A = (i/ħ) H` valued in u(n). A unitary path `G(t)` maps a solution
//! `(A, ψ)` to another exact solution `(G A G⁻¹ + G d/dt G⁻¹, G ψ)`.
//!
//! Modules:
//! - [`timefn`]: scalar time functions with exact derivatives
//! - [`lie`]: su(2)/u(n) bases, exponentials, unitary paths
//! - [`gauge`]: connections, Hamiltonians, states, transformations, seeds
//! - [`spinhalf`]: magnetic-field form of the spin-½ case
//! - [`adjoint`]: mean values and the adjoint equation
//! - [`gaugecond`]: strong and weak gauge conditions
//! - [`verify`]: numerical certification of claimed solutions
//! - [`cli`]: declarative scenario runner behind the `nlevel-gauge` binary

pub mod adjoint;
pub mod cli;
pub mod error;
pub mod gauge;
pub mod gaugecond;
pub mod lie;
pub mod linalg;
pub mod ode;
pub mod spinhalf;
pub mod timefn;
pub mod verify;

pub use error::{Error, Result};
pub use gauge::{Connection, HamiltonianPath, Provenance, SolutionPair, StatePath};
pub use lie::{GroupPath, LieBasis, Sign};
pub use timefn::{TimeFunction, VectorTimeFunction};
pub use verify::{CertificationReport, Tolerances};
