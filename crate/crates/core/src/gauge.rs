//! Connections, Hamiltonians and states as paths in time, and the gauge
//! transformation that maps one exact solution to another.
//!
//! For a unitary path `G(t)` the pair `(A, ψ)` with `ψ̇ + Aψ = 0` becomes
//! `(A', ψ')` where
//!
//! ```text
//! ψ'(t) = G ψ
//! A'(t) = G A G⁻¹ + G d/dt(G⁻¹) = G A G† − Ġ G†
//! H'(t) = G H G† + iħ Ġ G†
//! ```
//!
//! and `(A', ψ')` again satisfies the equation. Everything is evaluated
//! lazily at requested times.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lie::{GroupPath, LieBasis, MatrixFn};
use crate::linalg::{self, c, CMatrix, CVector, C64, I};
use crate::timefn::TimeFunction;

/// Relative tolerance for Hermiticity of `H(t)`.
pub const HERMITIAN_TOL: f64 = 1e-12;

pub type StateJetFn = Arc<dyn Fn(f64) -> Result<(CVector, CVector)> + Send + Sync>;

fn check_hermitian(h: &CMatrix, t: f64) -> Result<()> {
    let residual = linalg::hermitian_residual(h);
    if residual > HERMITIAN_TOL * linalg::frobenius(h).max(1.0) {
        Err(Error::NotHermitian { t, residual })
    } else {
        Ok(())
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// Time-dependent Hermitian `n×n` Hamiltonian.
#[derive(Clone)]
pub struct HamiltonianPath {
    n: usize,
    hbar: f64,
    matrix: MatrixFn,
}

impl fmt::Debug for HamiltonianPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HamiltonianPath")
            .field("n", &self.n)
            .field("hbar", &self.hbar)
            .finish()
    }
}

impl HamiltonianPath {
    pub fn new(n: usize, hbar: f64, matrix: MatrixFn) -> Self {
        assert!(hbar > 0.0, "hbar must be positive");
        HamiltonianPath { n, hbar, matrix }
    }

    pub fn constant(h0: CMatrix, hbar: f64) -> Result<Self> {
        check_hermitian(&h0, 0.0)?;
        let n = h0.nrows();
        Ok(Self::new(n, hbar, Arc::new(move |_| Ok(h0.clone()))))
    }

    /// `H(t) = diag(E_1(t), …, E_n(t))`
    pub fn diagonal(energies: Vec<TimeFunction>, hbar: f64) -> Self {
        let n = energies.len();
        Self::new(
            n,
            hbar,
            Arc::new(move |t| {
                let d = energies
                    .iter()
                    .map(|e| e.evaluate(t).map(|v| c(v, 0.0)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(CMatrix::from_diagonal(&CVector::from_vec(d)))
            }),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn at(&self, t: f64) -> Result<CMatrix> {
        let h = (self.matrix)(t)?;
        check_dim(self.n, h.nrows())?;
        Ok(h)
    }
}

/// Skew-Hermitian connection `A(t) = A^i(t) J_i`.
#[derive(Clone)]
pub struct Connection {
    n: usize,
    matrix: MatrixFn,
}

impl fmt::Debug for Connection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Connection").field("n", &self.n).finish()
    }
}

impl Connection {
    pub fn new(n: usize, matrix: MatrixFn) -> Self {
        Connection { n, matrix }
    }

    pub fn zero(n: usize) -> Self {
        Self::constant(CMatrix::zeros(n, n))
    }

    pub fn constant(a: CMatrix) -> Self {
        let n = a.nrows();
        Self::new(n, Arc::new(move |_| Ok(a.clone())))
    }

    /// `A(t) = Σ c^i(t) J_i` from coefficient functions.
    pub fn from_coefficients(
        basis: Arc<LieBasis>,
        coeffs: Arc<dyn Fn(f64) -> Result<Vec<f64>> + Send + Sync>,
    ) -> Self {
        let n = basis.n();
        Self::new(n, Arc::new(move |t| Ok(basis.assemble(&coeffs(t)?))))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn at(&self, t: f64) -> Result<CMatrix> {
        let a = (self.matrix)(t)?;
        check_dim(self.n, a.nrows())?;
        Ok(a)
    }

    /// Coefficients `A^i(t)` in `basis`.
    pub fn coefficients(&self, t: f64, basis: &LieBasis) -> Result<Vec<f64>> {
        basis.coefficients(&self.at(t)?)
    }

    /// `H = −iħ A`
    pub fn to_hamiltonian(&self, hbar: f64) -> HamiltonianPath {
        let a = self.clone();
        HamiltonianPath::new(
            self.n,
            hbar,
            Arc::new(move |t| Ok(a.at(t)? * c(0.0, -hbar))),
        )
    }
}

/// State `ψ(t)` together with its exact time derivative.
#[derive(Clone)]
pub struct StatePath {
    n: usize,
    interval: (f64, f64),
    jet: StateJetFn,
}

impl fmt::Debug for StatePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StatePath")
            .field("n", &self.n)
            .field("interval", &self.interval)
            .finish()
    }
}

impl StatePath {
    pub fn new(n: usize, interval: (f64, f64), jet: StateJetFn) -> Result<Self> {
        if !(interval.0.is_finite() && interval.1.is_finite() && interval.1 > interval.0) {
            return Err(Error::InvalidInterval {
                t0: interval.0,
                t1: interval.1,
            });
        }
        Ok(StatePath { n, interval, jet })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    /// `(ψ(t), ψ̇(t))`
    pub fn jet(&self, t: f64) -> Result<(CVector, CVector)> {
        let (psi, dpsi) = (self.jet)(t)?;
        check_dim(self.n, psi.len())?;
        Ok((psi, dpsi))
    }

    pub fn value(&self, t: f64) -> Result<CVector> {
        Ok(self.jet(t)?.0)
    }

    pub fn derivative(&self, t: f64) -> Result<CVector> {
        Ok(self.jet(t)?.1)
    }

    pub fn initial(&self) -> Result<CVector> {
        self.value(self.interval.0)
    }
}

/// Where a solution pair came from.
#[derive(Debug, Clone)]
pub enum Provenance {
    Seed(String),
    GaugeTransformed {
        parent: Box<Provenance>,
        gauge: GroupPath,
    },
    Derived {
        parent: Box<Provenance>,
        note: String,
    },
}

/// A connection with a state claimed to solve `ψ̇ + Aψ = 0`.
#[derive(Debug, Clone)]
pub struct SolutionPair {
    pub connection: Connection,
    pub state: StatePath,
    pub provenance: Provenance,
}

impl SolutionPair {
    pub fn new(connection: Connection, state: StatePath, provenance: Provenance) -> Result<Self> {
        check_dim(connection.n(), state.n())?;
        Ok(SolutionPair {
            connection,
            state,
            provenance,
        })
    }

    pub fn n(&self) -> usize {
        self.state.n()
    }

    pub fn interval(&self) -> (f64, f64) {
        self.state.interval()
    }

    /// Number of gauge transformations applied since the seed.
    pub fn depth(&self) -> usize {
        let mut p = &self.provenance;
        let mut depth = 0;
        loop {
            match p {
                Provenance::Seed(_) => return depth,
                Provenance::GaugeTransformed { parent, .. } => {
                    depth += 1;
                    p = parent;
                }
                Provenance::Derived { parent, .. } => p = parent,
            }
        }
    }
}

/// `A(t) = (i/ħ) H(t)`; errors at evaluation if `H(t)` is not Hermitian.
pub fn hamiltonian_to_connection(h: &HamiltonianPath) -> Connection {
    let h = h.clone();
    let scale = c(0.0, 1.0 / h.hbar());
    Connection::new(
        h.n(),
        Arc::new(move |t| {
            let m = h.at(t)?;
            check_hermitian(&m, t)?;
            Ok(m * scale)
        }),
    )
}

/// `ψ'(t) = G(t) ψ(t)`, `ψ̇' = Ġψ + Gψ̇`.
pub fn gauge_transform_state(psi: &StatePath, g: &GroupPath) -> Result<StatePath> {
    check_dim(psi.n(), g.n())?;
    let psi = psi.clone();
    let g = g.clone();
    let interval = psi.interval();
    StatePath::new(
        psi.n(),
        interval,
        Arc::new(move |t| {
            let (v, dv) = psi.jet(t)?;
            let (gm, dg) = g.jet(t)?;
            let dnew = &dg * &v + &gm * dv;
            Ok((gm * v, dnew))
        }),
    )
}

fn require_derivative(g: &GroupPath) -> Result<()> {
    match g {
        GroupPath::MatrixPath {
            derivative: None, ..
        } => Err(Error::DerivativeUnavailable),
        _ => Ok(()),
    }
}

/// `A'(t) = G A G⁻¹ + G (d/dt)G⁻¹`, with `G⁻¹ = G†` and
/// `(d/dt)G⁻¹ = −G⁻¹ Ġ G⁻¹`.
pub fn gauge_transform_connection(a: &Connection, g: &GroupPath) -> Result<Connection> {
    check_dim(a.n(), g.n())?;
    require_derivative(g)?;
    let a = a.clone();
    let g = g.clone();
    Ok(Connection::new(
        a.n(),
        Arc::new(move |t| {
            let (gm, dg) = g.jet(t)?;
            let ginv = gm.adjoint();
            Ok(&gm * a.at(t)? * &ginv - dg * ginv)
        }),
    ))
}

/// `H'(t) = G H G⁻¹ + (ħ/i) G (d/dt)G⁻¹ = G H G† + iħ Ġ G†`.
pub fn gauge_transform_hamiltonian(h: &HamiltonianPath, g: &GroupPath) -> Result<HamiltonianPath> {
    check_dim(h.n(), g.n())?;
    require_derivative(g)?;
    let h = h.clone();
    let g = g.clone();
    let ihbar = I * h.hbar();
    Ok(HamiltonianPath::new(
        h.n(),
        h.hbar(),
        Arc::new(move |t| {
            let (gm, dg) = g.jet(t)?;
            let ginv = gm.adjoint();
            Ok(&gm * h.at(t)? * &ginv + dg * ginv * ihbar)
        }),
    ))
}

/// Applies `G` to both halves of a solution pair.
pub fn gauge_transform_pair(pair: &SolutionPair, g: &GroupPath) -> Result<SolutionPair> {
    let connection = gauge_transform_connection(&pair.connection, g)?;
    let state = gauge_transform_state(&pair.state, g)?;
    SolutionPair::new(
        connection,
        state,
        Provenance::GaugeTransformed {
            parent: Box::new(pair.provenance.clone()),
            gauge: g.clone(),
        },
    )
}

fn validate_initial(psi0: &CVector, n: usize) -> Result<()> {
    check_dim(n, psi0.len())?;
    if psi0.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numerical("initial state is not finite".into()));
    }
    Ok(())
}

/// Exact solution for a constant Hamiltonian:
/// `ψ(t) = exp(−i H₀ (t − t₀)/ħ) ψ₀` via the eigendecomposition of `H₀`.
pub fn seed_constant(
    h0: &CMatrix,
    psi0: &CVector,
    interval: (f64, f64),
    hbar: f64,
) -> Result<SolutionPair> {
    check_hermitian(h0, interval.0)?;
    validate_initial(psi0, h0.nrows())?;
    let n = h0.nrows();
    let (w, v) = linalg::hermitian_eigen(h0)?;
    let amps = v.adjoint() * psi0;
    let t0 = interval.0;
    let rates: Vec<C64> = w.iter().map(|e| c(0.0, -e / hbar)).collect();
    let state = StatePath::new(
        n,
        interval,
        Arc::new(move |t| {
            let phased =
                CVector::from_iterator(n, (0..n).map(|k| (rates[k] * (t - t0)).exp() * amps[k]));
            let dphased = CVector::from_iterator(n, (0..n).map(|k| rates[k] * phased[k]));
            Ok((&v * phased, &v * dphased))
        }),
    )?;
    let connection = hamiltonian_to_connection(&HamiltonianPath::constant(h0.clone(), hbar)?);
    SolutionPair::new(
        connection,
        state,
        Provenance::Seed("constant Hamiltonian".into()),
    )
}

/// Exact solution for `H(t) = diag(E_k(t))`:
/// `ψ_k(t) = exp(−(i/ħ) ∫_{t₀}^t E_k) ψ₀ₖ`.
pub fn seed_diagonal(
    energies: &[TimeFunction],
    psi0: &CVector,
    interval: (f64, f64),
    hbar: f64,
) -> Result<SolutionPair> {
    let n = energies.len();
    validate_initial(psi0, n)?;
    for e in energies {
        e.validate()?;
        e.evaluate(interval.0)?;
        e.evaluate(interval.1)?;
    }
    let es: Vec<TimeFunction> = energies.to_vec();
    let psi0 = psi0.clone();
    let t0 = interval.0;
    let state = StatePath::new(
        n,
        interval,
        Arc::new(move |t| {
            let mut psi = CVector::zeros(n);
            let mut dpsi = CVector::zeros(n);
            for (k, e) in es.iter().enumerate() {
                let phase = e.antiderivative(t0, t)? / hbar;
                psi[k] = c(0.0, -phase).exp() * psi0[k];
                dpsi[k] = c(0.0, -e.evaluate(t)? / hbar) * psi[k];
            }
            Ok((psi, dpsi))
        }),
    )?;
    let connection = hamiltonian_to_connection(&HamiltonianPath::diagonal(energies.to_vec(), hbar));
    SolutionPair::new(
        connection,
        state,
        Provenance::Seed("diagonal Hamiltonian".into()),
    )
}

/// Normalizes a complex vector; zero vectors are returned unchanged.
pub fn normalized(v: &CVector) -> CVector {
    let nrm = linalg::norm(v);
    if nrm == 0.0 {
        v.clone()
    } else {
        v.map(|z| z / nrm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{pauli, su2_basis, Sign};
    use crate::timefn::VectorTimeFunction;

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        linalg::frobenius(&(a - b)) < tol
    }

    #[test]
    fn sigma3_hamiltonian_maps_to_minus_omega_j3() {
        let omega = 1.7;
        let h = HamiltonianPath::constant(pauli()[2].map(|z| z * (omega / 2.0)), 1.0).unwrap();
        let a = hamiltonian_to_connection(&h).at(0.3).unwrap();
        let expected = su2_basis().generator(2).map(|z| z * -omega);
        assert!(close(&a, &expected, 1e-15));
        let zero = hamiltonian_to_connection(
            &HamiltonianPath::constant(CMatrix::zeros(2, 2), 1.0).unwrap(),
        );
        assert!(linalg::frobenius(&zero.at(1.0).unwrap()) == 0.0);
    }

    #[test]
    fn non_hermitian_rejected_with_time() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(HamiltonianPath::constant(m.clone(), 1.0).is_err());
        let h = HamiltonianPath::new(2, 1.0, Arc::new(move |_| Ok(m.clone())));
        match hamiltonian_to_connection(&h).at(2.5) {
            Err(Error::NotHermitian { t, residual }) => {
                assert_eq!(t, 2.5);
                assert!(residual > 1.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identity_gauge_is_noop() {
        let h0 = pauli()[0].clone() + pauli()[2].map(|z| z * 0.4);
        let pair = seed_constant(
            &h0,
            &CVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]),
            (0.0, 5.0),
            1.0,
        )
        .unwrap();
        let g = GroupPath::identity(2);
        let out = gauge_transform_pair(&pair, &g).unwrap();
        for t in [0.0, 1.3, 4.9] {
            assert!(close(
                &out.connection.at(t).unwrap(),
                &pair.connection.at(t).unwrap(),
                1e-15
            ));
            assert!(
                linalg::norm(&(out.state.value(t).unwrap() - pair.state.value(t).unwrap())) < 1e-15
            );
        }
        assert_eq!(out.depth(), 1);
    }

    #[test]
    fn commuting_constant_gauge_preserves_connection() {
        let h0 = pauli()[2].map(|z| z * 0.9);
        let h = HamiltonianPath::constant(h0, 1.0).unwrap();
        let k = crate::lie::exp_su2([0.0, 0.0, 1.1], Sign::Plus);
        let g = GroupPath::constant(k, "z rotation");
        let hp = gauge_transform_hamiltonian(&h, &g).unwrap();
        assert!(close(&hp.at(0.7).unwrap(), &h.at(0.7).unwrap(), 1e-15));
    }

    #[test]
    fn dimension_mismatch_reported() {
        let pair = seed_constant(
            &CMatrix::identity(3, 3),
            &CVector::from_element(3, c(1.0, 0.0)),
            (0.0, 1.0),
            1.0,
        )
        .unwrap();
        assert!(matches!(
            gauge_transform_pair(&pair, &GroupPath::identity(2)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(seed_constant(
            &CMatrix::identity(3, 3),
            &CVector::zeros(2),
            (0.0, 1.0),
            1.0
        )
        .is_err());
    }

    #[test]
    fn missing_gauge_derivative_is_an_error() {
        let g = GroupPath::matrix_path(2, Arc::new(|_| Ok(CMatrix::identity(2, 2))), None, "bare");
        assert_eq!(
            gauge_transform_connection(&Connection::zero(2), &g).unwrap_err(),
            Error::DerivativeUnavailable
        );
    }

    #[test]
    fn zero_hamiltonian_seed_is_static() {
        let psi0 = CVector::from_vec(vec![c(0.3, 0.1), c(-0.2, 0.9)]);
        let pair = seed_constant(&CMatrix::zeros(2, 2), &psi0, (0.0, 3.0), 1.0).unwrap();
        assert!(linalg::norm(&(pair.state.value(2.0).unwrap() - &psi0)) < 1e-15);
    }

    #[test]
    fn diagonal_seed_quadratic_phase() {
        let e = vec![TimeFunction::linear(1.0, 0.0)];
        let pair =
            seed_diagonal(&e, &CVector::from_vec(vec![c(1.0, 0.0)]), (0.0, 3.0), 1.0).unwrap();
        for t in [0.5, 1.0, 2.7] {
            let v = pair.state.value(t).unwrap()[0];
            assert!((v - c(0.0, -t * t / 2.0).exp()).norm() < 1e-14);
        }
    }

    #[test]
    fn diagonal_constant_matches_constant_seed() {
        let e = vec![TimeFunction::constant(0.4), TimeFunction::constant(-1.1)];
        let psi0 = CVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        let d = seed_diagonal(&e, &psi0, (0.0, 4.0), 2.0).unwrap();
        let h0 = CMatrix::from_diagonal(&CVector::from_vec(vec![c(0.4, 0.0), c(-1.1, 0.0)]));
        let k = seed_constant(&h0, &psi0, (0.0, 4.0), 2.0).unwrap();
        for t in [0.0, 1.5, 4.0] {
            assert!(linalg::norm(&(d.state.value(t).unwrap() - k.state.value(t).unwrap())) < 1e-14);
        }
    }

    #[test]
    fn invalid_interval_rejected() {
        let r = seed_constant(
            &CMatrix::zeros(1, 1),
            &CVector::from_element(1, c(1.0, 0.0)),
            (1.0, 1.0),
            1.0,
        );
        assert!(matches!(r, Err(Error::InvalidInterval { .. })));
    }

    #[test]
    fn axis_angle_gauge_preserves_norm() {
        let alpha = VectorTimeFunction::new(vec![
            TimeFunction::sinusoid(1.0, 0.7, 0.1),
            TimeFunction::linear(0.3, 0.0),
            TimeFunction::constant(0.2),
        ]);
        let g = GroupPath::axis_angle(alpha, Sign::Plus, Arc::new(su2_basis())).unwrap();
        let pair = seed_constant(
            &pauli()[1],
            &CVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]),
            (0.0, 10.0),
            1.0,
        )
        .unwrap();
        let out = gauge_transform_state(&pair.state, &g).unwrap();
        for k in 0..50 {
            let t = k as f64 * 0.2;
            assert!((linalg::norm(&out.value(t).unwrap()) - 1.0).abs() < 1e-13);
        }
    }
}
