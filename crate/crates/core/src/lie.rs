//! Generator bases of su(2) and u(n), group exponentials, and unitary paths
//! with exact time derivatives.
//!
//! All generators are skew-Hermitian and normalized so that the pairing
//! `⟨X, Y⟩ = −2 Re tr(XY)` is the identity on the basis. Coefficient
//! extraction is then a projection, and structure constants are totally
//! antisymmetric.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, C64, I};
use crate::timefn::VectorTimeFunction;

/// Tolerance on `‖X + X†‖_F` accepted as skew-Hermitian input.
pub const SKEW_TOL: f64 = 1e-10;

/// Orientation of a rotation exponent, `+1` or `−1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(format!("sign must be +1 or -1, got {other}")),
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Skew-Hermitian generators `J_i` of a matrix Lie algebra in the
/// fundamental representation, with structure constants
/// `[J_i, J_j] = f_ij^k J_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieBasis {
    n: usize,
    generators: Vec<CMatrix>,
    structure: Vec<f64>,
    gram: nalgebra::DMatrix<f64>,
}

impl LieBasis {
    fn from_generators(n: usize, generators: Vec<CMatrix>) -> Self {
        let d = generators.len();
        let gram = nalgebra::DMatrix::from_fn(d, d, |i, j| pairing(&generators[i], &generators[j]));
        let mut basis = LieBasis {
            n,
            generators,
            structure: vec![0.0; d * d * d],
            gram,
        };
        for i in 0..d {
            for j in i + 1..d {
                let comm = linalg::commutator(&basis.generators[i], &basis.generators[j]);
                let coeffs = basis.project(&comm);
                for (k, v) in coeffs.into_iter().enumerate() {
                    basis.structure[(i * d + j) * d + k] = v;
                    basis.structure[(j * d + i) * d + k] = -v;
                }
            }
        }
        basis
    }

    /// Dimension of the fundamental representation.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of generators.
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &CMatrix {
        &self.generators[i]
    }

    /// `f_ij^k`
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        let d = self.dim();
        self.structure[(i * d + j) * d + k]
    }

    /// Gram matrix of the pairing `−2 Re tr(J_i J_j)`.
    pub fn gram(&self) -> &nalgebra::DMatrix<f64> {
        &self.gram
    }

    /// Adjoint-representation matrix of `J_i`: `(ad J_i)_{kj} = f_ij^k`.
    pub fn adjoint_matrix(&self, i: usize) -> nalgebra::DMatrix<f64> {
        let d = self.dim();
        nalgebra::DMatrix::from_fn(d, d, |k, j| self.structure_constant(i, j, k))
    }

    /// `Σ c^i J_i`
    pub fn assemble(&self, coeffs: &[f64]) -> CMatrix {
        let mut out = CMatrix::zeros(self.n, self.n);
        for (ci, j) in coeffs.iter().zip(&self.generators) {
            if *ci != 0.0 {
                out += j.map(|z| z * *ci);
            }
        }
        out
    }

    fn project(&self, x: &CMatrix) -> Vec<f64> {
        self.generators
            .iter()
            .enumerate()
            .map(|(k, j)| pairing(x, j) / self.gram[(k, k)])
            .collect()
    }

    /// Solves `X = c^i J_i` for a skew-Hermitian `X`.
    pub fn coefficients(&self, x: &CMatrix) -> Result<Vec<f64>> {
        if x.nrows() != self.n || x.ncols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.nrows(),
            });
        }
        let residual = linalg::skew_hermitian_residual(x);
        if residual > SKEW_TOL * linalg::frobenius(x).max(1.0) {
            return Err(Error::NotSkewHermitian { residual });
        }
        Ok(self.project(x))
    }

    /// True when this is the three-generator su(2) basis.
    pub fn is_su2(&self) -> bool {
        self.n == 2 && self.dim() == 3
    }
}

/// `−2 Re tr(XY)` in O(n²).
fn pairing(x: &CMatrix, y: &CMatrix) -> f64 {
    let n = x.nrows();
    let mut tr = C64::new(0.0, 0.0);
    for a in 0..n {
        for b in 0..n {
            tr += x[(a, b)] * y[(b, a)];
        }
    }
    -2.0 * tr.re
}

/// Pauli matrices `σ_1, σ_2, σ_3`.
pub fn pauli() -> [CMatrix; 3] {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    [
        CMatrix::from_row_slice(2, 2, &[z, one, one, z]),
        CMatrix::from_row_slice(2, 2, &[z, -I, I, z]),
        CMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
    ]
}

/// su(2) basis `J_i = −(i/2)σ_i` with Levi-Civita structure constants.
pub fn su2_basis() -> LieBasis {
    let gens = pauli().map(|s| s.map(|z| z * c(0.0, -0.5)));
    LieBasis::from_generators(2, gens.to_vec())
}

/// u(n) basis: `−(i/2)λ_a` for the generalized Gell-Mann matrices (symmetric
/// and antisymmetric off-diagonal pairs, then diagonals), followed by the
/// central element `−(i/2)√(2/n) I`.
pub fn un_basis(n: usize) -> LieBasis {
    assert!(n >= 1, "u(n) needs n >= 1");
    let mut gens: Vec<CMatrix> = Vec::with_capacity(n * n);
    let half = c(0.0, -0.5);
    for j in 0..n {
        for k in j + 1..n {
            let mut sym = CMatrix::zeros(n, n);
            sym[(j, k)] = c(1.0, 0.0);
            sym[(k, j)] = c(1.0, 0.0);
            gens.push(sym * half);
            let mut anti = CMatrix::zeros(n, n);
            anti[(j, k)] = -I;
            anti[(k, j)] = I;
            gens.push(anti * half);
        }
    }
    for l in 1..n {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut diag = CMatrix::zeros(n, n);
        for m in 0..l {
            diag[(m, m)] = c(norm, 0.0);
        }
        diag[(l, l)] = c(-(l as f64) * norm, 0.0);
        gens.push(diag * half);
    }
    let central = CMatrix::identity(n, n) * c((2.0 / n as f64).sqrt(), 0.0) * half;
    gens.push(central);
    LieBasis::from_generators(n, gens)
}

/// `sin(x)/x` with a series guard near zero.
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Closed-form `exp(sign · α^i J_i) = cos(α/2) I − sign · i α̂·σ sin(α/2)`.
pub fn exp_su2(alpha: [f64; 3], sign: Sign) -> CMatrix {
    let a = (alpha[0] * alpha[0] + alpha[1] * alpha[1] + alpha[2] * alpha[2]).sqrt();
    // α̂ sin(α/2) = α⃗ · sinc(α/2) / 2
    let s = 0.5 * sinc(0.5 * a) * sign.value();
    let cs = (0.5 * a).cos();
    let [x, y, z] = [alpha[0] * s, alpha[1] * s, alpha[2] * s];
    // cos I − i (x σ1 + y σ2 + z σ3)
    CMatrix::from_row_slice(2, 2, &[c(cs, -z), c(-y, -x), c(y, -x), c(cs, z)])
}

/// `e^X` for skew-Hermitian `X` through the eigendecomposition of `iX`.
pub fn exp_unitary(x: &CMatrix) -> Result<CMatrix> {
    let residual = linalg::skew_hermitian_residual(x);
    if residual > SKEW_TOL * linalg::frobenius(x).max(1.0) {
        return Err(Error::NotSkewHermitian { residual });
    }
    let h = x * I;
    let (w, v) = linalg::hermitian_eigen(&h)?;
    Ok(linalg::spectral_apply(&w, &v, |e| c(0.0, -e).exp()))
}

/// `(exp X, d/ds exp(X + sY)|_{s=0})` from the block identity
/// `exp([[X, Y], [0, X]]) = [[e^X, D], [0, e^X]]`.
pub fn exp_with_derivative(x: &CMatrix, dx: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    let n = x.nrows();
    let mut block = CMatrix::zeros(2 * n, 2 * n);
    block.view_mut((0, 0), (n, n)).copy_from(x);
    block.view_mut((n, n), (n, n)).copy_from(x);
    block.view_mut((0, n), (n, n)).copy_from(dx);
    let e = linalg::expm(&block)?;
    Ok((
        e.view((0, 0), (n, n)).into_owned(),
        e.view((0, n), (n, n)).into_owned(),
    ))
}

pub type MatrixFn = Arc<dyn Fn(f64) -> Result<CMatrix> + Send + Sync>;

/// A differentiable path of unitary matrices `G(t)`.
#[derive(Clone)]
pub enum GroupPath {
    /// `G(t) = exp(sign · α^i(t) J_i)`.
    AxisAngle {
        alpha: VectorTimeFunction,
        alpha_dot: VectorTimeFunction,
        sign: Sign,
        basis: Arc<LieBasis>,
    },
    /// User-supplied `G(t)` and optionally `dG/dt`.
    MatrixPath {
        n: usize,
        value: MatrixFn,
        derivative: Option<MatrixFn>,
        label: String,
    },
}

impl fmt::Debug for GroupPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupPath::AxisAngle {
                alpha, sign, basis, ..
            } => f
                .debug_struct("AxisAngle")
                .field("alpha", alpha)
                .field("sign", sign)
                .field("n", &basis.n())
                .finish(),
            GroupPath::MatrixPath {
                n,
                label,
                derivative,
                ..
            } => f
                .debug_struct("MatrixPath")
                .field("n", n)
                .field("label", label)
                .field("has_derivative", &derivative.is_some())
                .finish(),
        }
    }
}

impl GroupPath {
    pub fn axis_angle(alpha: VectorTimeFunction, sign: Sign, basis: Arc<LieBasis>) -> Result<Self> {
        if alpha.dim() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                got: alpha.dim(),
            });
        }
        alpha.validate()?;
        let alpha_dot = alpha.derivative()?;
        Ok(GroupPath::AxisAngle {
            alpha,
            alpha_dot,
            sign,
            basis,
        })
    }

    pub fn matrix_path(
        n: usize,
        value: MatrixFn,
        derivative: Option<MatrixFn>,
        label: impl Into<String>,
    ) -> Self {
        GroupPath::MatrixPath {
            n,
            value,
            derivative,
            label: label.into(),
        }
    }

    /// The constant path `G(t) = I`.
    pub fn identity(n: usize) -> Self {
        Self::constant(CMatrix::identity(n, n), "identity")
    }

    /// A constant path `G(t) = K`.
    pub fn constant(k: CMatrix, label: impl Into<String>) -> Self {
        let n = k.nrows();
        let value = k.clone();
        let zero = CMatrix::zeros(n, n);
        Self::matrix_path(
            n,
            Arc::new(move |_| Ok(value.clone())),
            Some(Arc::new(move |_| Ok(zero.clone()))),
            label,
        )
    }

    pub fn n(&self) -> usize {
        match self {
            GroupPath::AxisAngle { basis, .. } => basis.n(),
            GroupPath::MatrixPath { n, .. } => *n,
        }
    }

    fn exponent(&self, t: f64) -> Result<Option<(CMatrix, CMatrix)>> {
        match self {
            GroupPath::AxisAngle {
                alpha,
                alpha_dot,
                sign,
                basis,
            } => {
                let s = sign.value();
                let a: Vec<f64> = alpha.evaluate(t)?.into_iter().map(|v| s * v).collect();
                let da: Vec<f64> = alpha_dot.evaluate(t)?.into_iter().map(|v| s * v).collect();
                Ok(Some((basis.assemble(&a), basis.assemble(&da))))
            }
            GroupPath::MatrixPath { .. } => Ok(None),
        }
    }

    /// `G(t)`
    pub fn at(&self, t: f64) -> Result<CMatrix> {
        match self {
            GroupPath::AxisAngle {
                alpha, sign, basis, ..
            } => {
                let a = alpha.evaluate(t)?;
                if basis.is_su2() {
                    Ok(exp_su2([a[0], a[1], a[2]], *sign))
                } else {
                    let s = sign.value();
                    let x = basis.assemble(&a.iter().map(|v| s * v).collect::<Vec<_>>());
                    exp_unitary(&x)
                }
            }
            GroupPath::MatrixPath { value, .. } => value(t),
        }
    }

    /// `(G(t), dG/dt(t))`
    pub fn jet(&self, t: f64) -> Result<(CMatrix, CMatrix)> {
        match self {
            GroupPath::AxisAngle { .. } => {
                let (x, dx) = self.exponent(t)?.expect("axis-angle exponent");
                exp_with_derivative(&x, &dx)
            }
            GroupPath::MatrixPath {
                value, derivative, ..
            } => {
                let d = derivative.as_ref().ok_or(Error::DerivativeUnavailable)?;
                Ok((value(t)?, d(t)?))
            }
        }
    }

    /// Pointwise inverse `G(t)†` with derivative `Ġ(t)†`.
    pub fn inverse(&self) -> GroupPath {
        let (g1, g2) = (self.clone(), self.clone());
        let has_derivative = !matches!(
            self,
            GroupPath::MatrixPath {
                derivative: None,
                ..
            }
        );
        GroupPath::matrix_path(
            self.n(),
            Arc::new(move |t| Ok(g1.at(t)?.adjoint())),
            has_derivative.then(|| Arc::new(move |t| Ok(g2.jet(t)?.1.adjoint())) as MatrixFn),
            format!("inverse of {self:?}"),
        )
    }

    /// The product path `t ↦ next(t) · self(t)` (apply `self` first).
    pub fn then(&self, next: &GroupPath) -> GroupPath {
        let (a1, b1) = (self.clone(), next.clone());
        let (a2, b2) = (self.clone(), next.clone());
        GroupPath::matrix_path(
            self.n(),
            Arc::new(move |t| Ok(b1.at(t)? * a1.at(t)?)),
            Some(Arc::new(move |t| {
                let (g1, d1) = a2.jet(t)?;
                let (g2, d2) = b2.jet(t)?;
                Ok(&d2 * &g1 + &g2 * &d1)
            })),
            format!("{next:?} after {self:?}"),
        )
    }
}

/// `(G(t), dG/dt(t))` for any path variant.
pub fn group_derivative(path: &GroupPath, t: f64) -> Result<(CMatrix, CMatrix)> {
    path.jet(t)
}
