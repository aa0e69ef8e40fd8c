//! Small complex linear-algebra helpers shared across modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn norm(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// `‖X + X†‖_F`
pub fn skew_hermitian_residual(x: &CMatrix) -> f64 {
    frobenius(&(x + x.adjoint()))
}

/// `‖H − H†‖_F`
pub fn hermitian_residual(h: &CMatrix) -> f64 {
    frobenius(&(h - h.adjoint()))
}

/// `‖U†U − I‖_F`
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    frobenius(&(u.adjoint() * u - CMatrix::identity(u.nrows(), u.ncols())))
}

/// Eigendecomposition `H = V diag(w) V†` of a Hermitian matrix.
///
/// Only the Hermitian part of `h` is used.
pub fn hermitian_eigen(h: &CMatrix) -> Result<(DVector<f64>, CMatrix)> {
    if h.nrows() != h.ncols() {
        return Err(Error::DimensionMismatch {
            expected: h.nrows(),
            got: h.ncols(),
        });
    }
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = sym
        .try_symmetric_eigen(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("Hermitian eigendecomposition did not converge".into()))?;
    Ok((eig.eigenvalues, eig.eigenvectors))
}

/// `V diag(f(w)) V†`
pub fn spectral_apply(w: &DVector<f64>, v: &CMatrix, f: impl Fn(f64) -> C64) -> CMatrix {
    let mut scaled = v.clone();
    for (k, mut col) in scaled.column_iter_mut().enumerate() {
        col *= f(w[k]);
    }
    scaled * v.adjoint()
}

fn one_norm(m: &CMatrix) -> f64 {
    m.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371_920_351_148_152;

/// Exponential of a general square matrix by degree-13 Padé approximation
/// with scaling and squaring.
pub fn expm(m: &CMatrix) -> Result<CMatrix> {
    let n = m.nrows();
    let norm = one_norm(m);
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = m.scale(0.5f64.powi(s));
    let id = CMatrix::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = |k: usize| C64::from(PADE13[k]);
    let u_inner = &a6 * (a6.map(|z| z * b(13)) + a4.map(|z| z * b(11)) + a2.map(|z| z * b(9)))
        + a6.map(|z| z * b(7))
        + a4.map(|z| z * b(5))
        + a2.map(|z| z * b(3))
        + id.map(|z| z * b(1));
    let u = &a * u_inner;
    let v = &a6 * (a6.map(|z| z * b(12)) + a4.map(|z| z * b(10)) + a2.map(|z| z * b(8)))
        + a6.map(|z| z * b(6))
        + a4.map(|z| z * b(4))
        + a2.map(|z| z * b(2))
        + id.map(|z| z * b(0));
    let mut r = (&v - &u)
        .lu()
        .solve(&(&v + &u))
        .ok_or_else(|| Error::Numerical("singular Padé denominator".into()))?;
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}
