use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("t = {t} lies outside the domain [{lo}, {hi}]")]
    OutOfDomain { t: f64, lo: f64, hi: f64 },

    #[error("derivative unsupported: {0}")]
    UnsupportedDerivative(String),

    #[error(
        "quadrature did not reach tolerance {tolerance:e} (estimate {estimate}, error {error:e})"
    )]
    ToleranceNotMet {
        tolerance: f64,
        estimate: f64,
        error: f64,
    },

    #[error("invalid time function: {0}")]
    InvalidFunction(String),

    #[error("matrix is not skew-Hermitian: |X + X^H| = {residual:e}")]
    NotSkewHermitian { residual: f64 },

    #[error("Hamiltonian is not Hermitian at t = {t}: |H - H^H| = {residual:e}")]
    NotHermitian { t: f64, residual: f64 },

    #[error("matrix is not unitary: |U^H U - I| = {residual:e}")]
    NotUnitary { residual: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("the gauge path has no derivative")]
    DerivativeUnavailable,

    #[error("rotation axis varies at t = {t}; the closed-form field only holds for a fixed axis, use the matrix route")]
    VaryingAxis { t: f64 },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("maximum number of steps ({0}) exceeded")]
    MaxStepsExceeded(usize),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("sign convention unresolved: {0}")]
    SignUnresolved(String),

    #[error("invalid interval [{t0}, {t1}]")]
    InvalidInterval { t0: f64, t1: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
