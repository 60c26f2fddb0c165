use thiserror::Error;

/// Errors raised while building states, decompositions and bounds.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {dim} is too small, need at least 2")]
    DimensionTooSmall { dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: |m - m^H|_F = {deviation:e} exceeds tolerance {tolerance:e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("trace is {trace}, expected 1 within 1e-10")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e} < -1e-9")]
    NotPsd { min_eigenvalue: f64 },

    #[error("state vector is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("index {index} out of range 0..{len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("trace coefficient {index} has imaginary part {imag:e}")]
    ImaginaryResidue { index: usize, imag: f64 },

    #[error("|T|_F^2 = {t_frobenius_sq} is outside the pure-state range [1, {upper})")]
    OutOfPureRange { t_frobenius_sq: f64, upper: f64 },

    #[error("parameter {name} = {value} is out of range")]
    ParamOutOfRange { name: String, value: f64 },

    #[error("operation requires a two-qubit state, got {d1}x{d2}")]
    WrongDimension { d1: usize, d2: usize },

    #[error("bounds {lhs} and {rhs} do not cross on [{from}, {to}]")]
    NoCrossing {
        lhs: String,
        rhs: String,
        from: f64,
        to: f64,
    },

    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &str, value: f64) -> Self {
        Error::ParamOutOfRange {
            name: name.to_string(),
            value,
        }
    }
}
