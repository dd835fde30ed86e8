use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is numerically singular (sigma_min/sigma_max = {ratio:e})")]
    SingularMatrix { ratio: f64 },
    #[error("input contains NaN or infinite entries")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("quadrature order {n} unsupported (valid range {min}..={max})")]
    UnsupportedOrder { n: usize, min: usize, max: usize },
}
