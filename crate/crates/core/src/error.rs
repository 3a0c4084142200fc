use alloc::vec::Vec;

/// Errors raised by the solver and its building blocks.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },

    #[error("field length {got} does not match grid size {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("value {value} outside the admissible domain of {what}")]
    OutOfDomain { what: &'static str, value: f64 },

    #[error("corrupt state in cell {cell}: {reason}")]
    CorruptState { cell: usize, reason: &'static str },

    #[error("non-finite value encountered in {what}")]
    NonFinite { what: &'static str },

    #[error("linear system is singular or not diagonally dominant (row {row})")]
    SingularSystem { row: usize },

    #[error("Newton solve did not converge: residual {residual:e} after {iterations} iterations")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },

    #[error("CFL violated: speed {speed} exceeds bound {bound}")]
    CflViolation { speed: f64, bound: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
