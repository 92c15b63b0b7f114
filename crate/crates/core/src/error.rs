use num_complex::Complex64;
use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate period pair (omega1 = {omega1}, omega2 = {omega2}): {reason}")]
    DegenerateLattice {
        omega1: Complex64,
        omega2: Complex64,
        reason: &'static str,
    },

    #[error("argument {z} lies within the pole guard of lattice point {lattice_point}")]
    Pole {
        z: Complex64,
        lattice_point: Complex64,
    },

    #[error("jets expanded about different base points")]
    BaseMismatch,

    #[error("cannot differentiate a degree-{degree} jet {times} times")]
    OverDifferentiation { degree: usize, times: usize },

    #[error("operator needs jet degree {needed}, got {available}")]
    InsufficientDegree { needed: usize, available: usize },

    #[error("coordinates x{} and x{} coincide modulo the lattice", .pair.0 + 1, .pair.1 + 1)]
    CoincidentCoordinates { pair: (usize, usize) },

    #[error("sector constraint A+B+C=0 violated, residual {residual:e}")]
    SectorConstraint { residual: f64 },

    #[error("degenerate spectral parameters: {0}")]
    DegenerateParams(String),

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
