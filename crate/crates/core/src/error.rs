use thiserror::Error;

/// Errors raised by the simulator library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// θη exceeds ħ², so the Seiberg–Witten scaling has no real solution.
    #[error("no real Seiberg-Witten scaling: theta*eta = {theta_eta} exceeds hbar^2 = {hbar_sq}")]
    NoRealScaling { theta_eta: f64, hbar_sq: f64 },

    #[error("linear map is singular (determinant {det:e})")]
    SingularMap { det: f64 },

    #[error("quadrature order {order} too low, need at least {required} points per axis")]
    OrderTooLow { order: usize, required: usize },

    #[error("invalid Fock pair ({k}, {l}): k + l must not exceed {max}")]
    InvalidFockPair { k: usize, l: usize, max: usize },

    /// The two energies never cross: the arccos argument leaves [-1, 1].
    #[error("no equilibrium: arccos argument {argument} outside [-1, 1]")]
    NoEquilibrium { argument: f64 },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NonSymmetric { asymmetry: f64 },

    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    NonPositive { min_eigenvalue: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
