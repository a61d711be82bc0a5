use thiserror::Error;

/// Errors raised by the numerical engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A physical constant or configuration value is out of range.
    #[error("configuration error: {0}")]
    Config(String),

    /// An argument lies outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature ran out of subdivisions before reaching its tolerance.
    #[error(
        "quadrature did not converge on [{lower}, {upper}]: estimated error {achieved:.3e} \
         exceeds tolerance {requested:.3e} after {subdivisions} subdivisions"
    )]
    Quadrature {
        lower: f64,
        upper: f64,
        achieved: f64,
        requested: f64,
        subdivisions: usize,
    },

    /// A numerical evaluation produced an unusable value.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// A root search could not bracket or converge.
    #[error("root finding failed: {0}")]
    RootFinding(String),

    /// A structural property that must hold analytically was observed to fail.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
