use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("degenerate affine substitution: scale factor is zero")]
    DegenerateSubstitution,

    #[error("coefficient denominator {denominator} is not invertible modulo {prime}")]
    DenominatorNotInvertible { prime: u64, denominator: String },

    #[error("parameter degeneracy at index {index}: {what}")]
    ParameterDegeneracy { index: i64, what: String },

    #[error("denominator parameter reaches a pole at term {term}")]
    DenominatorPole { term: usize },

    #[error("series does not converge: {0}")]
    NonConvergent(String),

    #[error("argument outside domain: {0}")]
    DomainError(String),

    #[error("negative discriminant {0}: no real branch")]
    ComplexBranch(f64),

    #[error("invalid prime {0}: must be a prime >= 5")]
    InvalidPrime(u64),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("quadrature did not converge after {levels} levels (last change {last_change:e})")]
    NoConvergence { levels: usize, last_change: f64 },

    #[error("invalid rational literal {0:?}")]
    ParseRational(String),
}
