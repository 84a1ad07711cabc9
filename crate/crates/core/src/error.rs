use thiserror::Error;

/// First violated partial-order axiom, with the least-index witness.
/// Witnesses are element ids.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("reflexivity fails at {0}")]
    Reflexivity(u64),
    #[error("antisymmetry fails for ({0}, {1})")]
    Antisymmetry(u64, u64),
    #[error("transitivity fails for ({0}, {1}, {2})")]
    Transitivity(u64, u64, u64),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a partial order: {0}")]
    NotAPartialOrder(#[from] Violation),

    #[error("malformed input: {0}")]
    Schema(String),

    #[error("element {0} is not in the carrier")]
    NotInCarrier(u64),

    #[error("element {0} is outside the given subset")]
    OutsideSubset(u64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration exceeded the cap of {cap} sets")]
    Capped { cap: usize },

    #[error("count does not fit in 128 bits")]
    Overflow,

    #[error("no admissible witness pair in the chain between {lo} and {hi}")]
    NoAdmissiblePair { lo: u64, hi: u64 },

    #[error("evaluator is not monotone: requirement {e}, element {elem}, stage {stage}")]
    NonMonotoneEvaluator { e: usize, elem: u64, stage: usize },

    /// An identity that the underlying theory guarantees has failed.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
