use thiserror::Error;

/// Domain errors raised by the lifting calculus.
///
/// Every variant maps to a stable machine-readable kind string (see [`Error::kind`]),
/// which the command-line front end reports verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameter is not stable under the twist root: {0}")]
    NotStable(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("blocks differ, target is not Galois-stable: {0}")]
    BlocksDiffer(String),
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
    #[error("degree budget exceeded: {0}")]
    DegreeBudget(String),
    #[error("orbit bookkeeping violated: {0}")]
    BadOrbit(String),
    #[error("representation has no lifting provenance: {0}")]
    NoProvenance(String),
    #[error("atom is not unramified: {0}")]
    NotUnramified(String),
    #[error("local data mismatch at place {place}: {detail}")]
    LocalMismatch { place: String, detail: String },
    #[error("place sets differ: {0}")]
    PlaceSetMismatch(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("shape error: {0}")]
    ShapeError(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("wrong side: {0}")]
    WrongSide(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotStable(_) => "NotStable",
            Error::BudgetExceeded(_) => "BudgetExceeded",
            Error::BlocksDiffer(_) => "BlocksDiffer",
            Error::RankMismatch(_) => "RankMismatch",
            Error::DegreeBudget(_) => "DegreeBudget",
            Error::BadOrbit(_) => "BadOrbit",
            Error::NoProvenance(_) => "NoProvenance",
            Error::NotUnramified(_) => "NotUnramified",
            Error::LocalMismatch { .. } => "LocalMismatch",
            Error::PlaceSetMismatch(_) => "PlaceSetMismatch",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::ShapeError(_) => "ShapeError",
            Error::InvalidAlgebra(_) => "InvalidAlgebra",
            Error::WrongSide(_) => "WrongSide",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
