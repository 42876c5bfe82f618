use thiserror::Error;

use crate::swf::{IiaViolation, RestrictionConflict, TransitivityViolation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported number of alternatives {0} (expected 1..={max})", max = crate::weak_orders::MAX_STATES)]
    StatesOutOfRange(usize),

    #[error("invalid alternative label {0:?}")]
    InvalidLabel(String),

    #[error("duplicate alternative label {0:?}")]
    DuplicateLabel(String),

    #[error("unknown alternative {0}")]
    UnknownAlternative(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("subset of alternatives must be nonempty")]
    EmptySubset,

    #[error("budget exceeded: {needed} items needed, budget is {budget}")]
    BudgetExceeded { needed: String, budget: u64 },

    #[error("infeasible instance: {0}")]
    Infeasible(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("function does not satisfy IIA")]
    NotIia(Box<IiaViolation>),

    #[error("combined relation is not transitive")]
    NotTransitive(Box<TransitivityViolation>),

    #[error("restriction is not well defined")]
    NotWellDefined(Box<RestrictionConflict>),

    #[error("voter {0} is not a dictator")]
    NotDictator(usize),

    #[error("deferral check failed: {0}")]
    DeferralInconsistent(String),

    #[error("internal contradiction: {0}")]
    InternalContradiction(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
