use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    /// Kept for interface completeness; sign-compatible domination is
    /// well-founded on every lattice coset, so the solvers never raise it.
    #[error("minimality is ill-defined for this system")]
    Unpointed,
    #[error("the system has no solution")]
    Infeasible,
    #[error("the fiber is empty")]
    EmptyFiber,
    #[error("the fiber is infinite")]
    InfiniteFiber,
    #[error("a summand fiber is empty")]
    EmptySummand,
    #[error("covering set exceeds the budget of {budget} points (or is infinite)")]
    CoverTooLarge { budget: usize },
    #[error("iteration budget of {budget} exceeded")]
    BudgetExceeded { budget: usize },
    #[error("invalid levels: order {k}, projection level {l}")]
    InvalidLevel { k: usize, l: usize },
    #[error("operation requires a {0} right-hand-side domain")]
    WrongDomain(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
