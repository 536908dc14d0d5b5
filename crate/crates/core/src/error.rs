use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("brute-force cap exceeded: n = {n} exceeds n_max = {n_max}")]
    CapExceeded { n: usize, n_max: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("overlapping placements in parallel layer")]
    OverlappingPlacements,

    #[error("no same-pattern connector exists: {0}")]
    PatternMismatch(String),

    #[error("invalid factor set: {0}")]
    InvalidFactorSet(String),

    #[error("vector is not in the ansatz image: residual on {0} indices")]
    NotInAnsatzImage(usize),

    #[error("embedding map is not injective")]
    NotInjective,

    #[error("direction is not representable in the reduced model")]
    NotAGaugeDirection,

    #[error("analytic hypotheses not satisfied: {0}; use the brute-force path")]
    HypothesesNotMet(String),

    #[error("not a rooted flow-conserving cycle: {0}")]
    NotARootedCycle(String),

    #[error("operation requires a fully-local ansatz with 2-qubit gates")]
    NotFullyLocalTwoQubit,

    #[error("nonpositive sampled mean; estimate indeterminate at this shot budget")]
    NonPositiveMean,

    #[error("plan does not determine the requested basis (rank deficient)")]
    RankDeficient,

    #[error("gauge convention is inconsistent with the gauge space dimension")]
    BadConvention,

    #[error("unphysical model: |expectation| exceeds 1")]
    Unphysical,

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
