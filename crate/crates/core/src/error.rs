use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("distribution has no support points")]
    EmptySupport,
    #[error("{points} points but {masses} masses")]
    LengthMismatch { points: usize, masses: usize },
    #[error("support point {0} is not a finite non-negative value")]
    InvalidPoint(f64),
    #[error("support points must be strictly increasing")]
    UnsortedPoints,
    #[error("mass {0} is outside (0, 1]")]
    InvalidMass(f64),
    #[error("masses sum to {0}, expected 1")]
    MassSum(f64),
    #[error("instance needs at least one candidate")]
    NoCandidates,
    #[error("arrival order {0:?} is not a permutation of 1..={1}")]
    InvalidOrder(Vec<usize>, usize),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("constraint row {row} has {len} coefficients, expected {expected}")]
    RowLength {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("non-finite coefficient in {0}")]
    NonFinite(&'static str),
    #[error("variable layout mismatch: {0}")]
    Layout(String),
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("simplex exceeded {0} pivots")]
    IterationLimit(usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RuleError {
    #[error(
        "policy infeasible at step {step}: coin probability {coin} exceeds 1 \
         (p = {p}, survival mass Q = {survival})"
    )]
    InfeasibleCoin {
        step: usize,
        p: f64,
        survival: f64,
        coin: f64,
    },
    #[error("policy kind {0} cannot drive this rule")]
    PolicyKind(&'static str),
    #[error("policy does not match instance: {0}")]
    Layout(String),
    #[error("arrival order has {got} entries, instance has {expected} candidates")]
    OrderLength { got: usize, expected: usize },
    #[error("unknown rule '{0}'")]
    UnknownRule(String),
}

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("enumeration needs {needed} value profiles, budget is {budget}")]
    Budget { needed: f64, budget: f64 },
    #[error("oracle precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

#[derive(Debug, Error)]
pub enum AuditError {
    #[error("all {0}! orders requested; pass an explicit override for n > 6")]
    TooManyOrders(usize),
    #[error("Monte Carlo audit needs at least {min} trials per cell, got {got}")]
    TooFewTrials { got: u64, min: u64 },
    #[error("baseline '{0}' has no exact algorithm")]
    Baseline(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Failures of the batch commands; everything here maps to exit code 1.
#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Write(#[from] std::io::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Audit(#[from] AuditError),
}
