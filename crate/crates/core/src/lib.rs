//! Fair stopping rules for the single-hire problem with discrete values.
//!
//! * [`instance`], [`distribution`]: candidates, supports and exact moments.
//! * [`lp`]: optimal IIF / TIF programs, the offline relaxation and a dense simplex.
//! * [`rules`]: executable stopping rules, including the sample-based ones.
//! * [`oracle`]: exhaustive enumeration used to check everything else.
//! * [`audit`]: fairness audits and competitive-ratio measurements.
//! * [`gen`]: named instances.
//! * [`report`]: the batch commands behind the `fairstop` binary.

pub mod audit;
pub mod distribution;
pub mod error;
pub mod gen;
pub mod instance;
pub mod lp;
pub mod oracle;
pub mod report;
pub mod rules;

/// Root seed used when none is given; always echoed in reports.
pub const DEFAULT_SEED: u64 = 1729;

pub use distribution::DiscreteDistribution;
pub use error::{AuditError, LpError, ModelError, OracleError, ReportError, RuleError};
pub use instance::{ArrivalOrder, Instance, InstanceFile};
pub use lp::{FairPolicy, LinearProgram, LpSolution, LpStatus, PolicyKind};
pub use rules::{HireOutcome, RuleSpec};
