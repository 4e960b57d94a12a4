//! Linear programs over hiring probabilities.
//!
//! Every program here has the shape `max c·p  s.t.  A p <= b,  0 <= p <= 1`.
//! [`builders`] constructs the fair-stopping programs, [`simplex`] solves them
//! and [`policy`] turns solutions into executable probability tables.

pub mod builders;
pub mod policy;
pub mod settings;
pub mod simplex;

use std::fmt::Write as _;

use crate::error::LpError;

pub use builders::{
    add_must_hire_constraint, build_offline_relaxation, build_online_iif_lp, build_online_tif_lp,
};
pub use policy::{
    halve_policy, policy_expected_value, symmetrize_offline_solution, FairPolicy, PolicyKind,
    POLICY_TOLERANCE,
};
pub use settings::{
    build_setting, halved_symmetrized_policy, optimal_iif_policy, optimal_tif_policy, solve_setting,
    Setting, Solved,
};
pub use simplex::{solve_lp, PIVOT_TOLERANCE, FEASIBILITY_TOLERANCE};

/// Which program a [`LinearProgram`] encodes, with the dimensions of its
/// variable layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpKind {
    /// One variable per support point.
    OnlineIif { support_len: usize },
    /// One variable per (candidate, support point), candidate-major.
    OnlineTif { n: usize, support_len: usize },
    /// Same layout as `OnlineTif`, single capacity row.
    OfflineRelaxation { n: usize, support_len: usize },
    Generic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub labels: Vec<String>,
    pub kind: LpKind,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        let labels = (0..objective.len()).map(|j| format!("p{j}")).collect();
        Self {
            objective,
            rows: Vec::new(),
            rhs: Vec::new(),
            labels,
            kind: LpKind::Generic,
        }
    }

    pub fn var_count(&self) -> usize {
        self.objective.len()
    }

    /// Appends `row · p <= rhs`.
    pub fn push_row(&mut self, row: Vec<f64>, rhs: f64) {
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.var_count();
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::NonFinite("objective"));
        }
        for (r, row) in self.rows.iter().enumerate() {
            if row.len() != n {
                return Err(LpError::RowLength {
                    row: r,
                    len: row.len(),
                    expected: n,
                });
            }
            if row.iter().any(|a| !a.is_finite()) {
                return Err(LpError::NonFinite("constraint row"));
            }
        }
        if self.rhs.iter().any(|b| !b.is_finite()) {
            return Err(LpError::NonFinite("right-hand side"));
        }
        Ok(())
    }

    pub fn evaluate(&self, p: &[f64]) -> f64 {
        dot(&self.objective, p)
    }

    /// Largest `a·p - b` over all rows and bound violations; `<= 0` means feasible.
    pub fn max_violation(&self, p: &[f64]) -> f64 {
        let rows = self
            .rows
            .iter()
            .zip(&self.rhs)
            .map(|(a, b)| dot(a, p) - b);
        let bounds = p.iter().flat_map(|&v| [v - 1.0, -v]);
        rows.chain(bounds).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Plain-text dump, one line per row, 12 significant digits.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# vars {}", self.labels.join(" ")).unwrap();
        writeln!(out, "max {}", fmt_row(&self.objective)).unwrap();
        for (a, b) in self.rows.iter().zip(&self.rhs) {
            writeln!(out, "{} <= {}", fmt_row(a), sig12(*b)).unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective_value: f64,
    /// Multipliers of the explicit rows, in row order.
    pub row_duals: Vec<f64>,
    /// Multipliers of the `p_j <= 1` bounds.
    pub bound_duals: Vec<f64>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    /// Objective of the dual certificate, `b·y + Σ u`.
    pub fn dual_objective(&self, lp: &LinearProgram) -> f64 {
        dot(&lp.rhs, &self.row_duals) + self.bound_duals.iter().sum::<f64>()
    }

    /// Largest violation of dual feasibility: `y >= 0`, `u >= 0`, `Aᵀy + u >= c`.
    pub fn dual_violation(&self, lp: &LinearProgram) -> f64 {
        let mut worst = 0.0f64;
        for &y in self.row_duals.iter().chain(&self.bound_duals) {
            worst = worst.max(-y);
        }
        for j in 0..lp.var_count() {
            let reduced: f64 = lp
                .rows
                .iter()
                .zip(&self.row_duals)
                .map(|(a, y)| a[j] * y)
                .sum::<f64>()
                + self.bound_duals[j];
            worst = worst.max(lp.objective[j] - reduced);
        }
        worst
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

fn fmt_row(r: &[f64]) -> String {
    r.iter().map(|&x| sig12(x)).collect::<Vec<_>>().join(" ")
}
