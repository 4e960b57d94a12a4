//! One-call solvers for each named program.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    add_must_hire_constraint, build_offline_relaxation, build_online_iif_lp, build_online_tif_lp,
    halve_policy, solve_lp, symmetrize_offline_solution, FairPolicy, LinearProgram, LpSolution,
    PolicyKind, POLICY_TOLERANCE,
};
use crate::error::LpError;
use crate::instance::{ArrivalOrder, Instance};

/// A named program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Setting {
    OnlineIif,
    OnlineTif,
    OfflineRelaxation,
    MustHireIif,
    MustHireTif,
}

impl Setting {
    pub const ALL: [Setting; 5] = [
        Setting::OnlineIif,
        Setting::OnlineTif,
        Setting::OfflineRelaxation,
        Setting::MustHireIif,
        Setting::MustHireTif,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Setting::OnlineIif => "online-iif",
            Setting::OnlineTif => "online-tif",
            Setting::OfflineRelaxation => "offline-relaxation",
            Setting::MustHireIif => "must-hire-iif",
            Setting::MustHireTif => "must-hire-tif",
        }
    }

    /// Whether the program depends on the arrival order.
    pub fn uses_order(self) -> bool {
        matches!(self, Setting::OnlineIif | Setting::MustHireIif)
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Setting {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Setting::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Setting::ALL.iter().map(|k| k.name()).collect();
                format!("unknown setting '{s}' (expected one of {})", names.join(", "))
            })
    }
}

/// A solved program together with its policy table.
#[derive(Debug, Clone)]
pub struct Solved {
    pub setting: Setting,
    pub lp: LinearProgram,
    pub solution: LpSolution,
    pub policy: FairPolicy,
}

impl Solved {
    pub fn objective(&self) -> f64 {
        self.solution.objective_value
    }
}

pub fn build_setting(instance: &Instance, setting: Setting, order: &ArrivalOrder) -> Result<LinearProgram, LpError> {
    Ok(match setting {
        Setting::OnlineIif => build_online_iif_lp(instance, order)?,
        Setting::OnlineTif => build_online_tif_lp(instance),
        Setting::OfflineRelaxation => build_offline_relaxation(instance),
        Setting::MustHireIif => add_must_hire_constraint(&build_online_iif_lp(instance, order)?, instance)?,
        Setting::MustHireTif => add_must_hire_constraint(&build_online_tif_lp(instance), instance)?,
    })
}

/// Builds and solves `setting`; infeasible programs are an error.
pub fn solve_setting(instance: &Instance, setting: Setting, order: &ArrivalOrder) -> Result<Solved, LpError> {
    let lp = build_setting(instance, setting, order)?;
    let solution = solve_lp(&lp)?;
    let policy = FairPolicy::from_solution(instance, &lp, &solution)?;
    Ok(Solved {
        setting,
        lp,
        solution,
        policy,
    })
}

/// Optimal IIF table for `order`.
pub fn optimal_iif_policy(instance: &Instance, order: &ArrivalOrder) -> Result<FairPolicy, LpError> {
    Ok(solve_setting(instance, Setting::OnlineIif, order)?.policy)
}

/// Optimal TIF table.
pub fn optimal_tif_policy(instance: &Instance) -> Result<FairPolicy, LpError> {
    let n = instance.n();
    Ok(solve_setting(instance, Setting::OnlineTif, &ArrivalOrder::identity(n))?.policy)
}

/// Solve the offline relaxation, symmetrize across candidates, halve. The
/// result is a shared table, returned as an IIF policy; it is feasible for
/// the IIF program under every order and for the TIF program.
pub fn halved_symmetrized_policy(instance: &Instance) -> Result<FairPolicy, LpError> {
    let n = instance.n();
    let relaxed = solve_setting(instance, Setting::OfflineRelaxation, &ArrivalOrder::identity(n))?;
    let sym = symmetrize_offline_solution(instance, &relaxed.policy);
    let half = halve_policy(&sym);
    let mut out = half
        .as_iif(POLICY_TOLERANCE)
        .expect("symmetrized rows are identical");
    out.kind = PolicyKind::Iif;
    Ok(out)
}
