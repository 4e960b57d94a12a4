//! Conditional hiring-probability tables and their post-processing.

use serde::{Deserialize, Serialize};

use super::{LinearProgram, LpKind, LpSolution};
use crate::error::LpError;
use crate::instance::{ArrivalOrder, Instance};

/// Slack allowed when checking a policy against its fairness inequalities.
pub const POLICY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    /// `p(x)`, shared by every candidate.
    Iif,
    /// `p(i, x)`.
    Tif,
    /// `p_ix` from the offline relaxation.
    OfflineRelaxed,
}

impl PolicyKind {
    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Iif => "iif",
            PolicyKind::Tif => "tif",
            PolicyKind::OfflineRelaxed => "offline_relaxed",
        }
    }
}

/// Conditional hire probabilities indexed by the instance's combined support.
///
/// `probs` has one row for [`PolicyKind::Iif`] and one row per candidate
/// otherwise; `probs[i][j]` is the probability for value `support[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FairPolicy {
    pub kind: PolicyKind,
    pub support: Vec<f64>,
    pub probs: Vec<Vec<f64>>,
    pub objective_value: f64,
}

impl FairPolicy {
    /// Builds the policy for a solved IIF, TIF or offline-relaxation program.
    pub fn from_solution(
        instance: &Instance,
        lp: &LinearProgram,
        solution: &LpSolution,
    ) -> Result<Self, LpError> {
        if !solution.is_optimal() {
            return Err(LpError::Infeasible);
        }
        let s = instance.support().len();
        let n = instance.n();
        let (kind, probs) = match lp.kind {
            LpKind::OnlineIif { support_len } if support_len == s => {
                (PolicyKind::Iif, vec![solution.values[..s].to_vec()])
            }
            LpKind::OnlineTif { n: ln, support_len } if ln == n && support_len == s => (
                PolicyKind::Tif,
                solution.values[..n * s].chunks(s).map(<[f64]>::to_vec).collect(),
            ),
            LpKind::OfflineRelaxation { n: ln, support_len } if ln == n && support_len == s => (
                PolicyKind::OfflineRelaxed,
                solution.values[..n * s].chunks(s).map(<[f64]>::to_vec).collect(),
            ),
            other => return Err(LpError::Layout(format!("no policy layout for {other:?}"))),
        };
        let mut policy = Self {
            kind,
            support: instance.support().to_vec(),
            probs,
            objective_value: 0.0,
        };
        policy.objective_value = policy_expected_value(instance, &policy);
        Ok(policy)
    }

    /// A table with every entry equal to `p`.
    pub fn constant(instance: &Instance, kind: PolicyKind, p: f64) -> Self {
        let rows = if kind == PolicyKind::Iif { 1 } else { instance.n() };
        let mut policy = Self {
            kind,
            support: instance.support().to_vec(),
            probs: vec![vec![p; instance.support().len()]; rows],
            objective_value: 0.0,
        };
        policy.objective_value = policy_expected_value(instance, &policy);
        policy
    }

    /// Probability for candidate `i` at support index `j`.
    pub fn prob(&self, i: usize, j: usize) -> f64 {
        match self.kind {
            PolicyKind::Iif => self.probs[0][j],
            _ => self.probs[i][j],
        }
    }

    /// Probability for candidate `i` at value `x`; zero off the support.
    pub fn prob_at(&self, i: usize, x: f64) -> f64 {
        match self.support.binary_search_by(|p| p.total_cmp(&x)) {
            Ok(j) => self.prob(i, j),
            Err(_) => 0.0,
        }
    }

    pub fn check_layout(&self, instance: &Instance) -> Result<(), String> {
        if self.support != instance.support() {
            return Err("policy support differs from the instance support".into());
        }
        let rows = if self.kind == PolicyKind::Iif { 1 } else { instance.n() };
        if self.probs.len() != rows || self.probs.iter().any(|r| r.len() != self.support.len()) {
            return Err(format!(
                "{} policy needs {rows} rows of {} values",
                self.kind.name(),
                self.support.len()
            ));
        }
        Ok(())
    }

    /// Same table viewed as an IIF policy, when every candidate row agrees
    /// within `tolerance`.
    pub fn as_iif(&self, tolerance: f64) -> Option<Self> {
        let first = self.probs.first()?;
        let identical = self
            .probs
            .iter()
            .all(|row| row.iter().zip(first).all(|(a, b)| (a - b).abs() <= tolerance));
        identical.then(|| Self {
            kind: PolicyKind::Iif,
            support: self.support.clone(),
            probs: vec![first.clone()],
            objective_value: self.objective_value,
        })
    }

    /// Same table as a per-candidate TIF policy.
    pub fn as_tif(&self, n: usize) -> Self {
        let probs = match self.kind {
            PolicyKind::Iif => vec![self.probs[0].clone(); n],
            _ => self.probs.clone(),
        };
        Self {
            kind: PolicyKind::Tif,
            support: self.support.clone(),
            probs,
            objective_value: self.objective_value,
        }
    }

    /// Largest `p(π(t),x) - Q_t` over steps and values for one order. For an
    /// IIF table this is `max_x p(x) + Σ_{k<n} Σ_y f_{π(k)}(y) p(y) - 1`.
    pub fn iif_violation(&self, instance: &Instance, order: &ArrivalOrder) -> f64 {
        let mass = instance.mass_table();
        let mut survival = 1.0;
        let mut worst = f64::NEG_INFINITY;
        for t in 0..instance.n() {
            let i = order.at(t);
            for j in 0..self.support.len() {
                worst = worst.max(self.prob(i, j) - survival);
            }
            survival -= mass[i].iter().enumerate().map(|(j, f)| f * self.prob(i, j)).sum::<f64>();
        }
        worst
    }

    /// Largest `p(i,x) + Σ_{k≠i} Σ_y f_k(y) p(k,y) - 1`.
    pub fn tif_violation(&self, instance: &Instance) -> f64 {
        let mass = instance.mass_table();
        let n = instance.n();
        let hire_mass: Vec<f64> = (0..n)
            .map(|k| mass[k].iter().enumerate().map(|(j, f)| f * self.prob(k, j)).sum())
            .collect();
        let total: f64 = hire_mass.iter().sum();
        let mut worst = f64::NEG_INFINITY;
        for i in 0..n {
            for j in 0..self.support.len() {
                worst = worst.max(self.prob(i, j) + total - hire_mass[i] - 1.0);
            }
        }
        worst
    }

    /// Largest `p(π(t),x) - Q_t^π` over every order, step and value; the
    /// permutation form of the TIF constraint. Only for small `n`.
    pub fn tif_perm_violation(&self, instance: &Instance) -> f64 {
        assert!(instance.n() <= 5, "permutation check limited to n <= 5");
        ArrivalOrder::all(instance.n())
            .iter()
            .map(|order| self.iif_violation(instance, order))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `Σ_i Σ_x f_i(x) p(i,x)`: expected number of hires.
    pub fn hire_mass(&self, instance: &Instance) -> f64 {
        let mass = instance.mass_table();
        (0..instance.n())
            .map(|i| mass[i].iter().enumerate().map(|(j, f)| f * self.prob(i, j)).sum::<f64>())
            .sum()
    }

    pub fn in_unit_box(&self) -> bool {
        self.probs.iter().flatten().all(|p| (0.0..=1.0).contains(p))
    }
}

/// Exact `Σ_i Σ_x x f_i(x) p(i,x)`; for IIF tables `p(i,x) = p(x)`.
pub fn policy_expected_value(instance: &Instance, policy: &FairPolicy) -> f64 {
    instance
        .dists()
        .iter()
        .enumerate()
        .map(|(i, d)| {
            d.iter()
                .map(|(x, f)| x * f * policy.prob_at(i, x))
                .sum::<f64>()
        })
        .sum()
}

/// Replaces each `p_ix` by the mass-weighted average `w_x / z_x` across
/// candidates, keeping the per-value hire mass `w_x` and the objective.
pub fn symmetrize_offline_solution(instance: &Instance, policy: &FairPolicy) -> FairPolicy {
    let mass = instance.mass_table();
    let s = instance.support().len();
    let n = instance.n();
    let row: Vec<f64> = (0..s)
        .map(|j| {
            let w: f64 = (0..n).map(|i| policy.prob(i, j) * mass[i][j]).sum();
            let z: f64 = (0..n).map(|i| mass[i][j]).sum();
            if w > 0.0 && z > 0.0 {
                (w / z).min(1.0)
            } else {
                0.0
            }
        })
        .collect();
    let mut out = FairPolicy {
        kind: PolicyKind::OfflineRelaxed,
        support: instance.support().to_vec(),
        probs: vec![row; n],
        objective_value: 0.0,
    };
    out.objective_value = policy_expected_value(instance, &out);
    out
}

/// Halves every probability; the objective halves with it.
pub fn halve_policy(policy: &FairPolicy) -> FairPolicy {
    FairPolicy {
        kind: policy.kind,
        support: policy.support.clone(),
        probs: policy
            .probs
            .iter()
            .map(|r| r.iter().map(|p| p / 2.0).collect())
            .collect(),
        objective_value: policy.objective_value / 2.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::DiscreteDistribution;
    use crate::lp::{build_offline_relaxation, build_online_iif_lp, solve_lp};

    fn two_point(a: f64) -> Instance {
        // f_1(x) = f_2(x) = 0.25 at x = 1
        let d = DiscreteDistribution::new(vec![0.0, 1.0, a], vec![0.5, 0.25, 0.25]).unwrap();
        Instance::iid(d, 2).unwrap()
    }

    #[test]
    fn symmetrize_averages_by_mass() {
        let inst = two_point(3.0);
        let p = FairPolicy {
            kind: PolicyKind::OfflineRelaxed,
            support: inst.support().to_vec(),
            probs: vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 0.0]],
            objective_value: 0.25,
        };
        let sym = symmetrize_offline_solution(&inst, &p);
        assert_eq!(sym.probs, vec![vec![0.0, 0.5, 0.0], vec![0.0, 0.5, 0.0]]);
        assert!((sym.objective_value - 0.25).abs() < 1e-15);
        assert!((sym.hire_mass(&inst) - p.hire_mass(&inst)).abs() < 1e-15);
    }

    #[test]
    fn symmetrize_fixes_symmetric_input() {
        let inst = two_point(2.0);
        let p = FairPolicy {
            kind: PolicyKind::OfflineRelaxed,
            support: inst.support().to_vec(),
            probs: vec![vec![0.0, 0.3, 1.0]; 2],
            objective_value: 0.0,
        };
        assert_eq!(symmetrize_offline_solution(&inst, &p).probs, p.probs);
    }

    #[test]
    fn halving_halves_objective() {
        let inst = two_point(5.0);
        let lp = build_offline_relaxation(&inst);
        let p = FairPolicy::from_solution(&inst, &lp, &solve_lp(&lp).unwrap()).unwrap();
        let h = halve_policy(&p);
        assert_eq!(h.objective_value, p.objective_value / 2.0);
        assert!((policy_expected_value(&inst, &h) - p.objective_value / 2.0).abs() < 1e-15);
    }

    #[test]
    fn never_hire_is_worth_zero() {
        let inst = two_point(2.0);
        let p = FairPolicy::constant(&inst, PolicyKind::Iif, 0.0);
        assert_eq!(policy_expected_value(&inst, &p), 0.0);
    }

    #[test]
    fn uniform_policy_on_iid_candidates() {
        let inst = Instance::iid(
            DiscreteDistribution::new(vec![0.0, 2.0, 5.0], vec![0.2, 0.5, 0.3]).unwrap(),
            3,
        )
        .unwrap();
        let p = FairPolicy::constant(&inst, PolicyKind::Iif, 1.0 / 3.0);
        assert!((policy_expected_value(&inst, &p) - inst.sum_of_means() / 3.0).abs() < 1e-12);
        assert!(p.iif_violation(&inst, &ArrivalOrder::identity(3)) <= 1e-12);
    }

    #[test]
    fn solved_right_arc_policy_value() {
        let eps = 0.2;
        let inst = Instance::new(vec![
            DiscreteDistribution::point_mass(1.0).unwrap(),
            DiscreteDistribution::new(vec![0.0, 1.0], vec![1.0 - eps, eps]).unwrap(),
        ])
        .unwrap();
        let lp = build_online_iif_lp(&inst, &ArrivalOrder::identity(2)).unwrap();
        let sol = solve_lp(&lp).unwrap();
        let p = FairPolicy::from_solution(&inst, &lp, &sol).unwrap();
        assert!((policy_expected_value(&inst, &p) - 0.6).abs() < 1e-12);
        assert!(p.iif_violation(&inst, &ArrivalOrder::identity(2)) <= POLICY_TOLERANCE);
    }

    #[test]
    fn json_round_trip() {
        let inst = two_point(2.0);
        let p = FairPolicy::constant(&inst, PolicyKind::Tif, 0.25);
        let back: FairPolicy = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(p, back);
    }
}
