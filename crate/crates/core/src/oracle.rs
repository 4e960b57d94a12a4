//! Brute-force ground truth for the rule engines and the LP solver.
//!
//! Nothing here calls into `rules` or the simplex: every rule is re-derived
//! from its definition and evaluated by walking all value profiles, so a bug
//! in the production path cannot hide behind the same bug in its check.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{OracleError, RuleError};
use crate::instance::{ArrivalOrder, Instance};
use crate::lp::{FairPolicy, PolicyKind};
use crate::rules::{fair_coin, RuleSpec};

/// Largest number of joint outcomes any enumeration will walk.
pub const ENUMERATION_BUDGET: f64 = 1e6;

/// Largest number of lattice points [`grid_policy_search`] will enumerate.
pub const GRID_BUDGET: f64 = 2e6;

/// Exact hiring behavior of one rule under one arrival order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub support: Vec<f64>,
    /// `joint[i][j] = Pr[hire i and X_i = support[j]]`.
    pub joint: Vec<Vec<f64>>,
    /// `Pr[hire i | X_i = support[j]]`, `None` where candidate `i` has no
    /// mass on that value.
    pub hire_prob: Vec<Vec<Option<f64>>>,
    pub expected_value: f64,
    /// `Pr[some hire]`.
    pub hire_mass: f64,
}

impl EnumerationReport {
    fn from_joint(instance: &Instance, joint: Vec<Vec<f64>>, expected_value: f64) -> Self {
        let mass = instance.mass_table();
        let hire_prob = joint
            .iter()
            .zip(&mass)
            .map(|(row, f)| {
                row.iter()
                    .zip(f)
                    .map(|(&h, &f)| (f > 0.0).then(|| h / f))
                    .collect()
            })
            .collect();
        let hire_mass = joint.iter().flatten().sum();
        Self {
            support: instance.support().to_vec(),
            joint,
            hire_prob,
            expected_value,
            hire_mass,
        }
    }

    /// Conditional hire probability of candidate `i` at value `x`.
    pub fn prob(&self, i: usize, x: f64) -> Option<f64> {
        let j = self.support.binary_search_by(|p| p.total_cmp(&x)).ok()?;
        self.hire_prob[i][j]
    }

    /// `Σ_i Σ_x x f_i(x) Pr[hire i | X_i = x]`, recomputed from the table.
    pub fn value_from_table(&self, instance: &Instance) -> f64 {
        let mass = instance.mass_table();
        self.hire_prob
            .iter()
            .zip(&mass)
            .map(|(row, f)| {
                row.iter()
                    .zip(f)
                    .zip(&self.support)
                    .map(|((h, f), x)| x * f * h.unwrap_or(0.0))
                    .sum::<f64>()
            })
            .sum()
    }
}

/// All value profiles with their probabilities, as combined-support indices.
fn profiles(instance: &Instance) -> Vec<(Vec<usize>, f64)> {
    let own: Vec<Vec<(usize, f64)>> = instance
        .dists()
        .iter()
        .map(|d| {
            d.iter()
                .map(|(x, f)| (instance.support_index(x).expect("point in support"), f))
                .collect()
        })
        .collect();
    let mut out = vec![(Vec::with_capacity(own.len()), 1.0)];
    for choices in &own {
        out = out
            .into_iter()
            .flat_map(|(prefix, w)| {
                choices.iter().map(move |&(j, f)| {
                    let mut next = prefix.clone();
                    next.push(j);
                    (next, w * f)
                })
            })
            .collect();
    }
    out
}

fn check_budget(needed: f64) -> Result<(), OracleError> {
    if needed > ENUMERATION_BUDGET {
        Err(OracleError::Budget {
            needed,
            budget: ENUMERATION_BUDGET,
        })
    } else {
        Ok(())
    }
}

/// Hire chance at each step for each support index, for rules whose decision
/// depends only on the step and the current value.
fn step_chances(
    instance: &Instance,
    order: &ArrivalOrder,
    spec: &RuleSpec,
) -> Result<Vec<Vec<f64>>, OracleError> {
    let n = instance.n();
    let support = instance.support();
    let s = support.len();
    let mass = instance.mass_table();
    Ok(match spec {
        RuleSpec::Iif { policy } | RuleSpec::Tif { policy } => {
            if matches!(spec, RuleSpec::Iif { .. }) && policy.kind != PolicyKind::Iif {
                return Err(RuleError::PolicyKind(policy.kind.name()).into());
            }
            policy.check_layout(instance).map_err(RuleError::Layout)?;
            fair_coins(policy, &mass, order)?
        }
        RuleSpec::Threshold { threshold } => {
            let row: Vec<f64> = support
                .iter()
                .map(|&x| if x >= *threshold { 1.0 } else { 0.0 })
                .collect();
            vec![row; n]
        }
        RuleSpec::BackwardInduction => {
            // cont[t]: value of continuing optimally from step t.
            let mut cont = vec![0.0; n + 1];
            for t in (0..n).rev() {
                let i = order.at(t);
                cont[t] = (0..s)
                    .map(|j| mass[i][j] * support[j].max(cont[t + 1]))
                    .sum();
            }
            (0..n)
                .map(|t| {
                    support
                        .iter()
                        .map(|&x| if x >= cont[t + 1] { 1.0 } else { 0.0 })
                        .collect()
                })
                .collect()
        }
        RuleSpec::NeverHire => vec![vec![0.0; s]; n],
        RuleSpec::SingleSample | RuleSpec::DoubleSample => {
            unreachable!("sample rules are enumerated separately")
        }
    })
}

/// Coin `p(π(t), x) / Q_t` with `Q_t` the survival mass before step `t`.
fn fair_coins(
    policy: &FairPolicy,
    mass: &[Vec<f64>],
    order: &ArrivalOrder,
) -> Result<Vec<Vec<f64>>, OracleError> {
    let p = |i: usize, j: usize| match policy.kind {
        PolicyKind::Iif => policy.probs[0][j],
        _ => policy.probs[i][j],
    };
    let s = policy.support.len();
    let mut survival = 1.0;
    let mut out = Vec::with_capacity(order.len());
    for t in 0..order.len() {
        let i = order.at(t);
        let mut row = vec![0.0; s];
        for (j, slot) in row.iter_mut().enumerate() {
            let pij = p(i, j);
            if pij <= 0.0 {
                continue;
            }
            *slot = fair_coin(pij, survival).map_err(|coin| RuleError::InfeasibleCoin {
                step: t + 1,
                p: pij,
                survival,
                coin,
            })?;
        }
        out.push(row);
        survival -= (0..s).map(|j| mass[i][j] * p(i, j)).sum::<f64>();
    }
    Ok(out)
}

/// Exact conditional hire probabilities and expected value of a rule under
/// one order, by walking every value profile and integrating coin flips.
///
/// Sample-based rules are forwarded to [`enumerate_sample_rule`].
pub fn enumerate_rule(
    instance: &Instance,
    order: &ArrivalOrder,
    spec: &RuleSpec,
) -> Result<EnumerationReport, OracleError> {
    order.check_for(instance).map_err(|_| RuleError::OrderLength {
        got: order.len(),
        expected: instance.n(),
    })?;
    match spec {
        RuleSpec::SingleSample => return enumerate_sample_rule(instance, order, SampleRule::Single),
        RuleSpec::DoubleSample => return enumerate_sample_rule(instance, order, SampleRule::Double),
        _ => {}
    }
    check_budget(instance.profile_count())?;
    let chances = step_chances(instance, order, spec)?;
    let support = instance.support();
    let mut joint = vec![vec![0.0; support.len()]; instance.n()];
    let mut value = 0.0;
    for (profile, w) in profiles(instance) {
        let mut alive = w;
        for (t, row) in chances.iter().enumerate() {
            let i = order.at(t);
            let j = profile[i];
            let hire = alive * row[j];
            joint[i][j] += hire;
            value += hire * support[j];
            alive -= hire;
            if alive <= 0.0 {
                break;
            }
        }
    }
    Ok(EnumerationReport::from_joint(instance, joint, value))
}

/// Which comparison-based rule to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleRule {
    /// Hire the largest value if it beats its own sample.
    Single,
    /// The online rule with two sample sets.
    Double,
}

/// Exact behavior of a sample-based rule under one order.
pub fn enumerate_sample_rule(
    instance: &Instance,
    order: &ArrivalOrder,
    which: SampleRule,
) -> Result<EnumerationReport, OracleError> {
    Ok(enumerate_sample_rule_orders(instance, std::slice::from_ref(order), which)?
        .pop()
        .expect("one order in, one report out"))
}

/// [`enumerate_sample_rule`] for several orders in one pass over the sample
/// tuples.
///
/// Equal values are ordered by independent uniform priorities. Rather than
/// sampling them, each tuple is split over every way the priorities can fall,
/// each weighted by its exact probability.
pub fn enumerate_sample_rule_orders(
    instance: &Instance,
    orders: &[ArrivalOrder],
    which: SampleRule,
) -> Result<Vec<EnumerationReport>, OracleError> {
    for order in orders {
        order.check_for(instance).map_err(|_| RuleError::OrderLength {
            got: order.len(),
            expected: instance.n(),
        })?;
    }
    let copies = match which {
        SampleRule::Single => 2,
        SampleRule::Double => 3,
    };
    check_budget(instance.profile_count().powi(copies))?;
    let profs = profiles(instance);
    let n = instance.n();
    let s = instance.support().len();
    let support = instance.support();

    // (joint tables, values) per order; one partial per X profile, merged in
    // index order so the result does not depend on the thread count.
    type Partial = (Vec<Vec<Vec<f64>>>, Vec<f64>);
    let zero = || -> Partial { (vec![vec![vec![0.0; s]; n]; orders.len()], vec![0.0; orders.len()]) };
    let partials: Vec<Partial> = profs
        .par_iter()
        .map(|(x, wx)| {
            let mut acc = zero();
            match which {
                SampleRule::Single => {
                    for (y, wy) in &profs {
                        single_sample_tuple(x, y, wx * wy, &mut acc.0[0], &mut acc.1[0], support);
                    }
                    for k in 1..orders.len() {
                        acc.0[k] = acc.0[0].clone();
                        acc.1[k] = acc.1[0];
                    }
                }
                SampleRule::Double => {
                    for (y, wy) in &profs {
                        for (z, wz) in &profs {
                            double_sample_tuple(x, y, z, wx * wy * wz, orders, &mut acc, support);
                        }
                    }
                }
            }
            acc
        })
        .collect();

    let mut total = zero();
    for (joint, value) in partials {
        for (k, table) in joint.iter().enumerate() {
            for (i, row) in table.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    total.0[k][i][j] += v;
                }
            }
            total.1[k] += value[k];
        }
    }
    Ok(total
        .0
        .into_iter()
        .zip(total.1)
        .map(|(joint, value)| EnumerationReport::from_joint(instance, joint, value))
        .collect())
}

fn single_sample_tuple(
    x: &[usize],
    y: &[usize],
    w: f64,
    joint: &mut [Vec<f64>],
    value: &mut f64,
    support: &[f64],
) {
    let top = *x.iter().max().expect("non-empty profile");
    let g = x.iter().filter(|&&j| j == top).count() as f64;
    for (i, (&xi, &yi)) in x.iter().zip(y).enumerate() {
        if xi != top {
            continue;
        }
        // X_i must win the priority draw among the tied maxima, and also
        // beat Y_i when Y_i ties with it.
        let p = if yi < top {
            1.0 / g
        } else if yi == top {
            1.0 / (g + 1.0)
        } else {
            0.0
        };
        joint[i][xi] += w * p;
        *value += w * p * support[xi];
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

fn double_sample_tuple(
    x: &[usize],
    y: &[usize],
    z: &[usize],
    w: f64,
    orders: &[ArrivalOrder],
    acc: &mut (Vec<Vec<Vec<f64>>>, Vec<f64>),
    support: &[f64],
) {
    let n = x.len();
    let y_top = *y.iter().max().expect("non-empty profile");
    let c = y.iter().filter(|&&j| j == y_top).count();
    // X and Z samples tied with the best Y; which of them rank above it is
    // decided by priorities. Bit k of a mask covers tied[k].
    let mut tied: Vec<(bool, usize)> = Vec::new();
    for i in 0..n {
        if x[i] == y_top {
            tied.push((true, i));
        }
        if z[i] == y_top {
            tied.push((false, i));
        }
    }
    let e = tied.len();
    let group = factorial(c + e);
    let mut x_base = 0u32;
    let mut z_base = 0u32;
    for i in 0..n {
        x_base |= u32::from(x[i] > y_top) << i;
        z_base |= u32::from(z[i] > y_top) << i;
    }
    for mask in 0u32..(1 << e) {
        let u = mask.count_ones() as usize;
        // Exactly the masked elements precede the first Y in a uniformly
        // random ordering of the tied group.
        let pr = factorial(u) * c as f64 * factorial(c + e - u - 1) / group;
        let (mut x_above, mut z_above) = (x_base, z_base);
        for (k, &(is_x, i)) in tied.iter().enumerate() {
            if mask >> k & 1 == 1 {
                if is_x {
                    x_above |= 1 << i;
                } else {
                    z_above |= 1 << i;
                }
            }
        }
        if x_above == 0 {
            continue;
        }
        for (k, order) in orders.iter().enumerate() {
            let Some(t) = (0..n).find(|&t| x_above >> order.at(t) & 1 == 1) else {
                continue;
            };
            if (t..n).any(|s| z_above >> order.at(s) & 1 == 1) {
                continue;
            }
            let i = order.at(t);
            acc.0[k][i][x[i]] += w * pr;
            acc.1[k] += w * pr * support[x[i]];
        }
    }
}

/// Which fair program [`grid_policy_search`] explores.
#[derive(Debug, Clone, PartialEq)]
pub enum GridKind {
    /// One shared `p(x)` under a fixed order.
    Iif(ArrivalOrder),
    /// Per-candidate `p(i,x)`, permutation-free form.
    Tif,
}

/// Best lattice point found by [`grid_policy_search`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridResult {
    /// Variable values, `p(x)` or candidate-major `p(i,x)`.
    pub values: Vec<f64>,
    pub objective: f64,
    pub step: f64,
    /// `step · Σ c_v`: rounding any feasible point down to the lattice loses
    /// at most this much objective.
    pub slack: f64,
    pub points: u64,
}

/// Exhaustive search of the probability lattice `{0, step, 2·step, …, 1}`
/// over the feasible region of a fair program, written directly from its
/// inequalities.
///
/// All constraint coefficients are non-negative, so lowering a variable never
/// breaks feasibility. Variables with zero objective weight are therefore
/// pinned to 0, and the last free variable is raised to the largest lattice
/// value that stays feasible instead of being scanned.
pub fn grid_policy_search(instance: &Instance, kind: &GridKind, step: f64) -> Result<GridResult, OracleError> {
    let n = instance.n();
    let support = instance.support();
    let s = support.len();
    if !(1e-3..=1.0).contains(&step) {
        return Err(OracleError::Precondition(format!("grid step {step} outside [1e-3, 1]")));
    }
    let mass = instance.mass_table();
    let (objective, rows): (Vec<f64>, Vec<Vec<f64>>) = match kind {
        GridKind::Iif(order) => {
            if s > 3 {
                return Err(OracleError::Precondition(format!("IIF grid needs |S| <= 3, got {s}")));
            }
            order.check_for(instance).map_err(|_| RuleError::OrderLength {
                got: order.len(),
                expected: n,
            })?;
            let objective = (0..s)
                .map(|j| support[j] * (0..n).map(|i| mass[i][j]).sum::<f64>())
                .collect();
            // Survival before the last arrival must cover p(x) for every x.
            let rows = (0..s)
                .map(|j| {
                    let mut row: Vec<f64> = (0..s)
                        .map(|v| (0..n - 1).map(|t| mass[order.at(t)][v]).sum())
                        .collect();
                    row[j] += 1.0;
                    row
                })
                .collect();
            (objective, rows)
        }
        GridKind::Tif => {
            if n * s > 4 {
                return Err(OracleError::Precondition(format!(
                    "TIF grid needs n·|S| <= 4, got {}",
                    n * s
                )));
            }
            let objective = (0..n)
                .flat_map(|i| (0..s).map(move |j| (i, j)))
                .map(|(i, j)| support[j] * mass[i][j])
                .collect();
            let mut rows = Vec::new();
            for i in 0..n {
                for j in 0..s {
                    let mut row = vec![0.0; n * s];
                    for k in (0..n).filter(|&k| k != i) {
                        for v in 0..s {
                            row[k * s + v] = mass[k][v];
                        }
                    }
                    row[i * s + j] += 1.0;
                    rows.push(row);
                }
            }
            (objective, rows)
        }
    };

    let levels = (1.0 / step + 1e-9).floor() as u64;
    let active: Vec<usize> = (0..objective.len()).filter(|&v| objective[v] > 0.0).collect();
    let slack = step * objective.iter().sum::<f64>();
    let mut best = GridResult {
        values: vec![0.0; objective.len()],
        objective: 0.0,
        step,
        slack,
        points: 1,
    };
    let Some((&last, scanned)) = active.split_last() else {
        return Ok(best);
    };
    let needed = ((levels + 1) as f64).powi(scanned.len() as i32);
    if needed > GRID_BUDGET {
        return Err(OracleError::Budget {
            needed,
            budget: GRID_BUDGET,
        });
    }

    let mut ks = vec![0u64; scanned.len()];
    let mut p = vec![0.0; objective.len()];
    let mut points = 0u64;
    loop {
        for (&v, &k) in scanned.iter().zip(&ks) {
            p[v] = k as f64 * step;
        }
        p[last] = 0.0;
        // Largest lattice level for `last` that keeps every row feasible.
        let mut top = Some(levels);
        for (row, _) in rows.iter().zip(0..) {
            let used: f64 = row.iter().zip(&p).map(|(a, b)| a * b).sum();
            let room = 1.0 - used;
            if room < -1e-12 {
                top = None;
                break;
            }
            if row[last] > 0.0 {
                let k = ((room.max(0.0) / row[last]) / step + 1e-9).floor() as u64;
                top = top.map(|t| t.min(k));
            }
        }
        if let Some(k) = top {
            points += 1;
            p[last] = k as f64 * step;
            let value: f64 = objective.iter().zip(&p).map(|(c, v)| c * v).sum();
            if value > best.objective {
                best.objective = value;
                best.values = p.clone();
            }
        }
        // Mixed-radix increment.
        let mut d = 0;
        while d < ks.len() {
            ks[d] += 1;
            if ks[d] <= levels {
                break;
            }
            ks[d] = 0;
            d += 1;
        }
        if d == ks.len() {
            break;
        }
    }
    best.points = points;
    Ok(best)
}

/// Best expected value over every deterministic rule that accepts a fixed
/// set of values at each step; optimal stopping needs nothing richer when
/// values are independent. Exponential in `Σ |supp F_i|`.
pub fn optimal_online_by_search(instance: &Instance, order: &ArrivalOrder) -> Result<f64, OracleError> {
    let steps: Vec<Vec<(f64, f64)>> = (0..order.len())
        .map(|t| instance.dist(order.at(t)).iter().collect())
        .collect();
    let bits: usize = steps.iter().map(Vec::len).sum();
    if bits > 20 {
        return Err(OracleError::Budget {
            needed: 2f64.powi(bits as i32),
            budget: 2f64.powi(20),
        });
    }
    let mut best = 0.0f64;
    for code in 0u64..(1 << bits) {
        let mut reach = 1.0;
        let mut value = 0.0;
        let mut bit = 0;
        for step in &steps {
            let mut stop = 0.0;
            for &(x, f) in step {
                if code >> bit & 1 == 1 {
                    stop += f;
                    value += reach * f * x;
                }
                bit += 1;
            }
            reach *= 1.0 - stop;
        }
        best = best.max(value);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::DiscreteDistribution;

    fn coins(n: usize) -> Instance {
        Instance::iid(DiscreteDistribution::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap(), n).unwrap()
    }

    fn tight(eps: f64) -> Instance {
        Instance::new(vec![
            DiscreteDistribution::point_mass(1.0).unwrap(),
            DiscreteDistribution::new(vec![0.0, 1.0 / eps], vec![1.0 - eps, eps]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn fair_rule_reproduces_table() {
        let inst = coins(2);
        let policy = FairPolicy {
            kind: PolicyKind::Iif,
            support: vec![0.0, 1.0],
            probs: vec![vec![0.2, 0.5]],
            objective_value: 0.0,
        };
        for order in ArrivalOrder::all(2) {
            let r = enumerate_rule(&inst, &order, &RuleSpec::Iif { policy: policy.clone() }).unwrap();
            for i in 0..2 {
                assert!((r.prob(i, 0.0).unwrap() - 0.2).abs() < 1e-12);
                assert!((r.prob(i, 1.0).unwrap() - 0.5).abs() < 1e-12);
            }
            assert!((r.expected_value - 0.5).abs() < 1e-12);
            assert!((r.hire_mass - 0.7).abs() < 1e-12);
        }
    }

    #[test]
    fn infinite_threshold_never_hires() {
        let inst = coins(3);
        let r = enumerate_rule(
            &inst,
            &ArrivalOrder::identity(3),
            &RuleSpec::Threshold { threshold: f64::INFINITY },
        )
        .unwrap();
        assert!(r.joint.iter().flatten().all(|&v| v == 0.0));
        assert_eq!(r.expected_value, 0.0);
    }

    #[test]
    fn dp_on_tight_instance() {
        let r = enumerate_rule(&tight(0.1), &ArrivalOrder::identity(2), &RuleSpec::BackwardInduction).unwrap();
        assert!((r.expected_value - 1.0).abs() < 1e-12);
        let best = optimal_online_by_search(&tight(0.1), &ArrivalOrder::reversed(2)).unwrap();
        assert!((best - 1.9).abs() < 1e-12);
    }

    #[test]
    fn budget_is_enforced() {
        let d = DiscreteDistribution::new(vec![0.0, 1.0, 2.0, 3.0, 4.0], vec![0.2; 5]).unwrap();
        let inst = Instance::iid(d, 9).unwrap();
        let err = enumerate_rule(&inst, &ArrivalOrder::identity(9), &RuleSpec::NeverHire).unwrap_err();
        assert!(matches!(err, OracleError::Budget { .. }));
    }

    #[test]
    fn single_sample_one_coin() {
        let r = enumerate_sample_rule(&coins(1), &ArrivalOrder::identity(1), SampleRule::Single).unwrap();
        // Pr[Y = 0] + ½ Pr[Y = 1]
        assert!((r.prob(0, 1.0).unwrap() - 0.75).abs() < 1e-15);
        assert!((r.prob(0, 0.0).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn double_sample_point_mass_is_pure_priority() {
        // All 3n samples tie; hire needs X_1 first among X, Y, Z for n = 1:
        // X_1 > Y_1 > Z_1 in priority, probability 1/6.
        let inst = Instance::new(vec![DiscreteDistribution::point_mass(1.0).unwrap()]).unwrap();
        let r = enumerate_sample_rule(&inst, &ArrivalOrder::identity(1), SampleRule::Double).unwrap();
        assert!((r.hire_mass - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn sample_rules_meet_their_ratios_on_coins() {
        let inst = coins(2);
        let pm = inst.expected_max();
        let single = enumerate_sample_rule(&inst, &ArrivalOrder::identity(2), SampleRule::Single).unwrap();
        assert!(single.expected_value >= pm / 2.0 - 1e-12);
        let double = enumerate_sample_rule(&inst, &ArrivalOrder::identity(2), SampleRule::Double).unwrap();
        assert!(double.expected_value >= pm / 9.0 - 1e-12);
        let a = single.prob(0, 1.0).unwrap();
        assert!((a - single.prob(1, 1.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn grid_right_arc() {
        let eps = 0.2;
        let inst = Instance::new(vec![
            DiscreteDistribution::point_mass(1.0).unwrap(),
            DiscreteDistribution::new(vec![0.0, 1.0], vec![1.0 - eps, eps]).unwrap(),
        ])
        .unwrap();
        let g = grid_policy_search(&inst, &GridKind::Iif(ArrivalOrder::identity(2)), 1e-3).unwrap();
        assert!((g.objective - 0.6).abs() <= 0.002, "{}", g.objective);
        assert!(g.objective >= 0.0);
    }

    #[test]
    fn grid_tight_instance() {
        let g = grid_policy_search(&tight(0.1), &GridKind::Iif(ArrivalOrder::identity(2)), 1e-3).unwrap();
        assert!((g.objective - 1.0).abs() <= 0.01, "{}", g.objective);
        assert!(grid_policy_search(&tight(0.1), &GridKind::Tif, 1e-4).is_err());
    }
}
