//! LP-parameterized fair stopping rules (IIF and TIF).
//!
//! At step `t` the rule has survived with probability
//! `Q_t = 1 - Σ_{k<t} Σ_y f_{π(k)}(y) p(π(k), y)` and hires the arriving
//! candidate with coin probability `p(π(t), x) / Q_t`. Conditional on its
//! value `x`, candidate `π(t)` is then hired with probability exactly `p`.

use rand::Rng;
use serde::Serialize;

use super::{HireOutcome, ValueStream};
use crate::error::RuleError;
use crate::instance::{ArrivalOrder, Instance};
use crate::lp::{FairPolicy, PolicyKind};

/// Coin probabilities up to `1 + COIN_TOLERANCE` are clamped to 1; larger
/// ones mean the policy is infeasible for this order.
pub const COIN_TOLERANCE: f64 = 1e-8;

/// Absolute slack on `p <= Q_t`, for LP round-off once `Q_t` has hit 0.
pub const COIN_ABS_TOLERANCE: f64 = 1e-12;

/// Heads probability `p / Q_t`, clamped to `[0, 1]`; `Err(p / Q_t)` when the
/// table asks for more than the surviving mass. A step with `Q_t <= 0` is
/// never reached and gets coin 0.
pub fn fair_coin(p: f64, survival: f64) -> Result<f64, f64> {
    if p <= 0.0 {
        return Ok(0.0);
    }
    let ratio = if survival > 0.0 { p / survival } else { f64::INFINITY };
    if ratio <= 1.0 + COIN_TOLERANCE || p <= survival.max(0.0) + COIN_ABS_TOLERANCE {
        Ok(if survival > 0.0 { ratio.min(1.0) } else { 0.0 })
    } else {
        Err(ratio)
    }
}

/// One line of an execution trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub t: usize,
    pub candidate: usize,
    pub x: f64,
    #[serde(rename = "Q_t")]
    pub survival: f64,
    #[serde(rename = "q_t")]
    pub coin: f64,
    pub decision: &'static str,
}

/// A fair rule bound to an arrival order, with survival masses and coin
/// probabilities precomputed.
#[derive(Debug, Clone)]
pub struct FairRule {
    order: ArrivalOrder,
    support: Vec<f64>,
    survival: Vec<f64>,
    /// `coins[t][j]`: heads probability at step `t` for value `support[j]`.
    coins: Vec<Vec<f64>>,
}

impl FairRule {
    /// IIF rule; the policy must be a single shared table.
    pub fn iif(instance: &Instance, order: &ArrivalOrder, policy: &FairPolicy) -> Result<Self, RuleError> {
        if policy.kind != PolicyKind::Iif {
            return Err(RuleError::PolicyKind(policy.kind.name()));
        }
        Self::build(instance, order, policy)
    }

    /// TIF rule with a per-candidate table. IIF tables are accepted and
    /// read as `p(i, x) = p(x)`.
    pub fn tif(instance: &Instance, order: &ArrivalOrder, policy: &FairPolicy) -> Result<Self, RuleError> {
        Self::build(instance, order, policy)
    }

    fn build(instance: &Instance, order: &ArrivalOrder, policy: &FairPolicy) -> Result<Self, RuleError> {
        policy.check_layout(instance).map_err(RuleError::Layout)?;
        if order.len() != instance.n() {
            return Err(RuleError::OrderLength {
                got: order.len(),
                expected: instance.n(),
            });
        }
        let mass = instance.mass_table();
        let s = instance.support().len();
        let mut survival = Vec::with_capacity(instance.n());
        let mut coins = Vec::with_capacity(instance.n());
        let mut q = 1.0f64;
        for t in 0..instance.n() {
            let i = order.at(t);
            survival.push(q);
            let row = (0..s)
                .map(|j| {
                    fair_coin(policy.prob(i, j), q).map_err(|coin| RuleError::InfeasibleCoin {
                        step: t + 1,
                        p: policy.prob(i, j),
                        survival: q,
                        coin,
                    })
                })
                .collect::<Result<Vec<f64>, _>>()?;
            coins.push(row);
            q -= (0..s).map(|j| mass[i][j] * policy.prob(i, j)).sum::<f64>();
        }
        Ok(Self {
            order: order.clone(),
            support: instance.support().to_vec(),
            survival,
            coins,
        })
    }

    pub fn order(&self) -> &ArrivalOrder {
        &self.order
    }

    /// `Q_t` for each 0-based step.
    pub fn survival(&self) -> &[f64] {
        &self.survival
    }

    /// Heads probability at step `t` for value `x`.
    pub fn coin(&self, t: usize, x: f64) -> f64 {
        match self.support.binary_search_by(|p| p.total_cmp(&x)) {
            Ok(j) => self.coins[t][j],
            Err(_) => 0.0,
        }
    }

    pub fn run<S: ValueStream + ?Sized, R: Rng + ?Sized>(
        &self,
        values: &mut S,
        rng: &mut R,
        mut trace: Option<&mut Vec<TraceStep>>,
    ) -> HireOutcome {
        for t in 0..self.order.len() {
            let i = self.order.at(t);
            let x = values.value_of(i);
            let coin = self.coin(t, x);
            let heads = coin > 0.0 && rng.random::<f64>() < coin;
            if let Some(trace) = trace.as_deref_mut() {
                trace.push(TraceStep {
                    t: t + 1,
                    candidate: i + 1,
                    x,
                    survival: self.survival[t],
                    coin,
                    decision: if heads { "hire" } else { "reject" },
                });
            }
            if heads {
                return HireOutcome::hire(i, t, x);
            }
        }
        HireOutcome::NONE
    }
}

pub fn run_iif_rule<S: ValueStream + ?Sized, R: Rng + ?Sized>(
    instance: &Instance,
    order: &ArrivalOrder,
    policy: &FairPolicy,
    values: &mut S,
    rng: &mut R,
) -> Result<HireOutcome, RuleError> {
    Ok(FairRule::iif(instance, order, policy)?.run(values, rng, None))
}

pub fn run_tif_rule<S: ValueStream + ?Sized, R: Rng + ?Sized>(
    instance: &Instance,
    order: &ArrivalOrder,
    policy: &FairPolicy,
    values: &mut S,
    rng: &mut R,
) -> Result<HireOutcome, RuleError> {
    Ok(FairRule::tif(instance, order, policy)?.run(values, rng, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::DiscreteDistribution;
    use crate::rules::{draw_profile, FixedValues};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn coins2() -> Instance {
        let c = DiscreteDistribution::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap();
        Instance::iid(c, 2).unwrap()
    }

    fn table(inst: &Instance, kind: PolicyKind, probs: Vec<Vec<f64>>) -> FairPolicy {
        FairPolicy {
            kind,
            support: inst.support().to_vec(),
            probs,
            objective_value: 0.0,
        }
    }

    #[test]
    fn coin_edge_cases() {
        assert_eq!(fair_coin(0.0, 0.0), Ok(0.0));
        assert_eq!(fair_coin(0.25, 0.5), Ok(0.5));
        assert_eq!(fair_coin(0.5 + 1e-10, 0.5), Ok(1.0));
        // LP round-off after the survival mass is exhausted.
        assert_eq!(fair_coin(1.6e-16, 0.0), Ok(0.0));
        assert_eq!(fair_coin(1.6e-16, -1e-17), Ok(0.0));
        assert!(fair_coin(0.6, 0.5).is_err());
        assert!(fair_coin(1e-6, 0.0).is_err());
    }

    #[test]
    fn zero_policy_never_hires() {
        let inst = coins2();
        let p = FairPolicy::constant(&inst, PolicyKind::Iif, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let prof = draw_profile(&inst, &mut rng, None);
            let out = run_iif_rule(&inst, &ArrivalOrder::identity(2), &p, &mut FixedValues(&prof), &mut rng).unwrap();
            assert_eq!(out, HireOutcome::NONE);
        }
    }

    #[test]
    fn single_point_mass_is_always_hired() {
        let inst = Instance::new(vec![DiscreteDistribution::point_mass(4.0).unwrap()]).unwrap();
        let p = FairPolicy::constant(&inst, PolicyKind::Iif, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let out = run_iif_rule(&inst, &ArrivalOrder::identity(1), &p, &mut FixedValues(&[4.0]), &mut rng).unwrap();
        assert_eq!(out, HireOutcome::hire(0, 0, 4.0));
    }

    #[test]
    fn tif_candidate_one_always_hired() {
        let inst = coins2();
        let p = table(&inst, PolicyKind::Tif, vec![vec![1.0, 1.0], vec![0.0, 0.0]]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for order in ArrivalOrder::all(2) {
            for _ in 0..50 {
                let prof = draw_profile(&inst, &mut rng, None);
                let out = run_tif_rule(&inst, &order, &p, &mut FixedValues(&prof), &mut rng).unwrap();
                assert_eq!(out.hired, Some(0));
            }
        }
    }

    #[test]
    fn survival_and_coins() {
        let inst = coins2();
        let p = table(&inst, PolicyKind::Iif, vec![vec![0.0, 0.5]]);
        let rule = FairRule::iif(&inst, &ArrivalOrder::identity(2), &p).unwrap();
        assert_eq!(rule.survival(), &[1.0, 0.75]);
        assert_eq!(rule.coin(0, 1.0), 0.5);
        assert!((rule.coin(1, 1.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(rule.coin(1, 7.0), 0.0);
    }

    #[test]
    fn infeasible_policy_is_rejected() {
        let inst = coins2();
        let p = table(&inst, PolicyKind::Iif, vec![vec![1.0, 1.0]]);
        let err = FairRule::iif(&inst, &ArrivalOrder::identity(2), &p).unwrap_err();
        assert!(matches!(err, RuleError::InfeasibleCoin { step: 2, .. }));
    }

    #[test]
    fn slack_within_tolerance_is_clamped() {
        let inst = coins2();
        let p = table(&inst, PolicyKind::Iif, vec![vec![0.5 + 1e-10, 0.5 + 1e-10]]);
        let rule = FairRule::iif(&inst, &ArrivalOrder::identity(2), &p).unwrap();
        assert_eq!(rule.coin(1, 0.0), 1.0);
    }

    #[test]
    fn iif_rule_rejects_tif_table() {
        let inst = coins2();
        let p = FairPolicy::constant(&inst, PolicyKind::Tif, 0.1);
        assert!(matches!(
            FairRule::iif(&inst, &ArrivalOrder::identity(2), &p),
            Err(RuleError::PolicyKind("tif"))
        ));
    }

    #[test]
    fn trace_records_each_inspection() {
        let inst = coins2();
        let p = table(&inst, PolicyKind::Iif, vec![vec![0.0, 0.5]]);
        let rule = FairRule::iif(&inst, &ArrivalOrder::identity(2), &p).unwrap();
        let mut trace = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let out = rule.run(&mut FixedValues(&[0.0, 0.0]), &mut rng, Some(&mut trace));
        assert_eq!(out, HireOutcome::NONE);
        assert_eq!(trace.len(), 2);
        assert_eq!(trace[1].survival, 0.75);
        assert_eq!(trace[1].decision, "reject");
    }
}
