//! Stopping rules run against realized candidate values.
//!
//! Every rule is deterministic given its inputs and an rng. Values are pulled
//! one candidate at a time through [`ValueStream`], so the same engines serve
//! sampled runs and fixed value profiles.

mod fair;
mod sample;
mod threshold;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::RuleError;
use crate::instance::{ArrivalOrder, Instance};
use crate::lp::FairPolicy;

pub use fair::{fair_coin, run_iif_rule, run_tif_rule, FairRule, TraceStep, COIN_ABS_TOLERANCE, COIN_TOLERANCE};
pub use sample::{run_double_sample_online, run_single_sample_offline, Ranked, SampleWorld};
pub use threshold::{
    backward_induction_optimal, kw_threshold, run_threshold_rule, samuel_cahn_threshold,
    BackwardInduction, MedianChoice,
};

/// Result of one run: at most one hire.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HireOutcome {
    pub hired: Option<usize>,
    /// Value of the hire, zero if nobody was hired.
    pub value: f64,
    /// 0-based step of the hire.
    pub step: Option<usize>,
}

impl HireOutcome {
    pub const NONE: HireOutcome = HireOutcome {
        hired: None,
        value: 0.0,
        step: None,
    };

    pub fn hire(candidate: usize, step: usize, value: f64) -> Self {
        Self {
            hired: Some(candidate),
            value,
            step: Some(step),
        }
    }
}

/// Pull interface over realized values.
pub trait ValueStream {
    /// Realized value of `candidate`; called at most once per candidate per run.
    fn value_of(&mut self, candidate: usize) -> f64;
}

/// A fully specified value profile.
pub struct FixedValues<'a>(pub &'a [f64]);

impl ValueStream for FixedValues<'_> {
    fn value_of(&mut self, candidate: usize) -> f64 {
        self.0[candidate]
    }
}

/// Draws each value from the instance on demand, optionally pinning one
/// candidate's value.
pub struct SampledValues<'a, R: Rng> {
    pub instance: &'a Instance,
    pub rng: &'a mut R,
    pub pinned: Option<(usize, f64)>,
}

impl<R: Rng> ValueStream for SampledValues<'_, R> {
    fn value_of(&mut self, candidate: usize) -> f64 {
        match self.pinned {
            Some((i, x)) if i == candidate => x,
            _ => self.instance.dist(candidate).sample(self.rng),
        }
    }
}

/// A rule description, independent of any arrival order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum RuleSpec {
    /// The IIF rule driven by a shared table.
    Iif { policy: FairPolicy },
    /// The TIF rule driven by a per-candidate table.
    Tif { policy: FairPolicy },
    Threshold { threshold: f64 },
    /// The unconstrained optimal online rule for the order in use.
    BackwardInduction,
    NeverHire,
    SingleSample,
    DoubleSample,
}

impl RuleSpec {
    pub fn name(&self) -> String {
        match self {
            RuleSpec::Iif { .. } => "iif".into(),
            RuleSpec::Tif { .. } => "tif".into(),
            RuleSpec::Threshold { threshold } => format!("threshold({threshold})"),
            RuleSpec::BackwardInduction => "dp".into(),
            RuleSpec::NeverHire => "never".into(),
            RuleSpec::SingleSample => "single_sample".into(),
            RuleSpec::DoubleSample => "double_sample".into(),
        }
    }

    pub fn is_sample_based(&self) -> bool {
        matches!(self, RuleSpec::SingleSample | RuleSpec::DoubleSample)
    }

    /// Precomputes everything that depends on the order.
    pub fn prepare(&self, instance: &Instance, order: &ArrivalOrder) -> Result<PreparedRule, RuleError> {
        if order.len() != instance.n() {
            return Err(RuleError::OrderLength {
                got: order.len(),
                expected: instance.n(),
            });
        }
        Ok(match self {
            RuleSpec::Iif { policy } => PreparedRule::Fair(FairRule::iif(instance, order, policy)?),
            RuleSpec::Tif { policy } => PreparedRule::Fair(FairRule::tif(instance, order, policy)?),
            RuleSpec::Threshold { threshold } => PreparedRule::Threshold {
                order: order.clone(),
                threshold: *threshold,
            },
            RuleSpec::BackwardInduction => {
                PreparedRule::Dp(backward_induction_optimal(instance, order))
            }
            RuleSpec::NeverHire => PreparedRule::Never,
            RuleSpec::SingleSample => PreparedRule::SingleSample,
            RuleSpec::DoubleSample => PreparedRule::DoubleSample(order.clone()),
        })
    }
}

/// A rule bound to one arrival order, ready for repeated trials.
#[derive(Debug, Clone)]
pub enum PreparedRule {
    Fair(FairRule),
    Threshold { order: ArrivalOrder, threshold: f64 },
    Dp(BackwardInduction),
    Never,
    SingleSample,
    DoubleSample(ArrivalOrder),
}

impl PreparedRule {
    /// One independent run; `pinned` fixes one candidate's realized value.
    pub fn trial<R: Rng>(
        &self,
        instance: &Instance,
        rng: &mut R,
        pinned: Option<(usize, f64)>,
    ) -> HireOutcome {
        match self {
            PreparedRule::Never => HireOutcome::NONE,
            PreparedRule::SingleSample => {
                run_single_sample_offline(&SampleWorld::draw(instance, rng, pinned))
            }
            PreparedRule::DoubleSample(order) => {
                run_double_sample_online(order, &SampleWorld::draw(instance, rng, pinned))
            }
            _ => {
                let profile = draw_profile(instance, rng, pinned);
                self.run_profile(&profile, rng)
            }
        }
    }

    /// Runs a value-driven rule on a fixed profile. Sample-based rules need a
    /// [`SampleWorld`] and never hire here.
    pub fn run_profile<R: Rng>(&self, profile: &[f64], rng: &mut R) -> HireOutcome {
        let mut values = FixedValues(profile);
        match self {
            PreparedRule::Fair(rule) => rule.run(&mut values, rng, None),
            PreparedRule::Threshold { order, threshold } => {
                run_threshold_rule(order, *threshold, &mut values)
            }
            PreparedRule::Dp(rule) => rule.run(&mut values),
            PreparedRule::Never | PreparedRule::SingleSample | PreparedRule::DoubleSample(_) => {
                HireOutcome::NONE
            }
        }
    }
}

/// One realized value per candidate.
pub fn draw_profile<R: Rng>(instance: &Instance, rng: &mut R, pinned: Option<(usize, f64)>) -> Vec<f64> {
    let mut values = SampledValues {
        instance,
        rng,
        pinned,
    };
    (0..instance.n()).map(|i| values.value_of(i)).collect()
}
