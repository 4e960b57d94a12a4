use serde::Serialize;

use super::{HireOutcome, ValueStream};
use crate::instance::{ArrivalOrder, Instance};

/// Hires the first arrival with value `>= threshold`.
pub fn run_threshold_rule<S: ValueStream + ?Sized>(
    order: &ArrivalOrder,
    threshold: f64,
    values: &mut S,
) -> HireOutcome {
    for t in 0..order.len() {
        let i = order.at(t);
        let x = values.value_of(i);
        if x >= threshold {
            return HireOutcome::hire(i, t, x);
        }
    }
    HireOutcome::NONE
}

/// Discrete stand-in for the median of `max_i X_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MedianChoice {
    pub threshold: f64,
    /// `Pr[max_i X_i >= threshold]`.
    pub tail: f64,
}

/// Support point whose tail `Pr[max >= T]` is closest to one half; ties go
/// to the larger tail.
pub fn samuel_cahn_threshold(instance: &Instance) -> MedianChoice {
    let mut best: Option<MedianChoice> = None;
    for &x in instance.support() {
        let tail = instance.max_tail(x);
        let cand = MedianChoice { threshold: x, tail };
        best = Some(match best {
            None => cand,
            Some(b) => {
                let (db, dc) = ((b.tail - 0.5).abs(), (tail - 0.5).abs());
                if dc < db - 1e-12 || (dc <= db + 1e-12 && tail > b.tail) {
                    cand
                } else {
                    b
                }
            }
        });
    }
    best.expect("instance support is non-empty")
}

/// Half the prophet's expected value.
pub fn kw_threshold(instance: &Instance) -> f64 {
    instance.expected_max() / 2.0
}

/// Optimal unconstrained stopping rule for a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct BackwardInduction {
    order: ArrivalOrder,
    /// `cutoffs[t]` is the continuation value after step `t`.
    cutoffs: Vec<f64>,
    value: f64,
}

impl BackwardInduction {
    /// `E[OPTOn]` for this order.
    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn cutoffs(&self) -> &[f64] {
        &self.cutoffs
    }

    pub fn order(&self) -> &ArrivalOrder {
        &self.order
    }

    /// Accepts at step `t` iff the value reaches the continuation value.
    pub fn run<S: ValueStream + ?Sized>(&self, values: &mut S) -> HireOutcome {
        for t in 0..self.order.len() {
            let i = self.order.at(t);
            let x = values.value_of(i);
            if x >= self.cutoffs[t] {
                return HireOutcome::hire(i, t, x);
            }
        }
        HireOutcome::NONE
    }
}

/// `V_t = E[max(X_{π(t)}, V_{t+1})]` backwards from `V_{n+1} = 0`.
pub fn backward_induction_optimal(instance: &Instance, order: &ArrivalOrder) -> BackwardInduction {
    let n = order.len();
    let mut cutoffs = vec![0.0; n];
    let mut next = 0.0;
    for t in (0..n).rev() {
        cutoffs[t] = next;
        next = instance
            .dist(order.at(t))
            .iter()
            .map(|(x, f)| f * x.max(next))
            .sum();
    }
    BackwardInduction {
        order: order.clone(),
        cutoffs,
        value: next,
    }
}
