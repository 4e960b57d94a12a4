//! Fairness audits and competitive-ratio measurements.
//!
//! Exact audits read conditional hire probabilities off the enumeration
//! oracle. Monte Carlo audits estimate `Pr[hire i | X_i = x]` by pinning
//! `X_i = x` and sampling everyone else, which is valid because candidates
//! are independent and avoids rejection sampling on rare values.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::AuditError;
use crate::instance::{ArrivalOrder, Instance};
use crate::lp::{optimal_iif_policy, solve_setting, Setting};
use crate::oracle::{enumerate_rule, enumerate_sample_rule_orders, SampleRule};
use crate::rules::{backward_induction_optimal, HireOutcome, PreparedRule, RuleSpec};

/// Spread allowed by exact audits.
pub const EXACT_TOLERANCE: f64 = 1e-9;
/// Monte Carlo verdicts allow this many standard errors of a difference.
pub const SE_MULTIPLIER: f64 = 4.0;
pub const MIN_MC_TRIALS: u64 = 10_000;
/// `orders = all` is refused above this many candidates unless overridden.
pub const MAX_ALL_ORDERS: usize = 6;
/// Trials per independently seeded chunk.
const CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditMode {
    Exact,
    Mc,
}

impl FromStr for AuditMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(AuditMode::Exact),
            "mc" => Ok(AuditMode::Mc),
            _ => Err(format!("unknown mode '{s}' (expected exact or mc)")),
        }
    }
}

/// Orders to audit.
#[derive(Debug, Clone, PartialEq)]
pub enum OrderSet {
    All,
    List(Vec<ArrivalOrder>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditOptions {
    pub orders: OrderSet,
    pub mode: AuditMode,
    /// Trials per cell in Monte Carlo mode.
    pub trials: u64,
    pub seed: u64,
    /// Overrides the default spread tolerance.
    pub tolerance: Option<f64>,
    /// Permit `OrderSet::All` beyond [`MAX_ALL_ORDERS`] candidates.
    pub allow_many_orders: bool,
}

impl Default for AuditOptions {
    fn default() -> Self {
        Self {
            orders: OrderSet::All,
            mode: AuditMode::Exact,
            trials: 100_000,
            seed: crate::DEFAULT_SEED,
            tolerance: None,
            allow_many_orders: false,
        }
    }
}

/// One estimated `Pr[hire i | X_i = x]` under one order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditCell {
    pub order: ArrivalOrder,
    /// 1-based candidate.
    pub candidate: usize,
    pub x: f64,
    pub prob: f64,
    /// Zero for exact cells.
    pub se: f64,
    /// Zero for exact cells.
    pub trials: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub max_dev: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Where the largest spread occurs.
    pub worst: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub rule: String,
    pub mode: AuditMode,
    pub orders: Vec<ArrivalOrder>,
    pub cells: Vec<AuditCell>,
    /// Largest spread across candidates at a fixed (order, x).
    pub iif_max_dev: f64,
    /// Largest spread across orders at a fixed (candidate, x).
    pub tif_max_dev: f64,
    pub iif: Verdict,
    pub tif: Verdict,
    pub seed: Option<u64>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.iif.pass && self.tif.pass
    }

    /// Cell for 0-based candidate `i`.
    pub fn cell(&self, order: &ArrivalOrder, i: usize, x: f64) -> Option<&AuditCell> {
        self.cells
            .iter()
            .find(|c| &c.order == order && c.candidate == i + 1 && c.x == x)
    }

    /// Flat per-cell table.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["order", "candidate", "x", "prob", "se", "trials"])?;
        for c in &self.cells {
            w.write_record([
                c.order.to_string(),
                c.candidate.to_string(),
                c.x.to_string(),
                c.prob.to_string(),
                c.se.to_string(),
                c.trials.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn resolve_orders(instance: &Instance, opts: &AuditOptions) -> Result<Vec<ArrivalOrder>, AuditError> {
    let n = instance.n();
    match &opts.orders {
        OrderSet::All if n > MAX_ALL_ORDERS && !opts.allow_many_orders => Err(AuditError::TooManyOrders(n)),
        OrderSet::All => Ok(ArrivalOrder::all(n)),
        OrderSet::List(list) => {
            for o in list {
                o.check_for(instance)?;
            }
            Ok(list.clone())
        }
    }
}

/// Conditional hire probability table for every (order, candidate, value)
/// plus IIF and TIF verdicts.
pub fn audit_fairness(instance: &Instance, spec: &RuleSpec, opts: &AuditOptions) -> Result<AuditReport, AuditError> {
    let orders = resolve_orders(instance, opts)?;
    let cells = match opts.mode {
        AuditMode::Exact => exact_cells(instance, spec, &orders)?,
        AuditMode::Mc => {
            if opts.trials < MIN_MC_TRIALS {
                return Err(AuditError::TooFewTrials {
                    got: opts.trials,
                    min: MIN_MC_TRIALS,
                });
            }
            mc_cells(instance, spec, &orders, opts.trials, opts.seed)?
        }
    };

    let tolerance = match opts.mode {
        AuditMode::Exact => opts.tolerance.unwrap_or(EXACT_TOLERANCE),
        AuditMode::Mc => {
            // Every spread compares two cells, so its standard error is at
            // most √2 times the largest cell SE.
            let se = cells.iter().map(|c| c.se).fold(0.0, f64::max);
            opts.tolerance.unwrap_or(0.0) + SE_MULTIPLIER * std::f64::consts::SQRT_2 * se
        }
    };

    let iif = spread(&cells, |c| (c.order.as_slice().to_vec(), c.x.to_bits()), |c| {
        format!("order {}, x = {}", c.order, c.x)
    });
    let tif = spread(&cells, |c| (c.candidate, c.x.to_bits()), |c| {
        format!("candidate {}, x = {}", c.candidate, c.x)
    });
    let verdict = |(dev, worst): (f64, Option<String>)| Verdict {
        max_dev: dev,
        tolerance,
        pass: dev <= tolerance,
        worst,
    };
    let iif = verdict(iif);
    let tif = verdict(tif);
    Ok(AuditReport {
        rule: spec.name(),
        mode: opts.mode,
        orders,
        iif_max_dev: iif.max_dev,
        tif_max_dev: tif.max_dev,
        iif,
        tif,
        cells,
        seed: (opts.mode == AuditMode::Mc).then_some(opts.seed),
    })
}

/// Largest `max - min` of `prob` within groups sharing `key`.
fn spread<K: Ord>(
    cells: &[AuditCell],
    key: impl Fn(&AuditCell) -> K,
    describe: impl Fn(&AuditCell) -> String,
) -> (f64, Option<String>) {
    let mut groups: std::collections::BTreeMap<K, (f64, f64, &AuditCell)> = Default::default();
    for c in cells {
        let g = groups.entry(key(c)).or_insert((c.prob, c.prob, c));
        g.0 = g.0.min(c.prob);
        g.1 = g.1.max(c.prob);
    }
    let mut worst = (0.0, None);
    for (lo, hi, c) in groups.values() {
        if hi - lo > worst.0 {
            worst = (hi - lo, Some(describe(c)));
        }
    }
    worst
}

fn exact_cells(instance: &Instance, spec: &RuleSpec, orders: &[ArrivalOrder]) -> Result<Vec<AuditCell>, AuditError> {
    let reports = match spec {
        RuleSpec::SingleSample => enumerate_sample_rule_orders(instance, orders, SampleRule::Single)?,
        RuleSpec::DoubleSample => enumerate_sample_rule_orders(instance, orders, SampleRule::Double)?,
        _ => orders
            .iter()
            .map(|o| enumerate_rule(instance, o, spec))
            .collect::<Result<_, _>>()?,
    };
    let mut cells = Vec::new();
    for (order, report) in orders.iter().zip(reports) {
        for i in 0..instance.n() {
            for (j, &x) in instance.support().iter().enumerate() {
                if let Some(prob) = report.hire_prob[i][j] {
                    cells.push(AuditCell {
                        order: order.clone(),
                        candidate: i + 1,
                        x,
                        prob,
                        se: 0.0,
                        trials: 0,
                    });
                }
            }
        }
    }
    Ok(cells)
}

fn mc_cells(
    instance: &Instance,
    spec: &RuleSpec,
    orders: &[ArrivalOrder],
    trials: u64,
    seed: u64,
) -> Result<Vec<AuditCell>, AuditError> {
    let mut cells = Vec::new();
    let mut stream = 0u64;
    for order in orders {
        let rule = spec.prepare(instance, order)?;
        for i in 0..instance.n() {
            for (x, _) in instance.dist(i).iter() {
                let stats = run_trials(instance, &rule, trials, seed, stream, Some((i, x)));
                stream += 1;
                let prob = stats.hires_of[i] as f64 / trials as f64;
                cells.push(AuditCell {
                    order: order.clone(),
                    candidate: i + 1,
                    x,
                    prob,
                    se: (prob * (1.0 - prob) / trials as f64).sqrt(),
                    trials,
                });
            }
        }
    }
    Ok(cells)
}

/// Aggregates of repeated independent runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub trials: u64,
    pub hires: u64,
    /// Hire counts per candidate.
    pub hires_of: Vec<u64>,
    pub sum: f64,
    pub sum_sq: f64,
}

impl TrialStats {
    fn empty(n: usize) -> Self {
        Self {
            trials: 0,
            hires: 0,
            hires_of: vec![0; n],
            sum: 0.0,
            sum_sq: 0.0,
        }
    }

    fn record(&mut self, out: &HireOutcome) {
        self.trials += 1;
        if let Some(i) = out.hired {
            self.hires += 1;
            self.hires_of[i] += 1;
        }
        self.sum += out.value;
        self.sum_sq += out.value * out.value;
    }

    fn merge(&mut self, other: &Self) {
        self.trials += other.trials;
        self.hires += other.hires;
        for (a, b) in self.hires_of.iter_mut().zip(&other.hires_of) {
            *a += b;
        }
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.trials as f64
    }

    /// Standard error of [`mean`](Self::mean).
    pub fn se(&self) -> f64 {
        let t = self.trials as f64;
        let var = (self.sum_sq / t - self.mean().powi(2)).max(0.0) * t / (t - 1.0).max(1.0);
        (var / t).sqrt()
    }

    pub fn hire_rate(&self) -> f64 {
        self.hires as f64 / self.trials as f64
    }

    pub fn hire_rate_se(&self) -> f64 {
        let p = self.hire_rate();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

/// Generator for chunk `chunk` of stream `stream` under `seed`. Streams
/// separate experiments; chunks are fixed-size blocks of trials.
pub fn chunk_rng(seed: u64, stream: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream.wrapping_mul(1 << 24).wrapping_add(chunk));
    rng
}

/// Runs `trials` independent trials in parallel. Chunks are seeded by index
/// and merged in index order, so the result is identical for any number of
/// worker threads.
pub fn run_trials(
    instance: &Instance,
    rule: &PreparedRule,
    trials: u64,
    seed: u64,
    stream: u64,
    pinned: Option<(usize, f64)>,
) -> TrialStats {
    let chunks = trials.div_ceil(CHUNK);
    let parts: Vec<TrialStats> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, stream, c);
            let mut stats = TrialStats::empty(instance.n());
            let count = CHUNK.min(trials - c * CHUNK);
            for _ in 0..count {
                stats.record(&rule.trial(instance, &mut rng, pinned));
            }
            stats
        })
        .collect();
    let mut total = TrialStats::empty(instance.n());
    for p in &parts {
        total.merge(p);
    }
    total
}

/// Denominator of a competitive ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Baseline {
    /// `E[max_i X_i]`.
    Prophet,
    /// Unconstrained optimal stopping for the order.
    OptOnline,
    /// Offline IIF optimum; only a lower bound is computable.
    OptOfflineIif,
    OptOnlineIif,
    OptOnlineTif,
}

impl Baseline {
    pub const ALL: [Baseline; 5] = [
        Baseline::Prophet,
        Baseline::OptOnline,
        Baseline::OptOfflineIif,
        Baseline::OptOnlineIif,
        Baseline::OptOnlineTif,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Baseline::Prophet => "prophet",
            Baseline::OptOnline => "opt_online",
            Baseline::OptOfflineIif => "opt_offline_iif",
            Baseline::OptOnlineIif => "opt_online_iif",
            Baseline::OptOnlineTif => "opt_online_tif",
        }
    }
}

impl fmt::Display for Baseline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Baseline {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Baseline::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| format!("unknown baseline '{s}'"))
    }
}

/// Value of a baseline and whether it is exact (`false` means lower bound).
pub fn baseline_value(instance: &Instance, order: &ArrivalOrder, baseline: Baseline) -> Result<(f64, bool), AuditError> {
    Ok(match baseline {
        Baseline::Prophet => (instance.expected_max(), true),
        Baseline::OptOnline => (backward_induction_optimal(instance, order).value(), true),
        Baseline::OptOnlineIif => (solve_setting(instance, Setting::OnlineIif, order)?.objective(), true),
        Baseline::OptOnlineTif => (solve_setting(instance, Setting::OnlineTif, order)?.objective(), true),
        Baseline::OptOfflineIif => (offline_iif_lower_bound(instance)?.0, false),
    })
}

/// Lower bound on the offline IIF optimum: an offline rule may simulate any
/// online IIF rule under any order it likes, so the best online IIF value
/// over all orders is achievable offline. Returns the value and the order.
pub fn offline_iif_lower_bound(instance: &Instance) -> Result<(f64, ArrivalOrder), AuditError> {
    let n = instance.n();
    if n > MAX_ALL_ORDERS {
        return Err(AuditError::Baseline(format!(
            "offline IIF bound scans all orders; n = {n} > {MAX_ALL_ORDERS}"
        )));
    }
    let mut best: Option<(f64, ArrivalOrder)> = None;
    for order in ArrivalOrder::all(n) {
        let v = optimal_iif_policy(instance, &order)?.objective_value;
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, order));
        }
    }
    Ok(best.expect("at least one order"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub numerator_rule: String,
    pub denominator_baseline: String,
    pub numerator_value: f64,
    pub denominator_value: f64,
    pub ratio: f64,
    pub ci95: (f64, f64),
    pub exact: bool,
    pub note: Option<String>,
}

/// `E[rule] / E[baseline]` under `order`.
///
/// Exact mode enumerates the rule; Monte Carlo mode uses `trials` runs and
/// a normal 95% interval. With `opt_offline_iif` the denominator is only a
/// lower bound, so the ratio is an upper bound and the interval is widened
/// down to the prophet ratio, which bounds it from below.
pub fn measure_ratio(
    instance: &Instance,
    order: &ArrivalOrder,
    spec: &RuleSpec,
    baseline: Baseline,
    mode: AuditMode,
    trials: u64,
    seed: u64,
) -> Result<RatioReport, AuditError> {
    let (num, num_lo, num_hi) = match mode {
        AuditMode::Exact => {
            let v = enumerate_rule(instance, order, spec)?.expected_value;
            (v, v, v)
        }
        AuditMode::Mc => {
            let rule = spec.prepare(instance, order)?;
            let stats = run_trials(instance, &rule, trials, seed, 0, None);
            let half = 1.96 * stats.se();
            (stats.mean(), stats.mean() - half, stats.mean() + half)
        }
    };
    let (den, den_exact) = baseline_value(instance, order, baseline)?;
    let ratio = num / den;
    let (ci95, note) = if den_exact {
        ((num_lo / den, num_hi / den), None)
    } else {
        (
            (num_lo / instance.expected_max(), num_hi / den),
            Some("denominator is a lower bound (best online IIF value over all orders); ratio is an upper bound".to_string()),
        )
    };
    Ok(RatioReport {
        numerator_rule: spec.name(),
        denominator_baseline: baseline.name().to_string(),
        numerator_value: num,
        denominator_value: den,
        ratio,
        ci95,
        exact: mode == AuditMode::Exact && den_exact,
        note,
    })
}
