//! Named instances: every worked example and tight instance, plus a seeded
//! random corpus.

use rand::seq::index::sample as sample_indices;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::distribution::DiscreteDistribution;
use crate::error::ModelError;
use crate::instance::{ArrivalOrder, Instance};

/// Value pool for random instances.
pub const RANDOM_VALUES: [f64; 5] = [0.0, 1.0, 2.0, 5.0, 10.0];

/// Generator names accepted by [`by_name`].
pub const GENERATOR_NAMES: [&str; 6] = [
    "classic_tight",
    "perturbed_tight",
    "right_arc",
    "must_hire",
    "zero_one",
    "random",
];

fn open_unit(name: &str, v: f64) -> Result<(), ModelError> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(ModelError::Parameter(format!("{name} = {v} must lie in (0, 1)")))
    }
}

fn dist(pairs: &[(f64, f64)]) -> Result<DiscreteDistribution, ModelError> {
    DiscreteDistribution::from_pairs(pairs)
}

/// `X_1 = 1`; `X_2 = 1/ε` w.p. `ε`, else 0. Arrival order (1,2).
pub fn classic_tight(eps: f64) -> Result<(Instance, ArrivalOrder), ModelError> {
    open_unit("eps", eps)?;
    let inst = Instance::new(vec![
        DiscreteDistribution::point_mass(1.0)?,
        dist(&[(1.0 / eps, eps), (0.0, 1.0 - eps)])?,
    ])?;
    Ok((inst, ArrivalOrder::identity(2)))
}

/// The classic tight instance with mass `δ` moved onto each candidate's
/// missing support points, so both share `{0, 1, 1/ε}`. Requires `δ < ε²`.
pub fn perturbed_tight(eps: f64, delta: f64) -> Result<(Instance, ArrivalOrder), ModelError> {
    open_unit("eps", eps)?;
    if !(delta > 0.0 && delta < eps * eps) {
        return Err(ModelError::Parameter(format!(
            "delta = {delta} must satisfy 0 < delta < eps^2 = {}",
            eps * eps
        )));
    }
    let inst = Instance::new(vec![
        dist(&[(1.0 / eps, delta), (1.0, 1.0 - 2.0 * delta), (0.0, delta)])?,
        dist(&[(1.0 / eps, eps), (1.0, delta), (0.0, 1.0 - delta - eps)])?,
    ])?;
    Ok((inst, ArrivalOrder::identity(2)))
}

/// `X_1 = 1`; `X_2 = 1` w.p. `ε`, else 0. Arrival order (1,2).
///
/// Candidate 1 has no mass at 0, but 0 is still in the combined support and
/// gets an LP variable.
pub fn right_arc_instance(eps: f64) -> Result<(Instance, ArrivalOrder), ModelError> {
    open_unit("eps", eps)?;
    let inst = Instance::new(vec![
        DiscreteDistribution::point_mass(1.0)?,
        dist(&[(1.0, eps), (0.0, 1.0 - eps)])?,
    ])?;
    Ok((inst, ArrivalOrder::identity(2)))
}

/// Number of candidates in the must-hire instance:
/// `⌈2 ln 2 / ln(1 / (1 - ε/2))⌉`.
pub fn must_hire_size(eps: f64) -> usize {
    (2.0 * std::f64::consts::LN_2 / (1.0 / (1.0 - eps / 2.0)).ln()).ceil() as usize
}

/// i.i.d. candidates worth `2/ε` w.p. `ε/2`, else 0; each has mean 1.
pub fn must_hire_instance(eps: f64) -> Result<(Instance, ArrivalOrder), ModelError> {
    open_unit("eps", eps)?;
    let n = must_hire_size(eps);
    let d = dist(&[(2.0 / eps, eps / 2.0), (0.0, 1.0 - eps / 2.0)])?;
    Ok((Instance::iid(d, n)?, ArrivalOrder::identity(n)))
}

/// Two 0-1 candidates with `Pr[X_1 = 1] = 1/2` and `Pr[X_2 = 1] = 2/3`, on
/// which single-threshold rules are neither IIF nor TIF.
pub fn zero_one_instance() -> Result<(Instance, ArrivalOrder), ModelError> {
    let inst = Instance::new(vec![
        dist(&[(1.0, 0.5), (0.0, 0.5)])?,
        dist(&[(1.0, 2.0 / 3.0), (0.0, 1.0 / 3.0)])?,
    ])?;
    Ok((inst, ArrivalOrder::identity(2)))
}

/// Seeded random instance: `support_size` values drawn without replacement
/// from [`RANDOM_VALUES`], shared by all `n` candidates, each with its own
/// Dirichlet(1) masses.
pub fn random_instance(n: usize, support_size: usize, seed: u64) -> Result<Instance, ModelError> {
    if n == 0 || n > 8 {
        return Err(ModelError::Parameter(format!("n = {n} must be in 1..=8")));
    }
    if support_size == 0 || support_size > RANDOM_VALUES.len() {
        return Err(ModelError::Parameter(format!(
            "support size {support_size} must be in 1..=5"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = sample_indices(&mut rng, RANDOM_VALUES.len(), support_size).into_vec();
    idx.sort_unstable();
    let points: Vec<f64> = idx.iter().map(|&k| RANDOM_VALUES[k]).collect();
    let dists = (0..n)
        .map(|_| {
            // Normalized exponentials are Dirichlet(1, ..., 1).
            let raw: Vec<f64> = (0..support_size)
                .map(|_| {
                    let e: f64 = Exp1.sample(&mut rng);
                    e.max(1e-12)
                })
                .collect();
            let total: f64 = raw.iter().sum();
            DiscreteDistribution::new(points.clone(), raw.iter().map(|e| e / total).collect())
        })
        .collect::<Result<Vec<_>, _>>()?;
    Instance::new(dists)
}

/// One entry of the random test corpus.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub instance: Instance,
}

/// Root seed of the default corpus.
pub const CORPUS_SEED: u64 = 20_240_601;

/// `count` random instances cycling `n ∈ {2,3,4}` and support size `∈ {2,3}`.
pub fn random_corpus(count: usize, seed: u64) -> Vec<CorpusEntry> {
    (0..count)
        .map(|k| {
            let n = 2 + k % 3;
            let s = 2 + (k / 3) % 2;
            let inst_seed = seed.wrapping_add(k as u64);
            CorpusEntry {
                name: format!("random(n={n},s={s},seed={inst_seed})"),
                instance: random_instance(n, s, inst_seed).expect("corpus parameters are in range"),
            }
        })
        .collect()
}

/// Parameters for [`by_name`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub eps: f64,
    pub delta: Option<f64>,
    pub n: usize,
    pub support_size: usize,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            eps: 0.1,
            delta: None,
            n: 3,
            support_size: 3,
            seed: CORPUS_SEED,
        }
    }
}

/// Looks a generator up by name. `perturbed_tight` defaults `δ` to `ε²/10`.
pub fn by_name(name: &str, p: &GenParams) -> Result<(Instance, ArrivalOrder), ModelError> {
    match name {
        "classic_tight" => classic_tight(p.eps),
        "perturbed_tight" => perturbed_tight(p.eps, p.delta.unwrap_or(p.eps * p.eps / 10.0)),
        "right_arc" => right_arc_instance(p.eps),
        "must_hire" => must_hire_instance(p.eps),
        "zero_one" => zero_one_instance(),
        "random" => {
            let inst = random_instance(p.n, p.support_size, p.seed)?;
            let n = inst.n();
            Ok((inst, ArrivalOrder::identity(n)))
        }
        other => Err(ModelError::Parameter(format!(
            "unknown generator '{other}' (expected one of {})",
            GENERATOR_NAMES.join(", ")
        ))),
    }
}
