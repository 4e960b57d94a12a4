//! Comparison-based rules that see extra samples instead of the distributions.

use std::cmp::Ordering;

use rand::Rng;

use super::HireOutcome;
use crate::instance::{ArrivalOrder, Instance};

/// A value with a tie-breaking priority; ordered by `(value, psi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ranked {
    pub value: f64,
    pub psi: f64,
}

impl Ranked {
    pub fn new(value: f64, psi: f64) -> Self {
        Self { value, psi }
    }
}

impl Eq for Ranked {}

impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.psi.total_cmp(&other.psi))
    }
}

/// Realized values `x` plus two independent sample sets `y`, `z`, one entry
/// per candidate each.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleWorld {
    pub x: Vec<Ranked>,
    pub y: Vec<Ranked>,
    pub z: Vec<Ranked>,
}

impl SampleWorld {
    /// Draws all `3n` values with uniform priorities; `pinned` fixes one `x`.
    pub fn draw<R: Rng + ?Sized>(instance: &Instance, rng: &mut R, pinned: Option<(usize, f64)>) -> Self {
        let n = instance.n();
        let draw_set = |pin: Option<(usize, f64)>, rng: &mut R| -> Vec<Ranked> {
            (0..n)
                .map(|i| {
                    let value = match pin {
                        Some((p, v)) if p == i => v,
                        _ => instance.dist(i).sample(rng),
                    };
                    Ranked::new(value, rng.random())
                })
                .collect()
        };
        let x = draw_set(pinned, rng);
        let y = draw_set(None, rng);
        let z = draw_set(None, rng);
        Self { x, y, z }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Largest of the `y` samples.
    pub fn y_star(&self) -> Ranked {
        *self.y.iter().max().expect("non-empty world")
    }
}

/// Hires the largest `x` if it beats its own `y` sample.
pub fn run_single_sample_offline(world: &SampleWorld) -> HireOutcome {
    let (i, best) = world
        .x
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1))
        .expect("non-empty world");
    if *best > world.y[i] {
        HireOutcome::hire(i, 0, best.value)
    } else {
        HireOutcome::NONE
    }
}

/// Hires `X_{π(t)}` iff it beats `Y_*`, no earlier arrival did, and every
/// `Z_{π(s)}` with `s >= t` is below `Y_*`.
pub fn run_double_sample_online(order: &ArrivalOrder, world: &SampleWorld) -> HireOutcome {
    let n = world.n();
    let y_star = world.y_star();
    // z_clear[t]: every Z_{π(s)}, s >= t, is below Y_*.
    let mut z_clear = vec![true; n + 1];
    for t in (0..n).rev() {
        z_clear[t] = z_clear[t + 1] && world.z[order.at(t)] < y_star;
    }
    for t in 0..n {
        let i = order.at(t);
        if world.x[i] > y_star {
            return if z_clear[t] {
                HireOutcome::hire(i, t, world.x[i].value)
            } else {
                // An earlier arrival beats Y_*, so no later step can hire.
                HireOutcome::NONE
            };
        }
    }
    HireOutcome::NONE
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::DiscreteDistribution;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(v: f64) -> Ranked {
        Ranked::new(v, 0.5)
    }

    fn world(x: &[f64], y: &[f64], z: &[f64]) -> SampleWorld {
        SampleWorld {
            x: x.iter().map(|&v| r(v)).collect(),
            y: y.iter().map(|&v| r(v)).collect(),
            z: z.iter().map(|&v| r(v)).collect(),
        }
    }

    #[test]
    fn ties_break_on_priority() {
        assert!(Ranked::new(1.0, 0.2) < Ranked::new(1.0, 0.3));
        assert!(Ranked::new(1.0, 0.9) < Ranked::new(2.0, 0.1));
    }

    #[test]
    fn single_sample_one_candidate() {
        assert_eq!(run_single_sample_offline(&world(&[2.0], &[1.0], &[0.0])).hired, Some(0));
        assert_eq!(run_single_sample_offline(&world(&[1.0], &[2.0], &[0.0])), HireOutcome::NONE);
    }

    #[test]
    fn single_sample_needs_max_to_beat_own_sample() {
        let w = world(&[1.0, 3.0, 2.0], &[9.0, 2.5, 0.0], &[0.0; 3]);
        assert_eq!(run_single_sample_offline(&w), HireOutcome::hire(1, 0, 3.0));
        let w = world(&[1.0, 3.0, 2.0], &[5.0, 6.0, 7.0], &[0.0; 3]);
        assert_eq!(run_single_sample_offline(&w), HireOutcome::NONE);
    }

    #[test]
    fn double_sample_large_y_blocks() {
        let w = world(&[1.0, 2.0], &[5.0, 0.0], &[1.0, 1.0]);
        for order in ArrivalOrder::all(2) {
            assert_eq!(run_double_sample_online(&order, &w), HireOutcome::NONE);
        }
    }

    #[test]
    fn double_sample_one_candidate() {
        let o = ArrivalOrder::identity(1);
        assert_eq!(run_double_sample_online(&o, &world(&[2.0], &[1.0], &[0.0])).hired, Some(0));
        assert_eq!(run_double_sample_online(&o, &world(&[2.0], &[1.0], &[1.5])), HireOutcome::NONE);
        assert_eq!(run_double_sample_online(&o, &world(&[0.5], &[1.0], &[0.0])), HireOutcome::NONE);
    }

    #[test]
    fn double_sample_z_suffix_condition() {
        // Y_* = 2; candidate 2 beats it but candidate 1's Z exceeds it.
        let w = world(&[0.0, 3.0], &[2.0, 0.0], &[2.5, 0.0]);
        // order (1,2): at t=2 only Z_{π(2)} matters.
        assert_eq!(run_double_sample_online(&ArrivalOrder::identity(2), &w).hired, Some(1));
        // order (2,1): at t=1 both Z's matter and Z_1 = 2.5 > 2.
        assert_eq!(run_double_sample_online(&ArrivalOrder::reversed(2), &w), HireOutcome::NONE);
    }

    #[test]
    fn double_sample_is_online() {
        let inst = Instance::iid(
            DiscreteDistribution::new(vec![0.0, 1.0, 2.0], vec![0.3, 0.4, 0.3]).unwrap(),
            4,
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..2000 {
            let w = SampleWorld::draw(&inst, &mut rng, None);
            let order = ArrivalOrder::all(4)[rng.random_range(0..24)].clone();
            let out = run_double_sample_online(&order, &w);
            // Whatever happens up to step t must ignore X values after t.
            for t in 0..4 {
                let mut mutated = w.clone();
                for s in t + 1..4 {
                    mutated.x[order.at(s)] = Ranked::new(rng.random_range(0..3) as f64, rng.random());
                }
                let again = run_double_sample_online(&order, &mutated);
                match out.step {
                    Some(s) if s <= t => assert_eq!(again, out),
                    _ => assert!(again.step.is_none_or(|s| s > t)),
                }
            }
        }
    }
}
