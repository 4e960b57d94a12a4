//! Finite-support value distributions for a single candidate.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Masses must sum to one within this tolerance after construction.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// Looser tolerance accepted on input files; masses are renormalized after the check.
pub const INPUT_MASS_TOLERANCE: f64 = 1e-6;

/// A distribution over finitely many non-negative values.
///
/// Points are strictly increasing and every listed point carries strictly
/// positive mass. A value outside `points` has mass zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDistribution", into = "RawDistribution")]
pub struct DiscreteDistribution {
    points: Vec<f64>,
    masses: Vec<f64>,
    cumulative: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawDistribution {
    points: Vec<f64>,
    masses: Vec<f64>,
}

impl TryFrom<RawDistribution> for DiscreteDistribution {
    type Error = ModelError;

    fn try_from(raw: RawDistribution) -> Result<Self, Self::Error> {
        DiscreteDistribution::with_tolerance(raw.points, raw.masses, INPUT_MASS_TOLERANCE)
    }
}

impl From<DiscreteDistribution> for RawDistribution {
    fn from(d: DiscreteDistribution) -> Self {
        RawDistribution {
            points: d.points,
            masses: d.masses,
        }
    }
}

impl DiscreteDistribution {
    pub fn new(points: Vec<f64>, masses: Vec<f64>) -> Result<Self, ModelError> {
        Self::with_tolerance(points, masses, MASS_TOLERANCE)
    }

    /// Validates against `tolerance`, then rescales the masses to sum to one.
    /// Masses already summing to one up to rounding are kept bit-for-bit, so
    /// serialized distributions parse back unchanged.
    pub fn with_tolerance(
        points: Vec<f64>,
        masses: Vec<f64>,
        tolerance: f64,
    ) -> Result<Self, ModelError> {
        if points.is_empty() {
            return Err(ModelError::EmptySupport);
        }
        if points.len() != masses.len() {
            return Err(ModelError::LengthMismatch {
                points: points.len(),
                masses: masses.len(),
            });
        }
        for &x in &points {
            if !x.is_finite() || x < 0.0 {
                return Err(ModelError::InvalidPoint(x));
            }
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ModelError::UnsortedPoints);
        }
        for &m in &masses {
            if !m.is_finite() || m <= 0.0 || m > 1.0 + tolerance {
                return Err(ModelError::InvalidMass(m));
            }
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > tolerance {
            return Err(ModelError::MassSum(total));
        }
        let rounding = 4.0 * f64::EPSILON * masses.len() as f64;
        let masses: Vec<f64> = if (total - 1.0).abs() <= rounding {
            masses
        } else {
            masses.into_iter().map(|m| m / total).collect()
        };
        let mut acc = 0.0;
        let cumulative = masses
            .iter()
            .map(|m| {
                acc += m;
                acc
            })
            .collect();
        Ok(Self {
            points,
            masses,
            cumulative,
        })
    }

    /// Builds a distribution from unordered `(value, mass)` pairs. Repeated
    /// values are merged and zero masses dropped.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self, ModelError> {
        let mut sorted: Vec<(f64, f64)> = pairs.iter().copied().filter(|p| p.1 != 0.0).collect();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut points: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut masses: Vec<f64> = Vec::with_capacity(sorted.len());
        for (x, m) in sorted {
            match points.last() {
                Some(&last) if last == x => *masses.last_mut().unwrap() += m,
                _ => {
                    points.push(x);
                    masses.push(m);
                }
            }
        }
        Self::new(points, masses)
    }

    pub fn point_mass(value: f64) -> Result<Self, ModelError> {
        Self::new(vec![value], vec![1.0])
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().copied().zip(self.masses.iter().copied())
    }

    /// Mass at `x`, zero off the support.
    pub fn pmf(&self, x: f64) -> f64 {
        match self.points.binary_search_by(|p| p.total_cmp(&x)) {
            Ok(k) => self.masses[k],
            Err(_) => 0.0,
        }
    }

    /// `Pr[X <= x]`.
    pub fn cdf(&self, x: f64) -> f64 {
        let k = self.points.partition_point(|&p| p <= x);
        if k == 0 {
            0.0
        } else if k == self.points.len() {
            1.0
        } else {
            self.cumulative[k - 1]
        }
    }

    /// `Pr[X < x]`.
    pub fn cdf_below(&self, x: f64) -> f64 {
        let k = self.points.partition_point(|&p| p < x);
        if k == 0 {
            0.0
        } else {
            self.cumulative[k - 1].min(1.0)
        }
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(x, m)| x * m).sum()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let k = self.cumulative.partition_point(|&c| c <= u);
        self.points[k.min(self.points.len() - 1)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn coin() -> DiscreteDistribution {
        DiscreteDistribution::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap()
    }

    #[test]
    fn pmf_on_and_off_support() {
        let eps = 0.1;
        let risky = DiscreteDistribution::new(vec![0.0, 1.0 / eps], vec![1.0 - eps, eps]).unwrap();
        assert!((risky.pmf(1.0 / eps) - 0.1).abs() < 1e-15);
        let one = DiscreteDistribution::point_mass(1.0).unwrap();
        assert_eq!(one.pmf(1.0), 1.0);
        assert_eq!(one.pmf(7.0), 0.0);
    }

    #[test]
    fn cdf_is_right_continuous_step() {
        assert_eq!(coin().cdf(0.0), 0.5);
        assert_eq!(coin().cdf(1.0), 1.0);
        assert_eq!(coin().cdf(-1.0), 0.0);
        let d = DiscreteDistribution::new(vec![0.0, 10.0], vec![0.9, 0.1]).unwrap();
        assert!((d.cdf(5.0) - 0.9).abs() < 1e-15);
        assert!((d.cdf_below(10.0) - 0.9).abs() < 1e-15);
        assert_eq!(d.cdf_below(0.0), 0.0);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(
            DiscreteDistribution::new(vec![], vec![]),
            Err(ModelError::EmptySupport)
        ));
        assert!(matches!(
            DiscreteDistribution::new(vec![1.0, 0.0], vec![0.5, 0.5]),
            Err(ModelError::UnsortedPoints)
        ));
        assert!(matches!(
            DiscreteDistribution::new(vec![-1.0], vec![1.0]),
            Err(ModelError::InvalidPoint(_))
        ));
        assert!(matches!(
            DiscreteDistribution::new(vec![0.0, 1.0], vec![0.5, 0.0]),
            Err(ModelError::InvalidMass(_))
        ));
        assert!(matches!(
            DiscreteDistribution::new(vec![0.0, 1.0], vec![0.5, 0.6]),
            Err(ModelError::MassSum(_))
        ));
    }

    #[test]
    fn from_pairs_merges_and_sorts() {
        let d = DiscreteDistribution::from_pairs(&[(2.0, 0.25), (0.0, 0.5), (2.0, 0.25), (5.0, 0.0)])
            .unwrap();
        assert_eq!(d.points(), &[0.0, 2.0]);
        assert_eq!(d.masses(), &[0.5, 0.5]);
    }

    #[test]
    fn point_mass_always_samples_its_value() {
        let d = DiscreteDistribution::point_mass(3.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        assert!((0..100).all(|_| d.sample(&mut rng) == 3.0));
    }

    #[test]
    fn sample_mean_converges() {
        let d = coin();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 100_000;
        let mean = (0..n).map(|_| d.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn sampling_is_reproducible() {
        let d = DiscreteDistribution::new(vec![0.0, 1.0, 2.0], vec![0.2, 0.3, 0.5]).unwrap();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..64).map(|_| d.sample(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(11), draw(11));
    }

    #[test]
    fn json_accepts_small_deviation_and_renormalizes() {
        let d: DiscreteDistribution =
            serde_json::from_str(r#"{"points":[0,1],"masses":[0.5,0.5000005]}"#).unwrap();
        assert!((d.masses().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let bad = serde_json::from_str::<DiscreteDistribution>(
            r#"{"points":[0,1],"masses":[0.5,0.51]}"#,
        );
        assert!(bad.is_err());
    }
}
