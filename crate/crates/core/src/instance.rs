//! Hiring instances: independent candidate distributions plus arrival orders.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distribution::DiscreteDistribution;
use crate::error::ModelError;

/// `n` independent candidates with finite-support value distributions.
///
/// The combined support is every value any candidate can realize, sorted
/// ascending; a realizable 0 is a support point like any other.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct Instance {
    dists: Vec<DiscreteDistribution>,
    support: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    dists: Vec<DiscreteDistribution>,
}

impl TryFrom<RawInstance> for Instance {
    type Error = ModelError;
    fn try_from(raw: RawInstance) -> Result<Self, ModelError> {
        Instance::new(raw.dists)
    }
}

impl From<Instance> for RawInstance {
    fn from(i: Instance) -> Self {
        RawInstance { dists: i.dists }
    }
}

impl Instance {
    pub fn new(dists: Vec<DiscreteDistribution>) -> Result<Self, ModelError> {
        if dists.is_empty() {
            return Err(ModelError::NoCandidates);
        }
        let support = combined_support(&dists);
        Ok(Self { dists, support })
    }

    /// `n` copies of one distribution.
    pub fn iid(dist: DiscreteDistribution, n: usize) -> Result<Self, ModelError> {
        Self::new(vec![dist; n])
    }

    pub fn n(&self) -> usize {
        self.dists.len()
    }

    pub fn dists(&self) -> &[DiscreteDistribution] {
        &self.dists
    }

    pub fn dist(&self, i: usize) -> &DiscreteDistribution {
        &self.dists[i]
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    /// Position of `x` in the combined support.
    pub fn support_index(&self, x: f64) -> Option<usize> {
        self.support.binary_search_by(|p| p.total_cmp(&x)).ok()
    }

    /// `f_i(x)` for every candidate `i` and every support point, row per candidate.
    pub fn mass_table(&self) -> Vec<Vec<f64>> {
        self.dists
            .iter()
            .map(|d| self.support.iter().map(|&x| d.pmf(x)).collect())
            .collect()
    }

    /// True when every candidate puts positive mass on every support point.
    pub fn has_common_support(&self) -> bool {
        self.dists.iter().all(|d| d.len() == self.support.len())
    }

    /// Exact `E[max_i X_i]` from the product of CDFs.
    pub fn expected_max(&self) -> f64 {
        let mut below = 0.0;
        let mut total = 0.0;
        for &x in &self.support {
            let at_or_below: f64 = self.dists.iter().map(|d| d.cdf(x)).product();
            total += x * (at_or_below - below);
            below = at_or_below;
        }
        total
    }

    /// `Pr[max_i X_i >= x]`.
    pub fn max_tail(&self, x: f64) -> f64 {
        1.0 - self.dists.iter().map(|d| d.cdf_below(x)).product::<f64>()
    }

    /// `Σ_i E[X_i]`.
    pub fn sum_of_means(&self) -> f64 {
        self.dists.iter().map(DiscreteDistribution::mean).sum()
    }

    /// Number of joint value profiles, as a float to avoid overflow.
    pub fn profile_count(&self) -> f64 {
        self.dists.iter().map(|d| d.len() as f64).product()
    }
}

fn combined_support(dists: &[DiscreteDistribution]) -> Vec<f64> {
    let mut s: Vec<f64> = dists.iter().flat_map(|d| d.points().iter().copied()).collect();
    s.sort_by(f64::total_cmp);
    s.dedup();
    s
}

/// A permutation of candidates: `perm[t]` arrives at step `t` (0-based).
///
/// Text and JSON forms are 1-based, e.g. `"2,1"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrivalOrder(Vec<usize>);

impl ArrivalOrder {
    pub fn new(perm: Vec<usize>) -> Result<Self, ModelError> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &i in &perm {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(ModelError::InvalidOrder(
                    perm.iter().map(|i| i + 1).collect(),
                    n,
                ));
            }
        }
        if n == 0 {
            return Err(ModelError::NoCandidates);
        }
        Ok(Self(perm))
    }

    pub fn from_one_based(perm: &[usize]) -> Result<Self, ModelError> {
        if perm.contains(&0) {
            return Err(ModelError::InvalidOrder(perm.to_vec(), perm.len()));
        }
        Self::new(perm.iter().map(|i| i - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn reversed(n: usize) -> Self {
        Self((0..n).rev().collect())
    }

    /// All `n!` orders in lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        let mut perm: Vec<usize> = (0..n).collect();
        let mut out = vec![Self(perm.clone())];
        while let Some(k) = (0..n.saturating_sub(1)).rev().find(|&k| perm[k] < perm[k + 1]) {
            let l = (k + 1..n).rev().find(|&l| perm[k] < perm[l]).unwrap();
            perm.swap(k, l);
            perm[k + 1..].reverse();
            out.push(Self(perm.clone()));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Candidate arriving at step `t`.
    pub fn at(&self, t: usize) -> usize {
        self.0[t]
    }

    /// Step at which candidate `i` arrives.
    pub fn position(&self, i: usize) -> usize {
        self.0.iter().position(|&c| c == i).expect("candidate in order")
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn check_for(&self, instance: &Instance) -> Result<(), ModelError> {
        if self.len() == instance.n() {
            Ok(())
        } else {
            Err(ModelError::InvalidOrder(self.one_based(), instance.n()))
        }
    }
}

impl fmt::Display for ArrivalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for ArrivalOrder {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, ModelError> {
        let perm = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| ModelError::Parameter(format!("bad order entry '{p}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_one_based(&perm)
    }
}

impl Serialize for ArrivalOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ArrivalOrder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Self::from_one_based(&v).map_err(serde::de::Error::custom)
    }
}

/// On-disk instance: `{"dists": [...], "order": [..]}` with an optional 1-based order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    #[serde(flatten)]
    pub instance: Instance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<ArrivalOrder>,
}

impl InstanceFile {
    pub fn parse(json: &str) -> Result<Self, serde_json::Error> {
        let file: InstanceFile = serde_json::from_str(json)?;
        if let Some(order) = &file.order {
            order
                .check_for(&file.instance)
                .map_err(serde::de::Error::custom)?;
        }
        Ok(file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coin() -> DiscreteDistribution {
        DiscreteDistribution::new(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap()
    }

    fn tight(eps: f64) -> Instance {
        Instance::new(vec![
            DiscreteDistribution::point_mass(1.0).unwrap(),
            DiscreteDistribution::new(vec![0.0, 1.0 / eps], vec![1.0 - eps, eps]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn combined_support_examples() {
        assert_eq!(tight(0.5).support(), &[0.0, 1.0, 2.0]);
        let single = Instance::new(vec![DiscreteDistribution::point_mass(5.0).unwrap()]).unwrap();
        assert_eq!(single.support(), &[5.0]);
        let two = DiscreteDistribution::new(vec![1.0, 2.0], vec![0.5, 0.5]).unwrap();
        assert_eq!(Instance::iid(two, 2).unwrap().support(), &[1.0, 2.0]);
    }

    #[test]
    fn combined_support_ignores_candidate_order() {
        let a = tight(0.25);
        let b = Instance::new(a.dists().iter().rev().cloned().collect()).unwrap();
        assert_eq!(a.support(), b.support());
    }

    #[test]
    fn expected_max_examples() {
        assert!((tight(0.1).expected_max() - 1.9).abs() < 1e-12);
        let pm = Instance::new(vec![DiscreteDistribution::point_mass(4.5).unwrap()]).unwrap();
        assert_eq!(pm.expected_max(), 4.5);
        // 8 equally likely outcomes, only (0,0,0) has max 0.
        assert!((Instance::iid(coin(), 3).unwrap().expected_max() - 7.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn sum_of_means_examples() {
        let i = Instance::new(vec![
            DiscreteDistribution::point_mass(1.0).unwrap(),
            DiscreteDistribution::point_mass(2.0).unwrap(),
        ])
        .unwrap();
        assert_eq!(i.sum_of_means(), 3.0);
        let zero = Instance::new(vec![DiscreteDistribution::point_mass(0.0).unwrap()]).unwrap();
        assert_eq!(zero.sum_of_means(), 0.0);
    }

    #[test]
    fn orders_parse_and_enumerate() {
        let o: ArrivalOrder = "2,1,3".parse().unwrap();
        assert_eq!(o.as_slice(), &[1, 0, 2]);
        assert_eq!(o.to_string(), "2,1,3");
        assert_eq!(o.position(0), 1);
        assert!("1,1".parse::<ArrivalOrder>().is_err());
        assert!("0,1".parse::<ArrivalOrder>().is_err());
        let all = ArrivalOrder::all(4);
        assert_eq!(all.len(), 24);
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 24);
        assert_eq!(ArrivalOrder::all(1).len(), 1);
    }

    #[test]
    fn instance_file_round_trip() {
        let json = r#"{"dists":[{"points":[1],"masses":[1]},{"points":[0,2],"masses":[0.5,0.5]}],"order":[2,1]}"#;
        let file = InstanceFile::parse(json).unwrap();
        assert_eq!(file.order.as_ref().unwrap().as_slice(), &[1, 0]);
        let again = InstanceFile::parse(&serde_json::to_string(&file).unwrap()).unwrap();
        assert_eq!(file, again);
        let bad = r#"{"dists":[{"points":[1],"masses":[1]}],"order":[1,2]}"#;
        assert!(InstanceFile::parse(bad).is_err());
    }
}
