//! ℓ-part hypergraphs: vertices (i, j) with i ∈ [ℓ] the part and
//! j ∈ 1..=s the position, edges chosen by intersection type and by the
//! residue of the position sum.

mod coefficients;
mod graph;
mod niceness;
mod occupancy;
mod simple;
mod weights;

pub use coefficients::{q_coefficients, q_coefficients_enumerated, q_polynomial_of_edge};
pub use graph::PartiteHypergraph;
pub use niceness::{niceness_check, NicenessReport};
pub use occupancy::{
    conditional_expectation, occupancy_probability, occupancy_targets, occupancy_vector_probability,
    OccupancyMode, OccupancyProbability,
};
pub use simple::{simple_construction, SimpleConstruction};
pub use weights::{abstract_degree, abstract_degree_enumerated, build_weights, WeightVector};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combinatorics::partitions;
use crate::error::{Error, Result};

/// Sorted (descending) nonzero part-intersection sizes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PartitionType(Vec<usize>);

impl PartitionType {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        PartitionType(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// |x|, the number of entries.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// x⁺: (r+1) for x = (r−1), otherwise x with two extra 1s.
    pub fn plus(&self) -> PartitionType {
        if self.0.len() == 1 {
            PartitionType(vec![self.0[0] + 2])
        } else {
            let mut v = self.0.clone();
            v.extend([1, 1]);
            PartitionType(v)
        }
    }

    /// Inverse of [`plus`](Self::plus) on admitted types of total r+1.
    pub fn minus(&self, r: usize) -> Option<PartitionType> {
        if self.total() != r + 1 {
            return None;
        }
        if self.0 == [r + 1] {
            return Some(PartitionType(vec![r - 1]));
        }
        let n = self.0.len();
        if n >= 3 && self.0[n - 1] == 1 && self.0[n - 2] == 1 {
            let y = PartitionType(self.0[..n - 2].to_vec());
            if y.0 != [r - 1] {
                return Some(y);
            }
        }
        None
    }
}

impl fmt::Display for PartitionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", inner.join(","))
    }
}

/// All partitions of n as types.
pub fn types_of_total(n: usize) -> Vec<PartitionType> {
    partitions(n).into_iter().map(PartitionType).collect()
}

/// Parameters of the construction: target order r, ℓ parts of size s and
/// density parameter γ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartiteSpec {
    pub r: usize,
    pub l: usize,
    pub s: usize,
    pub gamma: f64,
    /// Allows ℓ ≠ 4(r+1)! and γ below 10ℓ²/s.
    pub relaxed: bool,
}

impl PartiteSpec {
    pub fn new(r: usize, l: usize, s: usize, gamma: f64, relaxed: bool) -> Result<Self> {
        let spec = PartiteSpec { r, l, s, gamma, relaxed };
        spec.validate()?;
        Ok(spec)
    }

    /// ℓ = 4(r+1)!.
    pub fn strict_parts(r: usize) -> usize {
        4 * (1..=r + 1).product::<usize>()
    }

    pub fn n(&self) -> usize {
        self.l * self.s
    }

    pub fn validate(&self) -> Result<()> {
        if self.r < 2 {
            return Err(Error::InvalidParameter(format!("construction needs r >= 2 (r={})", self.r)));
        }
        if self.s < self.r + 1 {
            return Err(Error::InvalidParameter(format!("part size s={} is below r+1", self.s)));
        }
        if !(self.gamma > 0.0 && self.gamma <= 0.5) {
            return Err(Error::InvalidParameter(format!("gamma must lie in (0, 1/2], got {}", self.gamma)));
        }
        if self.relaxed {
            if self.l < self.r + 3 {
                return Err(Error::InvalidParameter(format!(
                    "relaxed mode needs l >= r+3 (l={}, r={})",
                    self.l, self.r
                )));
            }
        } else {
            let want = Self::strict_parts(self.r);
            if self.l != want {
                return Err(Error::InvalidParameter(format!(
                    "strict mode needs l = 4(r+1)! = {want} (got {})",
                    self.l
                )));
            }
            let floor = 10.0 * (self.l * self.l) as f64 / self.s as f64;
            if self.gamma < floor {
                return Err(Error::InvalidParameter(format!(
                    "strict mode needs gamma >= 10 l^2/s = {floor}"
                )));
            }
        }
        Ok(())
    }

    /// Reasons the instance sits outside the regime where the theoretical
    /// constants apply.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        let want = Self::strict_parts(self.r);
        if self.l != want {
            w.push(format!("l = {} differs from 4(r+1)! = {want}", self.l));
        }
        let floor = 10.0 * (self.l * self.l) as f64 / self.s as f64;
        if self.gamma < floor {
            w.push(format!("gamma = {} is below 10 l^2/s = {floor:.3}", self.gamma));
        }
        w
    }

    pub fn vertex(&self, part: usize, j: usize) -> u32 {
        (part * self.s + j - 1) as u32
    }

    /// (part, j) of a vertex index, j in 1..=s.
    pub fn coords(&self, v: u32) -> (usize, usize) {
        let v = v as usize;
        (v / self.s, v % self.s + 1)
    }
}

/// H^α for the given weights, generated on demand.
pub fn build_partite(weights: &WeightVector) -> PartiteHypergraph {
    PartiteHypergraph::new(weights.clone())
}

/// Type of a vertex set with parts of size `s`.
pub fn type_of(set: &[u32], s: usize) -> PartitionType {
    let mut counts = std::collections::BTreeMap::new();
    for &v in set {
        *counts.entry(v as usize / s).or_insert(0usize) += 1;
    }
    PartitionType::new(counts.into_values().collect())
}

/// ⌊α·s⌋, the number of admitted residues.
pub fn window(alpha: f64, s: usize) -> usize {
    ((alpha * s as f64).floor().max(0.0) as usize).min(s)
}

/// True when Σ j ≡ 1..=⌊αs⌋ (mod s).
pub fn alpha_good(js: &[usize], alpha: f64, s: usize) -> bool {
    residue_good(js.iter().sum::<usize>() % s, window(alpha, s), s)
}

/// Whether residue `res` (in 0..s) lies in {1, …, w} read mod s.
pub(crate) fn residue_good(res: usize, w: usize, s: usize) -> bool {
    if res == 0 {
        w == s
    } else {
        res <= w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn types() {
        let spec = PartiteSpec::new(3, 12, 10, 0.25, true).unwrap();
        let e = [spec.vertex(0, 1), spec.vertex(0, 2), spec.vertex(3, 5)];
        assert_eq!(type_of(&e, 10).parts(), &[2, 1]);
        let inside: Vec<u32> = (1..=4).map(|j| spec.vertex(2, j)).collect();
        assert_eq!(type_of(&inside, 10).parts(), &[4]);
        let spread: Vec<u32> = (0..4).map(|i| spec.vertex(i, 1)).collect();
        assert_eq!(type_of(&spread, 10).parts(), &[1, 1, 1, 1]);
        assert_eq!(spec.coords(spec.vertex(3, 5)), (3, 5));
    }

    #[test]
    fn plus_and_minus() {
        let r = 3;
        for x in types_of_total(r - 1) {
            assert_eq!(x.plus().minus(r), Some(x.clone()));
        }
        assert_eq!(PartitionType::new(vec![2]).plus().parts(), &[4]);
        assert_eq!(PartitionType::new(vec![1, 1]).plus().parts(), &[1, 1, 1, 1]);
        assert_eq!(PartitionType::new(vec![2, 2]).minus(3), None);
        assert_eq!(PartitionType::new(vec![2, 1, 1]).minus(3), None);
    }

    #[test]
    fn goodness() {
        assert!(alpha_good(&[1, 1, 1], 0.3, 10));
        assert!(!alpha_good(&[5, 5, 10], 0.3, 10));
        assert!(!alpha_good(&[5, 5, 10], 0.95, 10));
        assert!(alpha_good(&[5, 5, 9], 0.95, 10));
        assert!(alpha_good(&[5, 5, 10], 1.0, 10));
    }

    #[test]
    fn spec_modes() {
        assert!(PartiteSpec::new(2, 24, 40, 0.25, false).is_err());
        assert!(PartiteSpec::new(2, 24, 40, 0.25, true).is_ok());
        assert!(PartiteSpec::new(2, 24, 23_040, 0.25, false).is_ok());
        assert!(PartiteSpec::new(3, 5, 40, 0.25, true).is_err());
        assert!(PartiteSpec::new(2, 24, 40, 0.6, true).is_err());
        assert_eq!(PartiteSpec::strict_parts(3), 96);
        assert_eq!(PartiteSpec::new(3, 12, 40, 0.25, true).unwrap().warnings().len(), 2);
    }
}
