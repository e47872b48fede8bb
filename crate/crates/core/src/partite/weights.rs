use serde::{Deserialize, Serialize};

use super::{residue_good, types_of_total, window, PartiteSpec, PartitionType};
use crate::combinatorics::binom;
use crate::error::{Error, Result};

/// One weight α_x together with its residue window ⌊α_x s⌋.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightEntry {
    #[serde(rename = "type")]
    pub ty: PartitionType,
    pub alpha: f64,
    pub window: usize,
    /// γ_x for types with three or more entries: the share of γs² left
    /// after the weights of shorter types, divided by s².
    pub gamma_x: Option<f64>,
}

/// Weights α_x for every x ⊢ r−1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    pub spec: PartiteSpec,
    pub entries: Vec<WeightEntry>,
}

impl WeightVector {
    /// Weights given directly; windows are recomputed from α.
    pub fn from_alphas(spec: &PartiteSpec, alphas: &[(PartitionType, f64)]) -> Result<Self> {
        spec.validate()?;
        let mut entries = Vec::new();
        for x in types_of_total(spec.r - 1) {
            let alpha = alphas.iter().find(|(y, _)| *y == x).map_or(0.0, |p| p.1);
            if !(0.0..=1.0).contains(&alpha) {
                return Err(Error::InvalidParameter(format!("weight of {x} must lie in [0,1], got {alpha}")));
            }
            entries.push(WeightEntry {
                window: window(alpha, spec.s),
                ty: x,
                alpha,
                gamma_x: None,
            });
        }
        Ok(WeightVector { spec: spec.clone(), entries })
    }

    pub fn alpha(&self, x: &PartitionType) -> f64 {
        self.entries.iter().find(|e| &e.ty == x).map_or(0.0, |e| e.alpha)
    }

    /// Residue window of the type whose plus-type is `t`; 0 when `t` is not
    /// of the form x⁺.
    pub fn window_of_edge_type(&self, t: &PartitionType) -> usize {
        match t.minus(self.spec.r) {
            Some(x) => self.entries.iter().find(|e| e.ty == x).map_or(0, |e| e.window),
            None => 0,
        }
    }

    /// Edge types x⁺ with a nonempty window.
    pub fn active(&self) -> Vec<(PartitionType, usize)> {
        self.entries
            .iter()
            .filter(|e| e.window > 0)
            .map(|e| (e.ty.plus(), e.window))
            .collect()
    }

    fn set(&mut self, x: &PartitionType, alpha: f64, gamma_x: Option<f64>) {
        let s = self.spec.s;
        let e = self.entries.iter_mut().find(|e| &e.ty == x).unwrap();
        e.alpha = alpha;
        e.window = window(alpha, s);
        e.gamma_x = gamma_x;
    }
}

/// Positions of the canonical set A⁰_x: part i holds positions 1..=x_i.
fn base_sum(x: &PartitionType) -> usize {
    x.parts().iter().map(|&c| c * (c + 1) / 2).sum()
}

/// d^α_x: unordered pairs {u, u′} (u = u′ allowed) of vertices such that
/// the multiset A⁰_x + {u, u′} is an edge of the weighted construction.
///
/// Placing u and u′ in parts p ≠ p′ gives s·w good position pairs, because
/// for each position of u exactly w positions of u′ land in the window. In
/// a single part the ordered count s·w plus the diagonal is halved. Parts
/// outside A⁰_x are interchangeable.
pub fn abstract_degree(x: &PartitionType, weights: &WeightVector) -> u128 {
    let spec = &weights.spec;
    let (s, l) = (spec.s, spec.l);
    let xs = x.parts();
    let a = xs.len();
    let fresh = (l - a) as u128;
    let s0 = base_sum(x);
    let w_of = |counts: Vec<usize>| weights.window_of_edge_type(&PartitionType::new(counts)) as u128;
    let with = |adds: &[(usize, usize)], extra: &[usize]| {
        let mut c = xs.to_vec();
        for &(i, d) in adds {
            c[i] += d;
        }
        c.extend_from_slice(extra);
        c
    };
    let diag = |w: u128| -> u128 {
        (1..=s)
            .filter(|&j| residue_good((s0 + 2 * j) % s, w as usize, s))
            .count() as u128
    };
    let s128 = s as u128;
    let same_part = |w: u128| (s128 * w + diag(w)) / 2;

    let mut total = 0u128;
    for i in 0..a {
        total += same_part(w_of(with(&[(i, 2)], &[])));
        for i2 in i + 1..a {
            total += s128 * w_of(with(&[(i, 1), (i2, 1)], &[]));
        }
        total += fresh * s128 * w_of(with(&[(i, 1)], &[1]));
    }
    total += fresh * same_part(w_of(with(&[], &[2])));
    total += fresh * fresh.saturating_sub(1) / 2 * s128 * w_of(with(&[], &[1, 1]));
    total
}

/// d^α_x by scanning every pair of vertices; a reference for
/// [`abstract_degree`].
pub fn abstract_degree_enumerated(x: &PartitionType, weights: &WeightVector) -> u128 {
    let spec = &weights.spec;
    let (s, n) = (spec.s, spec.n());
    let s0 = base_sum(x);
    let mut total = 0u128;
    for u in 0..n {
        for u2 in u..n {
            let mut counts = x.parts().to_vec();
            counts.resize(spec.l, 0);
            counts[u / s] += 1;
            counts[u2 / s] += 1;
            let w = weights.window_of_edge_type(&PartitionType::new(counts));
            let sum = s0 + u % s + 1 + u2 % s + 1;
            total += residue_good(sum % s, w, s) as u128;
        }
    }
    total
}

/// α_{(r−1)} = 2γ; α_x = γ/C(ℓ−2, 2) for |x| = 2; for |x| ≥ 3 the weight
/// fills what the shorter types leave of γs²: α_x = γ_x / C(ℓ−|x|, 2) with
/// γ_x s² = γs² − d_x, d_x the abstract degree with all types of length
/// ≥ |x| switched off.
pub fn build_weights(spec: &PartiteSpec) -> Result<WeightVector> {
    let mut wv = WeightVector::from_alphas(spec, &[])?;
    let (s, l, gamma) = (spec.s as f64, spec.l as u64, spec.gamma);
    let types = types_of_total(spec.r - 1);
    let longest = types.iter().map(|x| x.len()).max().unwrap_or(0);
    for len in 1..=longest {
        let batch: Vec<PartitionType> = types.iter().filter(|x| x.len() == len).cloned().collect();
        let mut assigned = Vec::new();
        for x in &batch {
            let (alpha, gx) = match len {
                1 => (2.0 * gamma, None),
                2 => (gamma / binom(l - 2, 2) as f64, None),
                _ => {
                    let d = abstract_degree(x, &wv) as f64;
                    let residual = gamma * s * s - d;
                    if residual < 0.0 {
                        return Err(Error::NegativeResidual {
                            partition: x.to_string(),
                            residual,
                        });
                    }
                    let gx = residual / (s * s);
                    (gx / binom(l - len as u64, 2) as f64, Some(gx))
                }
            };
            assigned.push((x.clone(), alpha, gx));
        }
        // a batch only sees the weights of strictly shorter types
        for (x, alpha, gx) in assigned {
            wv.set(&x, alpha, gx);
        }
    }
    Ok(wv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(r: usize, l: usize, s: usize, gamma: f64) -> PartiteSpec {
        PartiteSpec::new(r, l, s, gamma, true).unwrap()
    }

    #[test]
    fn first_weights() {
        let sp = PartiteSpec::new(3, 96, 1_000_000, 0.1, false).unwrap();
        let w = build_weights(&sp).unwrap();
        assert_eq!(w.alpha(&PartitionType::new(vec![2])), 0.2);
        let a11 = w.alpha(&PartitionType::new(vec![1, 1]));
        assert!((a11 - 0.1 / 4371.0).abs() < 1e-18);
    }

    #[test]
    fn closed_form_matches_enumeration() {
        for (r, l, s, g) in [(2, 5, 11, 0.3), (3, 6, 13, 0.4), (4, 7, 9, 0.5), (4, 8, 10, 0.45), (5, 8, 8, 0.5)] {
            let sp = spec(r, l, s, g);
            let mut alphas = Vec::new();
            // arbitrary weights so every type has a window
            for (i, x) in types_of_total(r - 1).into_iter().enumerate() {
                alphas.push((x, 0.15 + 0.1 * (i % 5) as f64));
            }
            let w = WeightVector::from_alphas(&sp, &alphas).unwrap();
            for x in types_of_total(r - 1) {
                assert_eq!(abstract_degree(&x, &w), abstract_degree_enumerated(&x, &w), "r={r} x={x}");
            }
            let built = build_weights(&sp);
            if let Ok(b) = built {
                for x in types_of_total(r - 1) {
                    assert_eq!(abstract_degree(&x, &b), abstract_degree_enumerated(&x, &b));
                }
            }
        }
    }

    #[test]
    fn top_type_degree_is_half_window_times_s() {
        // x = (r−1): only u, u′ inside its own part complete an edge
        let sp = spec(3, 12, 40, 0.25);
        let w = build_weights(&sp).unwrap();
        let x = PartitionType::new(vec![2]);
        let win = (2.0 * 0.25 * 40.0) as u128;
        let d = abstract_degree(&x, &w) as i128;
        assert!((2 * d - (40 * win) as i128).abs() <= 40);
    }

    #[test]
    fn pair_type_degree() {
        // |x| = 2: C(ℓ−2, 2)·s·⌊α s⌋ within 4s
        let sp = spec(3, 8, 200, 0.5);
        let w = build_weights(&sp).unwrap();
        let x = PartitionType::new(vec![1, 1]);
        let win = w.entries.iter().find(|e| e.ty == x).unwrap().window as i128;
        assert!(win > 0);
        let d = abstract_degree(&x, &w) as i128;
        assert!((d - 15 * 200 * win).abs() <= 4 * 200);
    }

    #[test]
    fn residuals_fill_gamma() {
        let sp = spec(4, 20, 400, 0.5);
        let w = build_weights(&sp).unwrap();
        let x = PartitionType::new(vec![1, 1, 1]);
        let e = w.entries.iter().find(|e| e.ty == x).unwrap();
        let gx = e.gamma_x.unwrap();
        assert!(gx > 0.0 && gx <= 0.5);
        assert!((e.alpha - gx / 136.0).abs() < 1e-15);
        // γ_x s² + d_x = γ s²
        let d = abstract_degree(&x, &WeightVector { entries: w.entries.iter().map(|e| WeightEntry { alpha: if e.ty == x { 0.0 } else { e.alpha }, window: if e.ty == x { 0 } else { e.window }, ..e.clone() }).collect(), spec: sp.clone() });
        assert!((gx * 160_000.0 + d as f64 - 80_000.0).abs() < 1e-6);
    }

    #[test]
    fn few_parts_overshoot() {
        // with ℓ = 8 the (2,1) weight alone exceeds γs² through (1,1,1)
        let sp = spec(4, 8, 60, 0.5);
        assert!(matches!(build_weights(&sp), Err(Error::NegativeResidual { .. })));
    }
}
