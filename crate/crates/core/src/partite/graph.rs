use super::weights::WeightVector;
use super::{residue_good, type_of, PartiteSpec, PartitionType};
use crate::combinatorics::{binom, for_each_subset};
use crate::hypergraph::{EdgeSource, Hypergraph};

/// Completions enumerated directly by `degree_of` before it falls back to
/// scanning the edges.
const COMPLETION_BUDGET: u128 = 5_000_000;

/// The (r+1)-uniform hypergraph H^α = ∪_x H^{α_x}_{x⁺}, generated on
/// demand from its weights.
#[derive(Clone, Debug)]
pub struct PartiteHypergraph {
    weights: WeightVector,
    active: Vec<(PartitionType, usize)>,
    edge_count: u64,
}

impl PartiteHypergraph {
    pub fn new(weights: WeightVector) -> Self {
        let s = weights.spec.s;
        let l = weights.spec.l;
        let active = weights.active();
        let edge_count = active
            .iter()
            .map(|(t, w)| placements(t, l) * window_count(t.parts(), *w, s))
            .sum::<u128>() as u64;
        PartiteHypergraph {
            weights,
            active,
            edge_count,
        }
    }

    pub fn spec(&self) -> &PartiteSpec {
        &self.weights.spec
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    /// Edge types x⁺ with a nonempty window.
    pub fn active_types(&self) -> &[(PartitionType, usize)] {
        &self.active
    }

    pub fn materialize(&self) -> Hypergraph {
        Hypergraph::materialize(self)
    }
}

/// Number of ways to place the entries of `t` on distinct parts among `l`,
/// equal entries being interchangeable.
pub(crate) fn placements(t: &PartitionType, l: usize) -> u128 {
    let q = t.len();
    if q > l {
        return 0;
    }
    let ordered: u128 = (0..q).map(|i| (l - i) as u128).product();
    ordered / symmetry(t.parts())
}

/// Π over distinct values of (multiplicity)!.
pub(crate) fn symmetry(parts: &[usize]) -> u128 {
    let mut out = 1u128;
    let mut i = 0;
    while i < parts.len() {
        let mut j = i;
        while j < parts.len() && parts[j] == parts[i] {
            j += 1;
        }
        out *= (1..=(j - i) as u128).product::<u128>();
        i = j;
    }
    out
}

/// g[c][ρ]: c-subsets of {1..s} with sum ≡ ρ (mod s).
pub(crate) fn subset_sum_table(max_c: usize, s: usize) -> Vec<Vec<u128>> {
    let mut g = vec![vec![0u128; s]; max_c + 1];
    g[0][0] = 1;
    for j in 1..=s {
        for c in (1..=max_c).rev() {
            for rho in 0..s {
                let add = g[c - 1][rho];
                if add > 0 {
                    g[c][(rho + j) % s] += add;
                }
            }
        }
    }
    g
}

/// Tuples of subsets of sizes `sizes`, one per (distinct) part, whose
/// position sum lies in the window {1..w} mod s.
pub(crate) fn window_count(sizes: &[usize], w: usize, s: usize) -> u128 {
    let max_c = sizes.iter().copied().max().unwrap_or(0);
    let g = subset_sum_table(max_c, s);
    let mut acc = vec![0u128; s];
    acc[0] = 1;
    for &c in sizes {
        let mut next = vec![0u128; s];
        for (a, &x) in acc.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (b, &y) in g[c].iter().enumerate() {
                next[(a + b) % s] += x * y;
            }
        }
        acc = next;
    }
    (0..s).filter(|&rho| residue_good(rho, w, s)).map(|rho| acc[rho]).sum()
}

impl PartiteHypergraph {
    fn emit_type(&self, t: &PartitionType, w: usize, f: &mut dyn FnMut(&[u32])) {
        let spec = &self.weights.spec;
        let sizes = t.parts();
        let mut parts = Vec::with_capacity(sizes.len());
        let mut buf = Vec::with_capacity(spec.r + 1);
        self.assign_parts(sizes, &mut parts, &mut |parts| {
            self.fill(sizes, parts, 0, 0, w, &mut buf, f);
        });
    }

    /// Distinct parts for each entry; equal entries take increasing parts.
    fn assign_parts(&self, sizes: &[usize], parts: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        let i = parts.len();
        if i == sizes.len() {
            f(parts);
            return;
        }
        let start = if i > 0 && sizes[i] == sizes[i - 1] { parts[i - 1] + 1 } else { 0 };
        for p in start..self.weights.spec.l {
            if parts.contains(&p) {
                continue;
            }
            parts.push(p);
            self.assign_parts(sizes, parts, f);
            parts.pop();
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn fill(
        &self,
        sizes: &[usize],
        parts: &[usize],
        i: usize,
        sum: usize,
        w: usize,
        buf: &mut Vec<u32>,
        f: &mut dyn FnMut(&[u32]),
    ) {
        let s = self.weights.spec.s;
        if i == sizes.len() {
            if residue_good(sum % s, w, s) {
                let mut e = buf.clone();
                e.sort_unstable();
                f(&e);
            }
            return;
        }
        let base = (parts[i] * s) as u32;
        for_each_subset(s, sizes[i], |sub| {
            let len = buf.len();
            buf.extend(sub.iter().map(|&j| base + j as u32));
            let add: usize = sub.iter().map(|&j| j + 1).sum();
            self.fill(sizes, parts, i + 1, sum + add, w, buf, f);
            buf.truncate(len);
        });
    }
}

impl EdgeSource for PartiteHypergraph {
    fn vertex_count(&self) -> usize {
        self.weights.spec.n()
    }

    fn uniformity(&self) -> usize {
        self.weights.spec.r + 1
    }

    fn edge_count(&self) -> u64 {
        self.edge_count
    }

    fn for_each_edge(&self, f: &mut dyn FnMut(&[u32])) {
        for (t, w) in &self.active {
            self.emit_type(t, *w, f);
        }
    }

    fn multiplicity(&self, set: &[u32]) -> u64 {
        let spec = &self.weights.spec;
        if set.len() != spec.r + 1
            || set.windows(2).any(|p| p[0] >= p[1])
            || set.iter().any(|&v| v as usize >= spec.n())
        {
            return 0;
        }
        let w = self.weights.window_of_edge_type(&type_of(set, spec.s));
        let sum: usize = set.iter().map(|&v| v as usize % spec.s + 1).sum();
        residue_good(sum % spec.s, w, spec.s) as u64
    }

    fn degree_of(&self, set: &[u32]) -> u64 {
        let k = self.weights.spec.r + 1;
        let n = self.vertex_count();
        if set.len() > k {
            return 0;
        }
        let rest: Vec<u32> = (0..n as u32).filter(|v| set.binary_search(v).is_err()).collect();
        let need = k - set.len();
        if binom(rest.len() as u64, need as u64) <= COMPLETION_BUDGET {
            let mut count = 0;
            let mut e = Vec::with_capacity(k);
            for_each_subset(rest.len(), need, |sub| {
                e.clear();
                e.extend_from_slice(set);
                e.extend(sub.iter().map(|&i| rest[i]));
                e.sort_unstable();
                count += self.multiplicity(&e);
            });
            count
        } else {
            let mut count = 0;
            self.for_each_edge(&mut |e| {
                count += crate::hypergraph::contains_sorted(e, set) as u64;
            });
            count
        }
    }
}
