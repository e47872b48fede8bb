//! k-uniform hypergraphs on `{0..N-1}`: induced and partial edge counts,
//! set degrees, regularity statistics and vertex links.
//!
//! Edges form a parametrized family: the same vertex set may appear more
//! than once and every occurrence counts.

use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::{binom, binom_big, colex_rank, falling, for_each_subset};
use crate::error::{Error, Result};

/// Default number of r-sets enumerated exactly before falling back to sampling.
pub const DEFAULT_SET_BUDGET: u64 = 10_000_000;

/// Anything that can enumerate a k-uniform edge family and answer membership
/// and degree queries without necessarily storing the edges.
pub trait EdgeSource: Sync {
    fn vertex_count(&self) -> usize;
    fn uniformity(&self) -> usize;
    fn edge_count(&self) -> u64;
    /// Calls `f` once per edge (with multiplicity); each slice is sorted.
    fn for_each_edge(&self, f: &mut dyn FnMut(&[u32]));
    /// Number of edges whose vertex set equals `set` (sorted, distinct).
    fn multiplicity(&self, set: &[u32]) -> u64;
    /// Number of edges containing `set` (sorted, distinct).
    fn degree_of(&self, set: &[u32]) -> u64;
}

/// Explicit k-uniform hypergraph with per-vertex incidence lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<u32>,
    inc_offsets: Vec<usize>,
    incidence: Vec<u32>,
}

impl Hypergraph {
    /// Builds from a list of edges; each edge is sorted, and must hold `k`
    /// distinct vertices below `n`.
    pub fn new<E: AsRef<[u32]>>(n: usize, k: usize, edges: &[E]) -> Result<Self> {
        let mut flat = Vec::with_capacity(edges.len() * k);
        for (index, e) in edges.iter().enumerate() {
            let e = e.as_ref();
            if e.len() != k {
                return Err(Error::InvalidEdge {
                    index,
                    reason: format!("has {} vertices, expected {k}", e.len()),
                });
            }
            let mut sorted = e.to_vec();
            sorted.sort_unstable();
            if let Some(&v) = sorted.iter().find(|&&v| v as usize >= n) {
                return Err(Error::VertexOutOfRange { vertex: v as usize, n });
            }
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidEdge {
                    index,
                    reason: "repeated vertex".into(),
                });
            }
            flat.extend_from_slice(&sorted);
        }
        Ok(Self::from_sorted_flat(n, k, flat))
    }

    /// Trusted constructor: `flat` holds sorted, valid edges back to back.
    pub(crate) fn from_sorted_flat(n: usize, k: usize, edges: Vec<u32>) -> Self {
        let h = if k == 0 { 0 } else { edges.len() / k };
        let mut counts = vec![0usize; n + 1];
        for &v in &edges {
            counts[v as usize + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut incidence = vec![0u32; edges.len()];
        for e in 0..h {
            for &v in &edges[e * k..(e + 1) * k] {
                incidence[fill[v as usize]] = e as u32;
                fill[v as usize] += 1;
            }
        }
        Hypergraph {
            n,
            k,
            edges,
            inc_offsets: counts,
            incidence,
        }
    }

    pub fn empty(n: usize, k: usize) -> Self {
        Self::from_sorted_flat(n, k, Vec::new())
    }

    /// Stores every edge of a generator-backed family explicitly.
    pub fn materialize(source: &dyn EdgeSource) -> Self {
        let k = source.uniformity();
        let mut flat = Vec::with_capacity(source.edge_count() as usize * k);
        source.for_each_edge(&mut |e| flat.extend_from_slice(e));
        Self::from_sorted_flat(source.vertex_count(), k, flat)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn uniformity(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> u64 {
        if self.k == 0 {
            0
        } else {
            (self.edges.len() / self.k) as u64
        }
    }

    pub fn edge(&self, index: usize) -> &[u32] {
        &self.edges[index * self.k..(index + 1) * self.k]
    }

    pub fn edges(&self) -> impl Iterator<Item = &[u32]> + '_ {
        (0..self.edge_count() as usize).map(move |i| self.edge(i))
    }

    /// Indices of the edges through `v`.
    pub fn incident(&self, v: usize) -> &[u32] {
        &self.incidence[self.inc_offsets[v]..self.inc_offsets[v + 1]]
    }

    /// Vertex degree d(v), the number of edges through `v`.
    pub fn vertex_degree(&self, v: usize) -> u64 {
        (self.inc_offsets[v + 1] - self.inc_offsets[v]) as u64
    }

    fn membership_mask(&self, set: &[u32]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.n];
        for &v in set {
            if v as usize >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: v as usize,
                    n: self.n,
                });
            }
            mask[v as usize] = true;
        }
        Ok(mask)
    }

    /// N(B): number of edges entirely inside `set`.
    pub fn count_induced(&self, set: &[u32]) -> Result<u64> {
        let mask = self.membership_mask(set)?;
        Ok(self
            .edges()
            .filter(|e| e.iter().all(|&v| mask[v as usize]))
            .count() as u64)
    }

    /// N_j(B) = Σ_f C(|f ∩ B|, j).
    pub fn count_partial(&self, set: &[u32], j: usize) -> Result<u64> {
        if j > self.k {
            return Err(Error::OutOfRange {
                what: "j",
                value: j,
                lo: 0,
                hi: self.k,
            });
        }
        let mask = self.membership_mask(set)?;
        Ok(self
            .edges()
            .map(|e| {
                let inside = e.iter().filter(|&&v| mask[v as usize]).count();
                binom(inside as u64, j as u64) as u64
            })
            .sum())
    }

    /// Number of edges containing `set`.
    pub fn degree(&self, set: &[u32]) -> Result<u64> {
        if set.len() > self.k {
            return Err(Error::SetTooLarge {
                size: set.len(),
                k: self.k,
            });
        }
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&v) = sorted.iter().find(|&&v| v as usize >= self.n) {
            return Err(Error::VertexOutOfRange {
                vertex: v as usize,
                n: self.n,
            });
        }
        Ok(self.degree_sorted(&sorted))
    }

    fn degree_sorted(&self, set: &[u32]) -> u64 {
        if set.is_empty() {
            return self.edge_count();
        }
        let pivot = *set
            .iter()
            .min_by_key(|&&v| self.vertex_degree(v as usize))
            .unwrap();
        self.incident(pivot as usize)
            .iter()
            .filter(|&&e| contains_sorted(self.edge(e as usize), set))
            .count() as u64
    }

    /// Degree statistics of r-sets. Exact when C(N, r) fits the budget (or
    /// `mode` forces it), otherwise estimated from seeded random r-sets.
    pub fn regularity_report(&self, r: usize, mode: RegularityMode) -> Result<RegularityReport> {
        if r > self.k {
            return Err(Error::OutOfRange {
                what: "r",
                value: r,
                lo: 0,
                hi: self.k,
            });
        }
        let total = binom_big(self.n as u64, r as u64);
        let avg = if total.is_zero() {
            BigRational::zero()
        } else {
            BigRational::new(
                BigInt::from(self.edge_count()) * binom_big(self.k as u64, r as u64),
                total.clone(),
            )
        };
        let n_sets: u128 = total.to_string().parse().unwrap_or(u128::MAX);
        let (budget, samples, seed, exact_only) = match mode {
            RegularityMode::Exact { budget } => (budget, 0, 0, true),
            RegularityMode::Auto {
                budget,
                samples,
                seed,
            } => (budget, samples, seed, false),
            RegularityMode::Sampled { samples, seed } => (0, samples, seed, false),
        };
        let exact = n_sets <= budget as u128;
        if !exact && exact_only {
            return Err(Error::BudgetExceeded {
                needed: n_sets,
                budget: budget as u128,
            });
        }
        let (min, max, examined) = if exact {
            let degrees = self.r_degree_table(r);
            let min = degrees.iter().copied().min().unwrap_or(0) as u64;
            let max = degrees.iter().copied().max().unwrap_or(0) as u64;
            (min, max, degrees.len() as u64)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut min = u64::MAX;
            let mut max = 0u64;
            let mut set = Vec::with_capacity(r);
            for _ in 0..samples {
                set.clear();
                set.extend(sample(&mut rng, self.n, r).iter().map(|v| v as u32));
                set.sort_unstable();
                let d = self.degree_sorted(&set);
                min = min.min(d);
                max = max.max(d);
            }
            (if samples == 0 { 0 } else { min }, max, samples as u64)
        };
        let eta = eta_from(&avg, min, max);
        Ok(RegularityReport {
            r,
            avg_degree: avg,
            max_degree: max,
            min_degree: min,
            eta,
            exact,
            sets_examined: examined,
            seed: if exact { None } else { Some(seed) },
        })
    }

    /// Degree of every r-set, indexed by colex rank.
    fn r_degree_table(&self, r: usize) -> Vec<u32> {
        let size = binom(self.n as u64, r as u64) as usize;
        let mut table = vec![0u32; size];
        let mut sub = vec![0u32; r];
        for e in self.edges() {
            for_each_subset(self.k, r, |idx| {
                for (slot, &i) in sub.iter_mut().zip(idx) {
                    *slot = e[i];
                }
                table[colex_rank(&sub) as usize] += 1;
            });
        }
        table
    }

    /// Degree of every r-set with its members, for callers that need the
    /// full profile (small instances only).
    pub fn r_degrees(&self, r: usize) -> Vec<(Vec<u32>, u64)> {
        let table = self.r_degree_table(r);
        let mut out = Vec::with_capacity(table.len());
        for_each_subset(self.n, r, |s| {
            let s: Vec<u32> = s.iter().map(|&v| v as u32).collect();
            let d = table[colex_rank(&s) as usize] as u64;
            out.push((s, d));
        });
        out
    }

    /// H(x): edges through `x` with `x` removed, relabelled onto the
    /// remaining N-1 vertices (vertices above `x` shift down by one).
    pub fn link(&self, x: usize) -> Result<Hypergraph> {
        if x >= self.n {
            return Err(Error::VertexOutOfRange { vertex: x, n: self.n });
        }
        let k = self.k.saturating_sub(1);
        let mut flat = Vec::with_capacity(self.vertex_degree(x) as usize * k);
        for &e in self.incident(x) {
            for &v in self.edge(e as usize) {
                if v as usize != x {
                    flat.push(if v as usize > x { v - 1 } else { v });
                }
            }
        }
        Ok(Hypergraph::from_sorted_flat(self.n - 1, k, flat))
    }

    /// Writes the edge-list format: header `k N h`, then one edge per line.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{} {} {}", self.k, self.n, self.edge_count())?;
        for e in self.edges() {
            let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }

    /// Reads the edge-list format, checking the header against the content.
    pub fn read_edge_list<R: BufRead>(r: R) -> Result<Hypergraph> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty edge list".into()))??;
        let nums = parse_numbers(&header)?;
        if nums.len() != 3 {
            return Err(Error::Parse(format!("header must be `k N h`, got `{header}`")));
        }
        let (k, n, h) = (nums[0] as usize, nums[1] as usize, nums[2] as usize);
        let mut edges = Vec::with_capacity(h);
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let e: Vec<u32> = parse_numbers(&line)?.into_iter().map(|v| v as u32).collect();
            edges.push(e);
        }
        if edges.len() != h {
            return Err(Error::Parse(format!(
                "header announces {h} edges, found {}",
                edges.len()
            )));
        }
        Hypergraph::new(n, k, &edges)
    }
}

impl EdgeSource for Hypergraph {
    fn vertex_count(&self) -> usize {
        self.n
    }
    fn uniformity(&self) -> usize {
        self.k
    }
    fn edge_count(&self) -> u64 {
        Hypergraph::edge_count(self)
    }
    fn for_each_edge(&self, f: &mut dyn FnMut(&[u32])) {
        for e in self.edges() {
            f(e);
        }
    }
    fn multiplicity(&self, set: &[u32]) -> u64 {
        if set.len() != self.k || set.is_empty() {
            return 0;
        }
        self.incident(set[0] as usize)
            .iter()
            .filter(|&&e| self.edge(e as usize) == set)
            .count() as u64
    }
    fn degree_of(&self, set: &[u32]) -> u64 {
        self.degree_sorted(set)
    }
}

fn parse_numbers(line: &str) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::Parse(format!("not a nonnegative integer: `{t}`")))
        })
        .collect()
}

/// True when every element of sorted `needle` occurs in sorted `hay`.
pub(crate) fn contains_sorted(hay: &[u32], needle: &[u32]) -> bool {
    let mut i = 0;
    for &v in needle {
        while i < hay.len() && hay[i] < v {
            i += 1;
        }
        if i == hay.len() || hay[i] != v {
            return false;
        }
        i += 1;
    }
    true
}

/// L_j(m) = h·C(k,j)·(m)_j/(N)_j, the mean of N_j over uniform m-subsets.
pub fn expected_partial(n: usize, k: usize, h: u64, j: usize, m: usize) -> Result<BigRational> {
    if j > k {
        return Err(Error::OutOfRange {
            what: "j",
            value: j,
            lo: 0,
            hi: k,
        });
    }
    if m > n {
        return Err(Error::OutOfRange {
            what: "m",
            value: m,
            lo: 0,
            hi: n,
        });
    }
    if j > n {
        return Ok(BigRational::zero());
    }
    Ok(BigRational::new(
        BigInt::from(h) * binom_big(k as u64, j as u64) * falling(m as i64, j as u32),
        falling(n as i64, j as u32),
    ))
}

/// How `regularity_report` may visit r-sets.
#[derive(Clone, Copy, Debug)]
pub enum RegularityMode {
    /// Enumerate every r-set; error when there are more than `budget`.
    Exact { budget: u64 },
    /// Enumerate when within `budget`, otherwise sample.
    Auto { budget: u64, samples: usize, seed: u64 },
    /// Always sample `samples` uniformly random r-sets.
    Sampled { samples: usize, seed: u64 },
}

impl Default for RegularityMode {
    fn default() -> Self {
        RegularityMode::Auto {
            budget: DEFAULT_SET_BUDGET,
            samples: 100_000,
            seed: 0,
        }
    }
}

/// Degree statistics for r-sets; `eta` is the smallest η with every r-set
/// degree in (1 ± η)·avg.
#[derive(Clone, Debug, Serialize)]
pub struct RegularityReport {
    pub r: usize,
    #[serde(serialize_with = "crate::serde_rational::serialize")]
    pub avg_degree: BigRational,
    pub max_degree: u64,
    pub min_degree: u64,
    #[serde(serialize_with = "crate::serde_rational::serialize")]
    pub eta: BigRational,
    pub exact: bool,
    pub sets_examined: u64,
    pub seed: Option<u64>,
}

impl RegularityReport {
    pub fn eta_f64(&self) -> f64 {
        crate::combinatorics::rational_to_f64(&self.eta)
    }

    pub fn avg_f64(&self) -> f64 {
        crate::combinatorics::rational_to_f64(&self.avg_degree)
    }

    /// r-tuple-regular: every r-set has the same degree.
    pub fn is_regular(&self) -> bool {
        self.exact && self.eta.is_zero()
    }
}

fn eta_from(avg: &BigRational, min: u64, max: u64) -> BigRational {
    if !avg.is_positive() {
        return BigRational::zero();
    }
    let one = BigRational::one();
    let hi = BigRational::from_integer(max.into()) / avg - &one;
    let lo = one - BigRational::from_integer(min.into()) / avg;
    if hi > lo {
        hi
    } else {
        lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_edge(n: usize) -> Hypergraph {
        Hypergraph::new(n, 3, &[[0u32, 1, 2]]).unwrap()
    }

    fn ap3_z5() -> Hypergraph {
        let mut edges = Vec::new();
        for x in 0..5u32 {
            for d in 1..=2u32 {
                edges.push(vec![x, (x + d) % 5, (x + 2 * d) % 5]);
            }
        }
        Hypergraph::new(5, 3, &edges).unwrap()
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            Hypergraph::new(3, 3, &[[0u32, 1, 3]]),
            Err(Error::VertexOutOfRange { vertex: 3, .. })
        ));
        assert!(Hypergraph::new(3, 3, &[[0u32, 1, 1]]).is_err());
        assert!(Hypergraph::new(3, 3, &[vec![0u32, 1]]).is_err());
    }

    #[test]
    fn induced_counts() {
        let h = single_edge(3);
        assert_eq!(h.count_induced(&[0, 1, 2]).unwrap(), 1);
        assert_eq!(h.count_induced(&[]).unwrap(), 0);
        assert_eq!(ap3_z5().count_induced(&[0, 1, 2, 3, 4]).unwrap(), 10);
        assert!(h.count_induced(&[7]).is_err());
    }

    #[test]
    fn partial_counts() {
        let h = single_edge(3);
        assert_eq!(h.count_partial(&[0, 1], 2).unwrap(), 1);
        assert_eq!(h.count_partial(&[0], 0).unwrap(), 1);
        assert!(h.count_partial(&[0], 4).is_err());
        // vertex degree is hk/N = 6 for the 3-AP family on Z/5
        assert_eq!(ap3_z5().count_partial(&[0, 1], 1).unwrap(), 12);
    }

    #[test]
    fn expected_partial_values() {
        assert_eq!(
            expected_partial(5, 3, 10, 3, 3).unwrap(),
            BigRational::from_integer(1.into())
        );
        assert_eq!(
            expected_partial(9, 4, 7, 2, 9).unwrap(),
            BigRational::from_integer((7 * 6).into())
        );
        assert_eq!(
            expected_partial(9, 4, 7, 0, 3).unwrap(),
            BigRational::from_integer(7.into())
        );
        assert!(expected_partial(5, 3, 10, 4, 3).is_err());
        assert!(expected_partial(5, 3, 10, 1, 6).is_err());
    }

    #[test]
    fn expected_partial_is_subset_mean() {
        let h = ap3_z5();
        let mut sum = 0u64;
        let mut count = 0u64;
        for_each_subset(5, 3, |s| {
            let s: Vec<u32> = s.iter().map(|&v| v as u32).collect();
            sum += h.count_induced(&s).unwrap();
            count += 1;
        });
        assert_eq!(
            BigRational::new(sum.into(), count.into()),
            expected_partial(5, 3, 10, 3, 3).unwrap()
        );
    }

    #[test]
    fn set_degrees() {
        let h = single_edge(4);
        assert_eq!(h.degree(&[]).unwrap(), 1);
        assert_eq!(h.degree(&[2, 0]).unwrap(), 1);
        assert_eq!(h.degree(&[3]).unwrap(), 0);
        assert!(matches!(h.degree(&[0, 1, 2, 3]), Err(Error::SetTooLarge { .. })));
    }

    #[test]
    fn report_on_single_edge() {
        let h = single_edge(4);
        let rep = h.regularity_report(1, RegularityMode::default()).unwrap();
        assert_eq!(rep.avg_degree, BigRational::new(3.into(), 4.into()));
        assert_eq!((rep.min_degree, rep.max_degree), (0, 1));
        assert_eq!(rep.eta, BigRational::one());
        assert!(rep.exact);
        let rep0 = h.regularity_report(0, RegularityMode::default()).unwrap();
        assert!(rep0.is_regular());
    }

    #[test]
    fn exact_mode_respects_budget() {
        let h = ap3_z5();
        assert!(matches!(
            h.regularity_report(2, RegularityMode::Exact { budget: 5 }),
            Err(Error::BudgetExceeded { .. })
        ));
        let sampled = h
            .regularity_report(2, RegularityMode::Sampled { samples: 50, seed: 3 })
            .unwrap();
        assert!(!sampled.exact);
        assert_eq!(sampled.seed, Some(3));
        assert_eq!(sampled.max_degree, 3);
    }

    #[test]
    fn links() {
        let h = single_edge(3);
        let l = h.link(0).unwrap();
        assert_eq!(l.uniformity(), 2);
        assert_eq!(l.vertex_count(), 2);
        assert_eq!(l.edges().collect::<Vec<_>>(), vec![&[0u32, 1][..]]);
        let iso = single_edge(5).link(4).unwrap();
        assert_eq!(iso.edge_count(), 0);
        assert!(h.link(3).is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let h = ap3_z5();
        let mut buf = Vec::new();
        h.write_edge_list(&mut buf).unwrap();
        let back = Hypergraph::read_edge_list(&buf[..]).unwrap();
        assert_eq!(back, h);
        let bad = b"3 5 2\n0 1 2\n";
        assert!(Hypergraph::read_edge_list(&bad[..]).is_err());
    }

    #[test]
    fn multiplicities_count_repeats() {
        let h = Hypergraph::new(4, 2, &[[0u32, 1], [1, 0], [2, 3]]).unwrap();
        assert_eq!(h.multiplicity(&[0, 1]), 2);
        assert_eq!(h.degree(&[1]).unwrap(), 2);
        assert_eq!(h.count_induced(&[0, 1]).unwrap(), 2);
    }
}
