use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::InducedCounter;
use crate::combinatorics::{binom, binom_big, for_each_subset};
use crate::error::{Error, Result};

/// Exact law of N(B_m): how many m-subsets induce each count.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactDistribution {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub h: u64,
    /// C(N, m).
    pub total: BigInt,
    pub counts: BTreeMap<u64, BigInt>,
}

impl ExactDistribution {
    pub fn probability(&self, count: u64) -> BigRational {
        let c = self.counts.get(&count).cloned().unwrap_or_default();
        BigRational::new(c, self.total.clone())
    }

    pub fn mean(&self) -> BigRational {
        let s: BigInt = self.counts.iter().map(|(&c, x)| BigInt::from(c) * x).sum();
        BigRational::new(s, self.total.clone())
    }

    fn mass_where(&self, pred: impl Fn(&BigRational) -> bool) -> BigRational {
        let s: BigInt = self
            .counts
            .iter()
            .filter(|(&c, _)| pred(&BigRational::from_integer(c.into())))
            .map(|(_, x)| x.clone())
            .sum();
        BigRational::new(s, self.total.clone())
    }

    /// P(N(B_m) > c).
    pub fn tail_gt(&self, c: &BigRational) -> BigRational {
        self.mass_where(|v| v > c)
    }

    /// P(D > a) with D = N(B_m) − L_k(m).
    pub fn deviation_tail(&self, a: &BigRational) -> BigRational {
        let cut = self.mean() + a;
        self.mass_where(|v| v > &cut)
    }

    /// P(D < −a).
    pub fn lower_deviation_tail(&self, a: &BigRational) -> BigRational {
        let cut = self.mean() - a;
        self.mass_where(|v| v < &cut)
    }

    /// P(|D| > a).
    pub fn abs_deviation_tail(&self, a: &BigRational) -> BigRational {
        let mean = self.mean();
        self.mass_where(|v| {
            let d = v - &mean;
            d > *a || -d > *a
        })
    }
}

/// Enumerates every m-subset; fails when C(N, m) exceeds `budget`.
pub fn exact_distribution<C: InducedCounter + ?Sized>(counter: &C, m: usize, budget: u64) -> Result<ExactDistribution> {
    let n = counter.vertex_count();
    if m > n {
        return Err(Error::OutOfRange {
            what: "m",
            value: m,
            lo: 0,
            hi: n,
        });
    }
    let needed = binom(n as u64, m as u64);
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed,
            budget: budget as u128,
        });
    }
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    let mut set = Vec::with_capacity(m);
    for_each_subset(n, m, |s| {
        set.clear();
        set.extend(s.iter().map(|&v| v as u32));
        *counts.entry(counter.count(&set)).or_insert(0) += 1;
    });
    Ok(ExactDistribution {
        n,
        m,
        k: counter.uniformity(),
        h: counter.edge_count(),
        total: binom_big(n as u64, m as u64),
        counts: counts.into_iter().map(|(c, x)| (c, BigInt::from(x))).collect(),
    })
}

/// P(N(B_p) > c) by visiting all 2^N subsets with weight p^|B|(1−p)^{N−|B|}.
pub fn pmodel_exact_tail<C: InducedCounter + ?Sized>(
    counter: &C,
    p: &BigRational,
    c: &BigRational,
    budget: u64,
) -> Result<BigRational> {
    let n = counter.vertex_count();
    if n >= 64 || (1u128 << n) > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: if n >= 128 { u128::MAX } else { 1u128 << n },
            budget: budget as u128,
        });
    }
    // exceed[size] = number of subsets of that size with N(B) > c
    let mut exceed = vec![0u64; n + 1];
    let mut set = Vec::with_capacity(n);
    for mask in 0u64..(1u64 << n) {
        set.clear();
        set.extend((0..n as u32).filter(|&v| mask >> v & 1 == 1));
        if BigRational::from_integer(counter.count(&set).into()) > *c {
            exceed[set.len()] += 1;
        }
    }
    let q = BigRational::one() - p;
    let mut total = BigRational::zero();
    for (size, &x) in exceed.iter().enumerate() {
        if x > 0 {
            total += BigRational::from_integer(x.into())
                * num_traits::pow(p.clone(), size)
                * num_traits::pow(q.clone(), n - size);
        }
    }
    Ok(total)
}
