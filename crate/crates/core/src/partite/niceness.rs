use std::collections::HashMap;

use serde::Serialize;

use super::coefficients::q_coefficients_enumerated;
use crate::combinatorics::{binom, for_each_subset};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, RegularityMode};

/// Measured quantities behind conditions (i)–(iv), each with its verdict.
#[derive(Clone, Debug, Serialize)]
pub struct NicenessReport {
    pub r: usize,
    pub l: usize,
    pub s: usize,
    pub gamma: f64,
    /// (i): η_{r−1} against `eta_max`.
    pub eta: f64,
    pub eta_max: f64,
    pub eta_exact: bool,
    pub near_regular: bool,
    /// (ii): h / C(N, r+1) in [γ/ℓ², 3γ/ℓ²].
    pub density: f64,
    pub density_lo: f64,
    pub density_hi: f64,
    pub density_ok: bool,
    /// (iii): Δ_r ≤ γN.
    pub max_r_degree: u64,
    pub max_r_degree_limit: f64,
    pub max_degree_ok: bool,
    /// (iv): c_r ≥ γN^{r+1}/ℓ^{r+1}.
    pub c_r: i128,
    pub c_r_target: f64,
    pub c_r_ok: bool,
    /// The weaker γN^{r+1}/(r!ℓ^{r+1}) that the weighted construction is
    /// meant to reach.
    pub c_r_construction_target: f64,
    pub c_r_construction_ok: bool,
    pub coefficients: Vec<i128>,
}

impl NicenessReport {
    pub fn passed(&self) -> bool {
        self.near_regular && self.density_ok && self.max_degree_ok && self.c_r_ok
    }
}

/// Largest degree over r-sets, counting only r-sets that lie in an edge.
fn max_r_degree(h: &Hypergraph, r: usize) -> u64 {
    let k = h.uniformity();
    let mut degrees: HashMap<Vec<u32>, u64> = HashMap::new();
    for e in h.edges() {
        for_each_subset(k, r, |idx| {
            let sub: Vec<u32> = idx.iter().map(|&i| e[i]).collect();
            *degrees.entry(sub).or_insert(0) += 1;
        });
    }
    degrees.values().copied().max().unwrap_or(0)
}

/// Checks whether `h`, an (r+1)-uniform hypergraph on ℓ parts of `s`
/// consecutive vertices, is (r, η, γ)-nice with η ≤ `eta_max`.
pub fn niceness_check(h: &Hypergraph, l: usize, s: usize, gamma: f64, eta_max: f64) -> Result<NicenessReport> {
    let n = h.vertex_count();
    if l * s != n {
        return Err(Error::InvalidParameter(format!("{l} parts of size {s} do not cover {n} vertices")));
    }
    let k = h.uniformity();
    if k < 2 {
        return Err(Error::InvalidParameter("niceness needs uniformity at least 2".into()));
    }
    let r = k - 1;
    let reg = h.regularity_report(r - 1, RegularityMode::default())?;
    let eta = reg.eta_f64();
    let density = h.edge_count() as f64 / binom(n as u64, k as u64) as f64;
    let l2 = (l * l) as f64;
    let max_deg = max_r_degree(h, r);
    let coefficients = q_coefficients_enumerated(h, s);
    let c_r = coefficients[r];
    let c_r_target = gamma * (s as f64).powi(k as i32);
    let r_fact: f64 = (1..=r).map(|i| i as f64).product();
    let c_r_construction_target = c_r_target / r_fact;
    Ok(NicenessReport {
        r,
        l,
        s,
        gamma,
        eta,
        eta_max,
        eta_exact: reg.exact,
        near_regular: reg.avg_f64() > 0.0 && eta <= eta_max,
        density,
        density_lo: gamma / l2,
        density_hi: 3.0 * gamma / l2,
        density_ok: gamma / l2 <= density && density <= 3.0 * gamma / l2,
        max_r_degree: max_deg,
        max_r_degree_limit: gamma * n as f64,
        max_degree_ok: max_deg as f64 <= gamma * n as f64,
        c_r,
        c_r_target,
        c_r_ok: c_r as f64 >= c_r_target,
        c_r_construction_target,
        c_r_construction_ok: c_r as f64 >= c_r_construction_target,
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_fails_density_and_coefficient() {
        let h = Hypergraph::empty(30, 4);
        let rep = niceness_check(&h, 3, 10, 1.0, 0.5).unwrap();
        assert!(!rep.density_ok);
        assert!(!rep.c_r_ok);
        assert!(!rep.passed());
    }

    #[test]
    fn part_structure_must_cover() {
        let h = Hypergraph::empty(30, 4);
        assert!(niceness_check(&h, 4, 10, 1.0, 0.5).is_err());
    }
}
