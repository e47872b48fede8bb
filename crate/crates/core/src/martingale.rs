//! Insertion trajectories B_0 ⊂ B_1 ⊂ … ⊂ B_N, the increments A_ℓ(B_i), the
//! martingale differences X_ℓ(B_i) and the exact reconstruction of D_j(B_m)
//! as a combination of them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::combinatorics::{binom, binom_big, falling, rational_to_f64};
use crate::error::{Error, Result};
use crate::hypergraph::{expected_partial, Hypergraph};

/// One insertion order with the partial counts N_ℓ(B_i) cached for every
/// prefix length i = 0..=N and every ℓ = 0..=k.
#[derive(Clone, Debug)]
pub struct Trajectory {
    n: usize,
    k: usize,
    h: u64,
    perm: Vec<u32>,
    counts: Vec<Vec<u64>>,
}

/// Walks `perm`, updating N_ℓ through the edges at each inserted vertex only.
pub fn run_trajectory(h: &Hypergraph, perm: &[u32]) -> Result<Trajectory> {
    let n = h.vertex_count();
    let k = h.uniformity();
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::NotPermutation { n });
    }
    for &v in perm {
        if v as usize >= n || seen[v as usize] {
            return Err(Error::NotPermutation { n });
        }
        seen[v as usize] = true;
    }
    let mut inside = vec![0u8; h.edge_count() as usize];
    let mut counts = Vec::with_capacity(n + 1);
    let mut row = vec![0u64; k + 1];
    row[0] = h.edge_count();
    counts.push(row.clone());
    for &b in perm {
        for &e in h.incident(b as usize) {
            let c = inside[e as usize] as u64;
            // a new vertex turns C(c, ℓ-1) old (ℓ-1)-subsets into ℓ-subsets
            for (l, slot) in row.iter_mut().enumerate().skip(1) {
                *slot += binom(c, l as u64 - 1) as u64;
            }
            inside[e as usize] += 1;
        }
        counts.push(row.clone());
    }
    Ok(Trajectory {
        n,
        k,
        h: h.edge_count(),
        perm: perm.to_vec(),
        counts,
    })
}

/// Trajectory along a uniformly random permutation.
pub fn random_trajectory<R: Rng + ?Sized>(h: &Hypergraph, rng: &mut R) -> Trajectory {
    let mut perm: Vec<u32> = (0..h.vertex_count() as u32).collect();
    perm.shuffle(rng);
    run_trajectory(h, &perm).expect("shuffled identity is a permutation")
}

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

impl Trajectory {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn uniformity(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> u64 {
        self.h
    }

    pub fn perm(&self) -> &[u32] {
        &self.perm
    }

    /// B_i = {b_1, …, b_i}.
    pub fn prefix(&self, i: usize) -> &[u32] {
        &self.perm[..i]
    }

    /// s = i/N.
    pub fn density(&self, i: usize) -> f64 {
        i as f64 / self.n as f64
    }

    /// N_ℓ(B_i).
    pub fn partial(&self, i: usize, l: usize) -> u64 {
        self.counts[i][l]
    }

    /// A_ℓ(B_i) = N_ℓ(B_i) − N_ℓ(B_{i−1}) for 1 ≤ i ≤ N.
    pub fn increment(&self, i: usize, l: usize) -> u64 {
        self.counts[i][l] - self.counts[i - 1][l]
    }

    fn check_step(&self, i: usize, j: usize) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(Error::OutOfRange {
                what: "i",
                value: i,
                lo: 1,
                hi: self.n,
            });
        }
        if j > self.k {
            return Err(Error::OutOfRange {
                what: "j",
                value: j,
                lo: 0,
                hi: self.k,
            });
        }
        Ok(())
    }

    /// E[A_j(B_i) | B_{i−1}] = ((k−j+1)N_{j−1}(B_{i−1}) − j·N_j(B_{i−1}))/(N−i+1).
    pub fn conditional_increment_mean(&self, i: usize, j: usize) -> Result<BigRational> {
        self.check_step(i, j)?;
        if j == 0 {
            return Ok(BigRational::zero());
        }
        let prev = &self.counts[i - 1];
        let num = BigInt::from((self.k - j + 1) as u64 * prev[j - 1]) - BigInt::from(j as u64 * prev[j]);
        Ok(BigRational::new(num, BigInt::from(self.n - i + 1)))
    }

    /// X_j(B_i) = A_j(B_i) − E[A_j(B_i) | B_{i−1}].
    pub fn martingale_difference(&self, i: usize, j: usize) -> Result<BigRational> {
        let mean = self.conditional_increment_mean(i, j)?;
        Ok(int(self.increment(i, j)) - mean)
    }

    /// D_j(B_m) = N_j(B_m) − L_j(m), from the cached counts.
    pub fn deviation(&self, j: usize, m: usize) -> Result<BigRational> {
        let mean = expected_partial(self.n, self.k, self.h, j, m)?;
        Ok(int(self.counts[m][j]) - mean)
    }

    /// D_j(B_m) rebuilt from the martingale differences alone:
    /// Σ_{i≤m} Σ_{ℓ≤j} w(j, m; ℓ, i)·X_ℓ(B_i) with the weights of
    /// [`reconstruction_weight`].
    pub fn martingale_reconstruct(&self, j: usize, m: usize) -> Result<BigRational> {
        if j > self.k || m > self.n {
            return Err(Error::InvalidParameter(format!(
                "need j <= k and m <= N (j={j}, m={m})"
            )));
        }
        let mut total = BigRational::zero();
        for i in 1..=m {
            for l in 1..=j {
                let w = reconstruction_weight(self.n, self.k, j, m, l, i);
                if w.is_zero() {
                    continue;
                }
                total += w * self.martingale_difference(i, l)?;
            }
        }
        Ok(total)
    }

    /// Checks D_j(B_m) = ((N−m−j+1)D_j(B_{m−1}) + (k−j+1)D_{j−1}(B_{m−1}))/(N−m+1) + X_j(B_m).
    pub fn recursion_holds(&self, j: usize, m: usize) -> Result<bool> {
        if j == 0 || m == 0 {
            return Err(Error::InvalidParameter("recursion needs j >= 1 and m >= 1".into()));
        }
        let den = BigInt::from(self.n - m + 1);
        let a = BigRational::new(BigInt::from(self.n as i64 - m as i64 - j as i64 + 1), den.clone());
        let b = BigRational::new(BigInt::from(self.k - j + 1), den);
        let rhs = a * self.deviation(j, m - 1)?
            + b * self.deviation(j - 1, m - 1)?
            + self.martingale_difference(m, j)?;
        Ok(rhs == self.deviation(j, m)?)
    }

    /// Compares every |X_ℓ(B_i)|, 1 ≤ ℓ ≤ r, with 2ℓC(k,ℓ)·η·s^{ℓ−1}·h/N, s = i/N.
    pub fn check_increment_bound(&self, r: usize, eta: &BigRational) -> Result<IncrementBoundReport> {
        if r == 0 || r > self.k {
            return Err(Error::OutOfRange {
                what: "r",
                value: r,
                lo: 1,
                hi: self.k,
            });
        }
        let n = BigInt::from(self.n);
        let mut report = IncrementBoundReport {
            r,
            eta: rational_to_f64(eta),
            steps_checked: 0,
            violations: Vec::new(),
            max_ratio: 0.0,
            max_abs: vec![0.0; r],
        };
        for i in 1..=self.n {
            for l in 1..=r {
                let x = self.martingale_difference(i, l)?.abs();
                let bound = BigRational::new(
                    BigInt::from(2 * l as u64)
                        * binom_big(self.k as u64, l as u64)
                        * BigInt::from(self.h)
                        * num_traits::pow(BigInt::from(i), l - 1),
                    num_traits::pow(n.clone(), l),
                ) * eta;
                report.steps_checked += 1;
                let xf = rational_to_f64(&x);
                report.max_abs[l - 1] = report.max_abs[l - 1].max(xf);
                let ratio = if x.is_zero() {
                    0.0
                } else if bound.is_zero() {
                    f64::INFINITY
                } else {
                    rational_to_f64(&(&x / &bound))
                };
                report.max_ratio = report.max_ratio.max(ratio);
                if x > bound {
                    report.violations.push(BoundViolation {
                        step: i,
                        l,
                        abs_difference: xf,
                        bound: rational_to_f64(&bound),
                    });
                }
            }
        }
        Ok(report)
    }
}

/// Weight of X_ℓ(B_i) in D_j(B_m):
/// (N−m)_ℓ (m−i)_{j−ℓ} / (N−i)_j · C(k−ℓ, k−j).
///
/// The closed form is 0/0 when N−i < j. There the weight is obtained by
/// unrolling the one-step recursion from B_i to B_m, which is always defined.
pub fn reconstruction_weight(n: usize, k: usize, j: usize, m: usize, l: usize, i: usize) -> BigRational {
    if l > j || i > m || j > k {
        return BigRational::zero();
    }
    let den = falling(n as i64 - i as i64, j as u32);
    if !den.is_zero() {
        let num = falling(n as i64 - m as i64, l as u32)
            * falling(m as i64 - i as i64, (j - l) as u32)
            * binom_big((k - l) as u64, (k - j) as u64);
        return BigRational::new(num, den);
    }
    recursion_weight(n, k, j, m, l, i)
}

/// Weight of X_ℓ(B_i) in D_j(B_m) by dynamic programming over the recursion
/// D_j(B_t) = ((N−t−j+1)D_j(B_{t−1}) + (k−j+1)D_{j−1}(B_{t−1}))/(N−t+1) + X_j(B_t).
pub fn recursion_weight(n: usize, k: usize, j: usize, m: usize, l: usize, i: usize) -> BigRational {
    if l > j || i > m {
        return BigRational::zero();
    }
    // w[q] = weight of X_ℓ(B_i) in D_{ℓ+q}(B_t)
    let width = j - l + 1;
    let mut w = vec![BigRational::zero(); width];
    w[0] = int(1);
    for t in i + 1..=m {
        let den = BigInt::from(n - t + 1);
        let mut next = vec![BigRational::zero(); width];
        for (q, slot) in next.iter_mut().enumerate() {
            let jj = l + q;
            let stay = BigRational::new(BigInt::from(n as i64 - t as i64 - jj as i64 + 1), den.clone());
            let mut v = stay * &w[q];
            if q > 0 {
                v += BigRational::new(BigInt::from(k - jj + 1), den.clone()) * &w[q - 1];
            }
            *slot = v;
        }
        w = next;
    }
    w.pop().unwrap()
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundViolation {
    pub step: usize,
    pub l: usize,
    pub abs_difference: f64,
    pub bound: f64,
}

/// Outcome of checking every martingale difference against its deterministic bound.
#[derive(Clone, Debug, Serialize)]
pub struct IncrementBoundReport {
    pub r: usize,
    pub eta: f64,
    pub steps_checked: usize,
    pub violations: Vec<BoundViolation>,
    /// Largest |X_ℓ|/bound; infinite when a nonzero difference meets a zero bound.
    pub max_ratio: f64,
    /// max_i |X_ℓ(B_i)| for ℓ = 1..=r.
    pub max_abs: Vec<f64>,
}

impl IncrementBoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Result of checking the reconstruction on one trajectory for all (j, m).
#[derive(Clone, Debug, Serialize)]
pub struct ReconstructionCheck {
    pub pairs_checked: usize,
    pub mismatches: Vec<(usize, usize)>,
}

impl ReconstructionCheck {
    pub fn exact(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the reconstruction with the direct deviation for every
/// 1 ≤ j ≤ k and 0 ≤ m ≤ N.
pub fn verify_reconstruction(traj: &Trajectory) -> Result<ReconstructionCheck> {
    let mut check = ReconstructionCheck {
        pairs_checked: 0,
        mismatches: Vec::new(),
    };
    for j in 1..=traj.k {
        for m in 0..=traj.n {
            check.pairs_checked += 1;
            if traj.martingale_reconstruct(j, m)? != traj.deviation(j, m)? {
                check.mismatches.push((j, m));
            }
        }
    }
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_kap, random_hypergraph};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn single_edge() -> Hypergraph {
        Hypergraph::new(3, 3, &[[0u32, 1, 2]]).unwrap()
    }

    #[test]
    fn single_edge_series() {
        let t = run_trajectory(&single_edge(), &[0, 1, 2]).unwrap();
        let n3: Vec<u64> = (0..=3).map(|i| t.partial(i, 3)).collect();
        assert_eq!(n3, vec![0, 0, 0, 1]);
        assert!((0..=3).all(|i| t.partial(i, 0) == 1));
        assert_eq!(t.conditional_increment_mean(1, 1).unwrap(), int(1));
        assert_eq!(t.conditional_increment_mean(2, 0).unwrap(), int(0));
    }

    #[test]
    fn rejects_non_permutations() {
        let h = single_edge();
        assert!(run_trajectory(&h, &[0, 1]).is_err());
        assert!(run_trajectory(&h, &[0, 1, 1]).is_err());
        assert!(run_trajectory(&h, &[0, 1, 3]).is_err());
    }

    #[test]
    fn kap_vertex_counts_grow_linearly() {
        let h = build_kap(7, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = random_trajectory(&h, &mut rng);
        for i in 0..=7 {
            assert_eq!(t.partial(i, 1), 9 * i as u64);
            for j in 0..=3 {
                assert_eq!(t.partial(i, j), h.count_partial(t.prefix(i), j).unwrap());
            }
        }
    }

    #[test]
    fn conditional_mean_matches_all_extensions() {
        let h = random_hypergraph(8, 3, 12, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = random_trajectory(&h, &mut rng);
        for i in 1..=8 {
            let prefix = t.prefix(i - 1).to_vec();
            let rest: Vec<u32> = (0..8).filter(|v| !prefix.contains(v)).collect();
            for j in 0..=3 {
                let mut sum = BigInt::zero();
                for &b in &rest {
                    let mut bigger = prefix.clone();
                    bigger.push(b);
                    sum += BigInt::from(h.count_partial(&bigger, j).unwrap())
                        - BigInt::from(h.count_partial(&prefix, j).unwrap());
                }
                assert_eq!(
                    BigRational::new(sum, BigInt::from(rest.len())),
                    t.conditional_increment_mean(i, j).unwrap()
                );
            }
        }
    }

    #[test]
    fn reconstruction_edge_cases() {
        let h = build_kap(7, 3).unwrap();
        let t = run_trajectory(&h, &[3, 1, 4, 0, 5, 2, 6]).unwrap();
        assert!(t.martingale_reconstruct(2, 0).unwrap().is_zero());
        assert!(t.deviation(3, 7).unwrap().is_zero());
        assert!(t.martingale_reconstruct(3, 7).unwrap().is_zero());
    }

    #[test]
    fn degenerate_weights_are_needed() {
        // N=3, one edge {0,1}: D_2(B_2) depends on the second insertion
        let h = Hypergraph::new(3, 2, &[[0u32, 1]]).unwrap();
        let t = run_trajectory(&h, &[0, 1, 2]).unwrap();
        assert!(!t.martingale_difference(2, 2).unwrap().is_zero());
        assert!(!reconstruction_weight(3, 2, 2, 2, 2, 2).is_zero());
        assert_eq!(t.martingale_reconstruct(2, 2).unwrap(), t.deviation(2, 2).unwrap());
    }

    #[test]
    fn closed_form_weights_match_recursion() {
        let (n, k) = (11, 4);
        for j in 1..=k {
            for m in 0..=n {
                for i in 1..=m {
                    for l in 1..=j {
                        if n - i >= j {
                            assert_eq!(
                                reconstruction_weight(n, k, j, m, l, i),
                                recursion_weight(n, k, j, m, l, i),
                                "j={j} m={m} l={l} i={i}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reconstruction_is_exact_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for trial in 0..10 {
            let n = rng.gen_range(5..=12);
            let k = rng.gen_range(2..=4);
            let h = random_hypergraph(n, k, rng.gen_range(0..30), trial).unwrap();
            let t = random_trajectory(&h, &mut rng);
            let check = verify_reconstruction(&t).unwrap();
            assert!(check.exact(), "mismatches {:?}", check.mismatches);
            for j in 1..=k {
                for m in 1..=n {
                    assert!(t.recursion_holds(j, m).unwrap());
                }
            }
        }
    }

    #[test]
    fn regular_family_has_vanishing_differences() {
        let h = build_kap(11, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = random_trajectory(&h, &mut rng);
        let rep = t.check_increment_bound(2, &BigRational::zero()).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.max_abs, vec![0.0, 0.0]);
    }

    #[test]
    fn increment_bound_flags_irregular_instances() {
        let h = random_hypergraph(10, 3, 15, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = random_trajectory(&h, &mut rng);
        assert!(!t.check_increment_bound(1, &BigRational::zero()).unwrap().passed());
        let eta = h
            .regularity_report(2, crate::hypergraph::RegularityMode::default())
            .unwrap()
            .eta;
        assert!(t.check_increment_bound(2, &eta).unwrap().passed());
    }
}
