use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binom_big, ln_rational, rational_to_f64};
use crate::error::{Error, Result};
use crate::hypergraph::EdgeSource;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OccupancyMode {
    #[default]
    Exact,
    Entropy,
}

#[derive(Clone, Debug, Serialize)]
pub struct OccupancyProbability {
    pub mode: OccupancyMode,
    pub occupancies: Vec<usize>,
    /// Natural log of the probability (or of its estimate).
    pub log_value: f64,
    pub value: f64,
    /// Exact probability as `p/q`, exact mode only.
    pub exact: Option<String>,
}

/// Per-part sizes of the uneven event: part 1 holds (1+2ε)m/ℓ, parts 2
/// and 3 hold (1−ε)m/ℓ, the rest m/ℓ. Each target is rounded half up; the
/// rounding surplus is then moved by ±1 steps, last part first, only onto
/// parts whose rounded value stays within 1 of its target.
pub fn occupancy_targets(l: usize, s: usize, m: usize, eps: f64) -> Result<Vec<usize>> {
    if l < 3 {
        return Err(Error::InvalidParameter(format!("the uneven event needs at least 3 parts (l={l})")));
    }
    if m > l * s {
        return Err(Error::Infeasible(format!("m={m} exceeds the {} vertices", l * s)));
    }
    let base = m as f64 / l as f64;
    let mut targets = vec![base; l];
    targets[0] = (1.0 + 2.0 * eps) * base;
    targets[1] = (1.0 - eps) * base;
    targets[2] = (1.0 - eps) * base;
    if targets.iter().any(|&t| t < 0.0 || t > s as f64) {
        return Err(Error::Infeasible(format!("eps={eps} puts a part outside [0, {s}]")));
    }
    let mut occ: Vec<i64> = targets.iter().map(|&t| (t + 0.5).floor() as i64).collect();
    let mut surplus = occ.iter().sum::<i64>() - m as i64;
    let order: Vec<usize> = (3..l).rev().chain((0..3.min(l)).rev()).collect();
    for &i in order.iter().cycle().take(2 * l) {
        if surplus == 0 {
            break;
        }
        let step = -surplus.signum();
        let moved = occ[i] + step;
        if moved >= 0 && moved <= s as i64 && (moved as f64 - targets[i]).abs() <= 1.0 {
            occ[i] = moved;
            surplus += step;
        }
    }
    if surplus != 0 {
        return Err(Error::Infeasible(format!("cannot round the occupancies of m={m} within the slack")));
    }
    Ok(occ.into_iter().map(|o| o as usize).collect())
}

/// Π C(s, o_i) / C(s·len, Σ o_i): the chance that a uniform subset of that
/// size has exactly these per-part sizes.
pub fn occupancy_vector_probability(s: usize, occupancies: &[usize]) -> Result<BigRational> {
    if let Some(&o) = occupancies.iter().find(|&&o| o > s) {
        return Err(Error::Infeasible(format!("occupancy {o} exceeds part size {s}")));
    }
    let m: usize = occupancies.iter().sum();
    let mut num = BigInt::from(1);
    for &o in occupancies {
        num *= binom_big(s as u64, o as u64);
    }
    Ok(BigRational::new(num, binom_big((s * occupancies.len()) as u64, m as u64)))
}

fn entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.ln() - (1.0 - x) * (1.0 - x).ln()
    }
}

/// P(E^ℓ_ε) for a uniform m-subset of ℓ parts of size s.
pub fn occupancy_probability(l: usize, s: usize, m: usize, eps: f64, mode: OccupancyMode) -> Result<OccupancyProbability> {
    let occupancies = occupancy_targets(l, s, m, eps)?;
    match mode {
        OccupancyMode::Exact => {
            let p = occupancy_vector_probability(s, &occupancies)?;
            Ok(OccupancyProbability {
                mode,
                log_value: ln_rational(&p),
                value: rational_to_f64(&p),
                exact: Some(p.to_string()),
                occupancies,
            })
        }
        OccupancyMode::Entropy => {
            let t = m as f64 / (l * s) as f64;
            let log_value =
                s as f64 * (entropy((1.0 + 2.0 * eps) * t) + 2.0 * entropy((1.0 - eps) * t) - 3.0 * entropy(t));
            Ok(OccupancyProbability {
                mode,
                log_value,
                value: log_value.exp(),
                exact: None,
                occupancies,
            })
        }
    }
}

/// E[N(B) | |B ∩ V_i| = o_i for all i] = Σ_e Π_i C(o_i, e_i)/C(s, e_i),
/// parts being runs of `s` consecutive vertices.
pub fn conditional_expectation(h: &dyn EdgeSource, s: usize, occupancies: &[usize]) -> Result<BigRational> {
    let n = h.vertex_count();
    if s == 0 || occupancies.len() * s != n {
        return Err(Error::InvalidParameter(format!(
            "{} parts of size {s} do not cover {n} vertices",
            occupancies.len()
        )));
    }
    if let Some(&o) = occupancies.iter().find(|&&o| o > s) {
        return Err(Error::Infeasible(format!("occupancy {o} exceeds part size {s}")));
    }
    // edges with the same part profile contribute the same term
    let mut profiles: HashMap<Vec<(usize, usize)>, u64> = HashMap::new();
    h.for_each_edge(&mut |e| {
        let mut profile: Vec<(usize, usize)> = Vec::new();
        for &v in e {
            let part = v as usize / s;
            match profile.last_mut() {
                Some((p, c)) if *p == part => *c += 1,
                _ => profile.push((part, 1)),
            }
        }
        *profiles.entry(profile).or_insert(0) += 1;
    });
    let mut total = BigRational::zero();
    for (profile, count) in profiles {
        let mut num = BigInt::from(count);
        let mut den = BigInt::from(1);
        for (part, c) in profile {
            num *= binom_big(occupancies[part] as u64, c as u64);
            den *= binom_big(s as u64, c as u64);
        }
        total += BigRational::new(num, den);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::ratio;
    use crate::families::random_hypergraph;
    use crate::lab::stream_rng;
    use rand::seq::index::sample;

    #[test]
    fn two_parts_even_split() {
        assert_eq!(occupancy_vector_probability(2, &[1, 1]).unwrap(), ratio(4, 6));
    }

    #[test]
    fn zero_eps_is_even_split() {
        let p = occupancy_probability(4, 5, 8, 0.0, OccupancyMode::Exact).unwrap();
        assert_eq!(p.occupancies, vec![2, 2, 2, 2]);
        // 10^4 / C(20, 8)
        assert_eq!(p.exact.unwrap(), ratio(10_000, 125_970).to_string());
    }

    #[test]
    fn targets_respect_slack() {
        for (l, s, m, eps) in [(5, 20, 37, 0.1), (24, 50, 601, 0.05), (7, 9, 20, 0.3), (12, 40, 239, 0.02)] {
            let occ = occupancy_targets(l, s, m, eps).unwrap();
            assert_eq!(occ.iter().sum::<usize>(), m);
            let base = m as f64 / l as f64;
            let want = |i: usize| match i {
                0 => (1.0 + 2.0 * eps) * base,
                1 | 2 => (1.0 - eps) * base,
                _ => base,
            };
            for (i, &o) in occ.iter().enumerate() {
                assert!((o as f64 - want(i)).abs() <= 1.0, "l={l} part {i}: {o} vs {}", want(i));
            }
        }
        assert!(occupancy_targets(4, 5, 18, 0.5).is_err());
    }

    #[test]
    fn entropy_tracks_exact() {
        let (l, s) = (24, 500);
        let n = (l * s) as f64;
        for eps in [0.0, 0.02, 0.05] {
            let m = l * s / 2;
            let ex = occupancy_probability(l, s, m, eps, OccupancyMode::Exact).unwrap();
            let en = occupancy_probability(l, s, m, eps, OccupancyMode::Entropy).unwrap();
            assert!((ex.log_value - en.log_value).abs() <= l as f64 * n.ln(), "eps={eps}");
        }
    }

    #[test]
    fn trivial_occupancies() {
        let h = random_hypergraph(12, 3, 30, 4).unwrap();
        assert_eq!(conditional_expectation(&h, 3, &[3, 3, 3, 3]).unwrap(), ratio(30, 1));
        assert!(conditional_expectation(&h, 3, &[0, 0, 0, 0]).unwrap().is_zero());
        assert!(conditional_expectation(&h, 3, &[4, 0, 0, 0]).is_err());
    }

    #[test]
    fn matches_conditioned_sampling() {
        let (s, parts) = (6, 4);
        let h = random_hypergraph(s * parts, 3, 60, 11).unwrap();
        let occ = [4usize, 2, 3, 5];
        let want = rational_to_f64(&conditional_expectation(&h, s, &occ).unwrap());
        let mut rng = stream_rng(2, 0);
        let samples = 20_000;
        let (mut sum, mut sq) = (0.0, 0.0);
        for _ in 0..samples {
            let mut b = Vec::new();
            for (p, &o) in occ.iter().enumerate() {
                b.extend(sample(&mut rng, s, o).iter().map(|j| (p * s + j) as u32));
            }
            b.sort_unstable();
            let c = h.count_induced(&b).unwrap() as f64;
            sum += c;
            sq += c * c;
        }
        let mean = sum / samples as f64;
        let se = ((sq / samples as f64 - mean * mean) / samples as f64).sqrt();
        assert!((mean - want).abs() <= 4.0 * se, "{mean} vs {want} (se {se})");
    }
}
