use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ci::clopper_pearson;
use super::sampling::{sample_m, sample_p, stream_rng};
use super::InducedCounter;
use crate::bounds::pmodel_mean_exact;
use crate::combinatorics::{decimal_rational, rational_to_f64};
use crate::error::{Error, Result};
use crate::hypergraph::expected_partial;

/// Samples per substream. Fixed so that results do not depend on the
/// number of worker threads.
pub const CHUNK: u64 = 4096;

/// Random subset model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum SubsetModel {
    /// Uniform m-element subset.
    M { m: usize },
    /// Independent inclusion with probability p.
    P { p: f64 },
}

impl SubsetModel {
    /// Exact mean of the induced count: L_k(m) or p^k·h.
    pub fn mean_exact(&self, n: usize, k: usize, h: u64) -> Result<BigRational> {
        match *self {
            SubsetModel::M { m } => expected_partial(n, k, h, k, m),
            SubsetModel::P { p } => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidParameter(format!("p must lie in [0,1], got {p}")));
                }
                Ok(pmodel_mean_exact(&exact_float(p)?, k, h))
            }
        }
    }
}

fn exact_float(x: f64) -> Result<BigRational> {
    decimal_rational(x).ok_or_else(|| Error::InvalidParameter(format!("not a finite number: {x}")))
}

/// Integer cutoffs equivalent to D > a and D < −a for an integer count.
#[derive(Clone, Copy, Debug)]
struct Cutoffs {
    /// D > a  ⟺  count ≥ upper
    upper: i128,
    /// D < −a  ⟺  count ≤ lower
    lower: i128,
    always_abs: bool,
}

fn cutoffs(mean: &BigRational, a: f64) -> Result<Cutoffs> {
    let a_exact = exact_float(a)?;
    let hi = mean + &a_exact;
    let lo = mean - &a_exact;
    let upper = hi.floor().to_integer() + BigInt::from(1);
    let lower = lo.ceil().to_integer() - BigInt::from(1);
    Ok(Cutoffs {
        upper: upper.to_i128().unwrap_or(i128::MAX),
        lower: lower.to_i128().unwrap_or(i128::MIN),
        always_abs: a < 0.0,
    })
}

/// Exceedance counts of the + side, − side and |·| at every threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    #[serde(flatten)]
    pub model: SubsetModel,
    pub n: usize,
    pub k: usize,
    pub h: u64,
    pub mean: f64,
    /// The exact mean as `p/q`.
    pub mean_exact: String,
    pub thresholds: Vec<f64>,
    pub exceed_plus: Vec<u64>,
    pub exceed_minus: Vec<u64>,
    pub exceed_abs: Vec<u64>,
    pub samples: u64,
    pub seed: u64,
    pub confidence: f64,
    pub ci_method: String,
    /// Observed induced counts and how often each occurred.
    pub histogram: BTreeMap<u64, u64>,
}

/// One line of the tail table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailRow {
    pub threshold: f64,
    pub side: &'static str,
    pub exceedances: u64,
    pub samples: u64,
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl SampleStats {
    /// Rows for the sides `+`, `-` and `abs` at every threshold.
    pub fn rows(&self) -> Vec<TailRow> {
        let mut out = Vec::with_capacity(3 * self.thresholds.len());
        for (t, &a) in self.thresholds.iter().enumerate() {
            for (side, x) in [
                ("+", self.exceed_plus[t]),
                ("-", self.exceed_minus[t]),
                ("abs", self.exceed_abs[t]),
            ] {
                let (ci_lo, ci_hi) = clopper_pearson(x, self.samples, self.confidence);
                out.push(TailRow {
                    threshold: a,
                    side,
                    exceedances: x,
                    samples: self.samples,
                    estimate: x as f64 / self.samples.max(1) as f64,
                    ci_lo,
                    ci_hi,
                });
            }
        }
        out
    }

    /// Clopper–Pearson interval of P(|D| > a) at threshold index `t`.
    pub fn abs_interval(&self, t: usize) -> (f64, f64) {
        clopper_pearson(self.exceed_abs[t], self.samples, self.confidence)
    }
}

fn merge(mut a: BTreeMap<u64, u64>, b: BTreeMap<u64, u64>) -> BTreeMap<u64, u64> {
    for (c, x) in b {
        *a.entry(c).or_insert(0) += x;
    }
    a
}

/// Estimates P(D > a), P(D < −a) and P(|D| > a) for each threshold from
/// `samples` random subsets. Substream c of `seed` draws samples
/// c·CHUNK.. in order, so the result is identical for any thread count.
pub fn tail_estimate<C: InducedCounter + ?Sized>(
    counter: &C,
    model: SubsetModel,
    thresholds: &[f64],
    samples: u64,
    seed: u64,
    confidence: f64,
) -> Result<SampleStats> {
    if thresholds.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidParameter("thresholds must be sorted ascending".into()));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidParameter(format!("confidence must lie in (0,1), got {confidence}")));
    }
    let (n, k, h) = (counter.vertex_count(), counter.uniformity(), counter.edge_count());
    if let SubsetModel::M { m } = model {
        if m > n {
            return Err(Error::OutOfRange {
                what: "m",
                value: m,
                lo: 0,
                hi: n,
            });
        }
    }
    let mean = model.mean_exact(n, k, h)?;
    let cuts = thresholds
        .iter()
        .map(|&a| cutoffs(&mean, a))
        .collect::<Result<Vec<_>>>()?;

    let chunks = samples.div_ceil(CHUNK);
    let histogram = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c);
            let size = CHUNK.min(samples - c * CHUNK);
            let mut pool = Vec::with_capacity(n);
            let mut hist = BTreeMap::new();
            for _ in 0..size {
                let set = match model {
                    SubsetModel::M { m } => sample_m(n, m, &mut rng, &mut pool),
                    SubsetModel::P { p } => sample_p(n, p, &mut rng),
                };
                *hist.entry(counter.count(&set)).or_insert(0u64) += 1;
            }
            hist
        })
        .reduce(BTreeMap::new, merge);

    let mut stats = SampleStats {
        model,
        n,
        k,
        h,
        mean: rational_to_f64(&mean),
        mean_exact: mean.to_string(),
        thresholds: thresholds.to_vec(),
        exceed_plus: vec![0; thresholds.len()],
        exceed_minus: vec![0; thresholds.len()],
        exceed_abs: vec![0; thresholds.len()],
        samples,
        seed,
        confidence,
        ci_method: "clopper-pearson".into(),
        histogram,
    };
    for (t, cut) in cuts.iter().enumerate() {
        for (&count, &x) in &stats.histogram {
            let c = count as i128;
            let plus = c >= cut.upper;
            let minus = c <= cut.lower;
            stats.exceed_plus[t] += x * plus as u64;
            stats.exceed_minus[t] += x * minus as u64;
            stats.exceed_abs[t] += x * (plus || minus || cut.always_abs) as u64;
        }
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::build_kap;
    use crate::lab::exact_distribution;

    #[test]
    fn cutoffs_are_exact() {
        let mean = BigRational::new(7.into(), 2.into()); // 3.5
        let c = cutoffs(&mean, 0.5).unwrap();
        // D > 0.5 ⟺ N > 4 ⟺ N ≥ 5 ; D < -0.5 ⟺ N < 3 ⟺ N ≤ 2
        assert_eq!((c.upper, c.lower), (5, 2));
        let c0 = cutoffs(&BigRational::from_integer(3.into()), 0.0).unwrap();
        assert_eq!((c0.upper, c0.lower), (4, 2));
    }

    #[test]
    fn trivial_thresholds() {
        let h = build_kap(13, 3).unwrap();
        let stats = tail_estimate(&h, SubsetModel::M { m: 6 }, &[-1.0, 1000.0], 2000, 1, 0.95).unwrap();
        assert_eq!(stats.exceed_abs[0], 2000);
        assert_eq!(stats.exceed_abs[1], 0);
        let rows = stats.rows();
        let last = rows.last().unwrap();
        assert_eq!(last.estimate, 0.0);
        assert!(last.ci_hi < 4.0 / 2000.0);
    }

    #[test]
    fn seeds_reproduce_and_threads_do_not_matter() {
        let h = build_kap(13, 3).unwrap();
        let th = [0.0, 2.0, 5.0];
        let a = tail_estimate(&h, SubsetModel::M { m: 6 }, &th, 10_000, 5, 0.95).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| tail_estimate(&h, SubsetModel::M { m: 6 }, &th, 10_000, 5, 0.95).unwrap());
        assert_eq!(a, b);
        let c = tail_estimate(&h, SubsetModel::M { m: 6 }, &th, 10_000, 6, 0.95).unwrap();
        assert_ne!(a.histogram, c.histogram);
    }

    #[test]
    fn estimates_cover_exact_tails() {
        let h = build_kap(13, 3).unwrap();
        let m = 6;
        let exact = exact_distribution(&h, m, 10_000_000).unwrap();
        let th: Vec<f64> = (0..8).map(|a| a as f64).collect();
        let stats = tail_estimate(&h, SubsetModel::M { m }, &th, 200_000, 3, 0.95).unwrap();
        let mut inside = 0;
        for (t, &a) in th.iter().enumerate() {
            let truth = rational_to_f64(&exact.abs_deviation_tail(&decimal_rational(a).unwrap()));
            let (lo, hi) = stats.abs_interval(t);
            inside += (lo <= truth && truth <= hi) as usize;
            assert!(stats.exceed_abs[t] >= stats.exceed_plus[t].max(stats.exceed_minus[t]));
            if t > 0 {
                assert!(stats.exceed_abs[t] <= stats.exceed_abs[t - 1]);
            }
        }
        assert!(inside >= th.len() - 1);
    }

    #[test]
    fn rejects_unsorted_thresholds() {
        let h = build_kap(7, 3).unwrap();
        assert!(tail_estimate(&h, SubsetModel::M { m: 3 }, &[2.0, 1.0], 10, 0, 0.95).is_err());
        assert!(tail_estimate(&h, SubsetModel::M { m: 8 }, &[1.0], 10, 0, 0.95).is_err());
    }
}
