//! Property tests over random small hypergraphs and subsets.

use hyperdev::bounds::{ap3_explicit_bound, azuma, evaluate, pmodel_rate, BoundQuery, ConstantsPack, TheoremId};
use hyperdev::combinatorics::{binom, binom_big, for_each_subset};
use hyperdev::families::random_hypergraph;
use hyperdev::hypergraph::expected_partial;
use hyperdev::lab::kernels::ap3_naive;
use hyperdev::lab::{ap3_count, exact_distribution, Ap3Method};
use hyperdev::{Hypergraph, RegularityMode};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn small_hypergraph() -> impl Strategy<Value = Hypergraph> {
    (4usize..=10, 2usize..=4, 0usize..=30, any::<u64>())
        .prop_filter("k <= n", |(n, k, _, _)| *k <= *n)
        .prop_map(|(n, k, h, seed)| random_hypergraph(n, k, h, seed).unwrap())
}

fn subset_of(n: usize) -> impl Strategy<Value = Vec<u32>> {
    proptest::collection::btree_set(0..n as u32, 0..=n).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn degree_sums(h in small_hypergraph()) {
        let (n, k) = (h.vertex_count(), h.uniformity());
        for r in 0..=k {
            let mut sum = 0u128;
            for_each_subset(n, r, |s| {
                let s: Vec<u32> = s.iter().map(|&v| v as u32).collect();
                sum += h.degree(&s).unwrap() as u128;
            });
            prop_assert_eq!(sum, binom(k as u64, r as u64) * h.edge_count() as u128);
        }
        let vsum: u64 = (0..n).map(|v| h.vertex_degree(v)).sum();
        prop_assert_eq!(vsum, k as u64 * h.edge_count());
    }

    #[test]
    fn top_partial_count_is_induced(h in small_hypergraph(), seed in any::<u64>()) {
        let n = h.vertex_count();
        let set: Vec<u32> = (0..n as u32).filter(|v| (seed >> (v % 64)) & 1 == 1).collect();
        prop_assert_eq!(h.count_partial(&set, h.uniformity()).unwrap(), h.count_induced(&set).unwrap());
        prop_assert_eq!(h.count_partial(&set, 0).unwrap(), h.edge_count());
    }

    #[test]
    fn partial_counts_average_to_their_mean(h in small_hypergraph(), m_frac in 0.0f64..=1.0) {
        let (n, k) = (h.vertex_count(), h.uniformity());
        let m = (m_frac * n as f64).round() as usize;
        for j in 0..=k {
            let mut sum = 0u64;
            for_each_subset(n, m, |s| {
                let s: Vec<u32> = s.iter().map(|&v| v as u32).collect();
                sum += h.count_partial(&s, j).unwrap();
            });
            let avg = BigRational::new(BigInt::from(sum), binom_big(n as u64, m as u64));
            prop_assert_eq!(avg, expected_partial(n, k, h.edge_count(), j, m).unwrap());
        }
    }

    #[test]
    fn link_degrees(h in small_hypergraph(), x in 0usize..4) {
        let x = x % h.vertex_count();
        let link = h.link(x).unwrap();
        prop_assert_eq!(link.edge_count(), h.vertex_degree(x));
        prop_assert_eq!(link.uniformity(), h.uniformity() - 1);
    }

    #[test]
    fn edge_list_round_trip(h in small_hypergraph()) {
        let mut buf = Vec::new();
        h.write_edge_list(&mut buf).unwrap();
        let back = Hypergraph::read_edge_list(&buf[..]).unwrap();
        prop_assert_eq!(back, h);
    }

    #[test]
    fn eta_bounds_every_degree(h in small_hypergraph(), r in 1usize..=2) {
        let rep = h.regularity_report(r, RegularityMode::Exact { budget: 1_000_000 }).unwrap();
        let avg = rep.avg_f64();
        let eta = rep.eta_f64();
        prop_assert!(rep.max_degree as f64 <= (1.0 + eta) * avg + 1e-9);
        prop_assert!(rep.min_degree as f64 >= (1.0 - eta) * avg - 1e-9);
    }

    #[test]
    fn ap3_kernels_agree(n_idx in 0usize..6, set in subset_of(61)) {
        let n = [5usize, 7, 13, 31, 53, 61][n_idx];
        let set: Vec<u32> = set.into_iter().filter(|&v| (v as usize) < n).collect();
        let truth = ap3_naive(&set, n);
        for method in [Ap3Method::Ntt, Ap3Method::Fft, Ap3Method::Bitset] {
            prop_assert_eq!(ap3_count(&set, n, method).unwrap(), truth);
        }
    }

    #[test]
    fn explicit_bound_decreases_in_a(m in 1.0f64..200.0, a in 0.0f64..1e5, step in 0.0f64..1e4) {
        let lo = ap3_explicit_bound(101.0, m, a).unwrap().value;
        let hi = ap3_explicit_bound(101.0, m, a + step).unwrap().value;
        prop_assert!(hi <= lo);
    }

    #[test]
    fn azuma_decreases_in_a(c in proptest::collection::vec(0.1f64..5.0, 1..50), a in 0.0f64..100.0, step in 0.0f64..50.0) {
        prop_assert!(azuma(&c, a + step).unwrap().value <= azuma(&c, a).unwrap().value);
    }

    #[test]
    fn near_regular_bound_decreases_in_a(a in 1.0f64..1e6, step in 0.0f64..1e5, r in 2usize..=3) {
        let q = |a: f64| BoundQuery {
            n: Some(101.0), k: Some(3), r: Some(r), m: Some(50.0), a: Some(a),
            eta: Some(0.0), max_degree: Some(3.0), h: Some(5050.0), ..Default::default()
        };
        let c = ConstantsPack::default_for(3, r);
        let lo = evaluate(TheoremId::NearRegular, &q(a), Some(&c)).unwrap().log_value;
        let hi = evaluate(TheoremId::NearRegular, &q(a + step), Some(&c)).unwrap().log_value;
        prop_assert!(hi <= lo);
    }

    #[test]
    fn pmodel_rate_grows_with_delta(d in 0.0f64..1.0, step in 0.0f64..1.0, p in 0.01f64..0.99) {
        let q = |delta: f64| BoundQuery { n: Some(1000.0), k: Some(3), p: Some(p), delta: Some(delta), ..Default::default() };
        prop_assert!(pmodel_rate(&q(d + step)).unwrap().value <= pmodel_rate(&q(d)).unwrap().value);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    // B_m ⊂ B_{m+1} under the natural coupling, so tails can only grow
    #[test]
    fn m_model_tail_grows_with_m(h in small_hypergraph(), c in 0i64..6) {
        let n = h.vertex_count();
        let c = BigRational::from_integer(c.into());
        let tails: Vec<BigRational> = (0..=n)
            .map(|m| exact_distribution(&h, m, 1_000_000).unwrap().tail_gt(&c))
            .collect();
        for w in tails.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
    }
}
