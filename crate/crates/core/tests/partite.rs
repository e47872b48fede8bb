//! Structural properties of the weighted ℓ-part construction at desk scale.

use hyperdev::combinatorics::rational_to_f64;
use hyperdev::partite::{
    abstract_degree, build_partite, build_weights, conditional_expectation, niceness_check, q_coefficients,
    q_coefficients_enumerated, type_of, PartiteHypergraph, PartiteSpec, PartitionType,
};
use hyperdev::{EdgeSource, RegularityMode};
use proptest::prelude::*;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn built(r: usize, l: usize, s: usize, gamma: f64) -> PartiteHypergraph {
    build_partite(&build_weights(&PartiteSpec::new(r, l, s, gamma, true).unwrap()).unwrap())
}

/// A random (r−1)-set of type x: entry i of x goes to a distinct random part.
fn random_set_of_type(x: &PartitionType, l: usize, s: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let parts = sample(rng, l, x.len());
    let mut set = Vec::new();
    for (count, part) in x.parts().iter().zip(parts.iter()) {
        set.extend(sample(rng, s, *count).iter().map(|j| (part * s + j) as u32));
    }
    set.sort_unstable();
    set
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn part_permutations_preserve_edges(
        r in 2usize..=3,
        s in 6usize..=12,
        seed in any::<u64>(),
    ) {
        let l = r + 5;
        let g = built(r, l, s, 0.5);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let set: Vec<u32> = sample(&mut rng, l * s, r + 1).iter().map(|v| v as u32).collect();
        let perm: Vec<usize> = sample(&mut rng, l, l).into_vec();
        let mut moved: Vec<u32> = set.iter().map(|&v| (perm[v as usize / s] * s + v as usize % s) as u32).collect();
        let mut set = set;
        set.sort_unstable();
        moved.sort_unstable();
        prop_assert_eq!(g.multiplicity(&set), g.multiplicity(&moved));
    }
}

#[test]
fn closed_form_coefficients_match_enumeration() {
    for (r, l, s) in [(2, 6, 7), (2, 24, 8), (3, 7, 6), (4, 8, 5)] {
        let g = built(r, l, s, 0.5);
        let q = q_coefficients(&g);
        assert_eq!(q, q_coefficients_enumerated(&g, s), "r={r} l={l} s={s}");
        assert_eq!(q[0], g.edge_count() as i128);
    }
}

#[test]
fn actual_degrees_track_abstract_degrees() {
    // |deg(A) − d_x| ≤ c·α′·N for (r−1)-sets A of type x with |x| ≥ 2,
    // α′ the largest weight below the top type; c is fitted per s
    let mut fitted = Vec::new();
    for s in [60usize, 120] {
        let g = built(3, 8, s, 0.5);
        let w = g.weights();
        let small = w
            .entries
            .iter()
            .filter(|e| e.ty.len() >= 2)
            .map(|e| e.alpha)
            .fold(0.0, f64::max);
        let n = (8 * s) as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(s as u64);
        let mut c = 0.0f64;
        for x in w.entries.iter().map(|e| e.ty.clone()).filter(|x| x.len() >= 2) {
            let d = abstract_degree(&x, w) as f64;
            for _ in 0..20 {
                let a = random_set_of_type(&x, 8, s, &mut rng);
                assert_eq!(type_of(&a, s), x);
                let deg = g.degree_of(&a) as f64;
                c = c.max((deg - d).abs() / (small * n));
            }
        }
        fitted.push(c);
    }
    println!("fitted c at s = 60, 120: {fitted:?}");
    assert!(fitted.iter().all(|c| c.is_finite()));
    assert!(fitted[1] <= fitted[0] * 1.5 + 0.1, "{fitted:?}");
}

#[test]
fn small_set_degrees_are_near_gamma_s_squared() {
    // sampled (r−1)-set degrees lie in γs² ± C·s, with C fitted at two sizes
    let gamma = 0.5;
    let mut fitted = Vec::new();
    for s in [30usize, 60] {
        let g = built(3, 8, s, gamma);
        let centre = gamma * (s * s) as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(s as u64);
        let mut c = 0.0f64;
        for x in [PartitionType::new(vec![2]), PartitionType::new(vec![1, 1])] {
            for _ in 0..100 {
                let a = random_set_of_type(&x, 8, s, &mut rng);
                c = c.max((g.degree_of(&a) as f64 - centre).abs() / s as f64);
            }
        }
        fitted.push(c);
    }
    println!("fitted C at s = 30, 60: {fitted:?}");
    assert!(fitted[1] <= fitted[0] * 1.5 + 1.0, "{fitted:?}");
}

#[test]
fn low_coefficients_are_small_on_nice_instances() {
    // |c_j| ≤ c·(ηh + h/N) for 1 ≤ j ≤ r−1; c is reported
    let mut nice = 0;
    for (r, l, s, gamma) in [(2usize, 24usize, 24usize, 0.25), (2, 24, 40, 0.25), (3, 8, 30, 0.5)] {
        let g = built(r, l, s, gamma);
        let h = g.materialize();
        let rep = niceness_check(&h, l, s, gamma, 3f64.powi(1 - r as i32)).unwrap();
        if !rep.near_regular {
            println!("r={r} l={l} s={s}: eta = {:.4} exceeds {:.4}, not nice, skipped", rep.eta, rep.eta_max);
            continue;
        }
        nice += 1;
        let q = q_coefficients(&g);
        let scale = rep.eta * h.edge_count() as f64 + h.edge_count() as f64 / (l * s) as f64;
        let c = (1..r).map(|j| q[j].unsigned_abs() as f64 / scale).fold(0.0, f64::max);
        println!("r={r} l={l} s={s}: eta={:.4}, fitted c = {c:.3}", rep.eta);
        assert!(c.is_finite());
    }
    assert!(nice > 0);
}

#[test]
fn r2_instance_is_nice() {
    let g = built(2, 24, 24, 0.25);
    let h = g.materialize();
    let rep = niceness_check(&h, 24, 24, 0.25, 1.0 / 3.0).unwrap();
    assert!(rep.passed(), "{rep:?}");
    // c_2 ≥ γ N³ / (2 ℓ³)
    assert!(rep.c_r as f64 >= 0.25 * 24f64.powi(3) / 2.0);
    let eta = h.regularity_report(1, RegularityMode::default()).unwrap();
    assert!(eta.eta_f64() <= 1.0 / 3.0);
}

#[test]
fn conditional_expectation_limits() {
    let g = built(2, 6, 7, 0.5);
    let full = conditional_expectation(&g, 7, &[7; 6]).unwrap();
    assert_eq!(rational_to_f64(&full), g.edge_count() as f64);
    assert_eq!(rational_to_f64(&conditional_expectation(&g, 7, &[0; 6]).unwrap()), 0.0);
}
