//! Q^H(x) = Σ_e (1+2x)^{e_1}(1−x)^{e_2+e_3}, e_i = |e ∩ V_i| for the first
//! three parts. Coefficients are returned lowest degree first.

use std::collections::BTreeMap;

use super::graph::{placements, symmetry, window_count, PartiteHypergraph};
use crate::combinatorics::binom;
use crate::hypergraph::EdgeSource;

/// (1+2x)^a (1−x)^b as integer coefficients.
fn factor(a: usize, b: usize) -> Vec<i128> {
    let mut out = vec![0i128; a + b + 1];
    for i in 0..=a {
        let pa = binom(a as u64, i as u64) as i128 * (1i128 << i);
        for j in 0..=b {
            let pb = binom(b as u64, j as u64) as i128 * if j % 2 == 0 { 1 } else { -1 };
            out[i + j] += pa * pb;
        }
    }
    out
}

fn add_scaled(acc: &mut [i128], poly: &[i128], scale: i128) {
    for (slot, &c) in acc.iter_mut().zip(poly) {
        *slot += scale * c;
    }
}

/// Q contribution of one edge, padded to degree `k`.
pub fn q_polynomial_of_edge(edge: &[u32], s: usize) -> Vec<i128> {
    let mut e = [0usize; 3];
    for &v in edge {
        let part = v as usize / s;
        if part < 3 {
            e[part] += 1;
        }
    }
    let mut poly = factor(e[0], e[1] + e[2]);
    poly.resize(edge.len() + 1, 0);
    poly
}

/// Coefficients by visiting every edge.
pub fn q_coefficients_enumerated(h: &dyn EdgeSource, s: usize) -> Vec<i128> {
    let k = h.uniformity();
    let mut classes: BTreeMap<(usize, usize), i128> = BTreeMap::new();
    h.for_each_edge(&mut |e| {
        let mut c = [0usize; 3];
        for &v in e {
            let part = v as usize / s;
            if part < 3 {
                c[part] += 1;
            }
        }
        *classes.entry((c[0], c[1] + c[2])).or_insert(0) += 1;
    });
    let mut out = vec![0i128; k + 1];
    for ((a, b), count) in classes {
        add_scaled(&mut out, &factor(a, b), count);
    }
    out
}

/// Coefficients by counting, for each admitted type and each way its
/// entries meet V_1, V_2, V_3, the number of good position tuples.
pub fn q_coefficients(g: &PartiteHypergraph) -> Vec<i128> {
    let spec = g.spec();
    let (l, s, k) = (spec.l, spec.s, spec.r + 1);
    let mut out = vec![0i128; k + 1];
    for (t, w) in g.active_types() {
        let sizes = t.parts();
        let q = sizes.len();
        let good = window_count(sizes, *w, s) as i128;
        if good == 0 {
            continue;
        }
        // ordered over labelled entries; divided by the symmetry of t below
        let mut poly = vec![0i128; k + 1];
        let mut slot = vec![3usize; q];
        loop {
            let mut used = [false; 3];
            let mut ok = true;
            let (mut e1, mut e23, mut others) = (0, 0, 0usize);
            for (i, &p) in slot.iter().enumerate() {
                match p {
                    3 => others += 1,
                    _ if used[p] => ok = false,
                    0 => {
                        used[0] = true;
                        e1 += sizes[i];
                    }
                    _ => {
                        used[p] = true;
                        e23 += sizes[i];
                    }
                }
            }
            if ok && others <= l - 3 {
                let ways: i128 = (0..others).map(|i| (l - 3 - i) as i128).product();
                add_scaled(&mut poly, &factor(e1, e23), ways);
            }
            // next assignment in base 4
            let mut i = 0;
            while i < q && slot[i] == 0 {
                slot[i] = 3;
                i += 1;
            }
            if i == q {
                break;
            }
            slot[i] -= 1;
        }
        let sym = symmetry(sizes) as i128;
        debug_assert!(poly.iter().all(|c| c % sym == 0));
        debug_assert_eq!(poly[0] / sym, placements(t, l) as i128);
        for (o, c) in out.iter_mut().zip(&poly) {
            *o += c / sym * good;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;
    use crate::partite::{build_weights, PartiteSpec, PartitionType, WeightVector};

    #[test]
    fn single_edges() {
        let h = Hypergraph::new(9, 3, &[[0u32, 3, 6]]).unwrap();
        assert_eq!(q_coefficients_enumerated(&h, 3), vec![1, 0, -3, 2]);
        let inside = Hypergraph::new(12, 4, &[[0u32, 1, 2, 3]]).unwrap();
        let c = q_coefficients_enumerated(&inside, 4);
        for j in 0..=4 {
            assert_eq!(c[j], binom(4, j as u64) as i128 * (1 << j));
        }
    }

    #[test]
    fn closed_form_matches_enumeration() {
        let cases = [
            (3, 6, 7, vec![(vec![2], 0.6), (vec![1, 1], 0.3)]),
            (2, 5, 9, vec![(vec![1], 0.5)]),
            (4, 7, 5, vec![(vec![3], 0.4), (vec![2, 1], 0.6), (vec![1, 1, 1], 0.8)]),
        ];
        for (r, l, s, alphas) in cases {
            let spec = PartiteSpec::new(r, l, s, 0.5, true).unwrap();
            let alphas: Vec<_> = alphas.into_iter().map(|(x, a)| (PartitionType::new(x), a)).collect();
            let g = PartiteHypergraph::new(WeightVector::from_alphas(&spec, &alphas).unwrap());
            let closed = q_coefficients(&g);
            assert_eq!(closed, q_coefficients_enumerated(&g, s), "r={r}");
            assert_eq!(closed[0], g.edge_count() as i128);
        }
    }

    #[test]
    fn built_construction_r2() {
        let spec = PartiteSpec::new(2, 24, 24, 0.25, true).unwrap();
        let g = PartiteHypergraph::new(build_weights(&spec).unwrap());
        let c = q_coefficients(&g);
        assert_eq!(c, q_coefficients_enumerated(&g, 24));
        assert_eq!(c[0], g.edge_count() as i128);
    }
}
