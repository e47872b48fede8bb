//! Arithmetic hypergraphs over Z/NZ: k-term progressions, Schur triples,
//! Sidon quadruples and the solution sets of linear systems.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{for_each_subset, is_prime, mod_inv};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

fn require_prime(n: u64) -> Result<()> {
    if is_prime(n) {
        Ok(())
    } else {
        Err(Error::NotPrime { n })
    }
}

/// Nontrivial k-term progressions {x, x+d, …, x+(k-1)d} in Z/NZ, one edge
/// per (x, d) with d in 1..=(N-1)/2.
pub fn build_kap(n: u64, k: usize) -> Result<Hypergraph> {
    require_prime(n)?;
    if k < 3 || n <= k as u64 {
        return Err(Error::InvalidParameter(format!(
            "k-AP family needs N > k >= 3 (N={n}, k={k})"
        )));
    }
    let mut flat = Vec::with_capacity((n * (n - 1) / 2) as usize * k);
    let mut edge = Vec::with_capacity(k);
    for x in 0..n {
        for d in 1..=(n - 1) / 2 {
            edge.clear();
            edge.extend((0..k as u64).map(|i| ((x + i * d) % n) as u32));
            edge.sort_unstable();
            flat.extend_from_slice(&edge);
        }
    }
    Ok(Hypergraph::from_sorted_flat(n as usize, k, flat))
}

/// Schur triples {x, y, x+y} of distinct nonzero residues. Vertex `v` of the
/// returned hypergraph stands for the residue `v + 1`.
pub fn build_schur(n: u64) -> Result<Hypergraph> {
    require_prime(n)?;
    if n < 7 {
        return Err(Error::InvalidParameter(format!("Schur family needs N >= 7 (N={n})")));
    }
    let mut seen = HashSet::new();
    let mut flat = Vec::new();
    for x in 1..n {
        for y in x + 1..n {
            let z = (x + y) % n;
            if z == 0 || z == x || z == y {
                continue;
            }
            let mut t = [x as u32 - 1, y as u32 - 1, z as u32 - 1];
            t.sort_unstable();
            if seen.insert(t) {
                flat.extend_from_slice(&t);
            }
        }
    }
    Ok(Hypergraph::from_sorted_flat(n as usize - 1, 3, flat))
}

/// Sidon quadruples: 4-sets of distinct residues admitting a pairing with
/// x + y = z + t. Each 4-set appears once.
pub fn build_sidon(n: u64) -> Result<Hypergraph> {
    require_prime(n)?;
    if n < 11 {
        return Err(Error::InvalidParameter(format!("Sidon family needs N >= 11 (N={n})")));
    }
    let mut flat = Vec::new();
    for_each_subset(n as usize, 4, |q| {
        let [a, b, c, d] = [q[0] as u64, q[1] as u64, q[2] as u64, q[3] as u64];
        let balanced = |s: u64, t: u64| s % n == t % n;
        if balanced(a + b, c + d) || balanced(a + c, b + d) || balanced(a + d, b + c) {
            flat.extend(q.iter().map(|&v| v as u32));
        }
    });
    Ok(Hypergraph::from_sorted_flat(n as usize, 4, flat))
}

/// An l×k integer system Ax = 0 over the prime field Z/NZ.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct LinearSystemSpec {
    pub rows: Vec<Vec<i64>>,
    pub modulus: u64,
}

impl LinearSystemSpec {
    pub fn new(rows: Vec<Vec<i64>>, modulus: u64) -> Result<Self> {
        let spec = LinearSystemSpec { rows, modulus };
        spec.validate()?;
        Ok(spec)
    }

    pub fn l(&self) -> usize {
        self.rows.len()
    }

    pub fn k(&self) -> usize {
        self.rows.first().map_or(0, |r| r.len())
    }

    /// Parses `l` lines of `k` whitespace-separated integers.
    pub fn parse_matrix(text: &str, modulus: u64) -> Result<Self> {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse::<i64>().map_err(|_| Error::Parse(format!("bad entry `{t}`"))))
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows, modulus)
    }

    fn reduced(&self) -> Vec<Vec<u64>> {
        let p = self.modulus as i64;
        self.rows
            .iter()
            .map(|r| r.iter().map(|&a| a.rem_euclid(p) as u64).collect())
            .collect()
    }

    /// Checks primality, shape l ≤ k-2, nonsingular l×l minors and irredundancy.
    pub fn validate(&self) -> Result<()> {
        require_prime(self.modulus)?;
        let (l, k) = (self.l(), self.k());
        if l == 0 || self.rows.iter().any(|r| r.len() != k) || l + 2 > k {
            return Err(Error::InvalidParameter(format!(
                "need a rectangular l x k matrix with 1 <= l <= k-2 (l={l}, k={k})"
            )));
        }
        let a = self.reduced();
        let p = self.modulus;
        let mut singular = None;
        for_each_subset(k, l, |cols| {
            if singular.is_none() {
                let minor: Vec<Vec<u64>> =
                    a.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
                if rank_mod(minor, p) < l {
                    singular = Some(cols.to_vec());
                }
            }
        });
        if let Some(columns) = singular {
            return Err(Error::SingularMinor {
                columns,
                size: l,
                modulus: p,
            });
        }
        for i in 0..k {
            for j in i + 1..k {
                let mut m = a.clone();
                let mut row = vec![0u64; k];
                row[i] = 1;
                row[j] = p - 1;
                m.push(row);
                if rank_mod(m, p) < l + 1 {
                    return Err(Error::RedundantPair { i, j, modulus: p });
                }
            }
        }
        Ok(())
    }
}

fn rank_mod(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c] % p != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = mod_inv(m[rank][c], p).unwrap();
        for v in m[rank].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for cc in 0..cols {
                    m[r][cc] = (m[r][cc] + p * p - f * m[rank][cc] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Edges are the distinct k-sets formed by the entries of solutions with
/// pairwise distinct entries. The first l columns are solved from the
/// remaining k-l free coordinates.
pub fn build_linear_system(spec: &LinearSystemSpec) -> Result<Hypergraph> {
    spec.validate()?;
    let (l, k, p) = (spec.l(), spec.k(), spec.modulus);
    let a = spec.reduced();
    // reduce [A_pivot | A_free] so the pivot block becomes the identity
    let mut m = a.clone();
    for c in 0..l {
        let piv = (c..l).find(|&r| m[r][c] != 0).expect("nonsingular pivot minor");
        m.swap(c, piv);
        let inv = mod_inv(m[c][c], p).unwrap();
        for v in m[c].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..l {
            if r != c && m[r][c] != 0 {
                let f = m[r][c];
                for cc in 0..k {
                    m[r][cc] = (m[r][cc] + p * p - f * m[c][cc] % p) % p;
                }
            }
        }
    }
    let free = k - l;
    let total = (p as u128).pow(free as u32);
    let mut seen = HashSet::new();
    let mut flat = Vec::new();
    let mut x = vec![0u64; k];
    for code in 0..total {
        let mut c = code;
        for f in 0..free {
            x[l + f] = (c % p as u128) as u64;
            c /= p as u128;
        }
        for r in 0..l {
            let s: u64 = (0..free).map(|f| m[r][l + f] * x[l + f] % p).sum::<u64>() % p;
            x[r] = (p - s) % p;
        }
        let mut sorted: Vec<u32> = x.iter().map(|&v| v as u32).collect();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        if seen.insert(sorted.clone()) {
            flat.extend_from_slice(&sorted);
        }
    }
    Ok(Hypergraph::from_sorted_flat(p as usize, k, flat))
}

/// Random k-uniform hypergraph with `h` edges drawn uniformly (with
/// replacement, so repeated edges are possible).
pub fn random_hypergraph(n: usize, k: usize, h: usize, seed: u64) -> Result<Hypergraph> {
    if k > n {
        return Err(Error::InvalidParameter(format!("k={k} exceeds N={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut flat = Vec::with_capacity(h * k);
    for _ in 0..h {
        let mut e: Vec<u32> = rand::seq::index::sample(&mut rng, n, k)
            .iter()
            .map(|v| v as u32)
            .collect();
        e.sort_unstable();
        flat.extend_from_slice(&e);
    }
    Ok(Hypergraph::from_sorted_flat(n, k, flat))
}

/// Random hypergraph that keeps each k-subset independently with probability `p`.
pub fn random_binomial_hypergraph(n: usize, k: usize, p: f64, seed: u64) -> Hypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut flat = Vec::new();
    for_each_subset(n, k, |s| {
        if rng.gen::<f64>() < p {
            flat.extend(s.iter().map(|&v| v as u32));
        }
    });
    Hypergraph::from_sorted_flat(n, k, flat)
}
