use serde::Serialize;

use crate::combinatorics::is_prime;
use crate::error::{Error, Result};
use crate::families::build_kap;
use crate::hypergraph::Hypergraph;

/// One of the small explicit examples, with its part structure.
#[derive(Clone, Debug, Serialize)]
pub struct SimpleConstruction {
    pub r: usize,
    pub parts: usize,
    pub part_size: usize,
    pub description: String,
    #[serde(skip)]
    pub hypergraph: Hypergraph,
}

/// r = 1: a `degree`-regular circulant graph on the first s of 2s
/// vertices. r = 2: two disjoint copies of the 3-AP hypergraph of Z/sZ
/// (s prime). r = 3: 4-sets with two vertices in each of two of three
/// parts of size s.
pub fn simple_construction(r: usize, s: usize, degree: usize) -> Result<SimpleConstruction> {
    match r {
        1 => {
            if degree >= s || (degree % 2 == 1 && s % 2 == 1) {
                return Err(Error::Infeasible(format!("no {degree}-regular graph on {s} vertices")));
            }
            let mut edges = Vec::new();
            for v in 0..s {
                for t in 1..=degree / 2 {
                    edges.push([v as u32, ((v + t) % s) as u32]);
                }
                if degree % 2 == 1 && v < s / 2 {
                    edges.push([v as u32, (v + s / 2) as u32]);
                }
            }
            Ok(SimpleConstruction {
                r,
                parts: 2,
                part_size: s,
                description: format!("{degree}-regular graph on half of {} vertices", 2 * s),
                hypergraph: Hypergraph::new(2 * s, 2, &edges)?,
            })
        }
        2 => {
            if !is_prime(s as u64) || s < 5 {
                return Err(Error::NotPrime { n: s as u64 });
            }
            let one = build_kap(s as u64, 3)?;
            let mut edges: Vec<[u32; 3]> = Vec::with_capacity(2 * one.edge_count() as usize);
            for copy in 0..2u32 {
                for e in one.edges() {
                    edges.push([e[0] + copy * s as u32, e[1] + copy * s as u32, e[2] + copy * s as u32]);
                }
            }
            Ok(SimpleConstruction {
                r,
                parts: 2,
                part_size: s,
                description: format!("two disjoint copies of the 3-AP hypergraph of Z/{s}"),
                hypergraph: Hypergraph::new(2 * s, 3, &edges)?,
            })
        }
        3 => {
            if s < 2 {
                return Err(Error::Infeasible("parts need at least 2 vertices".into()));
            }
            let mut edges = Vec::new();
            for (p, q) in [(0, 1), (0, 2), (1, 2)] {
                for a in 0..s {
                    for b in a + 1..s {
                        for c in 0..s {
                            for d in c + 1..s {
                                edges.push([(p * s + a) as u32, (p * s + b) as u32, (q * s + c) as u32, (q * s + d) as u32]);
                            }
                        }
                    }
                }
            }
            Ok(SimpleConstruction {
                r,
                parts: 3,
                part_size: s,
                description: format!("pairs in two of three parts of size {s}"),
                hypergraph: Hypergraph::new(3 * s, 4, &edges)?,
            })
        }
        _ => Err(Error::InvalidParameter(format!("simple constructions exist for r in 1..=3, got {r}"))),
    }
}
