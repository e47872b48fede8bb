//! r-set degree statistics: average degree, extremes and the
//! near-regularity parameter η, exact or sampled.
//!
//!     cargo run --release --example regularity_report -- 13

use hyperdev::families::{build_kap, build_schur, build_sidon};
use hyperdev::{Hypergraph, RegularityMode};

fn show(name: &str, h: &Hypergraph) -> hyperdev::Result<()> {
    println!("{name} (N = {}, k = {}, h = {})", h.vertex_count(), h.uniformity(), h.edge_count());
    for r in 1..=h.uniformity() {
        let rep = h.regularity_report(r, RegularityMode::default())?;
        println!(
            "  r = {r}: avg {:.4}, min {}, max {}, eta = {} ({})",
            rep.avg_f64(),
            rep.min_degree,
            rep.max_degree,
            rep.eta,
            if rep.exact { "exact" } else { "sampled" }
        );
    }
    Ok(())
}

fn main() -> hyperdev::Result<()> {
    let n: u64 = std::env::args().nth(1).map_or(13, |a| a.parse().expect("N"));
    show("3-AP", &build_kap(n, 3)?)?;
    show("Schur", &build_schur(n)?)?;
    show("Sidon", &build_sidon(n)?)?;

    // a large instance falls back to sampling random r-sets
    let big = build_kap(1009, 4)?;
    let rep = big.regularity_report(3, RegularityMode::Sampled { samples: 20_000, seed: 1 })?;
    println!("4-AP on Z/1009Z, r = 3 sampled: max {}, eta ~ {:.3}", rep.max_degree, rep.eta_f64());
    Ok(())
}
