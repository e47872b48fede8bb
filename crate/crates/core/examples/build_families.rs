//! The arithmetic families over Z/NZ and their edge counts, with one of
//! them written out as an edge list.
//!
//!     cargo run --release --example build_families -- 13

use hyperdev::families::{build_kap, build_linear_system, build_schur, build_sidon, LinearSystemSpec};

fn main() -> hyperdev::Result<()> {
    let n: u64 = std::env::args().nth(1).map_or(13, |a| a.parse().expect("N"));

    for k in 3..=5 {
        if n > k as u64 {
            let h = build_kap(n, k)?;
            println!("{k}-AP:   N = {n}, h = {}", h.edge_count());
        }
    }
    let schur = build_schur(n)?;
    println!("Schur:  h = {}", schur.edge_count());
    let sidon = build_sidon(n)?;
    println!("Sidon:  h = {}", sidon.edge_count());

    // x + y = z + w written as a 1x4 system
    let spec = LinearSystemSpec::parse_matrix("1 1 -1 -1", n)?;
    let sys = build_linear_system(&spec)?;
    println!("x+y-z-w = 0: k = {}, h = {}", sys.uniformity(), sys.edge_count());

    println!("\nSchur triples as an edge list:");
    schur.write_edge_list(std::io::stdout().lock())?;
    Ok(())
}
