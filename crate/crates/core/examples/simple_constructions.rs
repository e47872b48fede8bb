//! The small explicit constructions for r = 1, 2, 3 and how they fare
//! against the four niceness conditions.
//!
//!     cargo run --release --example simple_constructions

use hyperdev::partite::{niceness_check, simple_construction};

fn main() -> hyperdev::Result<()> {
    for (r, s) in [(1, 20), (2, 13), (3, 20)] {
        let c = simple_construction(r, s, 2)?;
        let h = &c.hypergraph;
        println!("r = {r}: {}", c.description);
        println!("  N = {}, k = {}, h = {}", h.vertex_count(), h.uniformity(), h.edge_count());
        if r >= 2 {
            let rep = niceness_check(h, c.parts, c.part_size, 1.0, 3f64.powi(1 - r as i32))?;
            println!(
                "  eta {:.3}: {}, density: {}, max r-degree: {}, c_r = {}: {}",
                rep.eta, rep.near_regular, rep.density_ok, rep.max_degree_ok, rep.c_r, rep.c_r_ok
            );
        }
    }
    Ok(())
}
