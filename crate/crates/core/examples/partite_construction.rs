//! Weighted ℓ-part construction: weights, edge count, Q coefficients and
//! the niceness report at desk scale.
//!
//!     cargo run --release --example partite_construction -- 2 24 40 0.25

use hyperdev::partite::{build_partite, build_weights, niceness_check, q_coefficients, PartiteSpec};
use hyperdev::EdgeSource;

fn main() -> hyperdev::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.to_string());
    let r: usize = arg(0, "2").parse().expect("r");
    let l: usize = arg(1, "24").parse().expect("l");
    let s: usize = arg(2, "40").parse().expect("s");
    let gamma: f64 = arg(3, "0.25").parse().expect("gamma");

    let spec = PartiteSpec::new(r, l, s, gamma, true)?;
    for w in spec.warnings() {
        println!("warning: {w}");
    }
    let weights = build_weights(&spec)?;
    for e in &weights.entries {
        println!("alpha{} = {:.6}  window {}", e.ty, e.alpha, e.window);
    }
    let g = build_partite(&weights);
    println!("N = {}, h = {}", g.vertex_count(), g.edge_count());
    println!("Q coefficients: {:?}", q_coefficients(&g));

    let h = g.materialize();
    let rep = niceness_check(&h, l, s, gamma, 3f64.powi(1 - r as i32))?;
    println!("(i)   eta = {:.4} (max {:.4}): {}", rep.eta, rep.eta_max, rep.near_regular);
    println!(
        "(ii)  density = {:.3e} in [{:.3e}, {:.3e}]: {}",
        rep.density, rep.density_lo, rep.density_hi, rep.density_ok
    );
    println!(
        "(iii) max r-degree = {} <= {:.1}: {}",
        rep.max_r_degree, rep.max_r_degree_limit, rep.max_degree_ok
    );
    println!("(iv)  c_r = {} >= {:.1}: {}", rep.c_r, rep.c_r_target, rep.c_r_ok);
    println!(
        "      c_r >= {:.1} (with 1/r!): {}",
        rep.c_r_construction_target, rep.c_r_construction_ok
    );
    Ok(())
}
