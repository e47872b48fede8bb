//! The uneven occupancy event on an ℓ-part vertex set: its probability,
//! exactly and by the entropy estimate, and the expected edge count of a
//! partite hypergraph given the occupancies.
//!
//!     cargo run --release --example occupancy_and_expectation

use hyperdev::combinatorics::rational_to_f64;
use hyperdev::partite::{
    build_partite, build_weights, conditional_expectation, occupancy_probability, occupancy_targets, OccupancyMode,
    PartiteSpec,
};

fn main() -> hyperdev::Result<()> {
    let (l, s, m, eps) = (24, 200, 2400, 0.1);
    println!("l = {l}, s = {s}, m = {m}, eps = {eps}");
    println!("targets: {:?}", &occupancy_targets(l, s, m, eps)?[..5]);
    // the entropy form keeps only the exponent of the three uneven parts; the
    // exact value also carries every part's point-mass factor, O(ℓ log N)
    for mode in [OccupancyMode::Exact, OccupancyMode::Entropy] {
        let p = occupancy_probability(l, s, m, eps, mode)?;
        println!("{mode:?}: ln P = {:.4}", p.log_value);
    }

    let spec = PartiteSpec::new(2, 24, 24, 0.25, true)?;
    let g = build_partite(&build_weights(&spec)?);
    let even = occupancy_targets(24, 24, 240, 0.0)?;
    let uneven = occupancy_targets(24, 24, 240, 0.2)?;
    for (name, occ) in [("even", even), ("uneven", uneven)] {
        let e = conditional_expectation(&g, 24, &occ)?;
        println!("E[N(B) | {name} occupancies] = {:.4}", rational_to_f64(&e));
    }
    Ok(())
}
