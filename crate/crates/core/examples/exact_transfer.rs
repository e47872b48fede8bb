//! Exact tails for small N: the full law of N(B_m), and the p-model tail
//! computed both as a binomial mixture of m-model tails and by visiting
//! all 2^N subsets.
//!
//!     cargo run --release --example exact_transfer -- 12 1/2

use hyperdev::bounds::{pmodel_mean_exact, pmodel_transfer_exact};
use hyperdev::combinatorics::rational_to_f64;
use hyperdev::families::random_hypergraph;
use hyperdev::hypergraph::DEFAULT_SET_BUDGET;
use hyperdev::lab::{exact_distribution, pmodel_exact_tail};
use num_rational::BigRational;

fn main() -> hyperdev::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(12, |a| a.parse().expect("N"));
    let p: BigRational = std::env::args().nth(2).map_or("1/2".into(), |a| a).parse().expect("p as a/b");

    let h = random_hypergraph(n, 3, 25, 3)?;
    let dist = exact_distribution(&h, n / 2, DEFAULT_SET_BUDGET)?;
    println!("N(B_m) for m = {}: mean {}", n / 2, dist.mean());
    for (c, x) in &dist.counts {
        println!("  P(N = {c}) = {x}/{}", dist.total);
    }

    let cut = pmodel_mean_exact(&p, 3, h.edge_count()) + BigRational::from_integer(2.into());
    let mixture = pmodel_transfer_exact(n as u64, &p, |m| {
        Ok(exact_distribution(&h, m as usize, DEFAULT_SET_BUDGET)?.tail_gt(&cut))
    })?;
    let direct = pmodel_exact_tail(&h, &p, &cut, DEFAULT_SET_BUDGET)?;
    println!("P(D(B_p) > 2) for p = {p}:");
    println!("  mixture {} = {:.12}", mixture, rational_to_f64(&mixture));
    println!("  direct  {} = {:.12}", direct, rational_to_f64(&direct));
    println!("  equal: {}", mixture == direct);
    Ok(())
}
