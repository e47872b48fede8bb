//! Monte Carlo tail of the 3-AP count in a random m-subset of Z/NZ against
//! the explicit bound, using the word-parallel counter.
//!
//!     cargo run --release --example ap3_monte_carlo -- 101 50 100000

use hyperdev::bounds::{ap3_explicit_bound, ap3_threshold};
use hyperdev::lab::{tail_estimate, Ap3Counter, Ap3Method, SubsetModel};

fn main() -> hyperdev::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer")).collect();
    let n = args.first().copied().unwrap_or(101) as usize;
    let m = args.get(1).copied().unwrap_or(50) as usize;
    let samples = args.get(2).copied().unwrap_or(100_000);

    let counter = Ap3Counter::new(n, Ap3Method::Bitset)?;
    let thresholds: Vec<f64> = (0..=10).map(|i| 10.0 * i as f64).collect();
    let stats = tail_estimate(&counter, SubsetModel::M { m }, &thresholds, samples, 1, 0.95)?;
    println!("N = {n}, m = {m}, mean = {:.4} ({}), samples = {samples}", stats.mean, stats.mean_exact);
    println!("bound is nontrivial beyond a* = {:.0}", ap3_threshold(n as f64, m as f64));
    println!("{:>6} {:>10} {:>22} {:>12}", "a", "P(|D|>a)", "95% CI", "bound");
    for (t, &a) in thresholds.iter().enumerate() {
        let est = stats.exceed_abs[t] as f64 / samples as f64;
        let (lo, hi) = stats.abs_interval(t);
        let bound = ap3_explicit_bound(n as f64, m as f64, a)?.value;
        println!("{a:>6} {est:>10.5} [{lo:>9.5}, {hi:>9.5}] {bound:>12.3e}");
    }
    Ok(())
}
