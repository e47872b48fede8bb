//! Binomial tails three ways: log-sum of the pmf, the incomplete beta
//! function, and the −x²/2 prediction at normalized distance x.
//!
//!     cargo run --release --example binomial_tails -- 10000 0.3

use hyperdev::bounds::{binom_log_tail, binom_tail_beta, stirling_log_tail, tail_index};

fn main() -> hyperdev::Result<()> {
    let n: u64 = std::env::args().nth(1).map_or(10_000, |a| a.parse().expect("N"));
    let p: f64 = std::env::args().nth(2).map_or(0.3, |a| a.parse().expect("p"));
    println!("{:>4} {:>8} {:>14} {:>14} {:>10}", "x", "m", "ln tail", "ln beta", "-x^2/2");
    for x in [0.5, 1.0, 2.0, 4.0, 8.0] {
        let m = tail_index(n, p, x);
        let lt = binom_log_tail(n, p, m)?;
        let lb = binom_tail_beta(n, p, m)?.ln();
        println!("{x:>4} {m:>8} {lt:>14.6} {lb:>14.6} {:>10.3}", stirling_log_tail(n, p, x));
    }
    Ok(())
}
