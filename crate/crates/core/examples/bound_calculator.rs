//! Evaluating the tail bounds: the explicit 3-AP bound over a range of
//! thresholds, Azuma, the near-regular bound with the default constants
//! and the p-model rate with its δ window.
//!
//!     cargo run --release --example bound_calculator

use hyperdev::bounds::{
    ap3_explicit_bound, ap3_threshold, azuma, evaluate, BoundQuery, ConstantsPack, RateVariant, TheoremId,
};

fn main() -> hyperdev::Result<()> {
    let (n, m) = (101.0, 50.0);
    println!("3-AP bound, N = {n}, m = {m}; drops below 1 at a* = {:.1}", ap3_threshold(n, m));
    for a in [1000.0, 3000.0, 5000.0, 8000.0] {
        println!("  a = {a:>6}: {:.6e}", ap3_explicit_bound(n, m, a)?.value);
    }

    let c = vec![3.0; 100];
    println!("Azuma with 100 steps of size 3, a = 60: {:.6e}", azuma(&c, 60.0)?.value);

    let q = BoundQuery::from_json_relaxed("{N:101,k:3,r:2,m:50,a:4000,eta:0,Delta_r:3,h:5050}")?;
    let res = evaluate(TheoremId::NearRegular, &q, Some(&ConstantsPack::default_for(3, 2)))?;
    println!("near-regular bound: ln = {:.3}, side conditions hold: {}", res.log_value, res.valid);
    for cond in &res.conditions {
        println!("  {}: {} ({})", cond.name, cond.holds, cond.detail);
    }

    let q = BoundQuery {
        n: Some(1e6),
        p: Some(0.01),
        delta: Some(0.05),
        variant: Some(RateVariant::Ap3),
        r: Some(2),
        max_degree: Some(3.0),
        h: Some(5e11),
        ..Default::default()
    };
    let res = evaluate(TheoremId::PModelRate, &q, None)?;
    println!("p-model rate: {:.3}, window {:?}", res.extras["rate"], (res.extras["window_lower"], res.extras["window_upper"]));
    Ok(())
}
