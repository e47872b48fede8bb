//! Exact check of the martingale decomposition along random insertion
//! orders, and of the per-step increment bound.
//!
//!     cargo run --release --example martingale_verify -- 13 3 20

use hyperdev::families::build_kap;
use hyperdev::martingale::{random_trajectory, verify_reconstruction};
use hyperdev::RegularityMode;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hyperdev::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer")).collect();
    let n = args.first().copied().unwrap_or(13);
    let k = args.get(1).copied().unwrap_or(3) as usize;
    let trials = args.get(2).copied().unwrap_or(20);

    let h = build_kap(n, k)?;
    let eta = h.regularity_report(2, RegularityMode::default())?.eta;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut exact, mut violations) = (0, 0);
    for _ in 0..trials {
        let t = random_trajectory(&h, &mut rng);
        exact += verify_reconstruction(&t)?.exact() as u64;
        violations += t.check_increment_bound(2, &eta)?.violations.len();
    }
    println!("{k}-AP on Z/{n}Z, eta_2 = {eta}");
    println!("reconstruction exact on {exact}/{trials} trajectories");
    println!("increment bound violations: {violations}");

    let t = random_trajectory(&h, &mut rng);
    let m = n as usize / 2;
    println!("one trajectory, m = {m}: D_k = {}, X_1(B_m) = {}", t.deviation(k, m)?, t.martingale_difference(m, 1)?);
    Ok(())
}
