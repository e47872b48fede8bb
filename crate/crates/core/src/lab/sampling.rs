use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generator for substream `stream` of the master seed. Distinct streams
/// are independent, so workers can draw in any order.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform m-subset of 0..n by a partial Fisher–Yates shuffle. `pool` is
/// scratch space and is reset on each call.
pub fn sample_m<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R, pool: &mut Vec<u32>) -> Vec<u32> {
    assert!(m <= n, "m = {m} exceeds N = {n}");
    pool.clear();
    pool.extend(0..n as u32);
    for i in 0..m {
        let j = rng.gen_range(i..n);
        pool.swap(i, j);
    }
    pool[..m].to_vec()
}

pub fn sample_m_seeded(n: usize, m: usize, seed: u64) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_m(n, m, &mut rng, &mut Vec::new())
}

/// Keeps each vertex independently with probability p.
pub fn sample_p<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Vec<u32> {
    (0..n as u32).filter(|_| rng.gen::<f64>() < p).collect()
}

pub fn sample_p_seeded(n: usize, p: f64, seed: u64) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_p(n, p, &mut rng)
}
