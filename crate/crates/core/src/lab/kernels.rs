//! Counting 3-term progressions (x, x+d, x+2d), 1 ≤ d ≤ (N−1)/2, inside a
//! subset B of Z/NZ.
//!
//! The transform kernels use T = Σ_{z∈B} (f⋆f)(2z), f the indicator of B:
//! every progression inside B is counted twice in T and every z ∈ B once
//! more as (z, z), so the count is (T − |B|)/2.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::InducedCounter;
use crate::combinatorics::{is_prime, mod_inv, mod_pow};
use crate::error::{Error, Result};

const NTT_MOD: u64 = 998_244_353;
const NTT_ROOT: u64 = 3;
/// The multiplicative group of NTT_MOD has a subgroup of order 2^23.
const NTT_MAX_LOG: u32 = 23;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ap3Method {
    /// Loop over x ∈ B and every difference d.
    Naive,
    /// Exact number-theoretic transform.
    #[default]
    Ntt,
    /// Floating-point FFT with rounding.
    Fft,
    /// Word-parallel intersections with rotated copies of {z : 2z ∈ B}.
    Bitset,
}

fn indicator(set: &[u32], n: usize) -> Vec<bool> {
    let mut f = vec![false; n];
    for &v in set {
        f[v as usize] = true;
    }
    f
}

/// Reference count by direct enumeration of (x, d).
pub fn ap3_naive(set: &[u32], n: usize) -> u64 {
    let f = indicator(set, n);
    let mut count = 0;
    for &x in set {
        let x = x as usize;
        for d in 1..=(n - 1) / 2 {
            count += (f[(x + d) % n] && f[(x + 2 * d) % n]) as u64;
        }
    }
    count
}

fn ntt(a: &mut [u64], invert: bool) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j ^= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = mod_pow(NTT_ROOT, (NTT_MOD - 1) / len as u64, NTT_MOD);
        if invert {
            w = mod_inv(w, NTT_MOD).unwrap();
        }
        let half = len / 2;
        let mut powers = Vec::with_capacity(half);
        let mut cur = 1u64;
        for _ in 0..half {
            powers.push(cur);
            cur = cur * w % NTT_MOD;
        }
        for chunk in a.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for t in 0..half {
                let u = lo[t];
                let v = hi[t] * powers[t] % NTT_MOD;
                lo[t] = if u + v >= NTT_MOD { u + v - NTT_MOD } else { u + v };
                hi[t] = if u >= v { u - v } else { u + NTT_MOD - v };
            }
        }
        len <<= 1;
    }
    if invert {
        let inv_n = mod_inv(n as u64, NTT_MOD).unwrap();
        for x in a.iter_mut() {
            *x = *x * inv_n % NTT_MOD;
        }
    }
}

fn padded_len(n: usize) -> usize {
    (2 * n - 1).next_power_of_two()
}

fn ntt_fits(n: usize) -> bool {
    padded_len(n) <= 1 << NTT_MAX_LOG && (n as u64) < NTT_MOD
}

/// Circular self-convolution of the indicator by an exact NTT.
fn self_convolution_ntt(f: &[bool]) -> Vec<u64> {
    let n = f.len();
    let mut a = vec![0u64; padded_len(n)];
    for (slot, &b) in a.iter_mut().zip(f) {
        *slot = b as u64;
    }
    ntt(&mut a, false);
    for x in a.iter_mut() {
        *x = *x * *x % NTT_MOD;
    }
    ntt(&mut a, true);
    (0..n).map(|z| a[z] + if z + n < a.len() { a[z + n] } else { 0 }).collect()
}

fn self_convolution_fft(f: &[bool], fft: &FftPlans) -> Vec<u64> {
    let n = f.len();
    let len = fft.len;
    let mut buf: Vec<Complex<f64>> = (0..len)
        .map(|i| Complex::new(if i < n && f[i] { 1.0 } else { 0.0 }, 0.0))
        .collect();
    fft.forward.process(&mut buf);
    for x in buf.iter_mut() {
        *x = *x * *x;
    }
    fft.inverse.process(&mut buf);
    let scale = 1.0 / len as f64;
    (0..n)
        .map(|z| {
            let wrap = if z + n < len { buf[z + n].re } else { 0.0 };
            ((buf[z].re + wrap) * scale).round() as u64
        })
        .collect()
}

fn count_from_convolution(set: &[u32], conv: &[u64]) -> u64 {
    let n = conv.len();
    let t: u64 = set.iter().map(|&z| conv[(2 * z as usize) % n]).sum();
    (t - set.len() as u64) / 2
}

struct FftPlans {
    len: usize,
    forward: Arc<dyn rustfft::Fft<f64>>,
    inverse: Arc<dyn rustfft::Fft<f64>>,
}

impl FftPlans {
    fn new(n: usize) -> Self {
        let len = padded_len(n);
        let mut planner = FftPlanner::new();
        FftPlans {
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        }
    }
}

/// Bitset count: Σ_{x∈B} |B ∩ (E + x/2)| = T, where E = {z : 2z ∈ B}.
fn ap3_bitset(set: &[u32], n: usize, inv2: usize) -> u64 {
    let words = n.div_ceil(64);
    let mut b = vec![0u64; words];
    for &v in set {
        b[v as usize / 64] |= 1 << (v % 64);
    }
    // doubled copy of E so any rotation is a contiguous window
    let mut e2 = vec![0u64; (2 * n).div_ceil(64) + 1];
    for &v in set {
        let z = v as usize * inv2 % n;
        for pos in [z, z + n] {
            e2[pos / 64] |= 1 << (pos % 64);
        }
    }
    let tail_mask = if n % 64 == 0 { u64::MAX } else { (1u64 << (n % 64)) - 1 };
    let mut t = 0u64;
    for &x in set {
        // rotation by c = x/2: bit z of the window is E[(z − c) mod N] = E2[z + N − c]
        let c = x as usize * inv2 % n;
        let start = n - c;
        let (w0, sh) = (start / 64, start % 64);
        for w in 0..words {
            let lo = e2[w0 + w] >> sh;
            let hi = if sh == 0 { 0 } else { e2[w0 + w + 1] << (64 - sh) };
            let mut window = lo | hi;
            if w == words - 1 {
                window &= tail_mask;
            }
            t += (window & b[w]).count_ones() as u64;
        }
    }
    (t - set.len() as u64) / 2
}

/// Number of parametrized 3-APs inside `set` ⊆ Z/NZ, N prime.
pub fn ap3_count(set: &[u32], n: usize, method: Ap3Method) -> Result<u64> {
    Ap3Counter::new(n, method).map(|c| c.count_set(set))
}

/// Reusable 3-AP counter for one modulus; implements [`InducedCounter`]
/// so it can drive the estimators in place of an explicit hypergraph.
pub struct Ap3Counter {
    n: usize,
    method: Ap3Method,
    inv2: usize,
    fft: Option<FftPlans>,
}

impl Ap3Counter {
    pub fn new(n: usize, method: Ap3Method) -> Result<Self> {
        if !is_prime(n as u64) || n < 5 {
            return Err(Error::NotPrime { n: n as u64 });
        }
        let method = if method == Ap3Method::Ntt && !ntt_fits(n) {
            Ap3Method::Fft
        } else {
            method
        };
        Ok(Ap3Counter {
            n,
            method,
            inv2: (n + 1) / 2,
            fft: (method == Ap3Method::Fft).then(|| FftPlans::new(n)),
        })
    }

    pub fn method(&self) -> Ap3Method {
        self.method
    }

    pub fn count_set(&self, set: &[u32]) -> u64 {
        if set.is_empty() {
            return 0;
        }
        match self.method {
            Ap3Method::Naive => ap3_naive(set, self.n),
            Ap3Method::Ntt => count_from_convolution(set, &self_convolution_ntt(&indicator(set, self.n))),
            Ap3Method::Fft => count_from_convolution(
                set,
                &self_convolution_fft(&indicator(set, self.n), self.fft.as_ref().unwrap()),
            ),
            Ap3Method::Bitset => ap3_bitset(set, self.n, self.inv2),
        }
    }
}

impl InducedCounter for Ap3Counter {
    fn vertex_count(&self) -> usize {
        self.n
    }
    fn edge_count(&self) -> u64 {
        (self.n * (self.n - 1) / 2) as u64
    }
    fn uniformity(&self) -> usize {
        3
    }
    fn count(&self, set: &[u32]) -> u64 {
        self.count_set(set)
    }
}
