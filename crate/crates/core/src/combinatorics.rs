//! Exact integer helpers: binomials, falling factorials, subset walks,
//! primality and modular inverses.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Binomial coefficient as `u128`; returns 0 when `k > n`.
///
/// Panics on overflow, which cannot happen for the small arguments used in
/// counting (n up to a few thousand with k ≤ 8).
pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .expect("binomial overflow")
            / (i as u128 + 1);
    }
    acc
}

pub fn binom_big(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// Falling factorial (n)_j = n(n-1)...(n-j+1). Zero when j > n ≥ 0.
pub fn falling(n: i64, j: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..j as i64 {
        acc *= BigInt::from(n - i);
    }
    acc
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Natural log of a positive integer of any size; −∞ for zero.
pub fn ln_bigint(x: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().map_or(f64::NAN, f64::ln);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational of any size.
pub fn ln_rational(q: &BigRational) -> f64 {
    ln_bigint(q.numer()) - ln_bigint(q.denom())
}

/// The rational a float denotes in its shortest decimal form, so 0.3 reads
/// as 3/10 rather than its binary approximation. None for NaN or ±∞.
pub fn decimal_rational(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let sci = format!("{x:e}");
    let (mantissa, exp) = sci.split_once('e')?;
    let mut exp: i64 = exp.parse().ok()?;
    let digits: String = match mantissa.split_once('.') {
        Some((int, frac)) => {
            exp -= frac.len() as i64;
            format!("{int}{frac}")
        }
        None => mantissa.to_string(),
    };
    let num: BigInt = digits.parse().ok()?;
    let ten = BigInt::from(10);
    Some(if exp >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, exp as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-exp) as usize))
    })
}

/// Deterministic primality by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % modulus as u128) as u64;
        }
        base = ((base as u128 * base as u128) % modulus as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime.
pub fn mod_inv(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        None
    } else {
        Some(mod_pow(a, p - 2, p))
    }
}

/// Visit every `k`-subset of `0..n` in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for t in i + 1..k {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

/// Colex rank of a strictly increasing subset; the bijection onto
/// `0..C(n, k)` used to index r-set degree tables.
pub fn colex_rank(subset: &[u32]) -> u64 {
    subset
        .iter()
        .enumerate()
        .map(|(i, &v)| binom(v as u64, i as u64 + 1) as u64)
        .sum()
}

/// All partitions of `n` as weakly decreasing vectors, largest-first order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rem.min(max)).rev() {
            cur.push(part);
            rec(rem - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals() {
        assert_eq!(decimal_rational(0.3).unwrap(), ratio(3, 10));
        assert_eq!(decimal_rational(-2.5).unwrap(), ratio(-5, 2));
        assert_eq!(decimal_rational(4000.0).unwrap(), ratio(4000, 1));
        assert_eq!(decimal_rational(1e-20).unwrap(), ratio(1, BigInt::from(10).pow(20)));
        assert!(decimal_rational(f64::NAN).is_none());
    }

    #[test]
    fn big_logs() {
        assert!((ln_bigint(&BigInt::from(1000)) - 1000f64.ln()).abs() < 1e-12);
        let big = BigInt::from(3).pow(2000);
        assert!((ln_bigint(&big) - 2000.0 * 3f64.ln()).abs() < 1e-9);
        assert!((ln_rational(&ratio(BigInt::one(), big)) + 2000.0 * 3f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(3, 5), 0);
        assert_eq!(binom(101, 3), 166650);
        assert_eq!(binom_big(60, 30).to_string(), "118264581564861424");
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling(5, 3), BigInt::from(60));
        assert_eq!(falling(3, 4), BigInt::zero());
        assert_eq!(falling(7, 0), BigInt::one());
        assert_eq!(falling(-1, 0), BigInt::one());
    }

    #[test]
    fn subset_walk_counts() {
        let mut c = 0;
        let mut last = vec![];
        for_each_subset(7, 3, |s| {
            c += 1;
            last = s.to_vec();
        });
        assert_eq!(c, 35);
        assert_eq!(last, vec![4, 5, 6]);
        let mut zero = 0;
        for_each_subset(4, 0, |_| zero += 1);
        assert_eq!(zero, 1);
    }

    #[test]
    fn colex_is_bijective() {
        let mut seen = vec![false; 56];
        for_each_subset(8, 3, |s| {
            let s: Vec<u32> = s.iter().map(|&v| v as u32).collect();
            let r = colex_rank(&s) as usize;
            assert!(!seen[r]);
            seen[r] = true;
        });
        assert!(seen.iter().all(|&b| b));
    }

    #[test]
    fn primes_and_inverses() {
        let ps: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(mod_inv(2, 7), Some(4));
        assert_eq!(mod_inv(0, 7), None);
    }

    #[test]
    fn partition_lists() {
        assert_eq!(partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
        assert_eq!(partitions(5).len(), 7);
    }

    #[test]
    fn big_rational_to_float() {
        let q = ratio(falling(400, 60), falling(401, 60));
        let f = rational_to_f64(&q);
        assert!((f - 341.0 / 401.0).abs() < 1e-12);
    }
}
