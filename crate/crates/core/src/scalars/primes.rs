//! Prime search for the multi-modular rank strategy.

use super::{PrimeField, ScalarError};

/// Upper bound (exclusive) on primes usable by [`PrimeField`].
pub const PRIME_LIMIT: u64 = 1 << 31;

const SEARCH_CAP: u64 = 1 << 24;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Whether `z` has multiplicative order exactly `order` modulo `p`.
pub fn has_exact_order(z: u64, order: u64, p: u64) -> bool {
    if pow_mod(z, order, p) != 1 {
        return false;
    }
    prime_factors(order)
        .into_iter()
        .all(|r| pow_mod(z, order / r, p) != 1)
}

/// Smallest-base primitive `order`-th root of unity modulo the prime `p`,
/// found as `a^((p-1)/order)` for `a = 1, 2, 3, ...`.
pub fn primitive_root_of_unity(p: u64, order: u64) -> Option<u64> {
    if order == 0 || (p - 1) % order != 0 {
        return None;
    }
    if order == 1 {
        return Some(1);
    }
    let cofactor = (p - 1) / order;
    (2..p.min(1 << 20))
        .map(|a| pow_mod(a, cofactor, p))
        .find(|&z| has_exact_order(z, order, p))
}

/// Returns `count` distinct primes `p ≡ 1 (mod order)` with `p ≥ 2^min_bits`,
/// ascending, each paired with its designated root of unity.
pub fn find_primes(order: u32, count: usize, min_bits: u32) -> Result<Vec<PrimeField>, ScalarError> {
    if order == 0 {
        return Err(ScalarError::InvalidOrder(order));
    }
    let step = order as u64;
    let start = 1u64 << min_bits.min(62);
    // first candidate ≡ 1 (mod order) at or above start
    let mut cand = start + (step + 1 - start % step) % step;
    if cand < 2 {
        cand += step;
    }
    let mut out = Vec::with_capacity(count);
    let mut tried = 0u64;
    while out.len() < count {
        if cand >= PRIME_LIMIT || tried > SEARCH_CAP {
            return Err(ScalarError::SearchExhausted { order, found: out.len(), wanted: count });
        }
        if is_prime(cand) {
            out.push(PrimeField::new(cand as u32, order, None)?);
        }
        cand += step;
        tried += 1;
    }
    Ok(out)
}
