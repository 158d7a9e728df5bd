use num_integer::Integer as _;

use crate::error::{domain, Result};

pub fn gcd(a: i64, b: i64) -> u64 {
    a.unsigned_abs().gcd(&b.unsigned_abs())
}

/// `gcd(a, b, c)`, with `gcd(0, 0, c) = |c|`.
pub fn gcd3(a: i64, b: i64, c: i64) -> u64 {
    gcd(gcd(a, b) as i64, c)
}

/// Inverse of `a` modulo `m >= 1`, in `0..m`, if it exists.
pub fn mod_inverse(a: i64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let m = m as i128;
    let e = (a as i128).rem_euclid(m).extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m) as u64)
}

/// Number of positive divisors of `n`.
pub fn divisor_count(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(domain("divisor_count requires n >= 1"));
    }
    let mut n = n;
    let mut count = 1;
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        count *= e + 1;
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        count *= 2;
    }
    Ok(count)
}

/// `d(m)` for `0 <= m <= n` by sieving (`d(0)` is reported as 0).
pub fn divisor_counts_upto(n: usize) -> Vec<u32> {
    let mut d = vec![0u32; n + 1];
    for i in 1..=n {
        for j in (i..=n).step_by(i) {
            d[j] += 1;
        }
    }
    d
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}
