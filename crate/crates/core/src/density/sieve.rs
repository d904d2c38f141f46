use num_integer::Integer;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};

/// Squarefree flags for `1..=x`, one bit per integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SieveTable {
    pub x: u64,
    #[serde(skip)]
    words: Vec<u64>,
}

impl SieveTable {
    pub fn is_squarefree(&self, n: u64) -> bool {
        assert!((1..=self.x).contains(&n), "{n} outside 1..={}", self.x);
        self.words[(n / 64) as usize] >> (n % 64) & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (1..=self.x).filter(|&n| self.is_squarefree(n))
    }
}

pub fn sieve_squarefree(x: u64) -> SieveTable {
    let len = (x / 64 + 1) as usize;
    let mut words = vec![u64::MAX; len];
    words[0] &= !1; // 0
    let mut p = 2u64;
    while p * p <= x {
        if arith::is_prime_u64(p) {
            let sq = p * p;
            let mut k = sq;
            while k <= x {
                words[(k / 64) as usize] &= !(1u64 << (k % 64));
                k += sq;
            }
        }
        p += 1;
    }
    SieveTable { x, words }
}

/// Number of squarefree `n` in `1..=x` with `n ≡ r (mod modulus)`.
pub fn count_class(r: i64, modulus: u64, table: &SieveTable) -> u64 {
    assert!(modulus >= 1);
    let r = r.rem_euclid(modulus as i64) as u64;
    let mut n = if r == 0 { modulus } else { r };
    let mut count = 0;
    while n <= table.x {
        if table.is_squarefree(n) {
            count += 1;
        }
        n += modulus;
    }
    count
}

fn totient(n: u64) -> u64 {
    arith::prime_divisors(n).iter().fold(n, |acc, p| acc / p * (p - 1))
}

/// `phi(N) / (s phi(N/s) N prod_{q|N}(1 - q^-2)) * (6/pi^2) * x`, `s = gcd(r, N)`.
pub fn landau_estimate(r: i64, modulus: u64, x: u64) -> Result<f64> {
    let s = (r.rem_euclid(modulus as i64) as u64).gcd(&modulus);
    if !arith::is_squarefree(s) {
        return Err(Error::SNotSquarefree { r, n: modulus });
    }
    let euler: f64 = arith::prime_divisors(modulus)
        .iter()
        .map(|&q| 1.0 - 1.0 / (q * q) as f64)
        .product();
    let coeff = totient(modulus) as f64 / (s as f64 * totient(modulus / s) as f64 * modulus as f64 * euler);
    Ok(coeff * 6.0 / std::f64::consts::PI.powi(2) * x as f64)
}
