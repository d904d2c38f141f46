//! Small integer helpers shared across the crate.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Trial-division squarefree test. Intended for `n < 2^40`.
pub fn is_squarefree(mut n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

/// Distinct prime divisors of `n` by trial division, ascending.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime_u64(n: u64) -> bool {
    crate::factor::is_prime(n as u128) == crate::factor::Primality::Prime
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut acc: u128 = 1;
    let mut b = (base % modulus) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Jacobi symbol (a | n) for odd positive `n`.
pub fn jacobi(a: i128, n: u64) -> i32 {
    assert!(n % 2 == 1, "jacobi symbol needs an odd modulus");
    let n = n as i128;
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut result = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// `p`-adic valuation of a non-zero integer.
pub fn val_p(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Number of trailing zero bits of a non-zero integer.
pub fn val_2(n: &BigInt) -> u64 {
    n.trailing_zeros().expect("val_2 of zero")
}

/// Returns `Some(r)` with `r * r == n` when `n` is a perfect square.
pub fn exact_sqrt(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn exact_sqrt_int(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    exact_sqrt(n.magnitude()).map(|r| BigInt::from_biguint(Sign::Plus, r))
}

pub fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

/// Removes every factor in `primes` from `n` and reports whether the rest is 1.
pub fn is_smooth_over(n: &BigInt, primes: &[u64]) -> bool {
    if n.is_zero() {
        return false;
    }
    let mut m = n.abs();
    for &p in primes {
        let p = BigInt::from(p);
        loop {
            let (q, r) = m.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            m = q;
        }
    }
    m.is_one()
}

pub fn is_smooth_over_i128(n: i128, primes: &[u64]) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n.unsigned_abs();
    for &p in primes {
        let p = p as u128;
        if p == 2 {
            m >>= m.trailing_zeros();
            continue;
        }
        while m.is_multiple_of(p) {
            m /= p;
        }
    }
    m == 1
}

/// Modular inverse of `a` modulo `m` (`m > 1`), if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}
