use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};

/// A square root of `-d` modulo `2^N`: the truncation of the 2-adic root
/// congruent to 1 mod 4. Truncations at different precisions agree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoAdicSqrt {
    pub d: u64,
    pub precision: u32,
    #[serde(with = "crate::serde_bigint")]
    pub s: BigInt,
}

impl TwoAdicSqrt {
    pub fn new(d: u64, precision: u32) -> Result<Self> {
        let s = hensel_sqrt(d, precision)?;
        Ok(Self { d, precision, s })
    }

    pub fn modulus(&self) -> BigInt {
        arith::pow2(self.precision)
    }

    /// Same root at a higher precision.
    pub fn extend(&self, precision: u32) -> Self {
        Self::new(self.d, precision).expect("d already validated")
    }
}

/// The 2-adic square root of `-d` (−d ≡ 1 mod 8) that is ≡ 1 (mod 4),
/// reduced modulo `2^n`.
pub fn hensel_sqrt(d: u64, n: u32) -> Result<BigInt> {
    if d % 8 != 7 {
        return Err(Error::NotSplit(d));
    }
    // Lift one bit past n: a root mod 2^(n+1) pins the 2-adic root mod 2^n
    // up to sign.
    let k = (n + 1).max(3);
    let a = -BigInt::from(d);
    let mut s = BigInt::one();
    for j in 3..k {
        let m = arith::pow2(j + 1);
        if !(&s * &s - &a).mod_floor(&m).is_zero() {
            s += arith::pow2(j - 1);
        }
    }
    let modulus = arith::pow2(n);
    let mut s = s.mod_floor(&arith::pow2(k));
    if s.mod_floor(&BigInt::from(4)) == BigInt::from(3) {
        s = -s;
    }
    Ok(s.mod_floor(&modulus))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

/// Tonelli–Shanks square root of `a` modulo an odd prime `p`.
fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if arith::mod_pow(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(arith::mod_pow(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while arith::mod_pow(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = arith::mod_pow(z, q, p);
    let mut t = arith::mod_pow(a, q, p);
    let mut r = arith::mod_pow(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = arith::mod_pow(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// A square root of `a` modulo `p^k` for an odd prime `p` not dividing `a`.
/// Returns the root whose residue mod `p` is the smaller of the two.
pub fn hensel_sqrt_odd(a: &BigInt, p: u64, k: u32) -> Option<BigInt> {
    let pb = BigInt::from(p);
    let a0 = a.mod_floor(&pb);
    if a0.is_zero() || k == 0 {
        return None;
    }
    let r0 = sqrt_mod_prime(u64::try_from(&a0).ok()?, p)?;
    let r0 = r0.min(p - r0);
    let mut r = BigInt::from(r0);
    let mut prec = 1u32;
    while prec < k {
        prec = (2 * prec).min(k);
        let m = pb.pow(prec);
        // Newton step: r <- r - (r^2 - a) / (2r)
        let inv = arith::mod_inverse(&(&r * 2), &m)?;
        r = (&r - (&r * &r - a) * inv).mod_floor(&m);
    }
    Some(r)
}
