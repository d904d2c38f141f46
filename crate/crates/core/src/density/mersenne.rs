use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};
use crate::factor::factor;

pub const M_MAX_CAP: u32 = 127;

fn as_string<S: Serializer, T: std::fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn factors_as_strings<S: Serializer>(v: &[(u128, u32)], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|(p, e)| (p.to_string(), *e)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MersenneStat {
    pub m: u32,
    #[serde(serialize_with = "as_string")]
    pub mersenne: u128,
    pub digits: usize,
    /// Exact when `fully_factored`, otherwise a lower bound.
    pub omega: usize,
    pub fully_factored: bool,
    /// Some factor is only a strong probable prime.
    pub probable: bool,
    #[serde(serialize_with = "factors_as_strings")]
    pub factors: Vec<(u128, u32)>,
}

/// `omega(2^m - 1)` for `1 <= m <= m_max`.
pub fn mersenne_stats(m_max: u32, factor_budget: u64) -> Result<Vec<MersenneStat>> {
    if m_max > M_MAX_CAP {
        return Err(Error::OutOfRange(format!("m must be at most {M_MAX_CAP}, got {m_max}")));
    }
    Ok((1..=m_max).into_par_iter().map(|m| mersenne_stat(m, factor_budget)).collect())
}

pub fn mersenne_stat(m: u32, factor_budget: u64) -> MersenneStat {
    assert!((1..=M_MAX_CAP).contains(&m));
    let n = (1u128 << m) - 1;
    if n == 1 {
        return MersenneStat { m, mersenne: 1, digits: 1, omega: 0, fully_factored: true, probable: false, factors: vec![] };
    }
    // Factor the coprime-ish pieces Phi_k(2), k | m, separately.
    let mut factors: Vec<(u128, u32)> = Vec::new();
    let mut unfactored = 0usize;
    let mut probable = false;
    for piece in cyclotomic_pieces(m) {
        if piece == 1 {
            continue;
        }
        let f = factor(piece, factor_budget);
        probable |= f.probable;
        unfactored += usize::from(!f.complete());
        factors.extend(f.factors);
    }
    factors.sort_unstable();
    let mut merged: Vec<(u128, u32)> = Vec::with_capacity(factors.len());
    for (p, e) in factors {
        match merged.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => merged.push((p, e)),
        }
    }
    MersenneStat {
        m,
        mersenne: n,
        digits: n.to_string().len(),
        omega: merged.len() + unfactored,
        fully_factored: unfactored == 0,
        probable,
        factors: merged,
    }
}

/// `Phi_k(2)` for each `k | m`, ascending in `k`; their product is `2^m - 1`.
fn cyclotomic_pieces(m: u32) -> Vec<u128> {
    let divisors: Vec<u32> = (1..=m).filter(|k| m.is_multiple_of(*k)).collect();
    let mut phi: Vec<(u32, u128)> = Vec::new();
    for &k in &divisors {
        let mut v = (1u128 << k) - 1;
        for &(j, pj) in &phi {
            if k % j == 0 {
                v /= pj;
            }
        }
        phi.push((k, v));
    }
    phi.into_iter().map(|(_, v)| v).collect()
}

/// `h_m >= 2^omega(m) - 2`; `None` unless `M_m` is fully factored.
pub fn check_h_lower(stat: &MersenneStat) -> Option<bool> {
    let w = arith::prime_divisors(stat.m as u64).len() as u32;
    stat.fully_factored.then(|| stat.omega as i64 >= (1i64 << w) - 2)
}

/// `m / 2^(h/2)` in three forms: the real value, the exact square
/// `m^2 / 2^h`, and `m / 2^floor(h/2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundApprox2 {
    pub m: u32,
    pub h: usize,
    pub value: f64,
    #[serde(serialize_with = "as_string")]
    pub square: BigRational,
    #[serde(serialize_with = "as_string")]
    pub floor_exponent: BigRational,
}

pub fn bound_approx2(m: u32, h: usize) -> BoundApprox2 {
    let mb = BigInt::from(m);
    let h32 = h as u32;
    BoundApprox2 {
        m,
        h,
        value: m as f64 * 2f64.powf(-(h as f64) / 2.0),
        square: BigRational::new(&mb * &mb, arith::pow2(h32)),
        floor_exponent: BigRational::new(mb, arith::pow2(h32 / 2)),
    }
}

/// `alpha_{i,s1} ≡ alpha_{i,s2} (mod M_m)` for both `i`, where
/// `alpha_{1,s} = 2^(s+1) + 1` and `alpha_{2,s} = 2^(s+1) - 1`.
pub fn alpha_congruence(m: u32, s1: u32, s2: u32) -> bool {
    let mm = arith::pow2(m) - 1;
    let alpha = |s: u32, sign: i32| arith::pow2(s + 1) + sign;
    [1, -1].iter().all(|&sg| (alpha(s1, sg) - alpha(s2, sg)) % &mm == BigInt::from(0))
}
