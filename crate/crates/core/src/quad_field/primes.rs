use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use super::ideal::{primes_above, PrimeIdeal};
use super::padic::TwoAdicSqrt;
use super::{Element, ImagQuadField, TwoSplitting, Valuation};
use crate::arith;
use crate::error::{Error, Result};

const START_PRECISION: u32 = 64;
const SAFETY_BAND: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PrimeLabel {
    P,
    P1,
    P2,
}

impl fmt::Display for PrimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrimeLabel::P => "P",
            PrimeLabel::P1 => "P1",
            PrimeLabel::P2 => "P2",
        })
    }
}

/// A prime of O_K above 2. In the split case `P1` is the prime at which
/// `sqrt(-d)` maps to the canonical 2-adic root (≡ 1 mod 4), `P2` the other.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeAbove2 {
    pub d: u64,
    pub label: PrimeLabel,
    pub ramification_e: u32,
    pub residue_degree_f: u32,
    pub v_of_2: i64,
    pub embedding: Option<TwoAdicSqrt>,
}

impl PrimeAbove2 {
    pub fn in_u(&self) -> bool {
        self.residue_degree_f == 1
    }

    /// The criterion threshold `4 v_P(2)`.
    pub fn threshold(&self) -> i64 {
        4 * self.v_of_2
    }
}

impl fmt::Display for PrimeAbove2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)
    }
}

pub fn primes_above_2(field: &ImagQuadField) -> Vec<PrimeAbove2> {
    let d = field.d();
    let mk = |label, e, f, emb| PrimeAbove2 {
        d,
        label,
        ramification_e: e,
        residue_degree_f: f,
        v_of_2: e as i64,
        embedding: emb,
    };
    match field.two_splitting() {
        TwoSplitting::Ramified => vec![mk(PrimeLabel::P, 2, 1, None)],
        TwoSplitting::Inert => vec![mk(PrimeLabel::P, 1, 2, None)],
        TwoSplitting::Split => {
            let emb = TwoAdicSqrt::new(d, START_PRECISION).expect("split field");
            vec![
                mk(PrimeLabel::P1, 1, 1, Some(emb.clone())),
                mk(PrimeLabel::P2, 1, 1, Some(emb)),
            ]
        }
    }
}

/// `v_P(z)` for a prime above 2; `Infinite` for `z = 0`.
pub fn val_above_2(z: &Element, p: &PrimeAbove2) -> Valuation {
    if z.is_zero() {
        return Valuation::Infinite;
    }
    debug_assert_eq!(z.d(), p.d);
    let vden = arith::val_2(z.den()) as i64;
    match p.label {
        PrimeLabel::P => {
            let vn = arith::val_2(&z.norm_numerator()) as i64 - 2 * vden;
            if p.ramification_e == 2 {
                Valuation::Finite(vn)
            } else {
                Valuation::Finite(vn / 2)
            }
        }
        PrimeLabel::P1 | PrimeLabel::P2 => {
            let mut emb = p.embedding.clone().expect("split prime carries an embedding");
            loop {
                let m = emb.modulus();
                let s = if p.label == PrimeLabel::P1 { emb.s.clone() } else { -&emb.s };
                let img = (z.x() + z.y() * s).mod_floor(&m);
                let band = arith::pow2(emb.precision - SAFETY_BAND);
                if img.is_zero() || img.is_multiple_of(&band) {
                    // Suspiciously many trailing zeros: retry with a fresh,
                    // wider embedding.
                    emb = emb.extend(emb.precision * 2);
                    continue;
                }
                return Valuation::Finite(arith::val_2(&img) as i64 - vden);
            }
        }
    }
}

/// `v_q(z)` for an odd prime `q` inert in K.
pub fn val_inert_odd(z: &Element, q: u64) -> Result<Valuation> {
    if q.is_multiple_of(2) || !arith::is_prime_u64(q) {
        return Err(Error::NotPrime(q));
    }
    if arith::jacobi(-(z.d() as i128), q) != -1 {
        return Err(Error::NotInert { d: z.d(), q });
    }
    if z.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let vn = arith::val_p(&z.norm_numerator(), q) as i64;
    let vden = arith::val_p(z.den(), q) as i64;
    Ok(Valuation::Finite(vn / 2 - vden))
}

/// A prime of O_K in `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PrimeDescriptor {
    Above2(PrimeAbove2),
    Odd(PrimeIdeal),
}

impl PrimeDescriptor {
    pub fn rational_prime(&self) -> u64 {
        match self {
            PrimeDescriptor::Above2(_) => 2,
            PrimeDescriptor::Odd(p) => p.ell,
        }
    }

    pub fn valuation(&self, z: &Element) -> Valuation {
        match self {
            PrimeDescriptor::Above2(p) => val_above_2(z, p),
            PrimeDescriptor::Odd(p) => p.valuation(z),
        }
    }
}

impl fmt::Display for PrimeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeDescriptor::Above2(p) => write!(f, "{p}"),
            PrimeDescriptor::Odd(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetsSTU {
    pub s: Vec<PrimeDescriptor>,
    pub t: Vec<PrimeAbove2>,
    pub u: Vec<PrimeAbove2>,
    /// Rational primes lying under `S`, ascending.
    pub rational_primes: Vec<u64>,
}

/// `T` = primes above 2, `U` = those of residue degree 1, `S` = `T` plus
/// the primes above the odd radical.
pub fn u_set(field: &ImagQuadField, odd_radical: u64) -> Result<SetsSTU> {
    if odd_radical.is_multiple_of(2) {
        return Err(Error::EvenRadical(odd_radical));
    }
    let t = primes_above_2(field);
    let u: Vec<PrimeAbove2> = t.iter().filter(|p| p.in_u()).cloned().collect();
    let mut s: Vec<PrimeDescriptor> = t.iter().cloned().map(PrimeDescriptor::Above2).collect();
    let mut rational_primes = vec![2];
    for q in arith::prime_divisors(odd_radical) {
        rational_primes.push(q);
        s.extend(primes_above(field, q)?.into_iter().map(PrimeDescriptor::Odd));
    }
    Ok(SetsSTU { s, t, u, rational_primes })
}

/// Is `z` a unit at every prime outside `S`? Equivalently, are the reduced
/// numerator and denominator of its norm supported on `primes`.
pub fn is_s_unit(z: &Element, primes: &[u64]) -> bool {
    if z.is_zero() {
        return false;
    }
    let n = z.norm();
    arith::is_smooth_over(n.numer(), primes)
        && arith::is_smooth_over(n.denom(), primes)
        && arith::is_smooth_over(z.den(), primes)
}
