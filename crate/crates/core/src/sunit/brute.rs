use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::SUnitSolution;
use crate::arith;
use crate::error::{Error, Result};
use crate::quad_field::{Element, ImagQuadField};

/// Search box for [`brute_force`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BruteBounds {
    pub coord_bound: i64,
    pub den_pow2_bound: u32,
    pub den_powq_bound: u32,
}

impl Default for BruteBounds {
    fn default() -> Self {
        Self { coord_bound: 1000, den_pow2_bound: 2, den_powq_bound: 1 }
    }
}

const MAX_COORD: i64 = 1_000_000;
const MAX_DEN: i128 = 1 << 60;

fn denominators(odd_primes: &[u64], b: &BruteBounds) -> Result<Vec<i128>> {
    let mut dens = vec![1i128];
    let mut factors: Vec<(i128, u32)> = vec![(2, b.den_pow2_bound)];
    factors.extend(odd_primes.iter().map(|&q| (q as i128, b.den_powq_bound)));
    for (p, e) in factors {
        let mut next = Vec::new();
        for &base in &dens {
            let mut m = base;
            for k in 0..=e {
                if k > 0 {
                    m = m
                        .checked_mul(p)
                        .filter(|m| *m <= MAX_DEN)
                        .ok_or_else(|| Error::OutOfRange("brute-force denominator exceeds 2^60".into()))?;
                }
                next.push(m);
            }
        }
        dens = next;
    }
    dens.sort_unstable();
    Ok(dens)
}

/// Exhaustive scan of `lambda = (x + y sqrt(-d)) / (2^a prod q^b)` with
/// `|x|, |y| <= coord_bound`, keeping those where `lambda` and `1 - lambda`
/// are S-units for `S` above `{2} ∪ odd_primes`. One solution per S3-orbit,
/// sorted by orbit key.
pub fn brute_force(
    field: &ImagQuadField,
    odd_primes: &[u64],
    bounds: &BruteBounds,
) -> Result<Vec<SUnitSolution>> {
    if field.extra_units() {
        return Err(Error::ExtraUnits(field.d()));
    }
    if bounds.coord_bound < 1 || bounds.coord_bound > MAX_COORD {
        return Err(Error::OutOfRange(format!(
            "coord_bound must be in 1..={MAX_COORD}, got {}",
            bounds.coord_bound
        )));
    }
    for &q in odd_primes {
        if q % 2 == 0 || !arith::is_prime_u64(q) {
            return Err(Error::NotPrime(q));
        }
    }
    let mut primes = vec![2u64];
    primes.extend_from_slice(odd_primes);
    let dens = denominators(odd_primes, bounds)?;
    let d = field.d() as i128;
    let b = bounds.coord_bound;

    let hits: Vec<(i64, i64, i128)> = (-b..=b)
        .into_par_iter()
        .flat_map_iter(|x| {
            let primes = &primes;
            let dens = &dens;
            (-b..=b).flat_map(move |y| {
                dens.iter().filter_map(move |&den| {
                    let (xi, yi) = (x as i128, y as i128);
                    let dy2 = d * yi * yi;
                    let n1 = xi * xi + dy2;
                    let n2 = (den - xi) * (den - xi) + dy2;
                    (arith::is_smooth_over_i128(n1, primes) && arith::is_smooth_over_i128(n2, primes))
                        .then_some((x, y, den))
                })
            })
        })
        .collect();

    type Key = (BigInt, BigInt, BigInt);
    let mut best: BTreeMap<Key, (Element, bool, num_rational::BigRational)> = BTreeMap::new();
    for (x, y, den) in hits {
        let lambda = Element::from_parts(field, x.into(), y.into(), den.into())?;
        let key = super::orbit_key(&lambda)?.key();
        let integral = lambda.is_integral();
        let norm = lambda.norm();
        let better = |cur: &(Element, bool, num_rational::BigRational)| {
            (integral, &norm) > (cur.1, &cur.2)
                || ((integral, &norm) == (cur.1, &cur.2) && lambda.key() < cur.0.key())
        };
        match best.get(&key) {
            Some(cur) if !better(cur) => {}
            _ => {
                best.insert(key, (lambda.clone(), integral, norm.clone()));
            }
        }
    }
    best.into_values()
        .map(|(lambda, _, _)| SUnitSolution::from_lambda(lambda, None))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(d: i64) -> ImagQuadField {
        ImagQuadField::new(d).unwrap()
    }

    #[test]
    fn d7_small_box() {
        let sols = brute_force(&k(7), &[], &BruteBounds { coord_bound: 10, den_pow2_bound: 1, den_powq_bound: 1 }).unwrap();
        let keys: Vec<_> = sols.iter().map(|s| s.orbit_id.key()).collect();
        assert!(keys.contains(&super::super::irrelevant_orbit_key()));
        let f = k(7);
        let target = super::super::orbit_key(&Element::new(&f, 3, 1, 2).unwrap()).unwrap().key();
        assert!(keys.contains(&target));
        for s in &sols {
            s.validate(&[2]).unwrap();
        }
    }

    #[test]
    fn ramified_13_only_irrelevant() {
        let sols = brute_force(&k(13), &[], &BruteBounds { coord_bound: 50, den_pow2_bound: 1, den_powq_bound: 1 }).unwrap();
        assert_eq!(sols.len(), 1);
        assert!(!sols[0].relevant);
    }

    #[test]
    fn rejects_extra_units() {
        assert_eq!(brute_force(&k(3), &[], &BruteBounds::default()), Err(Error::ExtraUnits(3)));
    }

    #[test]
    fn denominator_list() {
        let b = BruteBounds { coord_bound: 1, den_pow2_bound: 2, den_powq_bound: 1 };
        assert_eq!(denominators(&[3], &b).unwrap(), vec![1, 2, 3, 4, 6, 12]);
    }
}
