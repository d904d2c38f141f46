use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::{dedup_by_orbit, ParamSearch, Params, SUnitSolution};
use crate::arith;
use crate::error::{Error, Result};
use crate::quad_field::{Element, ImagQuadField, TwoSplitting};

/// Non-rational solutions for `S = {P, primes above q}` with 2 ramified:
/// `lambda = (T + v sqrt(-d))/2`, `T = 2^(2r1) q^(2s1) - q^(2s2) + 1`,
/// `T^2 + d v^2 = 2^(2r1+2) q^(2s1)`, `s1 s2 = 0`, `0 < |v| <= v_max`.
pub fn param_with_q(
    field: &ImagQuadField,
    q: u64,
    r_max: u32,
    s_max: u32,
    v_max: u64,
) -> Result<ParamSearch> {
    if field.two_splitting() != TwoSplitting::Ramified {
        return Err(Error::NotRamified(field.d()));
    }
    if field.extra_units() {
        return Err(Error::ExtraUnits(field.d()));
    }
    if q.is_multiple_of(2) || !arith::is_prime_u64(q) {
        return Err(Error::NotPrime(q));
    }
    let d = BigInt::from(field.d());
    let qb = BigInt::from(q);
    let v_cap = BigInt::from(v_max);
    let mut sols = Vec::new();
    for r1 in 0..=r_max {
        let two = arith::pow2(2 * r1);
        for s in 0..=s_max {
            let pairs: &[(u32, u32)] = if s == 0 { &[(0, 0)] } else { &[(s, 0), (0, s)] };
            for &(s1, s2) in pairs {
                let q1 = qb.pow(2 * s1);
                let q2 = qb.pow(2 * s2);
                let t: BigInt = &two * &q1 - &q2 + 1;
                let rhs: BigInt = arith::pow2(2 * r1 + 2) * &q1 - &t * &t;
                if !rhs.is_positive() || !rhs.is_multiple_of(&d) {
                    continue;
                }
                let Some(v) = arith::exact_sqrt_int(&(rhs / &d)) else { continue };
                if v > v_cap {
                    continue;
                }
                let t2: BigInt = &q2 - &two * &q1 + 1;
                if &t2 * &t2 + &d * &v * &v != arith::pow2(2) * &q2 {
                    continue;
                }
                for v in [v.clone(), -v] {
                    let lambda = Element::from_parts(field, t.clone(), v.clone(), BigInt::from(2))?;
                    let params = Params { r1, r2: 0, s1, s2, v };
                    sols.push(SUnitSolution::from_lambda(lambda, Some(params))?);
                }
            }
        }
    }
    Ok(ParamSearch {
        solutions: dedup_by_orbit(sols),
        complete_up_to: r_max,
    })
}

/// Rational solutions for `S` above `{2, q}` (or `{2}` when `q = 1`), up to
/// S3. With two primes, one of `a + b = c` (pairwise coprime, positive) is 1,
/// so it suffices to solve `1 + 2^i = q^j` and `1 + q^j = 2^i`.
pub fn rational_solutions(field: &ImagQuadField, q: u64, i_max: u32, j_max: u32) -> Vec<SUnitSolution> {
    let mut sols = Vec::new();
    let mut push = |a: BigInt, c: BigInt| {
        let lambda = Element::from_rational(field, &num_rational::BigRational::new(a, c));
        sols.push(SUnitSolution::from_lambda(lambda, None).expect("a/c not in {0,1}"));
    };
    push(BigInt::one(), BigInt::from(2));
    if q > 1 {
        let qb = BigInt::from(q);
        for j in 1..=j_max {
            let qj = qb.pow(j);
            for i in 1..=i_max {
                let ti = arith::pow2(i);
                if &ti + 1 == qj {
                    push(BigInt::one(), qj.clone());
                }
                if &qj + 1 == ti {
                    push(BigInt::one(), ti.clone());
                }
                if ti > qj {
                    break;
                }
            }
        }
    }
    dedup_by_orbit(sols)
}
