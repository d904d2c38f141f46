use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use super::{dedup_by_orbit, ParamSearch, Params, SUnitSolution};
use crate::arith;
use crate::error::{Error, Result};
use crate::quad_field::{Element, ImagQuadField, TwoSplitting};

/// `(r1, r2)` pairs with `r1 > r2` that may carry relevant solutions.
pub const EXCEPTIONAL_PAIRS: [(u32, u32); 3] = [(1, 0), (2, 1), (3, 2)];

/// Solutions `lambda = (T + v sqrt(-d))/2` with `T = 2^r1 - 2^r2 + 1` and
/// `d v^2 = 2^(r1+2) - T^2`, for both signs of `v`.
fn pair_solutions(field: &ImagQuadField, r1: u32, r2: u32) -> Vec<SUnitSolution> {
    let t: BigInt = arith::pow2(r1) - arith::pow2(r2) + 1;
    let rhs: BigInt = arith::pow2(r1 + 2) - &t * &t;
    let d = BigInt::from(field.d());
    if !rhs.is_positive() || !rhs.is_multiple_of(&d) {
        return Vec::new();
    }
    let Some(v) = arith::exact_sqrt_int(&(rhs / &d)) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for v in [v.clone(), -v] {
        // The mirrored identity (2^r2 - 2^r1 + 1)^2 - 2^(r2+2) = -d v^2 holds
        // automatically; assert it anyway.
        let t2: BigInt = arith::pow2(r2) - arith::pow2(r1) + 1;
        debug_assert_eq!(&t2 * &t2 - arith::pow2(r2 + 2), -(&d * &v * &v));
        let lambda = Element::from_parts(field, t.clone(), v.clone(), BigInt::from(2))
            .expect("den 2");
        let params = Params { r1, r2, s1: 0, s2: 0, v };
        out.push(SUnitSolution::from_lambda(lambda, Some(params)).expect("non-degenerate"));
    }
    out
}

/// Relevant solutions from the exceptional pairs only.
pub fn exceptional_pairs(field: &ImagQuadField) -> Vec<SUnitSolution> {
    dedup_by_orbit(
        EXCEPTIONAL_PAIRS
            .iter()
            .flat_map(|&(r1, r2)| pair_solutions(field, r1, r2)),
    )
}

/// All relevant solutions (up to S3) for split 2 with `r <= r_max`: the main
/// family `r1 = r2 = r >= 1` (`2^(r+2) - 1 = d v^2`) and the exceptional pairs.
pub fn param_split2(field: &ImagQuadField, r_max: u32) -> Result<ParamSearch> {
    if field.two_splitting() != TwoSplitting::Split {
        return Err(Error::NotSplit(field.d()));
    }
    if field.extra_units() {
        return Err(Error::ExtraUnits(field.d()));
    }
    let mut sols = Vec::new();
    for r in 1..=r_max {
        sols.extend(pair_solutions(field, r, r));
    }
    sols.extend(EXCEPTIONAL_PAIRS.iter().flat_map(|&(r1, r2)| pair_solutions(field, r1, r2)));
    Ok(ParamSearch {
        solutions: dedup_by_orbit(sols),
        complete_up_to: r_max,
    })
}
