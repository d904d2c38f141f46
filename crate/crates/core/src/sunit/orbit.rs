use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::quad_field::Element;

/// The six images `λ, 1/λ, 1−λ, 1/(1−λ), λ/(λ−1), (λ−1)/λ`, in that order.
pub fn s3_images(lambda: &Element) -> Result<[Element; 6]> {
    if lambda.is_zero() || lambda.is_one() {
        return Err(Error::DegenerateLambda);
    }
    let one_minus = lambda.one_minus();
    let inv = lambda.inv()?;
    let inv_one_minus = one_minus.inv()?;
    // λ/(λ−1) = 1 − 1/(1−λ);  (λ−1)/λ = 1 − 1/λ
    let a = inv_one_minus.one_minus();
    let b = inv.one_minus();
    Ok([lambda.clone(), inv, one_minus, inv_one_minus, a, b])
}

/// The S3-orbit of `lambda`, deduplicated and sorted by `(x, y, den)`.
pub fn s3_orbit(lambda: &Element) -> Result<Vec<Element>> {
    let mut v: Vec<Element> = s3_images(lambda)?.into();
    v.sort_by_key(Element::key);
    v.dedup();
    Ok(v)
}

pub fn orbit_key(lambda: &Element) -> Result<Element> {
    Ok(s3_orbit(lambda)?.swap_remove(0))
}

/// Key of the orbit `{2, 1/2, -1}`, i.e. of `-1`.
pub fn irrelevant_orbit_key() -> (BigInt, BigInt, BigInt) {
    (-BigInt::one(), BigInt::zero(), BigInt::one())
}

/// Whether `(lambda, mu)` lies in the orbit of `(2, -1)`.
pub fn is_irrelevant(lambda: &Element, mu: &Element) -> Result<bool> {
    if !(lambda + mu).is_one() {
        return Err(Error::NotASolution(format!("{lambda} + {mu} != 1")));
    }
    if lambda.is_zero() || lambda.is_one() {
        return Err(Error::DegenerateLambda);
    }
    let Some(q) = lambda.as_rational() else {
        return Ok(false);
    };
    let two = BigInt::from(2);
    let hit = (q.is_integer() && (*q.numer() == two || *q.numer() == -BigInt::one()))
        || (q.numer().is_one() && *q.denom() == two);
    Ok(hit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad_field::ImagQuadField;
    use proptest::prelude::*;

    fn k(d: i64) -> ImagQuadField {
        ImagQuadField::new(d).unwrap()
    }

    fn el(d: i64, x: i64, y: i64, den: i64) -> Element {
        Element::new(&k(d), x, y, den).unwrap()
    }

    #[test]
    fn harmonic_orbit() {
        let o = s3_orbit(&el(7, 2, 0, 1)).unwrap();
        assert_eq!(o, vec![el(7, -1, 0, 1), el(7, 1, 0, 2), el(7, 2, 0, 1)]);
        assert_eq!(s3_orbit(&el(7, -1, 0, 1)).unwrap(), o);
        assert_eq!(orbit_key(&el(7, 1, 0, 2)).unwrap().key(), irrelevant_orbit_key());
    }

    #[test]
    fn generic_orbit_has_six() {
        assert_eq!(s3_orbit(&el(7, 3, 1, 2)).unwrap().len(), 6);
    }

    #[test]
    fn degenerate() {
        assert_eq!(s3_orbit(&el(7, 0, 0, 1)), Err(Error::DegenerateLambda));
        assert_eq!(s3_orbit(&el(7, 1, 0, 1)), Err(Error::DegenerateLambda));
    }

    #[test]
    fn irrelevance() {
        assert!(is_irrelevant(&el(7, -1, 0, 1), &el(7, 2, 0, 1)).unwrap());
        assert!(is_irrelevant(&el(7, 1, 0, 2), &el(7, 1, 0, 2)).unwrap());
        assert!(!is_irrelevant(&el(7, 3, 1, 2), &el(7, -1, -1, 2)).unwrap());
        assert!(matches!(is_irrelevant(&el(7, 1, 0, 1), &el(7, -2, 0, 1)), Err(Error::NotASolution(_))));
        // 5 + (-4) = 1 is rational but not in the harmonic orbit.
        assert!(!is_irrelevant(&el(5, 5, 0, 1), &el(5, -4, 0, 1)).unwrap());
    }

    proptest! {
        #[test]
        fn orbit_closed(x in -30i64..30, y in -30i64..30, n in 1i64..9) {
            let l = el(15, x, y, n);
            prop_assume!(!l.is_zero() && !l.is_one());
            let orbit = s3_orbit(&l).unwrap();
            for m in &orbit {
                for img in s3_images(m).unwrap() {
                    prop_assert!(orbit.contains(&img));
                }
                prop_assert_eq!(orbit_key(m).unwrap(), orbit[0].clone());
            }
        }
    }
}
