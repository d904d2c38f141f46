//! Exact arithmetic in imaginary quadratic fields Q(sqrt(-d)).

mod element;
mod ideal;
mod padic;
mod primes;

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};

pub use element::Element;
pub use ideal::{gcd_ideal, primes_above, IdealHNF, PrimeIdeal, PrimeKind};
pub use padic::{hensel_sqrt, hensel_sqrt_odd, TwoAdicSqrt};
pub use primes::{
    is_s_unit, primes_above_2, u_set, val_above_2, val_inert_odd, PrimeAbove2, PrimeDescriptor, PrimeLabel,
    SetsSTU,
};

/// Largest accepted `d` (exclusive). Keeps squarefree tests and `4d` cheap.
pub const MAX_D: u64 = 1 << 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TwoSplitting {
    Ramified,
    Split,
    Inert,
}

/// Integral basis of the ring of integers: `{1, sqrt(-d)}` or `{1, (1+sqrt(-d))/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BasisKind {
    OneAndSqrt,
    OneAndHalf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ImagQuadField {
    d: u64,
    two_splitting: TwoSplitting,
    basis_kind: BasisKind,
    discriminant: i64,
}

impl ImagQuadField {
    /// Validates `d` and classifies the field.
    pub fn new(d: i64) -> Result<Self> {
        if d <= 0 {
            return Err(Error::NonPositive(d));
        }
        let d = d as u64;
        if d >= MAX_D {
            return Err(Error::FieldTooLarge(d));
        }
        if !arith::is_squarefree(d) {
            return Err(Error::NotSquarefree(d));
        }
        Ok(Self::classify(d))
    }

    /// Classification without validation; `d` must already be squarefree.
    pub(crate) fn classify(d: u64) -> Self {
        let neg_d_mod_8 = (8 - d % 8) % 8;
        let two_splitting = match neg_d_mod_8 {
            1 => TwoSplitting::Split,
            5 => TwoSplitting::Inert,
            _ => TwoSplitting::Ramified,
        };
        let (basis_kind, discriminant) = if neg_d_mod_8 % 4 == 1 {
            (BasisKind::OneAndHalf, -(d as i64))
        } else {
            (BasisKind::OneAndSqrt, -4 * d as i64)
        };
        Self {
            d,
            two_splitting,
            basis_kind,
            discriminant,
        }
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn two_splitting(&self) -> TwoSplitting {
        self.two_splitting
    }

    pub fn basis_kind(&self) -> BasisKind {
        self.basis_kind
    }

    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    /// `d` in {1, 3}: the unit group is larger than {+-1}.
    pub fn extra_units(&self) -> bool {
        self.d == 1 || self.d == 3
    }

    /// `-d ≡ 2, 3 (mod 4)`, i.e. 2 ramifies.
    pub fn neg_d_2_or_3_mod_4(&self) -> bool {
        matches!((4 - self.d % 4) % 4, 2 | 3)
    }

    /// `-d ≡ 2, 3 (mod 8)`, the narrower hypothesis of the no-relevant-solution lemma.
    pub fn neg_d_2_or_3_mod_8(&self) -> bool {
        matches!((8 - self.d % 8) % 8, 2 | 3)
    }

    pub fn zero(&self) -> Element {
        Element::from_i64(self, 0)
    }

    pub fn one(&self) -> Element {
        Element::from_i64(self, 1)
    }

    pub fn int(&self, n: i64) -> Element {
        Element::from_i64(self, n)
    }

    /// The element `sqrt(-d)`.
    pub fn sqrt_neg_d(&self) -> Element {
        Element::new(self, 0, 1, 1).expect("den 1")
    }

    /// The canonical integral generator `theta`.
    pub fn theta(&self) -> Element {
        match self.basis_kind {
            BasisKind::OneAndSqrt => self.sqrt_neg_d(),
            BasisKind::OneAndHalf => Element::new(self, 1, 1, 2).expect("den 2"),
        }
    }
}

impl fmt::Display for ImagQuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt(-{}))", self.d)
    }
}

/// An integer valuation or `+inf` (the valuation of zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// Panics on `Infinite`.
    pub fn unwrap(self) -> i64 {
        self.finite().expect("valuation of zero")
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinite => s.serialize_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitting_classification() {
        assert_eq!(ImagQuadField::new(7).unwrap().two_splitting(), TwoSplitting::Split);
        assert_eq!(ImagQuadField::new(5).unwrap().two_splitting(), TwoSplitting::Ramified);
        assert_eq!(ImagQuadField::new(3).unwrap().two_splitting(), TwoSplitting::Inert);
        assert_eq!(ImagQuadField::new(2).unwrap().two_splitting(), TwoSplitting::Ramified);
        assert_eq!(ImagQuadField::new(1).unwrap().two_splitting(), TwoSplitting::Ramified);
        assert_eq!(ImagQuadField::new(12), Err(Error::NotSquarefree(12)));
        assert_eq!(ImagQuadField::new(0), Err(Error::NonPositive(0)));
        assert_eq!(ImagQuadField::new(-7), Err(Error::NonPositive(-7)));
    }

    #[test]
    fn classification_matches_residues() {
        for d in 1..2000i64 {
            let Ok(k) = ImagQuadField::new(d) else { continue };
            let r = (-d).rem_euclid(8);
            let expected = match r {
                1 => TwoSplitting::Split,
                5 => TwoSplitting::Inert,
                2 | 3 | 6 | 7 => TwoSplitting::Ramified,
                _ => unreachable!("squarefree d has -d mod 8 = {r}"),
            };
            assert_eq!(k.two_splitting(), expected, "d = {d}");
            let disc = if (-d).rem_euclid(4) == 1 { -d } else { -4 * d };
            assert_eq!(k.discriminant(), disc);
        }
    }

    #[test]
    fn extra_units_flag() {
        assert!(ImagQuadField::new(1).unwrap().extra_units());
        assert!(ImagQuadField::new(3).unwrap().extra_units());
        assert!(!ImagQuadField::new(7).unwrap().extra_units());
    }

    #[test]
    fn hypothesis_predicates_differ() {
        // d = 10: -10 ≡ 2 (mod 4) but -10 ≡ 6 (mod 8).
        let k = ImagQuadField::new(10).unwrap();
        assert!(k.neg_d_2_or_3_mod_4());
        assert!(!k.neg_d_2_or_3_mod_8());
        let k = ImagQuadField::new(21).unwrap();
        assert!(k.neg_d_2_or_3_mod_4() && k.neg_d_2_or_3_mod_8());
    }

    #[test]
    fn valuation_order_and_sum() {
        assert!(Valuation::Finite(100) < Valuation::Infinite);
        assert_eq!(Valuation::Finite(2) + Valuation::Finite(3), Valuation::Finite(5));
        assert_eq!(Valuation::Finite(2) + Valuation::Infinite, Valuation::Infinite);
    }
}
