use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{BasisKind, ImagQuadField};
use crate::error::{Error, Result};

/// `(x + y*sqrt(-d)) / den` in lowest terms with `den > 0`.
///
/// Binary operators panic when the operands live in different fields; use
/// the `checked_*` methods where that can happen.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Element {
    d: u64,
    x: BigInt,
    y: BigInt,
    den: BigInt,
}

impl Element {
    pub fn new(field: &ImagQuadField, x: i64, y: i64, den: i64) -> Result<Self> {
        Self::from_parts(field, x.into(), y.into(), den.into())
    }

    pub fn from_parts(field: &ImagQuadField, x: BigInt, y: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(field.d(), x, y, den))
    }

    pub fn from_i64(field: &ImagQuadField, n: i64) -> Self {
        Self::reduced(field.d(), n.into(), BigInt::zero(), BigInt::one())
    }

    pub fn from_int(field: &ImagQuadField, n: BigInt) -> Self {
        Self::reduced(field.d(), n, BigInt::zero(), BigInt::one())
    }

    pub fn from_rational(field: &ImagQuadField, q: &BigRational) -> Self {
        Self::reduced(field.d(), q.numer().clone(), BigInt::zero(), q.denom().clone())
    }

    /// The element `u + w*theta` for the canonical integral basis.
    pub fn from_coords(field: &ImagQuadField, u: BigInt, w: BigInt) -> Self {
        match field.basis_kind() {
            BasisKind::OneAndSqrt => Self::reduced(field.d(), u, w, BigInt::one()),
            BasisKind::OneAndHalf => Self::reduced(field.d(), 2 * u + &w, w, BigInt::from(2)),
        }
    }

    fn reduced(d: u64, mut x: BigInt, mut y: BigInt, mut den: BigInt) -> Self {
        debug_assert!(!den.is_zero());
        if den.is_negative() {
            x = -x;
            y = -y;
            den = -den;
        }
        let g = x.gcd(&y).gcd(&den);
        if !g.is_one() {
            x /= &g;
            y /= &g;
            den /= &g;
        }
        Element { d, x, y, den }
    }

    pub fn field(&self) -> ImagQuadField {
        ImagQuadField::classify(self.d)
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    /// Lexicographic sort key `(x, y, den)`.
    pub fn key(&self) -> (BigInt, BigInt, BigInt) {
        (self.x.clone(), self.y.clone(), self.den.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero() && self.den.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.x.clone(), self.den.clone()))
    }

    pub fn is_integral(&self) -> bool {
        if self.den.is_one() {
            return true;
        }
        self.den == BigInt::from(2)
            && self.d % 4 == 3
            && self.x.is_odd()
            && self.y.is_odd()
    }

    /// Coordinates `(u, w)` with `self = u + w*theta`, for integral elements.
    pub fn integral_coords(&self) -> Option<(BigInt, BigInt)> {
        if !self.is_integral() {
            return None;
        }
        match self.field().basis_kind() {
            BasisKind::OneAndSqrt => Some((self.x.clone(), self.y.clone())),
            BasisKind::OneAndHalf => {
                // (x + y sqrt(-d))/den = (x - y)/den + (2y/den) theta
                let w = (&self.y * 2) / &self.den;
                let u = (&self.x - &self.y) / &self.den;
                Some((u, w))
            }
        }
    }

    pub fn conj(&self) -> Self {
        Element {
            d: self.d,
            x: self.x.clone(),
            y: -&self.y,
            den: self.den.clone(),
        }
    }

    /// Numerator of the norm before division by `den^2`: `x^2 + d y^2`.
    pub fn norm_numerator(&self) -> BigInt {
        &self.x * &self.x + BigInt::from(self.d) * &self.y * &self.y
    }

    pub fn norm(&self) -> BigRational {
        BigRational::new(self.norm_numerator(), &self.den * &self.den)
    }

    pub fn trace(&self) -> BigRational {
        BigRational::new(&self.x * 2, self.den.clone())
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.d, other.d))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self::reduced(
            self.d,
            &self.x * &other.den + &other.x * &self.den,
            &self.y * &other.den + &other.y * &self.den,
            &self.den * &other.den,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let d = BigInt::from(self.d);
        Ok(Self::reduced(
            self.d,
            &self.x * &other.x - d * &self.y * &other.y,
            &self.x * &other.y + &other.x * &self.y,
            &self.den * &other.den,
        ))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm_numerator();
        Ok(Self::reduced(
            self.d,
            &self.den * &self.x,
            -(&self.den * &self.y),
            n,
        ))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Element::from_i64(&self.field(), 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `1 - self`.
    pub fn one_minus(&self) -> Self {
        Self::reduced(self.d, &self.den - &self.x, -&self.y, self.den.clone())
    }

    /// Parses `s` as an element of `field`. Besides the canonical form this
    /// accepts bare integers and rationals `X/N`; an embedded `sqrt(-d)`
    /// must name this field's `d`.
    pub fn parse_in(field: &ImagQuadField, s: &str) -> Result<Self> {
        let p = parse_parts(s)?;
        if let Some(d) = p.d {
            if d != field.d() {
                return Err(Error::FieldMismatch(field.d(), d));
            }
        }
        Self::from_parts(field, p.x, p.y, p.den)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.y.is_negative() { '-' } else { '+' };
        write!(
            f,
            "({}{}{}*sqrt(-{}))/{}",
            self.x,
            sign,
            self.y.abs(),
            self.d,
            self.den
        )
    }
}

impl FromStr for Element {
    type Err = Error;

    /// Requires the `sqrt(-d)` term so that the field is determined.
    fn from_str(s: &str) -> Result<Self> {
        let p = parse_parts(s)?;
        let d = p
            .d
            .ok_or_else(|| Error::Parse(format!("missing sqrt(-d) term in {s:?}")))?;
        let d = i64::try_from(d).map_err(|_| Error::Parse(format!("d out of range in {s:?}")))?;
        let field = ImagQuadField::new(d)?;
        Element::from_parts(&field, p.x, p.y, p.den)
    }
}

struct Parts {
    x: BigInt,
    y: BigInt,
    d: Option<u64>,
    den: BigInt,
}

const SQRT_TAG: &str = "sqrt(-";

fn parse_error(s: &str, why: &str) -> Error {
    let shown: String = s.chars().take(64).collect();
    Error::Parse(format!("{why} in {shown:?}"))
}

fn parse_int(s: &str, whole: &str) -> Result<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_error(whole, "malformed integer"));
    }
    BigInt::from_str(s).map_err(|_| parse_error(whole, "malformed integer"))
}

fn parse_parts(input: &str) -> Result<Parts> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    if !s.is_ascii() {
        return Err(parse_error(input, "non-ASCII character"));
    }
    let (numer, den) = if let Some(rest) = s.strip_prefix('(') {
        match rest.rfind(")/") {
            Some(pos) => (&rest[..pos], parse_int(&rest[pos + 2..], input)?),
            None => match rest.strip_suffix(')') {
                Some(inner) => (inner, BigInt::one()),
                None => return Err(parse_error(input, "unbalanced parenthesis")),
            },
        }
    } else if let Some(pos) = s.rfind('/') {
        if s[..pos].contains(SQRT_TAG) {
            return Err(parse_error(input, "non-rational numerator needs parentheses"));
        }
        (&s[..pos], parse_int(&s[pos + 1..], input)?)
    } else {
        (s.as_str(), BigInt::one())
    };
    let (x, y, d) = parse_linear(numer, input)?;
    Ok(Parts { x, y, d, den })
}

fn parse_linear(s: &str, whole: &str) -> Result<(BigInt, BigInt, Option<u64>)> {
    let Some(idx) = s.find(SQRT_TAG) else {
        return Ok((parse_int(s, whole)?, BigInt::zero(), None));
    };
    let tail = &s[idx + SQRT_TAG.len()..];
    let dstr = tail
        .strip_suffix(')')
        .ok_or_else(|| parse_error(whole, "expected ')' after d"))?;
    if dstr.is_empty() || !dstr.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_error(whole, "malformed d"));
    }
    let d: u64 = dstr.parse().map_err(|_| parse_error(whole, "d out of range"))?;
    let head = s[..idx].strip_suffix('*').unwrap_or(&s[..idx]);
    let split = head
        .char_indices()
        .skip(1)
        .filter(|(_, c)| *c == '+' || *c == '-')
        .map(|(i, _)| i)
        .last();
    let (xs, ys) = match split {
        Some(i) => (&head[..i], &head[i..]),
        None => ("0", head),
    };
    let x = parse_int(xs, whole)?;
    let y = match ys {
        "" | "+" => BigInt::one(),
        "-" => -BigInt::one(),
        _ => parse_int(ys, whole)?,
    };
    Ok((x, y, Some(d)))
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Element> for &Element {
            type Output = Element;
            fn $method(self, rhs: &Element) -> Element {
                self.$checked(rhs).expect("operands in different fields")
            }
        }
        impl $tr<Element> for Element {
            type Output = Element;
            fn $method(self, rhs: Element) -> Element {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Element> for Element {
            type Output = Element;
            fn $method(self, rhs: &Element) -> Element {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element {
            d: self.d,
            x: -&self.x,
            y: -&self.y,
            den: self.den.clone(),
        }
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k(d: i64) -> ImagQuadField {
        ImagQuadField::new(d).unwrap()
    }

    fn el(d: i64, x: i64, y: i64, den: i64) -> Element {
        Element::new(&k(d), x, y, den).unwrap()
    }

    fn rat(n: i64, m: i64) -> BigRational {
        BigRational::new(n.into(), m.into())
    }

    #[test]
    fn norms() {
        assert_eq!(el(7, 3, 1, 2).norm(), rat(4, 1));
        assert_eq!(el(7, 1, 3, 2).norm(), rat(16, 1));
        assert_eq!(el(7, 1, 0, 1).norm(), rat(1, 1));
    }

    #[test]
    fn conj_trace_inverse() {
        let z = el(7, 3, 1, 2);
        assert_eq!(z.conj(), el(7, 3, -1, 2));
        assert_eq!(z.trace(), rat(3, 1));
        let w = el(7, 1, 1, 2);
        assert!((&w * &w.inv().unwrap()).is_one());
        assert_eq!(k(7).zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn reduction() {
        let z = el(7, 4, 2, -4);
        assert_eq!((z.x().clone(), z.y().clone(), z.den().clone()), (BigInt::from(-2), BigInt::from(-1), BigInt::from(2)));
    }

    #[test]
    fn integrality() {
        assert!(el(7, 1, 3, 2).is_integral());
        assert!(!el(5, 1, 1, 2).is_integral());
        assert!(!el(7, 1, 0, 2).is_integral());
        assert!(el(5, 3, -2, 1).is_integral());
    }

    #[test]
    fn coords_round_trip() {
        let f = k(7);
        let z = el(7, 1, 3, 2);
        let (u, w) = z.integral_coords().unwrap();
        assert_eq!((u.clone(), w.clone()), (BigInt::from(-1), BigInt::from(3)));
        assert_eq!(Element::from_coords(&f, u, w), z);
    }

    #[test]
    fn display_and_parse() {
        let z = el(7, 1, -3, 2);
        assert_eq!(z.to_string(), "(1-3*sqrt(-7))/2");
        assert_eq!("(1-3*sqrt(-7))/2".parse::<Element>().unwrap(), z);
        assert_eq!("1 + sqrt(-7)".parse::<Element>().unwrap(), el(7, 1, 1, 1));
        assert_eq!("-sqrt(-7)".parse::<Element>().unwrap(), el(7, 0, -1, 1));
        assert_eq!(Element::parse_in(&k(7), "3/4").unwrap(), el(7, 3, 0, 4));
        assert_eq!(Element::parse_in(&k(7), "-12").unwrap(), el(7, -12, 0, 1));
        assert_eq!(Element::parse_in(&k(7), "(1+sqrt(-5))/2"), Err(Error::FieldMismatch(7, 5)));
        assert!("12".parse::<Element>().is_err());
        assert!("(1+2*sqrt(-12))/1".parse::<Element>().is_err());
        assert!("(1+2*sqrt(-7))/0".parse::<Element>().is_err());
        assert!("1_0".parse::<Element>().is_err());
        assert!("(".parse::<Element>().is_err());
    }

    #[test]
    fn serde_as_string() {
        let z = el(15, 1, 1, 2);
        let j = serde_json::to_string(&z).unwrap();
        assert_eq!(j, "\"(1+1*sqrt(-15))/2\"");
        let back: Element = serde_json::from_str(&j).unwrap();
        assert_eq!(back, z);
    }

    fn arb_el(d: i64) -> impl Strategy<Value = Element> {
        (-50i64..50, -50i64..50, 1i64..12).prop_map(move |(x, y, n)| el(d, x, y, n))
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(a in arb_el(23), b in arb_el(23)) {
            prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
        }

        #[test]
        fn ring_axioms(a in arb_el(5), b in arb_el(5), c in arb_el(5)) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            prop_assert_eq!(a.one_minus(), &k(5).one() - &a);
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn display_round_trips(a in arb_el(31)) {
            prop_assert_eq!(a.to_string().parse::<Element>().unwrap(), a);
        }

        #[test]
        fn parser_never_panics(s in "\\PC{0,40}") {
            let _ = s.parse::<Element>();
            let _ = Element::parse_in(&k(7), &s);
        }

        #[test]
        fn parser_near_miss_inputs(s in "[()+\\-*/0-9sqrt ]{0,30}") {
            let _ = s.parse::<Element>();
        }
    }
}
