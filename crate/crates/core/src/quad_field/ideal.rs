use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::padic::hensel_sqrt_odd;
use super::{BasisKind, Element, ImagQuadField, Valuation};
use crate::arith;
use crate::error::{Error, Result};

/// A non-zero ideal as the Z-module with basis `[a, b + c*theta]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdealHNF {
    field: ImagQuadField,
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

fn theta_times(field: &ImagQuadField, (u, w): (&BigInt, &BigInt)) -> (BigInt, BigInt) {
    let d = BigInt::from(field.d());
    match field.basis_kind() {
        BasisKind::OneAndSqrt => (-(d * w), u.clone()),
        BasisKind::OneAndHalf => {
            let k: BigInt = (d + 1) / 4;
            (-(k * w), u + w)
        }
    }
}

/// Hermite normal form of the lattice spanned by `gens` (coordinates in the
/// basis `1, theta`). Returns `None` when the span has rank < 2.
fn hnf(gens: impl IntoIterator<Item = (BigInt, BigInt)>) -> Option<(BigInt, BigInt, BigInt)> {
    let mut pivot: Option<(BigInt, BigInt)> = None;
    let mut a = BigInt::zero();
    for (u, w) in gens {
        if w.is_zero() {
            a = a.gcd(&u);
            continue;
        }
        match pivot.take() {
            None => pivot = Some((u, w)),
            Some((pu, pw)) => {
                let e = pw.extended_gcd(&w);
                let g = e.gcd;
                let new = (&e.x * &pu + &e.y * &u, &e.x * &pw + &e.y * &w);
                let cleared = (&w / &g) * &pu - (&pw / &g) * &u;
                a = a.gcd(&cleared);
                pivot = Some(new);
            }
        }
    }
    let (mut bu, mut c) = pivot?;
    if a.is_zero() {
        return None;
    }
    if c.is_negative() {
        bu = -bu;
        c = -c;
    }
    Some((a.clone(), bu.mod_floor(&a), c))
}

impl IdealHNF {
    /// Builds the ideal generated by elements given in `(u, w)` coordinates.
    fn from_ideal_generators(field: &ImagQuadField, gens: &[(BigInt, BigInt)]) -> Result<Self> {
        if gens.iter().all(|(u, w)| u.is_zero() && w.is_zero()) {
            return Err(Error::AllZero);
        }
        let mut all = Vec::with_capacity(2 * gens.len());
        for g in gens {
            all.push(theta_times(field, (&g.0, &g.1)));
            all.push(g.clone());
        }
        let (a, b, c) = hnf(all).ok_or(Error::AllZero)?;
        let out = IdealHNF { field: *field, a, b, c };
        debug_assert!(out.is_closed());
        Ok(out)
    }

    /// Validates raw HNF data: `c | a`, `c | b`, `0 <= b < a`, and closure
    /// under multiplication by `theta`.
    pub fn from_abc(field: &ImagQuadField, a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        let bad = |why: &str| Err(Error::Parse(format!("[{a}, {b}+{c}*theta]: {why}")));
        if !a.is_positive() || !c.is_positive() {
            return bad("a and c must be positive");
        }
        if b.is_negative() || b >= a {
            return bad("need 0 <= b < a");
        }
        if !a.is_multiple_of(&c) || !b.is_multiple_of(&c) {
            return bad("c must divide a and b");
        }
        let out = IdealHNF { field: *field, a: a.clone(), b: b.clone(), c: c.clone() };
        if !out.is_closed() {
            return bad("not closed under multiplication by theta");
        }
        Ok(out)
    }

    pub fn unit(field: &ImagQuadField) -> Self {
        IdealHNF { field: *field, a: BigInt::one(), b: BigInt::zero(), c: BigInt::one() }
    }

    pub fn field(&self) -> ImagQuadField {
        self.field
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn norm(&self) -> BigInt {
        &self.a * &self.c
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    fn contains_coords(&self, u: &BigInt, w: &BigInt) -> bool {
        if !w.is_multiple_of(&self.c) {
            return false;
        }
        let k = w / &self.c;
        (u - k * &self.b).is_multiple_of(&self.a)
    }

    pub fn contains(&self, z: &Element) -> bool {
        if z.d() != self.field.d() {
            return false;
        }
        match z.integral_coords() {
            Some((u, w)) => self.contains_coords(&u, &w),
            None => false,
        }
    }

    pub fn is_closed(&self) -> bool {
        let zero = BigInt::zero();
        let t1 = theta_times(&self.field, (&self.a, &zero));
        let t2 = theta_times(&self.field, (&self.b, &self.c));
        self.contains_coords(&t1.0, &t1.1) && self.contains_coords(&t2.0, &t2.1)
    }

    /// The two Z-basis elements `a` and `b + c*theta`.
    pub fn basis(&self) -> [Element; 2] {
        [
            Element::from_coords(&self.field, self.a.clone(), BigInt::zero()),
            Element::from_coords(&self.field, self.b.clone(), self.c.clone()),
        ]
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.d(), other.field.d()));
        }
        let mut gens = Vec::new();
        for x in self.basis() {
            for y in other.basis() {
                gens.push((&x * &y).integral_coords().expect("product of integral elements"));
            }
        }
        Self::from_ideal_generators(&self.field, &gens)
    }

    /// Sum of ideals (their gcd).
    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut els: Vec<Element> = self.basis().into();
        els.extend(other.basis());
        gcd_ideal(&els)
    }

    /// Parses `[a, b+c*theta]` (whitespace-insensitive) and validates it.
    pub fn parse_in(field: &ImagQuadField, s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || Error::Parse(format!("expected [a, b+c*theta], got {:?}", s.chars().take(64).collect::<String>()));
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(err)?;
        let (a, rest) = inner.split_once(',').ok_or_else(err)?;
        let lin = rest.strip_suffix("*theta").ok_or_else(err)?;
        let split = lin
            .char_indices()
            .skip(1)
            .filter(|(_, ch)| *ch == '+' || *ch == '-')
            .map(|(i, _)| i)
            .last()
            .ok_or_else(err)?;
        let num = |x: &str| -> Result<BigInt> {
            let digits = x.strip_prefix(['+', '-']).unwrap_or(x);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err());
            }
            x.parse::<BigInt>().map_err(|_| err())
        };
        let (b, c) = (&lin[..split], &lin[split..]);
        Self::from_abc(field, num(a)?, num(b)?, num(c)?)
    }
}

impl fmt::Display for IdealHNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}+{}*theta]", self.a, self.b, self.c)
    }
}

impl Serialize for IdealHNF {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The ideal generated by `elements`: `e1 O_K + e2 O_K + ...`.
pub fn gcd_ideal(elements: &[Element]) -> Result<IdealHNF> {
    let first = elements.first().ok_or(Error::AllZero)?;
    let field = first.field();
    let mut gens = Vec::with_capacity(elements.len());
    for z in elements {
        if z.d() != field.d() {
            return Err(Error::FieldMismatch(field.d(), z.d()));
        }
        gens.push(
            z.integral_coords()
                .ok_or_else(|| Error::NotIntegral(z.to_string()))?,
        );
    }
    IdealHNF::from_ideal_generators(&field, &gens)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PrimeKind {
    Split,
    Inert,
    Ramified,
}

/// A prime of O_K above an odd rational prime `ell`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeIdeal {
    pub ell: u64,
    pub kind: PrimeKind,
    pub hnf: IdealHNF,
    /// Residue of `sqrt(-d)` modulo this prime (split case only).
    pub sqrt_residue: Option<u64>,
}

impl PrimeIdeal {
    pub fn norm(&self) -> BigInt {
        self.hnf.norm()
    }

    pub fn residue_degree(&self) -> u32 {
        match self.kind {
            PrimeKind::Inert => 2,
            _ => 1,
        }
    }

    pub fn ramification(&self) -> u32 {
        match self.kind {
            PrimeKind::Ramified => 2,
            _ => 1,
        }
    }

    /// Identifies `hnf` as one of the primes above its norm's prime.
    pub fn from_hnf(hnf: &IdealHNF) -> Result<Self> {
        let not_prime = || Error::NotPrimeIdeal(hnf.to_string());
        let n = u64::try_from(&hnf.norm()).map_err(|_| not_prime())?;
        let ell = if arith::is_prime_u64(n) {
            n
        } else {
            let r = (n as f64).sqrt().round() as u64;
            if r * r == n && arith::is_prime_u64(r) {
                r
            } else {
                return Err(not_prime());
            }
        };
        if ell == 2 {
            return Err(Error::OutOfRange("primes above 2 are handled by PrimeAbove2".into()));
        }
        primes_above(&hnf.field(), ell)?
            .into_iter()
            .find(|p| p.hnf == *hnf)
            .ok_or_else(not_prime)
    }

    /// Valuation of `z` at this prime; `Infinite` for zero.
    pub fn valuation(&self, z: &Element) -> Valuation {
        if z.is_zero() {
            return Valuation::Infinite;
        }
        let ell = self.ell;
        let n = z.norm_numerator();
        let vn = arith::val_p(&n, ell) as i64;
        let vden = arith::val_p(z.den(), ell) as i64;
        let v = match self.kind {
            PrimeKind::Inert => vn / 2 - vden,
            PrimeKind::Ramified => vn - 2 * vden,
            PrimeKind::Split => {
                let prec = vn as u32 + 1;
                let target = self.sqrt_residue.expect("split prime has a root");
                let minus_d = -BigInt::from(z.d());
                let mut r = hensel_sqrt_odd(&minus_d, ell, prec).expect("split prime");
                let m = BigInt::from(ell).pow(prec);
                if r.mod_floor(&BigInt::from(ell)) != BigInt::from(target) {
                    r = (-r).mod_floor(&m);
                }
                let img = (z.x() + z.y() * r).mod_floor(&m);
                let vi = if img.is_zero() {
                    prec as i64
                } else {
                    arith::val_p(&img, ell) as i64
                };
                vi - vden
            }
        };
        Valuation::Finite(v)
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.hnf)
    }
}

/// The primes of O_K above an odd prime `ell`, ordered by their HNF.
pub fn primes_above(field: &ImagQuadField, ell: u64) -> Result<Vec<PrimeIdeal>> {
    if ell.is_multiple_of(2) || !arith::is_prime_u64(ell) {
        return Err(Error::NotPrime(ell));
    }
    let d = field.d();
    let lb = || Element::from_i64(field, ell as i64);
    if d.is_multiple_of(ell) {
        let hnf = gcd_ideal(&[lb(), field.sqrt_neg_d()])?;
        return Ok(vec![PrimeIdeal { ell, kind: PrimeKind::Ramified, hnf, sqrt_residue: Some(0) }]);
    }
    let minus_d = -(d as i128);
    if arith::jacobi(minus_d, ell) == -1 {
        let hnf = gcd_ideal(&[lb()])?;
        return Ok(vec![PrimeIdeal { ell, kind: PrimeKind::Inert, hnf, sqrt_residue: None }]);
    }
    let r = hensel_sqrt_odd(&BigInt::from(minus_d), ell, 1).expect("residue");
    let r = u64::try_from(&r).expect("reduced residue");
    let mut out = Vec::with_capacity(2);
    for root in [r, ell - r] {
        let g = field.sqrt_neg_d() - Element::from_i64(field, root as i64);
        let hnf = gcd_ideal(&[lb(), g])?;
        out.push(PrimeIdeal { ell, kind: PrimeKind::Split, hnf, sqrt_residue: Some(root) });
    }
    out.sort_by(|p, q| p.hnf.b.cmp(&q.hnf.b));
    Ok(out)
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

    #[test]
    fn gcd_examples() {
        let i = gcd_ideal(&[el(7, 2, 0, 1), el(7, 2, 0, 1)]).unwrap();
        assert_eq!(i.norm(), BigInt::from(4));
        let i = gcd_ideal(&[el(7, 1, 0, 1), el(7, 5, 3, 1)]).unwrap();
        assert!(i.is_unit());
        let i = gcd_ideal(&[el(5, 2, 0, 1), el(5, 1, 1, 1)]).unwrap();
        assert_eq!(i.norm(), BigInt::from(2));
        assert_eq!(i.to_string(), "[2, 1+1*theta]");
        assert_eq!(gcd_ideal(&[el(5, 0, 0, 1)]), Err(Error::AllZero));
        assert!(matches!(gcd_ideal(&[el(5, 1, 0, 2)]), Err(Error::NotIntegral(_))));
    }

    #[test]
    fn ramified_two_squares_to_two() {
        let p = gcd_ideal(&[el(5, 2, 0, 1), el(5, 1, 1, 1)]).unwrap();
        assert_eq!(p.mul(&p).unwrap(), gcd_ideal(&[el(5, 2, 0, 1)]).unwrap());
    }

    #[test]
    fn parse_round_trip_and_validation() {
        let f = k(5);
        let p = IdealHNF::parse_in(&f, "[2, 1+1*theta]").unwrap();
        assert_eq!(p.to_string(), "[2, 1+1*theta]");
        assert!(IdealHNF::parse_in(&f, "[2, 0+1*theta]").is_err());
        assert!(IdealHNF::parse_in(&f, "[0, 0+1*theta]").is_err());
        assert!(IdealHNF::parse_in(&f, "[2, 1+1*theta").is_err());
        assert!(IdealHNF::parse_in(&f, "").is_err());
    }

    #[test]
    fn primes_above_products() {
        for d in [1i64, 2, 5, 7, 15, 21, 23, 31, 39, 127] {
            let f = k(d);
            for ell in [3u64, 5, 7, 11, 13, 29, 31] {
                let ps = primes_above(&f, ell).unwrap();
                let mut prod = IdealHNF::unit(&f);
                for p in &ps {
                    assert!(p.hnf.is_closed());
                    for _ in 0..p.ramification() {
                        prod = prod.mul(&p.hnf).unwrap();
                    }
                    assert_eq!(PrimeIdeal::from_hnf(&p.hnf).unwrap(), *p);
                }
                assert_eq!(prod, gcd_ideal(&[f.int(ell as i64)]).unwrap(), "d={d} ell={ell}");
            }
        }
    }

    #[test]
    fn prime_valuations_sum_to_norm() {
        let f = k(5);
        let ps = primes_above(&f, 29).unwrap();
        assert_eq!(ps.len(), 2);
        let pi = el(5, 3, 2, 1);
        let vals: Vec<i64> = ps.iter().map(|p| p.valuation(&pi).unwrap()).collect();
        assert_eq!(vals.iter().sum::<i64>(), 1);
        for p in &ps {
            assert_eq!(p.valuation(&pi).unwrap() == 1, p.hnf.contains(&pi));
        }
    }

    #[test]
    fn not_prime_ideals() {
        let f = k(7);
        let i = gcd_ideal(&[f.int(15)]).unwrap();
        assert!(matches!(PrimeIdeal::from_hnf(&i), Err(Error::NotPrimeIdeal(_))));
        assert_eq!(primes_above(&f, 9), Err(Error::NotPrime(9)));
    }

    fn arb_int(d: i64) -> impl Strategy<Value = Element> {
        (-40i64..40, -40i64..40).prop_map(move |(u, w)| Element::from_coords(&k(d), u.into(), w.into()))
    }

    proptest! {
        #[test]
        fn gcd_commutative_and_norm_divides(a in arb_int(15), b in arb_int(15), c in arb_int(15)) {
            prop_assume!(!(a.is_zero() && b.is_zero() && c.is_zero()));
            let i1 = gcd_ideal(&[a.clone(), b.clone(), c.clone()]).unwrap();
            let i2 = gcd_ideal(&[c.clone(), a.clone(), b.clone()]).unwrap();
            prop_assert_eq!(&i1, &i2);
            prop_assert!(i1.is_closed());
            let ab = gcd_ideal(&[a.clone(), b.clone()]);
            if let Ok(ab) = ab {
                let nested = ab.add(&gcd_ideal(std::slice::from_ref(&c)).unwrap_or_else(|_| ab.clone())).unwrap();
                prop_assert_eq!(&nested, &i1);
            }
            for z in [&a, &b, &c] {
                if !z.is_zero() {
                    let n = z.norm().to_integer();
                    prop_assert!(n.is_multiple_of(&i1.norm()));
                    prop_assert!(i1.contains(z));
                }
            }
        }

        #[test]
        fn prime_valuation_additive(a in arb_int(23), b in arb_int(23)) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            for p in primes_above(&k(23), 3).unwrap().iter().chain(primes_above(&k(23), 5).unwrap().iter()) {
                prop_assert_eq!(p.valuation(&(&a * &b)), p.valuation(&a) + p.valuation(&b));
            }
        }

        #[test]
        fn ideal_parser_never_panics(s in "\\PC{0,40}") {
            let _ = IdealHNF::parse_in(&k(7), &s);
        }
    }
}
