//! Frey-curve invariants for `A a^p + B b^p + C c^p = 0` and exact replays of
//! the valuation identities used in the criterion's proof.

mod legendre;

use num_traits::Zero;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::quad_field::{gcd_ideal, val_above_2, Element, PrimeAbove2, PrimeIdeal, Valuation};

pub use legendre::{j_of_lambda, j_of_lambda_mu, legendre_lambda};

/// The curve `Y^2 = X (X - A a^p) (X + B b^p)` with its invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreyData {
    #[serde(rename = "A")]
    pub coef_a: Element,
    #[serde(rename = "B")]
    pub coef_b: Element,
    #[serde(rename = "C")]
    pub coef_c: Element,
    pub a: Element,
    pub b: Element,
    pub c: Element,
    pub p: u32,
    pub c4: Element,
    pub delta: Element,
    pub j: Element,
    /// Names of coefficients whose norm is even (some prime above 2 divides them).
    pub even_coefficients: Vec<&'static str>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InertiaClass {
    /// Potentially good reduction; inertia image has order dividing 24.
    PotGoodDiv24,
    /// Potentially multiplicative, `p ∤ v(j)`: inertia image of order `p` or `2p`.
    PotMultPOr2p,
    /// Potentially multiplicative, `p | v(j)`: inertia image of order 1 or 2.
    PotMult1Or2,
}

/// Inertia size from `v_q(j)`; meaningful for `p >= 5`.
pub fn classify_inertia(v_q_j: i64, p: u32) -> InertiaClass {
    if v_q_j >= 0 {
        InertiaClass::PotGoodDiv24
    } else if v_q_j % p as i64 != 0 {
        InertiaClass::PotMultPOr2p
    } else {
        InertiaClass::PotMult1Or2
    }
}

fn has_even_norm(z: &Element) -> bool {
    (z.norm_numerator() % 2u32).is_zero()
}

/// Builds the Frey data and checks `j = c4^3 / delta` against the symmetric
/// expression `2^8 (C^2 c^2p - AB a^p b^p)^3 / (ABC)^2 (abc)^2p`.
#[allow(non_snake_case)]
pub fn frey_invariants(
    A: &Element,
    B: &Element,
    C: &Element,
    a: &Element,
    b: &Element,
    c: &Element,
    p: u32,
) -> Result<FreyData> {
    if p < 3 || !arith::is_prime_u64(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    let d = A.d();
    for z in [B, C, a, b, c] {
        if z.d() != d {
            return Err(Error::FieldMismatch(d, z.d()));
        }
    }
    for z in [A, B, C, a, b, c] {
        if !z.is_integral() {
            return Err(Error::NotIntegral(z.to_string()));
        }
    }
    for (name, z) in [("A", A), ("B", B), ("C", C)] {
        if z.is_zero() {
            return Err(Error::ZeroCoefficient(name));
        }
    }
    if a.is_zero() || b.is_zero() || c.is_zero() {
        return Err(Error::TrivialSolution);
    }
    let (ap, bp, cp) = (a.pow(p), b.pow(p), c.pow(p));
    let alpha = A * &ap;
    let beta = B * &bp;
    let gamma = C * &cp;
    if !(&(&alpha + &beta) + &gamma).is_zero() {
        return Err(Error::NotASolution(format!("{A}*({a})^{p} + {B}*({b})^{p} + {C}*({c})^{p} != 0")));
    }
    let field = A.field();
    let sixteen = field.int(16);
    let c4 = &sixteen * &(&(&beta * &beta) - &(&alpha * &gamma));
    let abc = &(&alpha * &beta) * &gamma;
    let delta = &sixteen * &(&abc * &abc);
    let j = c4.pow(3).checked_div(&delta)?;

    let num = &(&gamma * &gamma) - &(&alpha * &beta);
    let j_alt = (&field.int(256) * &num.pow(3)).checked_div(&(&abc * &abc))?;
    if j != j_alt {
        return Err(Error::IdentityFailure(format!("j = {j} but the symmetric form gives {j_alt}")));
    }
    let even_coefficients = [("A", A), ("B", B), ("C", C)]
        .into_iter()
        .filter(|(_, z)| has_even_norm(z))
        .map(|(n, _)| n)
        .collect();
    Ok(FreyData {
        coef_a: A.clone(),
        coef_b: B.clone(),
        coef_c: C.clone(),
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        p,
        c4,
        delta,
        j,
        even_coefficients,
    })
}

/// The solution `A a^p + B b^p + C = 0` with `c = 1` and `C = -(A a^p + B b^p)`.
/// Fails with `EvenCoefficient` when `C` has even norm and `ZeroCoefficient`
/// when it vanishes; used to sample solutions.
#[allow(non_snake_case)]
pub fn solution_with_unit_c(A: &Element, B: &Element, a: &Element, b: &Element, p: u32) -> Result<FreyData> {
    let C = -(&(A * &a.pow(p)) + &(B * &b.pow(p)));
    if C.is_zero() {
        return Err(Error::ZeroCoefficient("C"));
    }
    if has_even_norm(&C) {
        return Err(Error::EvenCoefficient("C"));
    }
    frey_invariants(A, B, &C, a, b, &A.field().one(), p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UReport {
    pub prime: PrimeAbove2,
    pub v_p_2: i64,
    /// Which of `a, b, c` the prime divides (the one renamed `b` in the identity).
    pub divides: &'static str,
    pub v_p_b: i64,
    pub v_p_j: i64,
    pub expected: i64,
    pub holds: bool,
    pub potentially_multiplicative: bool,
    pub p_exceeds_threshold: bool,
    pub inertia: InertiaClass,
}

/// Replays `v_P(j) = 8 v_P(2) - 2p v_P(b)` at a prime `P` of `U`, after
/// renaming so that `P | b`.
pub fn valuation_identity_u(fd: &FreyData, prime: &PrimeAbove2) -> Result<UReport> {
    if !prime.in_u() {
        return Err(Error::HypothesisFailure(format!("{prime} has residue degree {}", prime.residue_degree_f)));
    }
    let val = |z: &Element| val_above_2(z, prime);
    for (name, z) in [("A", &fd.coef_a), ("B", &fd.coef_b), ("C", &fd.coef_c)] {
        if val(z) != Valuation::Finite(0) {
            return Err(Error::HypothesisFailure(format!("{prime} divides {name}")));
        }
    }
    let divided: Vec<(&'static str, i64)> = [("a", &fd.a), ("b", &fd.b), ("c", &fd.c)]
        .into_iter()
        .map(|(n, z)| (n, val(z).unwrap()))
        .filter(|&(_, v)| v > 0)
        .collect();
    let [(divides, v_p_b)] = divided[..] else {
        return Err(Error::HypothesisFailure(format!(
            "{prime} divides {} of a, b, c; exactly one required",
            divided.len()
        )));
    };
    let v_p_2 = prime.v_of_2;
    let v_p_j = val(&fd.j).unwrap();
    let expected = 8 * v_p_2 - 2 * fd.p as i64 * v_p_b;
    Ok(UReport {
        prime: prime.clone(),
        v_p_2,
        divides,
        v_p_b,
        v_p_j,
        expected,
        holds: v_p_j == expected,
        potentially_multiplicative: v_p_j < 0,
        p_exceeds_threshold: fd.p as i64 > 4 * v_p_2,
        inertia: classify_inertia(v_p_j, fd.p),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VmReport {
    pub m: PrimeIdeal,
    /// Whether `m` is exactly the gcd ideal of `a, b, c` (otherwise it merely divides it).
    pub gcd_is_m: bool,
    /// `v_m(A a^p), v_m(B b^p), v_m(C c^p)`.
    pub weighted: [i64; 3],
    pub k: i64,
    pub t: i64,
    pub v_m_j: i64,
    pub p_divides_t: bool,
    pub holds: bool,
    pub inertia: InertiaClass,
}

/// The case split at a prime `m` dividing each of `a, b, c`: two of the
/// weighted valuations equal `k`, the third is `k + t`; then `v_m(j) = -2t`
/// with `p | t` when `t >= 1`, and `v_m(j) >= 0` when `t = 0`.
pub fn vm_analysis(fd: &FreyData, m: &PrimeIdeal) -> Result<VmReport> {
    if m.ell == fd.p as u64 {
        return Err(Error::HypothesisFailure(format!("m = {m} lies above p = {}", fd.p)));
    }
    for (name, z) in [("A", &fd.coef_a), ("B", &fd.coef_b), ("C", &fd.coef_c)] {
        if m.valuation(z) != Valuation::Finite(0) {
            return Err(Error::HypothesisFailure(format!("m = {m} divides {name}")));
        }
    }
    let vs: Vec<i64> = [&fd.a, &fd.b, &fd.c].iter().map(|z| m.valuation(z).unwrap()).collect();
    if vs.iter().any(|&v| v <= 0) {
        return Err(Error::HypothesisFailure(format!("m = {m} does not divide all of a, b, c")));
    }
    let p = fd.p as i64;
    let weighted = [p * vs[0], p * vs[1], p * vs[2]];
    let mut sorted = weighted;
    sorted.sort_unstable();
    if sorted[0] != sorted[1] {
        return Err(Error::IdentityFailure(format!("minimum of {weighted:?} is attained once")));
    }
    let (k, t) = (sorted[0], sorted[2] - sorted[0]);
    let v_m_j = m.valuation(&fd.j).unwrap();
    let holds = if t == 0 { v_m_j >= 0 } else { v_m_j == -2 * t && t % p == 0 };
    let gcd_is_m = gcd_ideal(&[fd.a.clone(), fd.b.clone(), fd.c.clone()])? == m.hnf;
    Ok(VmReport {
        m: m.clone(),
        gcd_is_m,
        weighted,
        k,
        t,
        v_m_j,
        p_divides_t: t % p == 0,
        holds,
        inertia: classify_inertia(v_m_j, fd.p),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Reduction {
    Good,
    Multiplicative,
    /// `q | delta` and `q | c4`: the semistability claim fails here.
    NotSemistable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemistabilityReport {
    pub q: PrimeIdeal,
    pub v_q_delta: i64,
    pub v_q_c4: i64,
    pub reduction: Reduction,
    /// `p | v_q(delta)`.
    pub p_divides_v_delta: bool,
    /// `2 + 3 v_q(3) + 6 v_q(2)`.
    pub conductor_cap: i64,
    /// `q` lies above 3; minimality from `v_q(c4) = 0` is reported, not assumed.
    pub above_3: bool,
    pub holds: bool,
}

/// At an odd prime `q` not dividing `ABC` and dividing at most one of `a, b, c`:
/// `v_q(delta) > 0` forces `v_q(c4) = 0`.
pub fn semistability_report(fd: &FreyData, q: &PrimeIdeal) -> Result<SemistabilityReport> {
    for (name, z) in [("A", &fd.coef_a), ("B", &fd.coef_b), ("C", &fd.coef_c)] {
        if q.valuation(z) != Valuation::Finite(0) {
            return Err(Error::HypothesisFailure(format!("q = {q} divides {name}")));
        }
    }
    let hits = [&fd.a, &fd.b, &fd.c].iter().filter(|z| q.valuation(z).unwrap() > 0).count();
    if hits > 1 {
        return Err(Error::HypothesisFailure(format!("q = {q} divides {hits} of a, b, c")));
    }
    let v_q_delta = q.valuation(&fd.delta).unwrap();
    let v_q_c4 = q.valuation(&fd.c4).unwrap();
    let reduction = match (v_q_delta > 0, v_q_c4 > 0) {
        (false, _) => Reduction::Good,
        (true, false) => Reduction::Multiplicative,
        (true, true) => Reduction::NotSemistable,
    };
    let v_q_3 = if q.ell == 3 { q.ramification() as i64 } else { 0 };
    Ok(SemistabilityReport {
        q: q.clone(),
        v_q_delta,
        v_q_c4,
        reduction,
        p_divides_v_delta: v_q_delta % fd.p as i64 == 0,
        conductor_cap: 2 + 3 * v_q_3,
        above_3: q.ell == 3,
        holds: reduction != Reduction::NotSemistable,
    })
}
