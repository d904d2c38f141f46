//! The verdict engine: gathers every relevant S-unit orbit for `(d, radical)`
//! and tests `max(|v_P(λ)|, |v_P(μ)|) <= 4 v_P(2)` for some `P` in `U`.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::quad_field::{u_set, val_above_2, Element, ImagQuadField, PrimeAbove2, PrimeLabel, TwoSplitting};
use crate::sunit::{
    brute_force, certificate_norel, certificate_ramified_parity, obstruction_chain, param_split2, param_with_q,
    rational_solutions, s3_images, BruteBounds, Certificate, Conclusion, SUnitSolution,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CriterionOptions {
    pub r_max: u32,
    pub s_max: u32,
    pub v_max: u64,
    pub brute: BruteBounds,
    /// An extra odd prime added to the radical.
    pub q: Option<u64>,
}

impl Default for CriterionOptions {
    fn default() -> Self {
        Self { r_max: 64, s_max: 16, v_max: 1_000_000, brute: BruteBounds::default(), q: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Outcome {
    HoldsUnconditional,
    HoldsBounded,
    Fails,
    NotApplicable,
    Inconclusive,
}

impl Outcome {
    pub fn is_holds(self) -> bool {
        matches!(self, Outcome::HoldsUnconditional | Outcome::HoldsBounded)
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

/// How the orbit list was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    None,
    ObstructionChain,
    ParamSplit2,
    RamifiedParity,
    Norel,
    ParamWithQ,
    BruteForce,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeT {
    pub prime: PrimeLabel,
    pub t: i64,
    pub threshold: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitEval {
    pub solution: SUnitSolution,
    pub per_prime: Vec<PrimeT>,
    /// Smallest `t` over `U`.
    pub best_t: i64,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub d: u64,
    pub radical: u64,
    pub outcome: Outcome,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<SUnitSolution>,
    /// For `Fails`, the witness's `t` at its best prime; otherwise the largest
    /// best-prime `t` over all gathered orbits.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub best_prime: Option<PrimeLabel>,
    pub threshold: i64,
    pub bounds: CriterionOptions,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    /// Which hypothesis set was used for the 2-adic shape of `d`.
    pub hypotheses: Vec<String>,
    pub orbits: Vec<OrbitEval>,
}

/// `max(|v_P(λ)|, |v_P(μ)|)`.
pub fn max_abs_val(sol: &SUnitSolution, prime: &PrimeAbove2) -> i64 {
    let v = |z: &Element| val_above_2(z, prime).unwrap().abs();
    v(&sol.lambda).max(v(&sol.mu))
}

/// `t` on all six orbit members; they must agree.
fn t_invariant(sol: &SUnitSolution, prime: &PrimeAbove2) -> Result<i64> {
    let t = max_abs_val(sol, prime);
    for img in s3_images(&sol.lambda)? {
        let other = SUnitSolution::from_lambda(img, None)?;
        let t2 = max_abs_val(&other, prime);
        if t2 != t {
            return Err(Error::IdentityFailure(format!(
                "t differs on the orbit of {}: {t} vs {t2} at {prime}",
                sol.lambda
            )));
        }
    }
    Ok(t)
}

pub fn evaluate_orbit(sol: &SUnitSolution, u: &[PrimeAbove2]) -> Result<OrbitEval> {
    let per_prime = u
        .iter()
        .map(|p| Ok(PrimeT { prime: p.label, t: t_invariant(sol, p)?, threshold: p.threshold() }))
        .collect::<Result<Vec<_>>>()?;
    let best = per_prime.iter().min_by_key(|pt| (pt.t - pt.threshold, pt.prime as u8)).expect("U non-empty");
    Ok(OrbitEval {
        solution: sol.clone(),
        best_t: best.t,
        passes: per_prime.iter().any(|pt| pt.t <= pt.threshold),
        per_prime,
    })
}

fn irrelevant_orbit(field: &ImagQuadField) -> SUnitSolution {
    SUnitSolution::from_lambda(field.int(2), None).expect("2 is not degenerate")
}

fn radical_primes(radical: u64, q: Option<u64>) -> Result<Vec<u64>> {
    if radical == 0 || radical.is_multiple_of(2) {
        return Err(Error::EvenRadical(radical));
    }
    let mut ps = arith::prime_divisors(radical);
    if let Some(q) = q {
        if q % 2 == 0 || !arith::is_prime_u64(q) {
            return Err(Error::NotPrime(q));
        }
        ps.push(q);
    }
    ps.sort_unstable();
    ps.dedup();
    Ok(ps)
}

pub fn check_criterion(d: u64, odd_radical: u64, opts: &CriterionOptions) -> Result<Verdict> {
    let di = i64::try_from(d).map_err(|_| Error::FieldTooLarge(d))?;
    let field = ImagQuadField::new(di)?;
    let primes = radical_primes(odd_radical, opts.q)?;
    let radical: u64 = primes.iter().product();
    let sets = u_set(&field, radical)?;
    let mut v = Verdict {
        d,
        radical,
        outcome: Outcome::NotApplicable,
        method: Method::None,
        witness: None,
        t: None,
        best_prime: None,
        threshold: sets.u.first().map_or(0, PrimeAbove2::threshold),
        bounds: *opts,
        certificate: None,
        hypotheses: Vec::new(),
        orbits: Vec::new(),
    };
    if sets.u.is_empty() {
        v.hypotheses.push("2 inert (-d ≡ 5 mod 8): U is empty".into());
        return Ok(v);
    }
    if field.extra_units() {
        return Err(Error::ExtraUnits(d));
    }

    // Gather orbits; `exhaustive` says whether the list is provably complete.
    let mut sols = vec![irrelevant_orbit(&field)];
    let exhaustive;
    match (field.two_splitting(), primes.as_slice()) {
        (TwoSplitting::Split, []) => {
            v.hypotheses.push("2 split (-d ≡ 1 mod 8), S = {P1, P2}".into());
            let chain = obstruction_chain(d)?;
            if chain.conclusion == (Conclusion::NoRelevantSolutionsAbove { r: 4 }) {
                v.method = Method::ObstructionChain;
                sols.extend(param_split2(&field, 4)?.solutions);
                exhaustive = true;
            } else {
                v.method = Method::ParamSplit2;
                sols.extend(param_split2(&field, opts.r_max)?.solutions);
                exhaustive = false;
            }
            v.certificate = Some(chain);
        }
        (TwoSplitting::Ramified, []) => {
            v.hypotheses.push("2 ramified (-d ≡ 2,3 mod 4), S = {P}".into());
            let cert = certificate_ramified_parity(&field);
            exhaustive = cert.applies();
            v.method = Method::RamifiedParity;
            v.certificate = Some(cert);
        }
        (TwoSplitting::Ramified, &[q]) => {
            let cert = certificate_norel(d, q);
            sols.extend(rational_solutions(&field, q, 2 * opts.r_max + 2, opts.s_max.max(1) * 2));
            if cert.applies() {
                v.hypotheses.push("norel: -d ≡ 2,3 mod 8, q >= 29, q ≡ 5 mod 8, (-d|q) = -1".into());
                v.method = Method::Norel;
                exhaustive = true;
            } else {
                v.hypotheses.push(format!("2 ramified (-d ≡ 2,3 mod 4), S above {{2, {q}}}"));
                v.method = Method::ParamWithQ;
                sols.extend(param_with_q(&field, q, opts.r_max, opts.s_max, opts.v_max)?.solutions);
                exhaustive = false;
            }
            v.certificate = Some(cert);
        }
        _ => {
            v.hypotheses.push(format!("no parametrization for S above {{2, {primes:?}}}; bounded brute force"));
            v.method = Method::BruteForce;
            sols = brute_force(&field, &primes, &opts.brute)?;
            exhaustive = false;
        }
    }

    v.orbits = crate::sunit::dedup_by_orbit(sols)
        .iter()
        .map(|s| evaluate_orbit(s, &sets.u))
        .collect::<Result<_>>()?;

    if let Some(bad) = v.orbits.iter().find(|o| !o.passes) {
        v.outcome = Outcome::Fails;
        v.witness = Some(bad.solution.clone());
        v.t = Some(bad.best_t);
        v.best_prime = best_label(bad);
        return Ok(v);
    }
    let top = v.orbits.iter().max_by_key(|o| o.best_t).expect("irrelevant orbit present");
    v.t = Some(top.best_t);
    v.best_prime = best_label(top);
    v.outcome = match (exhaustive, v.method) {
        (true, _) => Outcome::HoldsUnconditional,
        (false, Method::BruteForce) => Outcome::Inconclusive,
        (false, _) => Outcome::HoldsBounded,
    };
    Ok(v)
}

fn best_label(o: &OrbitEval) -> Option<PrimeLabel> {
    o.per_prime.iter().min_by_key(|pt| (pt.t - pt.threshold, pt.prime as u8)).map(|pt| pt.prime)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ScanResult {
    Verdict(Box<Verdict>),
    Skipped { reason: String },
    Error { message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub d: u64,
    pub result: ScanResult,
}

/// One row per `d` in `lo..=hi`, ascending; non-squarefree `d` are skipped.
pub fn scan(lo: u64, hi: u64, odd_radical: u64, opts: &CriterionOptions) -> Vec<ScanRow> {
    (lo..=hi)
        .into_par_iter()
        .map(|d| {
            let result = if d == 0 || !arith::is_squarefree(d) {
                ScanResult::Skipped { reason: "not squarefree".into() }
            } else {
                match check_criterion(d, odd_radical, opts) {
                    Ok(v) => ScanResult::Verdict(Box::new(v)),
                    Err(e) => ScanResult::Error { message: e.to_string() },
                }
            };
            ScanRow { d, result }
        })
        .collect()
}
