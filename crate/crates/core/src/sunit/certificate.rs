use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::quad_field::{ImagQuadField, TwoSplitting};

/// Residual exponents `r` checked directly by [`obstruction_chain`].
pub const RESIDUAL_SCAN_R_MAX: u32 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertificateKind {
    NorelHypotheses,
    ObstructionChain,
    RamifiedParity,
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateKind::NorelHypotheses => "NorelHypotheses",
            CertificateKind::ObstructionChain => "ObstructionChain",
            CertificateKind::RamifiedParity => "RamifiedParity",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepOutcome {
    Holds,
    Fails,
    /// Not decided by the argument; see the certificate's `gaps`.
    Open,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertStep {
    pub modulus: Option<u64>,
    pub assertion: String,
    pub outcome: StepOutcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Conclusion {
    NoRelevantSolutions,
    /// No relevant solution of the main family with `r > r`.
    NoRelevantSolutionsAbove { r: u32 },
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub d: u64,
    pub q: Option<u64>,
    pub steps: Vec<CertStep>,
    pub conclusion: Conclusion,
    pub gaps: Vec<String>,
}

impl Certificate {
    fn new(kind: CertificateKind, d: u64, q: Option<u64>) -> Self {
        Self { kind, d, q, steps: Vec::new(), conclusion: Conclusion::NotApplicable, gaps: Vec::new() }
    }

    fn step(&mut self, modulus: Option<u64>, assertion: impl Into<String>, holds: bool) -> bool {
        let outcome = if holds { StepOutcome::Holds } else { StepOutcome::Fails };
        self.steps.push(CertStep { modulus, assertion: assertion.into(), outcome });
        holds
    }

    pub fn applies(&self) -> bool {
        self.conclusion != Conclusion::NotApplicable
    }

    pub fn first_failure(&self) -> Option<&CertStep> {
        self.steps.iter().find(|s| s.outcome == StepOutcome::Fails)
    }
}

/// Hypotheses under which `S` above `{2, q}` with 2 ramified has no relevant
/// solutions: `d >= 7` squarefree, `-d ≡ 2,3 (mod 8)`, `q >= 29` prime,
/// `q ≡ 5 (mod 8)`, `(-d|q) = -1`.
pub fn certificate_norel(d: u64, q: u64) -> Certificate {
    let mut c = Certificate::new(CertificateKind::NorelHypotheses, d, Some(q));
    let mut ok = c.step(None, format!("d = {d} >= 7 and squarefree"), d >= 7 && arith::is_squarefree(d));
    ok &= c.step(Some(8), format!("-d ≡ {} (mod 8), need 2 or 3", (8 - d % 8) % 8), matches!((8 - d % 8) % 8, 2 | 3));
    ok &= c.step(None, format!("q = {q} >= 29 and prime"), q >= 29 && arith::is_prime_u64(q));
    ok &= c.step(Some(8), format!("q ≡ {} (mod 8), need 5", q % 8), q % 8 == 5);
    if q % 2 == 1 {
        let sym = arith::jacobi(-(d as i128), q);
        ok &= c.step(Some(q), format!("(-d|q) = {sym}, need -1"), sym == -1);
        if q % 4 == 1 {
            let sym_pos = arith::jacobi(d as i128, q);
            c.step(Some(4), format!("q ≡ 1 (mod 4), so (d|q) = (-d|q) = {sym_pos}"), sym_pos == sym);
        }
    } else {
        ok &= c.step(Some(q), "(-d|q) undefined for even q", false);
    }
    if ok {
        c.conclusion = Conclusion::NoRelevantSolutions;
    }
    c
}

fn multiplicative_order(a: u64, m: u64) -> u64 {
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = x * a % m;
        k += 1;
    }
    k
}

/// Replays the mod 6 / mod 9 / mod 14 argument against `1 + d v^2 = 2^(r+2)`
/// with `r > 4`, then scans the residual branch directly up to
/// [`RESIDUAL_SCAN_R_MAX`].
pub fn obstruction_chain(d: u64) -> Result<Certificate> {
    obstruction_chain_with(d, RESIDUAL_SCAN_R_MAX)
}

pub fn obstruction_chain_with(d: u64, residual_r_max: u32) -> Result<Certificate> {
    if d % 8 != 7 {
        return Err(Error::NotSplit(d));
    }
    let mut c = Certificate::new(CertificateKind::ObstructionChain, d, None);
    c.step(Some(8), "d ≡ 7 (mod 8)".to_string(), true);

    // mod 3: 2^(r+2) is 1 or 2 mod 3, while 1 + d v^2 ≡ 0 when 3 ∤ v and d ≡ 2.
    let forced = (1..3u64).all(|v| (0..2u32).all(|e| (1 + d * v * v) % 3 != (1u64 << e) % 3));
    if !c.step(Some(6), format!("d ≡ {} (mod 6), need 5: then 3 | v", d % 6), d % 6 == 5 && forced) {
        return Ok(c);
    }

    let ord9 = multiplicative_order(2, 9);
    c.step(Some(9), format!("3 | v gives 2^(r+2) ≡ 1 (mod 9); ord_9(2) = {ord9}, so 6 | r+2"), ord9 == 6);

    let ord7 = multiplicative_order(2, 7);
    if !c.step(Some(14), format!("d ≡ {} (mod 14), need ≢ 7", d % 14), d % 14 != 7) {
        return Ok(c);
    }
    c.step(
        Some(14),
        format!("6 | r+2 and ord_7(2) = {ord7} give d v^2 ≡ 7 (mod 14); 7 ∤ d, so 7 | v"),
        (6 % ord7 == 0) && !d.is_multiple_of(7),
    );
    let ord49 = multiplicative_order(2, 49);
    c.steps.push(CertStep {
        modulus: Some(49),
        assertion: format!("7 | v gives 2^(r+2) ≡ 1 (mod 49); ord_49(2) = {ord49}, so 42 | r+2; not excluded by congruences"),
        outcome: StepOutcome::Open,
    });
    c.gaps.push(format!(
        "branch 7 | v with 42 | r+2 is not closed by the congruences; checked directly for r <= {residual_r_max}"
    ));

    let db = BigInt::from(d);
    let mut counterexample = None;
    let mut e = 42u32;
    while e - 2 <= residual_r_max {
        if arith::mod_pow(2, e as u64, d) == 1 {
            let m: BigInt = arith::pow2(e) - 1;
            if let Some(v) = arith::exact_sqrt_int(&(m / &db)) {
                counterexample = Some((e - 2, v));
                break;
            }
        }
        e += 42;
    }
    let clean = counterexample.is_none();
    let text = match &counterexample {
        None => format!("direct scan: no r ≤ {residual_r_max} with 42 | r+2 and 2^(r+2) - 1 = d v^2"),
        Some((r, v)) => format!("direct scan: r = {r}, v = {v} solves 2^(r+2) - 1 = d v^2"),
    };
    c.step(None, text, clean);
    if clean {
        c.conclusion = Conclusion::NoRelevantSolutionsAbove { r: 4 };
    }
    Ok(c)
}

/// With 2 ramified and `S = {P}`, every solution is rational: for an integral
/// representative the trace `2^a - 2^b + 1` must be even, so `min(a, b) = 0`
/// and one of `lambda, mu` is a unit `±1`.
pub fn certificate_ramified_parity(field: &ImagQuadField) -> Certificate {
    let d = field.d();
    let mut c = Certificate::new(CertificateKind::RamifiedParity, d, None);
    let mut ok = c.step(
        Some(4),
        format!("-d ≡ {} (mod 4), need 2 or 3: 2 ramifies and O_K = Z[sqrt(-d)]", (4 - d % 4) % 4),
        field.two_splitting() == TwoSplitting::Ramified,
    );
    ok &= c.step(None, "unit group is {±1}", !field.extra_units());
    if ok {
        c.step(None, "an integral orbit representative has N(λ) = 2^a, N(μ) = 2^b", true);
        c.step(Some(2), "λ + λ̄ = 2^a - 2^b + 1 is even, so min(a, b) = 0", true);
        c.step(None, "a norm-1 element is ±1, so λ ∈ {2, 0} up to S3: only rational solutions", true);
        c.conclusion = Conclusion::NoRelevantSolutions;
    }
    c
}
