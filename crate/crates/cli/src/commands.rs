use num_bigint::BigInt;
use serde::Serialize;

use aflt_core::criterion::{check_criterion, scan, CriterionOptions, Outcome, ScanRow, Verdict};
use aflt_core::density::{
    bound_approx2, check_h_lower, density_report, enumerate_cprime, mersenne_stats, BoundApprox2, CPrimeEntry,
    DensityReport, MersenneStat,
};
use aflt_core::factor::factor;
use aflt_core::frey::{frey_invariants, semistability_report, valuation_identity_u, vm_analysis, FreyData};
use aflt_core::frey::{SemistabilityReport, UReport, VmReport};
use aflt_core::quad_field::{primes_above, primes_above_2, PrimeLabel, TwoSplitting};
use aflt_core::sunit::{
    brute_force, certificate_ramified_parity, param_split2, param_with_q, rational_solutions, BruteBounds,
    SUnitSolution,
};
use aflt_core::{Element, Error, ImagQuadField};

use crate::{Bounds, Command, Mode, RadicalArgs, EXIT_FAILS, EXIT_INCONCLUSIVE, EXIT_OK};

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Report {
    Check(Box<Verdict>),
    Sunit(SunitReport),
    Frey(Box<FreyReport>),
    Density(DensityOut),
    Mersenne(Vec<MersenneRow>),
    Scan(Vec<ScanRow>),
}

#[derive(Debug, Serialize)]
pub struct ParamBlock {
    pub method: &'static str,
    pub complete_up_to: Option<u32>,
    pub solutions: Vec<SUnitSolution>,
}

#[derive(Debug, Serialize)]
pub struct BruteBlock {
    pub bounds: BruteBounds,
    pub solutions: Vec<SUnitSolution>,
}

#[derive(Debug, Serialize)]
pub struct Agreement {
    /// Every relevant brute-force orbit also appears in the parametrized list.
    pub brute_in_param: bool,
    pub missing_from_param: Vec<Element>,
}

#[derive(Debug, Serialize)]
pub struct SunitReport {
    pub d: u64,
    pub q: Option<u64>,
    pub two_splitting: TwoSplitting,
    pub param: Option<ParamBlock>,
    pub brute: Option<BruteBlock>,
    pub agreement: Option<Agreement>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct UEntry {
    pub prime: PrimeLabel,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<UReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct FreyReport {
    pub invariants: FreyData,
    pub u_identity: Vec<UEntry>,
    pub vm: Vec<VmReport>,
    pub semistability: Vec<SemistabilityReport>,
    /// Odd primes examined for the local checks.
    pub odd_primes: Vec<u64>,
    /// Some norm could not be fully factored, so `odd_primes` may be partial.
    pub odd_primes_incomplete: bool,
}

#[derive(Debug, Serialize)]
pub struct DensityOut {
    #[serde(flatten)]
    pub report: DensityReport,
    pub cprime: Vec<CPrimeEntry>,
}

#[derive(Debug, Serialize)]
pub struct MersenneRow {
    #[serde(flatten)]
    pub stat: MersenneStat,
    /// `omega >= 2^omega(m) - 2`; absent when not fully factored.
    pub h_lower_holds: Option<bool>,
    pub bound: BoundApprox2,
}

fn core(e: Error) -> String {
    e.to_string()
}

fn options(b: &Bounds, q: Option<u64>) -> CriterionOptions {
    CriterionOptions {
        r_max: b.r_max,
        s_max: b.s_max,
        v_max: b.v_max,
        brute: BruteBounds { coord_bound: b.coord_bound, ..BruteBounds::default() },
        q,
    }
}

/// Odd part of `Rad(ABC)` for integer coefficients given as decimal strings.
#[allow(non_snake_case)]
pub fn coefficient_radical(A: &str, B: &str, C: &str, budget: u64) -> Result<u64, String> {
    let mut primes = Vec::new();
    for (flag, s) in [("--A", A), ("--B", B), ("--C", C)] {
        let n: BigInt = s.trim().parse().map_err(|_| format!("{flag}: expected an integer, got {s:?}"))?;
        let n = u128::try_from(n.magnitude()).map_err(|_| format!("{flag}: |{s}| exceeds 2^128"))?;
        if n == 0 {
            return Err(format!("{flag}: coefficient must be nonzero"));
        }
        let f = factor(n, budget);
        if !f.complete() {
            return Err(format!("{flag}: could not factor {n} within the budget"));
        }
        primes.extend(f.factors.iter().map(|&(p, _)| p).filter(|&p| p != 2));
    }
    primes.sort_unstable();
    primes.dedup();
    primes
        .into_iter()
        .try_fold(1u64, |acc, p| u64::try_from(p).ok().and_then(|p| acc.checked_mul(p)))
        .ok_or_else(|| "odd radical of ABC exceeds 2^64".to_string())
}

fn radical_of(r: &RadicalArgs) -> Result<u64, String> {
    match (&r.A, &r.B, &r.C) {
        (None, None, None) => Ok(r.radical.unwrap_or(1)),
        (Some(a), Some(b), Some(c)) => coefficient_radical(a, b, c, aflt_core::density::DEFAULT_FACTOR_BUDGET),
        _ => Err("--A, --B and --C must be given together".into()),
    }
}

fn exit_code(o: Outcome) -> i32 {
    match o {
        Outcome::HoldsUnconditional | Outcome::HoldsBounded | Outcome::NotApplicable => EXIT_OK,
        Outcome::Fails => EXIT_FAILS,
        Outcome::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

pub(crate) fn dispatch(cmd: &Command) -> Result<(Report, i32), String> {
    match cmd {
        Command::Check { d, radical, bounds } => {
            let rad = radical_of(radical)?;
            let v = check_criterion(*d, rad, &options(bounds, radical.q)).map_err(core)?;
            let code = exit_code(v.outcome);
            Ok((Report::Check(Box::new(v)), code))
        }
        Command::Sunit { d, q, mode, bounds, den_pow2, den_powq } => {
            let b = BruteBounds { coord_bound: bounds.coord_bound, den_pow2_bound: *den_pow2, den_powq_bound: *den_powq };
            Ok((Report::Sunit(cmd_sunit(*d, *q, *mode, bounds, b)?), EXIT_OK))
        }
        Command::Frey { d, A, B, C, a, b, c, p, factor_budget } => {
            let r = cmd_frey(*d, [A, B, C, a, b, c], *p, *factor_budget)?;
            Ok((Report::Frey(Box::new(r)), EXIT_OK))
        }
        Command::Density { x, r_max, factor_budget } => {
            let report = density_report(*x, *r_max, *factor_budget).map_err(core)?;
            let cprime = enumerate_cprime(*x, *r_max, *factor_budget).map_err(core)?.members;
            Ok((Report::Density(DensityOut { report, cprime }), EXIT_OK))
        }
        Command::Mersenne { m_max, factor_budget } => {
            let rows = mersenne_stats(*m_max, *factor_budget)
                .map_err(core)?
                .into_iter()
                .map(|stat| MersenneRow { h_lower_holds: check_h_lower(&stat), bound: bound_approx2(stat.m, stat.omega), stat })
                .collect();
            Ok((Report::Mersenne(rows), EXIT_OK))
        }
        Command::Scan { from, to, radical, bounds } => {
            if from > to || *from == 0 {
                return Err(format!("--from/--to: need 1 <= from <= to, got {from}..{to}"));
            }
            if to - from > 10_000_000 {
                return Err("--from/--to: at most 10^7 values per scan".into());
            }
            let rad = radical_of(radical)?;
            Ok((Report::Scan(scan(*from, *to, rad, &options(bounds, radical.q))), EXIT_OK))
        }
    }
}

fn field_of(d: u64) -> Result<ImagQuadField, String> {
    let di = i64::try_from(d).map_err(|_| format!("--d: {d} is out of range"))?;
    ImagQuadField::new(di).map_err(|e| format!("--d: {e}"))
}

fn relevant_keys(sols: &[SUnitSolution]) -> Vec<(BigInt, BigInt, BigInt)> {
    sols.iter().filter(|s| s.relevant).map(|s| s.orbit_id.key()).collect()
}

fn cmd_sunit(d: u64, q: Option<u64>, mode: Mode, bounds: &Bounds, bb: BruteBounds) -> Result<SunitReport, String> {
    let field = field_of(d)?;
    let mut notes = Vec::new();
    let param = if mode == Mode::Brute {
        None
    } else {
        match (field.two_splitting(), q) {
            (TwoSplitting::Split, None) => {
                let s = param_split2(&field, bounds.r_max).map_err(core)?;
                Some(ParamBlock { method: "param_split2", complete_up_to: Some(s.complete_up_to), solutions: s.solutions })
            }
            (TwoSplitting::Ramified, None) => {
                let cert = certificate_ramified_parity(&field);
                notes.push(format!("ramified parity certificate: {:?}", cert.conclusion));
                let sols = if cert.applies() { rational_solutions(&field, 1, 0, 0) } else { Vec::new() };
                Some(ParamBlock { method: "ramified_parity", complete_up_to: None, solutions: sols })
            }
            (TwoSplitting::Ramified, Some(q)) => {
                let s = param_with_q(&field, q, bounds.r_max, bounds.s_max, bounds.v_max).map_err(core)?;
                let mut sols = rational_solutions(&field, q, 2 * bounds.r_max + 2, 2 * bounds.s_max);
                sols.extend(s.solutions);
                sols.sort_by_key(|s| s.orbit_id.key());
                sols.dedup_by_key(|s| s.orbit_id.key());
                Some(ParamBlock { method: "param_with_q", complete_up_to: Some(s.complete_up_to), solutions: sols })
            }
            _ => {
                notes.push("no parametrization for this shape; use --mode brute".into());
                None
            }
        }
    };
    let brute = if mode == Mode::Param {
        None
    } else {
        let qs: Vec<u64> = q.into_iter().collect();
        Some(BruteBlock { bounds: bb, solutions: brute_force(&field, &qs, &bb).map_err(core)? })
    };
    let agreement = match (&param, &brute) {
        (Some(p), Some(b)) => {
            let known = relevant_keys(&p.solutions);
            let missing: Vec<Element> = b
                .solutions
                .iter()
                .filter(|s| s.relevant && !known.contains(&s.orbit_id.key()))
                .map(|s| s.orbit_id.clone())
                .collect();
            Some(Agreement { brute_in_param: missing.is_empty(), missing_from_param: missing })
        }
        _ => None,
    };
    Ok(SunitReport { d, q, two_splitting: field.two_splitting(), param, brute, agreement, notes })
}

#[allow(non_snake_case)]
fn cmd_frey(d: u64, inputs: [&String; 6], p: u32, budget: u64) -> Result<FreyReport, String> {
    let field = field_of(d)?;
    let flags = ["--A", "--B", "--C", "--a", "--b", "--c"];
    let els = inputs
        .iter()
        .zip(flags)
        .map(|(s, flag)| Element::parse_in(&field, s).map_err(|e| format!("{flag}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let [A, B, C, a, b, c] = <[Element; 6]>::try_from(els).expect("six inputs");
    let fd = frey_invariants(&A, &B, &C, &a, &b, &c, p).map_err(core)?;

    let u_identity = primes_above_2(&field)
        .iter()
        .map(|pr| match valuation_identity_u(&fd, pr) {
            Ok(r) => UEntry { prime: pr.label, report: Some(r), skipped: None },
            Err(e) => UEntry { prime: pr.label, report: None, skipped: Some(e.to_string()) },
        })
        .collect();

    // Odd primes of Delta = 16 (ABC)^2 (abc)^(2p) come from the six norms.
    let mut odd = Vec::new();
    let mut incomplete = false;
    for z in [&A, &B, &C, &a, &b, &c] {
        let n = z.norm();
        let Ok(n) = u128::try_from(n.numer().magnitude()) else {
            incomplete = true;
            continue;
        };
        let f = factor(n, budget);
        incomplete |= !f.complete();
        odd.extend(f.factors.iter().filter(|&&(q, _)| q != 2 && q <= u64::MAX as u128).map(|&(q, _)| q as u64));
    }
    odd.sort_unstable();
    odd.dedup();

    let mut vm = Vec::new();
    let mut semistability = Vec::new();
    for &ell in &odd {
        for q in primes_above(&field, ell).map_err(core)? {
            if let Ok(r) = vm_analysis(&fd, &q) {
                vm.push(r);
            }
            if let Ok(r) = semistability_report(&fd, &q) {
                semistability.push(r);
            }
        }
    }
    Ok(FreyReport { invariants: fd, u_identity, vm, semistability, odd_primes: odd, odd_primes_incomplete: incomplete })
}
