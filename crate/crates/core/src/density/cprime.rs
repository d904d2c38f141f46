use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{factor, Factorization};
use crate::sunit::EXCEPTIONAL_PAIRS;

/// Largest supported `r`: `2^(r+2) - 1` must stay below `2^127`.
pub const R_MAX_CAP: u32 = 125;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// `d v^2 = 2^(r+2) - 1`.
    Main { r: u32, v: u64 },
    /// `(2^r1 - 2^r2 + 1)^2 - 2^(r1+2) = -d v^2` with `r1 > r2`.
    Exceptional { r1: u32, r2: u32, v: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaSplit {
    pub s: u32,
    /// `2^(s+1) + 1` and its squarefree kernel.
    pub alpha1: u64,
    pub d1: u64,
    /// `2^(s+1) - 1` and its squarefree kernel.
    pub alpha2: u64,
    pub d2: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CPrimeEntry {
    pub d: u64,
    pub provenance: Vec<Provenance>,
    pub alpha_splits: Vec<AlphaSplit>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CPrimeSet {
    pub x: u64,
    pub r_max: u32,
    pub members: Vec<CPrimeEntry>,
    /// `r` whose `2^(r+2) - 1` was not fully factored within budget.
    pub incomplete_r: Vec<u32>,
}

impl CPrimeSet {
    pub fn ds(&self) -> Vec<u64> {
        self.members.iter().map(|e| e.d).collect()
    }

    pub fn contains(&self, d: u64) -> bool {
        self.members.binary_search_by_key(&d, |e| e.d).is_ok()
    }
}

fn kernel_and_root(f: &Factorization) -> (u128, u128) {
    let k = f.squarefree_kernel();
    let w2 = f.n / k;
    let w = f
        .factors
        .iter()
        .map(|&(p, e)| p.pow(e / 2))
        .product::<u128>();
    debug_assert_eq!(w * w, w2);
    (k, w)
}

/// Squarefree `d <= x` with `d v^2 = 2^(r+2) - 1` for some `1 <= r <= r_max`,
/// plus the exceptional pairs. Even `r = 2s` are cross-checked against the
/// split `(2^(s+1) + 1)(2^(s+1) - 1)`.
pub fn enumerate_cprime(x: u64, r_max: u32, factor_budget: u64) -> Result<CPrimeSet> {
    if r_max > R_MAX_CAP {
        return Err(Error::OutOfRange(format!("r_max must be at most {R_MAX_CAP}, got {r_max}")));
    }
    let per_r: Vec<(u32, Factorization)> = (1..=r_max)
        .into_par_iter()
        .map(|r| (r, factor((1u128 << (r + 2)) - 1, factor_budget)))
        .collect();

    let mut by_d: BTreeMap<u64, CPrimeEntry> = BTreeMap::new();
    let mut incomplete_r = Vec::new();
    for (r, f) in &per_r {
        if !f.complete() {
            incomplete_r.push(*r);
            continue;
        }
        let (k, w) = kernel_and_root(f);
        if k > x as u128 {
            continue;
        }
        let d = k as u64;
        let entry = by_d.entry(d).or_insert_with(|| CPrimeEntry { d, provenance: vec![], alpha_splits: vec![] });
        entry.provenance.push(Provenance::Main { r: *r, v: w as u64 });
        if r % 2 == 0 {
            let s = r / 2;
            let a1 = (1u128 << (s + 1)) + 1;
            let a2 = (1u128 << (s + 1)) - 1;
            let f1 = factor(a1, factor_budget);
            let f2 = factor(a2, factor_budget);
            if f1.complete() && f2.complete() {
                let (d1, d2) = (f1.squarefree_kernel(), f2.squarefree_kernel());
                if d1 * d2 != k {
                    return Err(Error::IdentityFailure(format!("alpha split at s = {s}: {d1} * {d2} != {k}")));
                }
                entry.alpha_splits.push(AlphaSplit {
                    s,
                    alpha1: a1 as u64,
                    d1: d1 as u64,
                    alpha2: a2 as u64,
                    d2: d2 as u64,
                });
            }
        }
    }
    for &(r1, r2) in &EXCEPTIONAL_PAIRS {
        let t = (1i128 << r1) - (1i128 << r2) + 1;
        let rhs = (1i128 << (r1 + 2)) - t * t;
        if rhs <= 0 {
            continue;
        }
        let f = factor(rhs as u128, factor_budget);
        let (k, w) = kernel_and_root(&f);
        if let Some(entry) = by_d.get_mut(&(k as u64)) {
            entry.provenance.push(Provenance::Exceptional { r1, r2, v: w as u64 });
        }
    }
    Ok(CPrimeSet { x, r_max, members: by_d.into_values().collect(), incomplete_r })
}
