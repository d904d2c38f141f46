//! The S-unit equation `lambda + mu = 1`: orbit algebra, closed-form
//! parametrizations, non-existence certificates, and a brute-force oracle.

mod brute;
mod certificate;
mod orbit;
mod ramified;
mod split;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad_field::{is_s_unit, Element};

pub use brute::{brute_force, BruteBounds};
pub use certificate::{
    certificate_norel, certificate_ramified_parity, obstruction_chain, obstruction_chain_with,
    CertStep, Certificate, CertificateKind, Conclusion, StepOutcome, RESIDUAL_SCAN_R_MAX,
};
pub use orbit::{is_irrelevant, orbit_key, s3_images, s3_orbit, irrelevant_orbit_key};
pub use ramified::{param_with_q, rational_solutions};
pub use split::{exceptional_pairs, param_split2, EXCEPTIONAL_PAIRS};

/// Exponents of the closed-form parametrizations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Params {
    pub r1: u32,
    pub r2: u32,
    pub s1: u32,
    pub s2: u32,
    #[serde(with = "crate::serde_bigint")]
    pub v: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SUnitSolution {
    pub lambda: Element,
    pub mu: Element,
    pub relevant: bool,
    pub params: Option<Params>,
    /// Least member of the S3-orbit of `lambda` in `(x, y, den)` order.
    pub orbit_id: Element,
}

impl SUnitSolution {
    /// Builds the solution `(lambda, 1 - lambda)`.
    pub fn from_lambda(lambda: Element, params: Option<Params>) -> Result<Self> {
        let orbit_id = orbit_key(&lambda)?;
        let mu = lambda.one_minus();
        let relevant = orbit_id.key() != irrelevant_orbit_key();
        Ok(Self { lambda, mu, relevant, params, orbit_id })
    }

    /// Re-checks `lambda + mu = 1` and the S-unit predicate for both terms.
    pub fn validate(&self, rational_primes: &[u64]) -> Result<()> {
        if !(&self.lambda + &self.mu).is_one() {
            return Err(Error::NotASolution(format!("{} + {} != 1", self.lambda, self.mu)));
        }
        for z in [&self.lambda, &self.mu] {
            if !is_s_unit(z, rational_primes) {
                return Err(Error::NotASolution(format!("{z} is not an S-unit")));
            }
        }
        Ok(())
    }
}

/// Keeps one solution per orbit (the first seen) and sorts by orbit key.
pub(crate) fn dedup_by_orbit(sols: impl IntoIterator<Item = SUnitSolution>) -> Vec<SUnitSolution> {
    let mut by_key: BTreeMap<(BigInt, BigInt, BigInt), SUnitSolution> = BTreeMap::new();
    for s in sols {
        by_key.entry(s.orbit_id.key()).or_insert(s);
    }
    by_key.into_values().collect()
}

/// Output of a parametrized search, with the range it is complete for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamSearch {
    pub solutions: Vec<SUnitSolution>,
    /// Every solution with parameter `r <= complete_up_to` is listed.
    pub complete_up_to: u32,
}

impl ParamSearch {
    pub fn orbit_keys(&self) -> Vec<(BigInt, BigInt, BigInt)> {
        self.solutions.iter().map(|s| s.orbit_id.key()).collect()
    }
}
