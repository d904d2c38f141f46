//! Empirical density statistics: squarefree counts in progressions, the
//! exceptional set `C'` from `d v^2 = 2^(r+2) - 1`, and Mersenne factor counts.

mod cprime;
mod mersenne;
mod sieve;

use serde::Serialize;

use crate::error::Result;

pub use cprime::{enumerate_cprime, AlphaSplit, CPrimeEntry, CPrimeSet, Provenance, R_MAX_CAP};
pub use mersenne::{
    alpha_congruence, bound_approx2, check_h_lower, mersenne_stat, mersenne_stats, BoundApprox2, MersenneStat,
    M_MAX_CAP,
};
pub use sieve::{count_class, landau_estimate, sieve_squarefree, SieveTable};

pub const DEFAULT_FACTOR_BUDGET: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub x: u64,
    pub r_max: u32,
    /// Squarefree `d` in `2..=x`.
    pub n_sf: u64,
    /// Those with `d ≡ 3 (mod 8)` (2 inert).
    pub n_sf_3_mod_8: u64,
    pub cprime_count: u64,
    pub cprime_outside_3_mod_8: u64,
    pub cprime_incomplete_r: Vec<u32>,
    pub squarefree_fraction: f64,
    pub six_over_pi_squared: f64,
    pub fraction_3_mod_8: f64,
    pub delta_rel_c: f64,
    pub delta_rel_d: f64,
    pub reference_delta_rel_c: f64,
    pub reference_delta_rel_d: f64,
}

/// `C` is "no relevant solution with r <= r_max"; only split `d` can leave it.
pub fn density_report(x: u64, r_max: u32, factor_budget: u64) -> Result<DensityReport> {
    if x < 100 {
        return Err(crate::Error::OutOfRange(format!("x must be at least 100, got {x}")));
    }
    let table = sieve_squarefree(x);
    let n_sf = count_class(0, 1, &table) - 1;
    let n_sf_3_mod_8 = count_class(3, 8, &table);
    let cp = enumerate_cprime(x, r_max, factor_budget)?;
    let cprime_count = cp.members.len() as u64;
    let cprime_outside_3_mod_8 = cp.members.iter().filter(|e| e.d % 8 != 3).count() as u64;
    let nf = n_sf as f64;
    Ok(DensityReport {
        x,
        r_max,
        n_sf,
        n_sf_3_mod_8,
        cprime_count,
        cprime_outside_3_mod_8,
        cprime_incomplete_r: cp.incomplete_r,
        squarefree_fraction: (n_sf + 1) as f64 / x as f64,
        six_over_pi_squared: 6.0 / std::f64::consts::PI.powi(2),
        fraction_3_mod_8: n_sf_3_mod_8 as f64 / nf,
        delta_rel_c: 1.0 - cprime_count as f64 / nf,
        delta_rel_d: (n_sf - n_sf_3_mod_8 - cprime_outside_3_mod_8) as f64 / nf,
        reference_delta_rel_c: 1.0,
        reference_delta_rel_d: 5.0 / 6.0,
    })
}
