//! Replication of the running example's headline numbers.
//!
//! The raw data behind the example is not available, so the t statistic is
//! calibrated to reproduce the reported Bayes factor and every other index is
//! computed from the resulting posterior.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indices::{run_all_indices, Rope, Thresholds};
use crate::numeric::brent_root;
use crate::ttest::{
    jzs_bayes_factor, model_grids, Alternative, CauchyPrior, Hypotheses, SufficientStats,
};

pub const TARGET_BF01: f64 = 0.6870;
pub const GROUP_SIZE: u64 = 50;
pub const PRIOR_SCALE: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ToleranceProfile {
    #[default]
    Strict,
    Loose,
}

impl ToleranceProfile {
    pub fn factor(self) -> f64 {
        match self {
            ToleranceProfile::Strict => 1.0,
            ToleranceProfile::Loose => 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedValue {
    pub name: String,
    pub expected: f64,
    pub tolerance: f64,
}

fn ev(name: &str, expected: f64, tolerance: f64) -> ExpectedValue {
    ExpectedValue {
        name: name.into(),
        expected,
        tolerance,
    }
}

/// Reported values of the running example with their tolerances.
pub fn reference_expectations() -> Vec<ExpectedValue> {
    vec![
        ev("posterior_density_at_null", 0.2171, 0.010),
        ev("bf01_savage_dickey", 0.6821, 0.03),
        ev("map_location", 0.41, 0.02),
        ev("p_map", 0.1076, 0.010),
        ev("pd", 0.9827, 0.005),
        ev("ev_against_flat", 0.9659, 0.005),
        ev("ev_against_prior", 0.9743, 0.005),
        ev("hpd_lower", 0.03, 0.02),
        ev("hpd_upper", 0.80, 0.02),
        ev("rope_mass", 0.0316, 0.005),
    ]
}

pub fn read_expectations(path: &Path) -> Result<Vec<ExpectedValue>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// Finds t such that the analytic BF01 at n = 50 per group and γ = 1 equals
/// `target`.
pub fn calibrate_t(target: f64) -> Result<f64> {
    let prior = CauchyPrior::new(PRIOR_SCALE)?;
    let bf_at_zero = jzs_bayes_factor(
        &SufficientStats::from_t(0.0, GROUP_SIZE, GROUP_SIZE)?,
        &prior,
    )?
    .bf01;
    if !(target > 0.0 && target < bf_at_zero) {
        return Err(Error::InvalidArgument(format!(
            "target BF01 must lie in (0, {bf_at_zero}), got {target}"
        )));
    }
    brent_root(
        |t| {
            let stats = SufficientStats::from_t(t, GROUP_SIZE, GROUP_SIZE)?;
            Ok(jzs_bayes_factor(&stats, &prior)?.bf01.ln() - target.ln())
        },
        0.0,
        10.0,
        1e-13,
        200,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub name: String,
    pub expected: f64,
    pub observed: Option<f64>,
    pub delta: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Replication {
    pub profile: ToleranceProfile,
    pub t_star: f64,
    pub bf01_analytic: f64,
    /// Whole-posterior mass inside the ROPE; `rope_mass` compares the share of
    /// the HPD interval's mass that falls in the ROPE.
    pub rope_mass_full_posterior: Option<f64>,
    pub comparisons: Vec<Comparison>,
    pub all_pass: bool,
}

/// Computes every index from the calibrated posterior and compares it with
/// `expected`. Unknown names in `expected` count as failures.
pub fn replicate(profile: ToleranceProfile, expected: &[ExpectedValue]) -> Result<Replication> {
    let t_star = calibrate_t(TARGET_BF01)?;
    let stats = SufficientStats::from_t(t_star, GROUP_SIZE, GROUP_SIZE)?;
    let prior = CauchyPrior::new(PRIOR_SCALE)?;
    let hypotheses = Hypotheses {
        null_value: 0.0,
        alternative: Alternative::TwoSided,
    };
    let bf = jzs_bayes_factor(&stats, &prior)?;
    let grids = model_grids(
        &stats,
        &prior,
        &hypotheses,
        crate::config::DEFAULT_GRID_SIZE,
    )?;
    let r = run_all_indices(
        &grids.posterior,
        &grids.prior,
        &hypotheses,
        &Rope::effect_size_default(),
        0.95,
        &Thresholds::default(),
    );
    if let Some(f) = r.failures.first() {
        return Err(Error::NumericConvergence(format!(
            "{}: {}",
            f.index, f.message
        )));
    }
    let density_at_null =
        crate::indices::posterior_density(&grids.posterior, &r.summary.map, 0.0).ok();

    let observed = |name: &str| -> Option<f64> {
        match name {
            "posterior_density_at_null" => density_at_null,
            "bf01_savage_dickey" => r.savage_dickey.as_ref().map(|s| s.bf01),
            "map_location" => Some(r.summary.map.location),
            "p_map" => r.map_p_value.map(|m| m.p_map),
            "pd" => r.pd.map(|p| p.value),
            "ev_against_flat" => r.fbst_flat.map(|f| f.ev_against),
            "ev_against_prior" => r.fbst_prior.map(|f| f.ev_against),
            "hpd_lower" => r.rope.map(|d| d.hpd.lower),
            "hpd_upper" => r.rope.map(|d| d.hpd.upper),
            "rope_mass" => r.rope.map(|d| d.hpd_share_in_rope),
            _ => None,
        }
    };

    let comparisons: Vec<Comparison> = expected
        .iter()
        .map(|e| {
            let obs = observed(&e.name);
            let delta = obs.map(|o| o - e.expected);
            let tolerance = e.tolerance * profile.factor();
            Comparison {
                name: e.name.clone(),
                expected: e.expected,
                observed: obs,
                delta,
                tolerance,
                pass: delta.is_some_and(|d| d.abs() <= tolerance),
            }
        })
        .collect();
    let all_pass = comparisons.iter().all(|c| c.pass);
    Ok(Replication {
        profile,
        t_star,
        bf01_analytic: bf.bf01,
        rope_mass_full_posterior: r.rope.map(|d| d.mass_in_rope),
        comparisons,
        all_pass,
    })
}

pub fn to_text(rep: &Replication) -> String {
    let mut s = format!(
        "calibrated t* = {:.10} (BF01 = {:.6}), profile {:?}\n",
        rep.t_star, rep.bf01_analytic, rep.profile
    );
    for c in &rep.comparisons {
        let obs = c.observed.map_or("n/a".to_string(), |o| format!("{o:.5}"));
        let delta = c.delta.map_or("n/a".to_string(), |d| format!("{d:+.5}"));
        s.push_str(&format!(
            "{} {:<28} expected {:<8} observed {:<10} delta {:<10} tol {}\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.expected,
            obs,
            delta,
            c.tolerance
        ));
    }
    if let Some(m) = rep.rope_mass_full_posterior {
        s.push_str(&format!("(whole-posterior mass in ROPE: {m:.5})\n"));
    }
    s.push_str(if rep.all_pass {
        "all comparisons pass\n"
    } else {
        "some comparisons failed\n"
    });
    s
}
