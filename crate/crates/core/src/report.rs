//! End-to-end analysis of two-group data and its machine-readable report.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::config::AnalysisConfig;
use crate::error::{Error, Result};
use crate::indices::{
    derive_verdicts, fbst_evalue, posterior_density, run_all_indices, surprise_function,
    EvidenceDirection, IndexFailure, IndexResults, ReferenceKind, RopeVerdict, Verdicts,
};
use crate::posterior::{DensityGrid, Posterior, ReferenceFunction};
use crate::ttest::{
    cohen_d, jzs_bayes_factor_with, model_grids, sufficient_stats, ModelGrids, SufficientStats,
    TwoSampleData,
};

/// Number of posterior draws in the optional sample-based cross-check.
pub const CHECK_DRAWS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DataDigest {
    pub n1: usize,
    pub n2: usize,
    pub mean1: f64,
    pub mean2: f64,
    pub sd1: f64,
    pub sd2: f64,
    pub t: f64,
    pub df: u64,
    pub n_eff: f64,
    pub cohen_d: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inputs {
    pub config: AnalysisConfig,
    pub data: DataDigest,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvidenceLabel {
    pub scale: &'static str,
    pub label: &'static str,
    pub direction: EvidenceDirection,
}

/// Flat view of every index value. `None` marks an index that failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndicesBlock {
    pub bf01_analytic: Option<f64>,
    pub bf10_analytic: Option<f64>,
    pub bf01_savage_dickey: Option<f64>,
    pub bf10_savage_dickey: Option<f64>,
    pub evidence_labels: Vec<EvidenceLabel>,
    pub rope_decision: Option<RopeVerdict>,
    pub rope_mass: Option<f64>,
    pub rope_hpd_share: Option<f64>,
    pub hpd_lower: Option<f64>,
    pub hpd_upper: Option<f64>,
    pub hpd_mass: f64,
    pub p_map: Option<f64>,
    pub map_location: f64,
    pub map_density: f64,
    pub map_at_boundary: bool,
    pub pd: Option<f64>,
    pub pd_positive: Option<bool>,
    pub pd_degenerate: Option<bool>,
    pub ev_against_flat: Option<f64>,
    pub ev_for_flat: Option<f64>,
    pub ev_against_prior: Option<f64>,
    pub ev_for_prior: Option<f64>,
    pub posterior_mean: f64,
    pub posterior_median: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleCheck {
    pub seed: u64,
    pub draws: usize,
    pub hpd_lower: Option<f64>,
    pub hpd_upper: Option<f64>,
    pub pd: f64,
    pub rope_mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub grid_lower: f64,
    pub grid_upper: f64,
    pub grid_size: usize,
    pub edge_mass_lower: f64,
    pub edge_mass_upper: f64,
    pub posterior_integral: f64,
    pub bf_quadrature_abs_error: Option<f64>,
    pub sample_check: Option<SampleCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LegendEntry {
    pub index: &'static str,
    pub question: &'static str,
    pub can_confirm_null: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

/// Everything one analysis produces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexReport {
    pub tool: ToolInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_at_unix: Option<u64>,
    pub inputs: Inputs,
    pub indices: IndicesBlock,
    pub verdicts: Verdicts,
    pub failures: Vec<IndexFailure>,
    pub diagnostics: Diagnostics,
    pub legend: Vec<LegendEntry>,
}

pub fn legend() -> Vec<LegendEntry> {
    vec![
        LegendEntry {
            index: "bayes_factor",
            question: "How much should the relative belief in H0 versus H1 change after seeing the data?",
            can_confirm_null: true,
        },
        LegendEntry {
            index: "rope",
            question: "Is the effect practically equivalent to the null value, given the bulk of the posterior?",
            can_confirm_null: true,
        },
        LegendEntry {
            index: "p_map",
            question: "How plausible is the null value relative to the most probable value?",
            can_confirm_null: false,
        },
        LegendEntry {
            index: "pd",
            question: "How certain is the direction of the effect?",
            can_confirm_null: false,
        },
        LegendEntry {
            index: "ev_against",
            question: "Does the null value sit in a low posterior density region?",
            can_confirm_null: false,
        },
        LegendEntry {
            index: "evidence_labels",
            question: "Verbal scales for BF01 <= 1 applied to max(BF01, BF10); bands a scale leaves blank take the neighbouring label.",
            can_confirm_null: true,
        },
    ]
}

pub fn digest(data: &TwoSampleData, stats: &SufficientStats) -> Result<DataDigest> {
    let [(n1, mean1, sd1), (n2, mean2, sd2)] = data.summary();
    Ok(DataDigest {
        n1,
        n2,
        mean1,
        mean2,
        sd1,
        sd2,
        t: stats.t,
        df: stats.df,
        n_eff: stats.n_eff,
        cohen_d: cohen_d(data)?,
    })
}

fn indices_block(results: &IndexResults, analytic: Option<(f64, f64)>) -> IndicesBlock {
    let sd = results.savage_dickey.as_ref();
    IndicesBlock {
        bf01_analytic: analytic.map(|a| a.0),
        bf10_analytic: analytic.map(|a| a.1),
        bf01_savage_dickey: sd.map(|s| s.bf01),
        bf10_savage_dickey: sd.map(|s| s.bf10),
        evidence_labels: sd
            .map(|s| {
                s.categories
                    .iter()
                    .map(|c| EvidenceLabel {
                        scale: c.scale.name(),
                        label: c.label,
                        direction: c.direction,
                    })
                    .collect()
            })
            .unwrap_or_default(),
        rope_decision: results.rope.map(|r| r.verdict),
        rope_mass: results.rope.map(|r| r.mass_in_rope),
        rope_hpd_share: results.rope.map(|r| r.hpd_share_in_rope),
        hpd_lower: results.rope.map(|r| r.hpd.lower),
        hpd_upper: results.rope.map(|r| r.hpd.upper),
        hpd_mass: results.hpd_mass,
        p_map: results.map_p_value.map(|m| m.p_map),
        map_location: results.summary.map.location,
        map_density: results.summary.map.density,
        map_at_boundary: results.summary.map.at_boundary,
        pd: results.pd.map(|p| p.value),
        pd_positive: results.pd.map(|p| p.positive),
        pd_degenerate: results.pd.map(|p| p.degenerate),
        ev_against_flat: results.fbst_flat.map(|f| f.ev_against),
        ev_for_flat: results.fbst_flat.map(|f| f.ev_for),
        ev_against_prior: results.fbst_prior.map(|f| f.ev_against),
        ev_for_prior: results.fbst_prior.map(|f| f.ev_for),
        posterior_mean: results.summary.mean,
        posterior_median: results.summary.median,
    }
}

/// Recomputes the verdicts from a report's raw index values and thresholds.
pub fn recompute_verdicts(report: &IndexReport) -> Verdicts {
    let ix = &report.indices;
    let mut v = derive_verdicts(
        None,
        ix.p_map,
        ix.pd,
        ix.ev_against_flat,
        ix.ev_against_prior,
        &report.inputs.config.thresholds,
    );
    v.rope = match (ix.hpd_lower, ix.hpd_upper) {
        (Some(lo), Some(hi)) => {
            let rope = report.inputs.config.rope;
            Some(crate::indices::rope_verdict(
                &crate::posterior::CredibleInterval {
                    lower: lo,
                    upper: hi,
                    mass: ix.hpd_mass,
                },
                &rope,
            ))
        }
        _ => None,
    };
    v
}

/// Data → sufficient statistics → posterior grid → every index.
pub fn analyze(data: &TwoSampleData, config: &AnalysisConfig) -> Result<IndexReport> {
    config.validate()?;
    let stats = sufficient_stats(data)?;
    let prior = config.prior()?;
    let hypotheses = config.hypotheses();
    let grids = model_grids(&stats, &prior, &hypotheses, config.grid_size)?;

    let results = run_all_indices(
        &grids.posterior,
        &grids.prior,
        &hypotheses,
        &config.rope,
        config.hpd_mass,
        &config.thresholds,
    );
    let mut failures = Vec::new();
    let analytic = match jzs_bayes_factor_with(&stats, &prior, &hypotheses) {
        Ok(bf) => Some(bf),
        Err(e) => {
            failures.push(IndexFailure {
                index: "bf_analytic",
                message: e.to_string(),
            });
            None
        }
    };
    failures.extend(results.failures.iter().cloned());

    let sample_check = match config.seed {
        Some(seed) => Some(sample_check(&grids.posterior, config, seed)?),
        None => None,
    };
    let (grid_lower, grid_upper) = grids.posterior.support();

    Ok(IndexReport {
        tool: ToolInfo {
            name: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
        },
        generated_at_unix: None,
        inputs: Inputs {
            config: config.clone(),
            data: digest(data, &stats)?,
        },
        indices: indices_block(&results, analytic.map(|a| (a.bf01, a.bf10))),
        verdicts: results.verdicts,
        failures,
        diagnostics: Diagnostics {
            grid_lower,
            grid_upper,
            grid_size: grids.posterior.len(),
            edge_mass_lower: grids.edges.lower,
            edge_mass_upper: grids.edges.upper,
            posterior_integral: grids.posterior.total_mass(),
            bf_quadrature_abs_error: analytic.map(|a| a.abs_error),
            sample_check,
        },
        legend: legend(),
    })
}

fn sample_check(
    posterior: &DensityGrid,
    config: &AnalysisConfig,
    seed: u64,
) -> Result<SampleCheck> {
    let draws = posterior.sample(CHECK_DRAWS, seed)?;
    let hpd = draws.hpd(config.hpd_mass).ok();
    Ok(SampleCheck {
        seed,
        draws: CHECK_DRAWS,
        hpd_lower: hpd.map(|h| h.lower),
        hpd_upper: hpd.map(|h| h.upper),
        pd: crate::indices::probability_of_direction(&draws).value,
        rope_mass: draws.mass_in(config.rope.lower(), config.rope.upper())?,
    })
}

pub fn to_json(report: &IndexReport) -> Result<String> {
    serde_json::to_string_pretty(report)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::Io(e.to_string()))
}

fn opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.digits$}"))
}

fn decision_text<T: Serialize>(v: &Option<T>) -> String {
    match v {
        Some(d) => serde_json::to_value(d)
            .ok()
            .and_then(|j| j.as_str().map(str::to_owned))
            .unwrap_or_default(),
        None => "n/a".into(),
    }
}

/// Human-readable summary.
pub fn to_text(report: &IndexReport) -> String {
    let c = &report.inputs.config;
    let d = &report.inputs.data;
    let ix = &report.indices;
    let v = &report.verdicts;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "Two-sample Bayesian t-test, Cauchy prior scale {:.4}",
        c.prior_scale
    );
    let _ = writeln!(
        s,
        "data: n = {}/{}, means {:.4}/{:.4}, sds {:.4}/{:.4}, t = {:.4} (df {}), Cohen's d = {:.4}",
        d.n1, d.n2, d.mean1, d.mean2, d.sd1, d.sd2, d.t, d.df, d.cohen_d
    );
    let _ = writeln!(
        s,
        "H0: delta = {}  ({:?} alternative)",
        c.null_value, c.alternative
    );
    let _ = writeln!(
        s,
        "posterior: mean {:.4}, median {:.4}, MAP {:.4}, {:.0}% HPD [{}, {}]",
        ix.posterior_mean,
        ix.posterior_median,
        ix.map_location,
        100.0 * ix.hpd_mass,
        opt(ix.hpd_lower, 4),
        opt(ix.hpd_upper, 4)
    );
    let _ = writeln!(s);
    let legend = legend();
    let q = |name: &str| {
        legend
            .iter()
            .find(|l| l.index == name)
            .map_or("", |l| l.question)
    };

    let _ = writeln!(s, "Bayes factor -- {}", q("bayes_factor"));
    let _ = writeln!(
        s,
        "  BF01 analytic {}  Savage-Dickey {}  (BF10 {})",
        opt(ix.bf01_analytic, 4),
        opt(ix.bf01_savage_dickey, 4),
        opt(ix.bf10_analytic, 4)
    );
    for l in &ix.evidence_labels {
        let _ = writeln!(
            s,
            "  {:<26} {} ({})",
            l.scale,
            l.label,
            decision_text(&Some(l.direction))
        );
    }
    let _ = writeln!(
        s,
        "ROPE [{}, {}] -- {}",
        c.rope.lower(),
        c.rope.upper(),
        q("rope")
    );
    let _ = writeln!(
        s,
        "  mass in ROPE {}  HPD share in ROPE {}  verdict: {}",
        opt(ix.rope_mass, 4),
        opt(ix.rope_hpd_share, 4),
        decision_text(&v.rope)
    );
    let _ = writeln!(s, "MAP-based p-value -- {}", q("p_map"));
    let _ = writeln!(
        s,
        "  p_MAP {}  (threshold {})  verdict: {}",
        opt(ix.p_map, 4),
        c.thresholds.p_map,
        decision_text(&v.p_map)
    );
    let _ = writeln!(s, "Probability of direction -- {}", q("pd"));
    let _ = writeln!(
        s,
        "  PD {}  (threshold {})  verdict: {}",
        opt(ix.pd, 4),
        c.thresholds.pd,
        decision_text(&v.pd)
    );
    let _ = writeln!(s, "FBST e-value -- {}", q("ev_against"));
    let _ = writeln!(
        s,
        "  flat reference {}  verdict: {}",
        opt(ix.ev_against_flat, 4),
        decision_text(&v.ev_flat)
    );
    let _ = writeln!(
        s,
        "  prior reference {}  verdict: {}  (threshold {})",
        opt(ix.ev_against_prior, 4),
        decision_text(&v.ev_prior),
        c.thresholds.ev
    );
    for f in &report.failures {
        let _ = writeln!(s, "failed: {} -- {}", f.index, f.message);
    }
    s
}

/// CSV bundles describing the prior, posterior and index geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotData {
    pub density_csv: String,
    pub annotations_csv: String,
}

pub fn plot_data(data: &TwoSampleData, config: &AnalysisConfig) -> Result<PlotData> {
    config.validate()?;
    let stats = sufficient_stats(data)?;
    let prior = config.prior()?;
    let hypotheses = config.hypotheses();
    let ModelGrids {
        posterior,
        prior: prior_grid,
        ..
    } = model_grids(&stats, &prior, &hypotheses, config.grid_size)?;
    let reference = ReferenceFunction::Prior(prior_grid.clone());
    let s_flat = surprise_function(&posterior, &ReferenceFunction::Flat)?;
    let s_prior = surprise_function(&posterior, &reference)?;

    let mut density = String::from(
        "# grid: effect size; prior: Cauchy prior density; posterior: posterior density; \
surprise_flat: posterior / 1; surprise_prior: posterior / prior\n",
    );
    density.push_str("grid,prior,posterior,surprise_flat,surprise_prior\n");
    for (i, (&x, &p)) in posterior
        .points()
        .iter()
        .zip(posterior.densities())
        .enumerate()
    {
        let r = prior_grid.density_at(x)?;
        let _ = writeln!(
            density,
            "{},{},{},{},{}",
            csv_number(x),
            csv_number(r),
            csv_number(p),
            csv_number(s_flat[i]),
            csv_number(s_prior[i])
        );
    }

    let null = config.null_value;
    let map = posterior.map_estimate();
    let mut rows: Vec<(&str, &str, f64)> = vec![
        ("null_value", "vertical", null),
        ("map", "vertical", map.location),
        ("rope_lower", "vertical", config.rope.lower()),
        ("rope_upper", "vertical", config.rope.upper()),
        ("pd_boundary", "vertical", 0.0),
    ];
    if let Ok(hpd) = posterior.hpd(config.hpd_mass) {
        rows.push(("hpd_lower", "vertical", hpd.lower));
        rows.push(("hpd_upper", "vertical", hpd.upper));
    }
    if let Ok(p0) = posterior_density(&posterior, &map, null) {
        rows.push(("posterior_at_null", "horizontal", p0));
    }
    if let Ok(r0) = prior_grid.density_at(null) {
        rows.push(("prior_at_null", "horizontal", r0));
    }
    if let Ok(f) = fbst_evalue(&posterior, &ReferenceFunction::Flat, null) {
        rows.push(("s_star_flat", "horizontal", f.s_star));
    }
    if let Ok(f) = fbst_evalue(&posterior, &reference, null) {
        debug_assert_eq!(f.reference, ReferenceKind::Prior);
        rows.push(("s_star_prior", "horizontal", f.s_star));
    }
    let mut annotations = String::from(
        "# name: annotation; orientation: vertical line at a grid value or horizontal line at a density/surprise level; value: position\n",
    );
    annotations.push_str("name,orientation,value\n");
    for (name, orientation, value) in rows {
        let _ = writeln!(annotations, "{name},{orientation},{}", csv_number(value));
    }
    Ok(PlotData {
        density_csv: density,
        annotations_csv: annotations,
    })
}

/// Shortest round-trip text, switching to exponent form for very small or
/// very large magnitudes.
pub fn csv_number(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

pub fn write_plot_data(plot: &PlotData, out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| Error::Io(format!("cannot create {}: {e}", out_dir.display())))?;
    for (name, body) in [
        ("density.csv", &plot.density_csv),
        ("annotations.csv", &plot.annotations_csv),
    ] {
        let path = out_dir.join(name);
        std::fs::write(&path, body)
            .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ttest::simulate_two_sample;

    fn sample_data() -> TwoSampleData {
        simulate_two_sample(2.51, 1.81, 1.72, 1.51, 50, 3).unwrap()
    }

    #[test]
    fn verdicts_are_recomputable() {
        let report = analyze(&sample_data(), &AnalysisConfig::default()).unwrap();
        assert!(report.failures.is_empty(), "{:?}", report.failures);
        assert_eq!(recompute_verdicts(&report), report.verdicts);
    }

    #[test]
    fn report_is_deterministic_and_timestamp_free() {
        let a = to_json(&analyze(&sample_data(), &AnalysisConfig::default()).unwrap()).unwrap();
        let b = to_json(&analyze(&sample_data(), &AnalysisConfig::default()).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("generated_at"));
    }

    #[test]
    fn text_report_mentions_each_index() {
        let text = to_text(&analyze(&sample_data(), &AnalysisConfig::default()).unwrap());
        for needle in ["Bayes factor", "ROPE", "p_MAP", "PD", "FBST"] {
            assert!(text.contains(needle), "missing {needle}");
        }
    }

    #[test]
    fn plot_columns() {
        let plot = plot_data(&sample_data(), &AnalysisConfig::default()).unwrap();
        let mut lines = plot.density_csv.lines();
        assert!(lines.next().unwrap().starts_with('#'));
        assert_eq!(
            lines.next().unwrap(),
            "grid,prior,posterior,surprise_flat,surprise_prior"
        );
        assert!(plot.annotations_csv.contains("hpd_lower,vertical,"));
        assert!(plot.annotations_csv.contains("s_star_prior,horizontal,"));
    }
}
