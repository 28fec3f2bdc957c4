//! Posterior indices for a point null and their decision rules.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::posterior::{CredibleInterval, DensityGrid, MapEstimate, Posterior, ReferenceFunction};
use crate::ttest::Hypotheses;

/// Region of practical equivalence around the null value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
#[serde(try_from = "RopeBounds")]
pub struct Rope {
    lower: f64,
    upper: f64,
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct RopeBounds {
    lower: f64,
    upper: f64,
}

impl TryFrom<RopeBounds> for Rope {
    type Error = Error;
    fn try_from(b: RopeBounds) -> Result<Self> {
        Rope::new(b.lower, b.upper)
    }
}

impl Rope {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower < upper) || !lower.is_finite() || !upper.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "ROPE bounds must be finite with lower < upper, got [{lower}, {upper}]"
            )));
        }
        Ok(Rope { lower, upper })
    }

    /// `[−0.1, 0.1]`, half of a small standardized effect.
    pub fn effect_size_default() -> Self {
        Rope {
            lower: -0.1,
            upper: 0.1,
        }
    }

    /// `|β| <= 0.05` for regression coefficients.
    pub fn regression_default() -> Self {
        Rope {
            lower: -0.05,
            upper: 0.05,
        }
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lower && x <= self.upper
    }
}

impl Default for Rope {
    fn default() -> Self {
        Rope::effect_size_default()
    }
}

/// Outcome of the HPD-versus-ROPE rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RopeVerdict {
    RejectNull,
    AcceptNull,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RopeDecision {
    pub verdict: RopeVerdict,
    pub hpd: CredibleInterval,
    /// Posterior mass inside the ROPE.
    pub mass_in_rope: f64,
    /// Share of the HPD interval's mass that lies inside the ROPE.
    pub hpd_share_in_rope: f64,
}

/// Applies the containment rule to an HPD interval and a ROPE.
pub fn rope_verdict(hpd: &CredibleInterval, rope: &Rope) -> RopeVerdict {
    if hpd.upper < rope.lower || hpd.lower > rope.upper {
        RopeVerdict::RejectNull
    } else if hpd.lower >= rope.lower && hpd.upper <= rope.upper {
        RopeVerdict::AcceptNull
    } else {
        RopeVerdict::Undecided
    }
}

/// HPD at `hpd_mass`, its relation to the ROPE, and the ROPE masses.
pub fn rope_decision<P: Posterior + ?Sized>(
    posterior: &P,
    rope: &Rope,
    hpd_mass: f64,
) -> Result<RopeDecision> {
    let hpd = posterior.hpd(hpd_mass)?;
    let mass_in_rope = posterior.mass_in(rope.lower, rope.upper)?;
    let in_hpd = posterior.mass_in(hpd.lower, hpd.upper)?;
    let overlap_lo = hpd.lower.max(rope.lower);
    let overlap_hi = hpd.upper.min(rope.upper);
    let overlap = if overlap_lo <= overlap_hi {
        posterior.mass_in(overlap_lo, overlap_hi)?
    } else {
        0.0
    };
    let hpd_share_in_rope = if in_hpd > 0.0 {
        (overlap / in_hpd).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok(RopeDecision {
        verdict: rope_verdict(&hpd, rope),
        hpd,
        mass_in_rope,
        hpd_share_in_rope,
    })
}

/// Published verbal scales for Bayes factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EvidenceScale {
    Jeffreys1961,
    Goodman1999,
    HeldOtt2016,
    LeeWagenmakers2013,
}

/// BF₀₁ cutpoints separating the bands, strongest band last.
pub const BF_CUTPOINTS: [f64; 5] = [1.0 / 3.0, 1.0 / 10.0, 1.0 / 30.0, 1.0 / 100.0, 1.0 / 300.0];

impl EvidenceScale {
    pub const ALL: [EvidenceScale; 4] = [
        EvidenceScale::Jeffreys1961,
        EvidenceScale::Goodman1999,
        EvidenceScale::HeldOtt2016,
        EvidenceScale::LeeWagenmakers2013,
    ];

    /// One label per band, from `1 to 1/3` down to `< 1/300`. Bands a scale
    /// leaves blank are filled from the neighbouring label.
    pub fn labels(self) -> [&'static str; 6] {
        match self {
            EvidenceScale::Jeffreys1961 => [
                "Bare mention",
                "Substantial",
                "Strong",
                "Very strong",
                "Decisive",
                "Decisive",
            ],
            EvidenceScale::Goodman1999 => [
                "Weak",
                "Weak to moderate",
                "Moderate to strong",
                "Strong",
                "Very strong",
                "Very strong",
            ],
            EvidenceScale::HeldOtt2016 => [
                "Weak",
                "Moderate",
                "Substantial",
                "Strong",
                "Very strong",
                "Decisive",
            ],
            EvidenceScale::LeeWagenmakers2013 => [
                "Anecdotal",
                "Moderate",
                "Strong",
                "Very strong",
                "Extreme",
                "Extreme",
            ],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EvidenceScale::Jeffreys1961 => "Jeffreys (1961)",
            EvidenceScale::Goodman1999 => "Goodman (1999)",
            EvidenceScale::HeldOtt2016 => "Held & Ott (2016)",
            EvidenceScale::LeeWagenmakers2013 => "Lee & Wagenmakers (2013)",
        }
    }
}

/// Which hypothesis a Bayes factor favours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvidenceDirection {
    AgainstNull,
    ForNull,
    Indecisive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BfCategory {
    pub scale: EvidenceScale,
    /// 0 for the weakest band, 5 for `< 1/300`.
    pub band: usize,
    pub label: &'static str,
    pub direction: EvidenceDirection,
}

/// Places a Bayes factor in a band of `scale`. Factors above one are
/// categorized through their reciprocal with the direction flipped; values
/// exactly on a cutpoint take the weaker band.
pub fn categorize_bf(bf01: f64, scale: EvidenceScale) -> Result<BfCategory> {
    if !(bf01 > 0.0) || !bf01.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "Bayes factor must be positive and finite, got {bf01}"
        )));
    }
    let direction = if bf01 < 1.0 {
        EvidenceDirection::AgainstNull
    } else if bf01 > 1.0 {
        EvidenceDirection::ForNull
    } else {
        EvidenceDirection::Indecisive
    };
    let strength = if bf01 < 1.0 { 1.0 / bf01 } else { bf01 };
    let band = BF_CUTPOINTS
        .iter()
        .filter(|&&c| strength > (1.0 / c) * (1.0 + 1e-12))
        .count();
    Ok(BfCategory {
        scale,
        band,
        label: scale.labels()[band],
        direction,
    })
}

/// Density of a grid posterior at `x`: linear interpolation, except inside
/// the mode's three-point stencil where the quadratic used for the MAP is
/// evaluated instead.
pub fn posterior_density(posterior: &DensityGrid, map: &MapEstimate, x: f64) -> Result<f64> {
    let linear = posterior.density_at(x)?;
    Ok(map.local_density(x).unwrap_or(linear))
}

/// `BF₀₁ = posterior(δ₀) / prior(δ₀)` with both densities interpolated on
/// their grids.
pub fn savage_dickey_bf(
    posterior: &DensityGrid,
    prior: &DensityGrid,
    null_value: f64,
) -> Result<f64> {
    let map = posterior.map_estimate();
    let numerator = posterior_density(posterior, &map, null_value)?;
    let denominator = prior.density_at(null_value)?;
    if !(denominator > 0.0) {
        return Err(Error::DivisionByZero { at: null_value });
    }
    Ok(numerator / denominator)
}

/// Posterior density at the null divided by the density at the mode.
pub fn map_p_value(posterior: &DensityGrid, null_value: f64) -> Result<f64> {
    let map = posterior.map_estimate();
    let at_null = posterior_density(posterior, &map, null_value)?;
    if !(map.density > 0.0) {
        return Err(Error::DegenerateDensity);
    }
    Ok((at_null / map.density).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbabilityOfDirection {
    pub value: f64,
    /// Sign of the posterior median; `true` for positive.
    pub positive: bool,
    /// The median is exactly zero and the positive side was taken.
    pub degenerate: bool,
}

/// Posterior mass sharing the sign of the median.
pub fn probability_of_direction<P: Posterior + ?Sized>(posterior: &P) -> ProbabilityOfDirection {
    let median = posterior.median();
    if median > 0.0 {
        ProbabilityOfDirection {
            value: posterior.mass_above(0.0, false),
            positive: true,
            degenerate: false,
        }
    } else if median < 0.0 {
        ProbabilityOfDirection {
            value: posterior.mass_below(0.0, false),
            positive: false,
            degenerate: false,
        }
    } else {
        ProbabilityOfDirection {
            value: posterior.mass_above(0.0, true),
            positive: true,
            degenerate: true,
        }
    }
}

/// `s(θ) = posterior(θ) / r(θ)` at each posterior grid point.
pub fn surprise_function(
    posterior: &DensityGrid,
    reference: &ReferenceFunction,
) -> Result<Vec<f64>> {
    match reference {
        ReferenceFunction::Flat => Ok(posterior.densities().to_vec()),
        ReferenceFunction::Prior(prior) => posterior
            .points()
            .iter()
            .zip(posterior.densities())
            .map(|(&x, &p)| {
                let r = prior.density_at(x)?;
                if r > 0.0 {
                    Ok(p / r)
                } else if p == 0.0 {
                    Ok(0.0)
                } else {
                    Err(Error::DivisionByZero { at: x })
                }
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    Flat,
    Prior,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FbstResult {
    /// Posterior mass of the tangential set `{θ : s(θ) > s*}`.
    pub ev_against: f64,
    pub ev_for: f64,
    /// Surprise at the null value.
    pub s_star: f64,
    pub reference: ReferenceKind,
}

/// e-value of the point null `θ = null_value`. The tangential set is bounded
/// where the linearly interpolated surprise crosses `s*`; the posterior is
/// integrated over it as a piecewise-linear density.
pub fn fbst_evalue(
    posterior: &DensityGrid,
    reference: &ReferenceFunction,
    null_value: f64,
) -> Result<FbstResult> {
    let map = posterior.map_estimate();
    let at_null = posterior_density(posterior, &map, null_value)?;
    let r_null = reference.value_at(null_value)?;
    if !(r_null > 0.0) {
        return Err(Error::DivisionByZero { at: null_value });
    }
    let s_star = at_null / r_null;
    let surprise = surprise_function(posterior, reference)?;

    let x = posterior.points();
    let p = posterior.densities();
    let mut mass = 0.0;
    for i in 0..x.len() - 1 {
        let (s0, s1) = (surprise[i], surprise[i + 1]);
        let (p0, p1) = (p[i], p[i + 1]);
        let w = x[i + 1] - x[i];
        match (s0 > s_star, s1 > s_star) {
            (true, true) => mass += 0.5 * w * (p0 + p1),
            (false, false) => {}
            (false, true) => {
                let f = (s_star - s0) / (s1 - s0);
                let pc = p0 + f * (p1 - p0);
                mass += 0.5 * (1.0 - f) * w * (pc + p1);
            }
            (true, false) => {
                let f = (s0 - s_star) / (s0 - s1);
                let pc = p0 + f * (p1 - p0);
                mass += 0.5 * f * w * (p0 + pc);
            }
        }
    }
    let ev_against = (mass / posterior.total_mass()).clamp(0.0, 1.0);
    let kind = match reference {
        ReferenceFunction::Flat => ReferenceKind::Flat,
        ReferenceFunction::Prior(_) => ReferenceKind::Prior,
    };
    Ok(FbstResult {
        ev_against,
        ev_for: 1.0 - ev_against,
        s_star,
        reference: kind,
    })
}

/// Decision thresholds for the indices that have one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Thresholds {
    /// Reject when PD is at least this.
    pub pd: f64,
    /// Reject when the MAP p-value is below this.
    pub p_map: f64,
    /// Reject when the e-value against the null is at least this.
    pub ev: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            pd: 0.95,
            p_map: 0.05,
            ev: 0.95,
        }
    }
}

/// Threshold decision on a point null. The e-value, PD and MAP p-value can
/// only reject.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    RejectNull,
    NotRejected,
}

impl Decision {
    fn reject_if(cond: bool) -> Self {
        if cond {
            Decision::RejectNull
        } else {
            Decision::NotRejected
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SavageDickey {
    pub bf01: f64,
    pub bf10: f64,
    pub categories: Vec<BfCategory>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapPValue {
    pub p_map: f64,
    pub map: MapEstimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PosteriorSummary {
    pub mean: f64,
    pub median: f64,
    pub map: MapEstimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdicts {
    pub rope: Option<RopeVerdict>,
    pub p_map: Option<Decision>,
    pub pd: Option<Decision>,
    pub ev_flat: Option<Decision>,
    pub ev_prior: Option<Decision>,
}

/// Decisions implied by raw index values and thresholds.
pub fn derive_verdicts(
    rope: Option<&RopeDecision>,
    p_map: Option<f64>,
    pd: Option<f64>,
    ev_flat: Option<f64>,
    ev_prior: Option<f64>,
    thresholds: &Thresholds,
) -> Verdicts {
    Verdicts {
        rope: rope.map(|r| r.verdict),
        p_map: p_map.map(|p| Decision::reject_if(p < thresholds.p_map)),
        pd: pd.map(|p| Decision::reject_if(p >= thresholds.pd)),
        ev_flat: ev_flat.map(|e| Decision::reject_if(e >= thresholds.ev)),
        ev_prior: ev_prior.map(|e| Decision::reject_if(e >= thresholds.ev)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexFailure {
    pub index: &'static str,
    pub message: String,
}

/// Every index computed from one posterior/prior pair. Failed indices are
/// `None` with the reason in `failures`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexResults {
    pub null_value: f64,
    pub hpd_mass: f64,
    pub rope_bounds: Rope,
    pub thresholds: Thresholds,
    pub savage_dickey: Option<SavageDickey>,
    pub rope: Option<RopeDecision>,
    pub map_p_value: Option<MapPValue>,
    pub pd: Option<ProbabilityOfDirection>,
    pub fbst_flat: Option<FbstResult>,
    pub fbst_prior: Option<FbstResult>,
    pub summary: PosteriorSummary,
    pub verdicts: Verdicts,
    pub failures: Vec<IndexFailure>,
}

struct Collector<'a>(&'a mut Vec<IndexFailure>);

impl Collector<'_> {
    fn take<T>(&mut self, index: &'static str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.0.push(IndexFailure {
                    index,
                    message: e.to_string(),
                });
                None
            }
        }
    }
}

/// Runs every index, recording per-index failures instead of aborting.
pub fn run_all_indices(
    posterior: &DensityGrid,
    prior: &DensityGrid,
    hypotheses: &Hypotheses,
    rope: &Rope,
    hpd_mass: f64,
    thresholds: &Thresholds,
) -> IndexResults {
    let null = hypotheses.null_value;
    let mut failures = Vec::new();
    let mut keep = Collector(&mut failures);

    let savage_dickey = keep.take(
        "savage_dickey",
        savage_dickey_bf(posterior, prior, null).and_then(|bf01| {
            let categories = EvidenceScale::ALL
                .iter()
                .map(|&s| categorize_bf(bf01, s))
                .collect::<Result<Vec<_>>>()?;
            Ok(SavageDickey {
                bf01,
                bf10: 1.0 / bf01,
                categories,
            })
        }),
    );
    let rope_result = keep.take("rope", rope_decision(posterior, rope, hpd_mass));
    let map = posterior.map_estimate();
    let map_p = keep.take(
        "map_p_value",
        map_p_value(posterior, null).map(|p_map| MapPValue { p_map, map }),
    );
    let pd = keep.take("pd", Ok(probability_of_direction(posterior)));
    let fbst_flat = keep.take(
        "fbst_flat",
        fbst_evalue(posterior, &ReferenceFunction::Flat, null),
    );
    let fbst_prior = keep.take(
        "fbst_prior",
        fbst_evalue(posterior, &ReferenceFunction::Prior(prior.clone()), null),
    );

    let verdicts = derive_verdicts(
        rope_result.as_ref(),
        map_p.map(|m| m.p_map),
        pd.map(|p| p.value),
        fbst_flat.map(|f| f.ev_against),
        fbst_prior.map(|f| f.ev_against),
        thresholds,
    );
    IndexResults {
        null_value: null,
        hpd_mass,
        rope_bounds: *rope,
        thresholds: *thresholds,
        savage_dickey,
        rope: rope_result,
        map_p_value: map_p,
        pd,
        fbst_flat,
        fbst_prior,
        summary: PosteriorSummary {
            mean: posterior.mean(),
            median: posterior.median(),
            map,
        },
        verdicts,
        failures,
    }
}
