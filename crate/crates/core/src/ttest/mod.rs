//! The two-sample t-test with a Cauchy prior on the standardized effect size.
//!
//! Given the pooled two-sample t statistic, the likelihood of the effect size
//! δ is the noncentral-t density of `t` with `n₁+n₂−2` degrees of freedom and
//! noncentrality `δ·sqrt(n₁n₂/(n₁+n₂))`. Everything here reduces to
//! one-dimensional numerics on that likelihood.

mod noncentral;

use std::cell::RefCell;
use std::f64::consts::{FRAC_PI_2, PI};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

pub use noncentral::{central_t_pdf, noncentral_t_pdf};

use crate::error::{Error, Result};
use crate::numeric::{integrate, QuadOptions};
use crate::posterior::{linspace, DensityGrid};

/// Observations of two independent groups on the same scale.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSampleData {
    group1: Vec<f64>,
    group2: Vec<f64>,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
}

impl TwoSampleData {
    pub fn new(group1: Vec<f64>, group2: Vec<f64>) -> Result<Self> {
        for (name, g) in [("group1", &group1), ("group2", &group2)] {
            if g.len() < 2 {
                return Err(Error::InvalidArgument(format!(
                    "{name} needs at least 2 observations, got {}",
                    g.len()
                )));
            }
            if g.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "{name} contains a non-finite value"
                )));
            }
            if variance(g) == 0.0 {
                return Err(Error::DegenerateData(format!("{name} has zero variance")));
            }
        }
        Ok(TwoSampleData { group1, group2 })
    }

    pub fn group1(&self) -> &[f64] {
        &self.group1
    }

    pub fn group2(&self) -> &[f64] {
        &self.group2
    }

    /// Per-group `(n, mean, sd)`.
    pub fn summary(&self) -> [(usize, f64, f64); 2] {
        [&self.group1, &self.group2].map(|g| (g.len(), mean(g), variance(g).sqrt()))
    }
}

/// Standardized mean difference `(m₁ − m₂) / sqrt((s₁² + s₂²)/2)`.
pub fn cohen_d_from_moments(mean1: f64, sd1: f64, mean2: f64, sd2: f64) -> Result<f64> {
    let pooled = (0.5 * (sd1 * sd1 + sd2 * sd2)).sqrt();
    if !(pooled > 0.0) {
        return Err(Error::DegenerateData(
            "pooled standard deviation is zero".into(),
        ));
    }
    Ok((mean1 - mean2) / pooled)
}

/// Cohen's d of the observed samples, using n − 1 variances.
pub fn cohen_d(data: &TwoSampleData) -> Result<f64> {
    let [(_, m1, s1), (_, m2, s2)] = data.summary();
    cohen_d_from_moments(m1, s1, m2, s2)
}

/// Summary of two-group data for the t-test model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SufficientStats {
    pub t: f64,
    pub df: u64,
    pub n_eff: f64,
    pub n1: u64,
    pub n2: u64,
}

impl SufficientStats {
    /// Stats for a given t statistic and group sizes.
    pub fn from_t(t: f64, n1: u64, n2: u64) -> Result<Self> {
        if n1 < 2 || n2 < 2 {
            return Err(Error::InvalidArgument(format!(
                "each group needs at least 2 observations, got {n1} and {n2}"
            )));
        }
        if !t.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "t statistic must be finite, got {t}"
            )));
        }
        let (a, b) = (n1 as f64, n2 as f64);
        Ok(SufficientStats {
            t,
            df: n1 + n2 - 2,
            n_eff: a * b / (a + b),
            n1,
            n2,
        })
    }

    /// Sample effect size `t / sqrt(n_eff)`.
    pub fn effect(&self) -> f64 {
        self.t / self.n_eff.sqrt()
    }

    /// Approximate standard error of the effect size.
    pub fn effect_se(&self) -> f64 {
        let d = self.effect();
        (1.0 + d * d / (2.0 * self.df as f64)).sqrt() / self.n_eff.sqrt()
    }

    /// Likelihood of δ up to a constant: the density of the observed `t`.
    pub fn likelihood(&self, delta: f64) -> Result<f64> {
        noncentral_t_pdf(self.t, self.df as f64, delta * self.n_eff.sqrt())
    }
}

/// Pooled-variance two-sample t statistic and its companions.
pub fn sufficient_stats(data: &TwoSampleData) -> Result<SufficientStats> {
    let [(n1, m1, s1), (n2, m2, s2)] = data.summary();
    let (a, b) = (n1 as f64, n2 as f64);
    let pooled_var = ((a - 1.0) * s1 * s1 + (b - 1.0) * s2 * s2) / (a + b - 2.0);
    if !(pooled_var > 0.0) {
        return Err(Error::DegenerateData("pooled variance is zero".into()));
    }
    let t = (m1 - m2) / (pooled_var * (1.0 / a + 1.0 / b)).sqrt();
    SufficientStats::from_t(t, n1 as u64, n2 as u64)
}

/// Named Cauchy prior widths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PriorPreset {
    Medium,
    Wide,
    Ultrawide,
}

impl PriorPreset {
    pub fn scale(self) -> f64 {
        match self {
            PriorPreset::Medium => std::f64::consts::FRAC_1_SQRT_2,
            PriorPreset::Wide => 1.0,
            PriorPreset::Ultrawide => std::f64::consts::SQRT_2,
        }
    }
}

/// Cauchy prior `C(0, γ)` on δ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CauchyPrior {
    scale: f64,
}

impl CauchyPrior {
    pub fn new(scale: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "prior scale must be positive, got {scale}"
            )));
        }
        Ok(CauchyPrior { scale })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn density(&self, delta: f64) -> f64 {
        let z = delta / self.scale;
        1.0 / (PI * self.scale * (1.0 + z * z))
    }

    /// Prior mass on the side of `cut` selected by `alternative`.
    pub fn mass(&self, alternative: Alternative, cut: f64) -> f64 {
        let upper = 0.5 - (cut / self.scale).atan() / PI;
        match alternative {
            Alternative::TwoSided => 1.0,
            Alternative::Greater => upper,
            Alternative::Less => 1.0 - upper,
        }
    }

    /// The prior tabulated over `core` (typically the posterior's grid points)
    /// extended with geometrically widening tails out to 10⁷·γ, so the grid
    /// holds essentially all of the Cauchy mass and stays normalized without
    /// distorting density values inside the core. For one-sided alternatives
    /// `core` must start (Greater) or end (Less) at the cut, and the density
    /// is restricted and renormalized to that half-line.
    pub fn density_grid(
        &self,
        core: &[f64],
        alternative: Alternative,
        cut: f64,
    ) -> Result<DensityGrid> {
        if core.len() < 2 {
            return Err(Error::InvalidArgument(
                "prior core needs at least 2 points".into(),
            ));
        }
        let far = 1e7 * self.scale;
        let spacing = core[1] - core[0];
        let tail = |start: f64, step0: f64| {
            let mut pts = Vec::new();
            let mut x = start;
            let mut step = step0;
            while x < far {
                step *= 1.004;
                x += step;
                pts.push(x);
            }
            pts
        };
        let mut points = Vec::new();
        if alternative != Alternative::Greater {
            let mut left: Vec<f64> = tail(-core[0], spacing).into_iter().map(|x| -x).collect();
            left.reverse();
            points.extend(left);
        }
        points.extend_from_slice(core);
        if alternative != Alternative::Less {
            points.extend(tail(core[core.len() - 1], spacing));
        }
        let weight = 1.0 / self.mass(alternative, cut);
        let mut densities: Vec<f64> = points.iter().map(|&x| weight * self.density(x)).collect();

        // Rescale only the tail points so the trapezoid mass is exactly one and
        // the core keeps exact density values.
        let first = points.partition_point(|&x| x < core[0]);
        let last = first + core.len() - 1;
        let cell = |i: usize, d: &[f64]| 0.5 * (d[i] + d[i + 1]) * (points[i + 1] - points[i]);
        let core_mass: f64 = (first..last).map(|i| cell(i, &densities)).sum();
        let (mut fixed, mut free) = (0.0, 0.0);
        for i in (0..first).chain(last..points.len() - 1) {
            let h = 0.5 * (points[i + 1] - points[i]);
            for j in [i, i + 1] {
                if j >= first && j <= last {
                    fixed += h * densities[j];
                } else {
                    free += h * densities[j];
                }
            }
        }
        let k = (1.0 - core_mass - fixed) / free;
        if free > 0.0 && k > 0.0 && k.is_finite() {
            for (j, d) in densities.iter_mut().enumerate() {
                if j < first || j > last {
                    *d *= k;
                }
            }
            DensityGrid::new(points, densities)
        } else {
            DensityGrid::new(points, densities)?.normalize()
        }
    }
}

/// Direction of the alternative hypothesis relative to the null value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alternative {
    #[default]
    TwoSided,
    Greater,
    Less,
}

/// Point null `δ = null_value` against a two- or one-sided alternative.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Hypotheses {
    pub null_value: f64,
    pub alternative: Alternative,
}

/// Result of the analytic JZS Bayes factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BayesFactor {
    pub bf01: f64,
    pub bf10: f64,
    /// Marginal density of `t` under H₁.
    pub marginal_h1: f64,
    /// Absolute error estimate of the marginal quadrature.
    pub abs_error: f64,
}

/// Bayes factor for δ = δ₀ against the alternative, `BF₀₁ = p(t | δ₀) / ∫
/// p(t | δ)·prior(δ) dδ`. The denominator is integrated on `δ = γ·tan(u)`,
/// which turns the Cauchy prior into a uniform weight on a finite range.
pub fn jzs_bayes_factor_with(
    stats: &SufficientStats,
    prior: &CauchyPrior,
    hypotheses: &Hypotheses,
) -> Result<BayesFactor> {
    let gamma = prior.scale();
    let null = hypotheses.null_value;
    let u_null = (null / gamma).atan();
    let (lo, hi) = match hypotheses.alternative {
        Alternative::TwoSided => (-FRAC_PI_2, FRAC_PI_2),
        Alternative::Greater => (u_null, FRAC_PI_2),
        Alternative::Less => (-FRAC_PI_2, u_null),
    };
    let weight = 1.0 / (PI * prior.mass(hypotheses.alternative, null));

    let d = stats.effect();
    let se = stats.effect_se();
    let breaks: Vec<f64> = [-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|k| ((d + k * se) / gamma).atan())
        .collect();

    // The quadrature closure cannot return errors, so keep the first one.
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let integrand = |u: f64| match stats.likelihood(gamma * u.tan()) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let q = integrate(
        integrand,
        lo,
        hi,
        &breaks,
        QuadOptions {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_panels: 10_000,
        },
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let marginal_h1 = weight * q.value;
    let numerator = stats.likelihood(null)?;
    if !(marginal_h1 > 0.0) {
        return Err(Error::NumericConvergence(
            "marginal likelihood under H1 underflowed to zero".into(),
        ));
    }
    let bf01 = numerator / marginal_h1;
    if !(bf01 > 0.0) || !bf01.is_finite() {
        return Err(Error::NumericConvergence(format!(
            "Bayes factor is not a positive finite number ({bf01})"
        )));
    }
    Ok(BayesFactor {
        bf01,
        bf10: 1.0 / bf01,
        marginal_h1,
        abs_error: weight * q.abs_error,
    })
}

/// Two-sided JZS Bayes factor for δ = 0.
pub fn jzs_bayes_factor(stats: &SufficientStats, prior: &CauchyPrior) -> Result<BayesFactor> {
    jzs_bayes_factor_with(stats, prior, &Hypotheses::default())
}

/// Share of the grid span at each edge inspected for truncated mass.
const EDGE_FRACTION: f64 = 0.01;
/// Edge mass at or above this is treated as truncation.
pub const TRUNCATION_LIMIT: f64 = 1e-3;

/// Posterior mass found near each grid edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeMass {
    pub lower: f64,
    pub upper: f64,
}

/// Mass in the outermost 1% of the span at each edge.
pub fn edge_mass(grid: &DensityGrid) -> EdgeMass {
    let (lo, hi) = grid.support();
    let band = EDGE_FRACTION * (hi - lo);
    EdgeMass {
        lower: grid.mass_between(lo, lo + band).unwrap_or(0.0),
        upper: grid.mass_between(hi - band, hi).unwrap_or(0.0),
    }
}

fn posterior_on(
    stats: &SufficientStats,
    prior: &CauchyPrior,
    points: Vec<f64>,
    check_lower: bool,
    check_upper: bool,
) -> Result<DensityGrid> {
    let densities = points
        .iter()
        .map(|&x| Ok(stats.likelihood(x)? * prior.density(x)))
        .collect::<Result<Vec<_>>>()?;
    let grid = DensityGrid::new(points, densities)?.normalize()?;
    let edges = edge_mass(&grid);
    if (check_lower && edges.lower >= TRUNCATION_LIMIT)
        || (check_upper && edges.upper >= TRUNCATION_LIMIT)
    {
        return Err(Error::TruncatedSupport {
            lower_tail: edges.lower,
            upper_tail: edges.upper,
        });
    }
    Ok(grid)
}

/// Normalized posterior of δ on `grid_size` equally spaced points over
/// `[grid_lo, grid_hi]`.
pub fn posterior_density_grid(
    stats: &SufficientStats,
    prior: &CauchyPrior,
    grid_lo: f64,
    grid_hi: f64,
    grid_size: usize,
) -> Result<DensityGrid> {
    if !(grid_lo < grid_hi) {
        return Err(Error::InvalidArgument(format!(
            "grid bounds must satisfy lo < hi, got [{grid_lo}, {grid_hi}]"
        )));
    }
    posterior_on(
        stats,
        prior,
        linspace(grid_lo, grid_hi, grid_size),
        true,
        true,
    )
}

/// Default grid range: `[−3, 3]` widened to cover the null value and eight
/// standard errors around the sample effect.
pub fn default_grid_bounds(stats: &SufficientStats, null_value: f64) -> (f64, f64) {
    let d = stats.effect();
    let se = stats.effect_se();
    let lo = (-3.0f64).min(d - 8.0 * se).min(null_value - 1.0);
    let hi = 3.0f64.max(d + 8.0 * se).max(null_value + 1.0);
    (lo, hi)
}

/// Equally spaced points covering `[lo, hi]` to within half a step, shifted so
/// that `anchor` is one of them exactly.
fn anchored_linspace(lo: f64, hi: f64, size: usize, anchor: f64) -> Vec<f64> {
    let step = (hi - lo) / (size - 1) as f64;
    let k = ((anchor - lo) / step).round();
    let start = anchor - k * step;
    let mut points: Vec<f64> = (0..size).map(|i| start + step * i as f64).collect();
    if (0.0..size as f64).contains(&k) {
        points[k as usize] = anchor;
    }
    points
}

/// Posterior and prior grids for one analysis.
#[derive(Debug, Clone)]
pub struct ModelGrids {
    pub posterior: DensityGrid,
    pub prior: DensityGrid,
    pub edges: EdgeMass,
}

/// Builds the posterior on the default range (restricted to the half-line
/// for one-sided alternatives) together with a matching prior grid that shares
/// the posterior's points.
pub fn model_grids(
    stats: &SufficientStats,
    prior: &CauchyPrior,
    hypotheses: &Hypotheses,
    grid_size: usize,
) -> Result<ModelGrids> {
    let null = hypotheses.null_value;
    let (lo, hi) = default_grid_bounds(stats, null);
    let (points, check_lo, check_hi) = match hypotheses.alternative {
        Alternative::TwoSided => (anchored_linspace(lo, hi, grid_size, null), true, true),
        Alternative::Greater => (linspace(null, hi, grid_size), false, true),
        Alternative::Less => (linspace(lo, null, grid_size), true, false),
    };
    let prior_grid = prior.density_grid(&points, hypotheses.alternative, null)?;
    let posterior = posterior_on(stats, prior, points, check_lo, check_hi)?;
    let edges = edge_mass(&posterior);
    Ok(ModelGrids {
        posterior,
        prior: prior_grid,
        edges,
    })
}

/// Seeded normal draws for both groups, `n` per group.
pub fn simulate_two_sample(
    mean1: f64,
    sd1: f64,
    mean2: f64,
    sd2: f64,
    n: usize,
    seed: u64,
) -> Result<TwoSampleData> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 observations per group, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |m: f64, s: f64| -> Result<Vec<f64>> {
        if !(s > 0.0) || !s.is_finite() || !m.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "normal parameters must be finite with positive sd, got N({m}, {s})"
            )));
        }
        let dist = Normal::new(m, s).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Ok((0..n).map(|_| dist.sample(&mut rng)).collect())
    };
    let g1 = draw(mean1, sd1)?;
    let g2 = draw(mean2, sd2)?;
    TwoSampleData::new(g1, g2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn cohen_d_of_population_parameters() {
        let d = cohen_d_from_moments(2.71, 1.81, 1.71, 1.51).unwrap();
        assert_abs_diff_eq!(d, 0.5999, epsilon = 5e-4);
    }

    #[test]
    fn cohen_d_identical_and_shifted_groups() {
        let g = vec![1.0, 2.0, 4.0, 7.0];
        let same = TwoSampleData::new(g.clone(), g.clone()).unwrap();
        assert_eq!(cohen_d(&same).unwrap(), 0.0);
        let shifted = TwoSampleData::new(g.iter().map(|x| x + 3.0).collect(), g.clone()).unwrap();
        let s = variance(&g).sqrt();
        assert_relative_eq!(cohen_d(&shifted).unwrap(), 3.0 / s, max_relative = 1e-12);
    }

    #[test]
    fn data_validation() {
        assert!(matches!(
            TwoSampleData::new(vec![1.0], vec![1.0, 2.0]),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            TwoSampleData::new(vec![1.0, 1.0, 1.0], vec![1.0, 2.0]),
            Err(Error::DegenerateData(_))
        ));
    }

    #[test]
    fn stats_arithmetic() {
        let s = SufficientStats::from_t(1.0, 50, 50).unwrap();
        assert_eq!(s.df, 98);
        assert_eq!(s.n_eff, 25.0);
        let g = vec![1.0, 2.0, 3.0, 4.0];
        let equal = TwoSampleData::new(g.clone(), g.iter().rev().copied().collect()).unwrap();
        assert_eq!(sufficient_stats(&equal).unwrap().t, 0.0);
    }

    #[test]
    fn cauchy_density_at_zero() {
        let p = CauchyPrior::new(1.0).unwrap();
        assert_abs_diff_eq!(p.density(0.0), 1.0 / PI, epsilon = 1e-15);
        assert!(CauchyPrior::new(0.0).is_err());
        assert!(CauchyPrior::new(-1.0).is_err());
    }

    #[test]
    fn prior_grid_keeps_core_density() {
        let p = CauchyPrior::new(1.0).unwrap();
        let core = linspace(-3.0, 3.0, 4097);
        let g = p.density_grid(&core, Alternative::TwoSided, 0.0).unwrap();
        assert_abs_diff_eq!(g.total_mass(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(g.density_at(0.0).unwrap(), 1.0 / PI, max_relative = 1e-5);

        let half = p
            .density_grid(&linspace(0.0, 3.0, 2049), Alternative::Greater, 0.0)
            .unwrap();
        assert_relative_eq!(half.density_at(0.0).unwrap(), 2.0 / PI, max_relative = 1e-5);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn presets() {
        assert_eq!(PriorPreset::Medium.scale(), 0.7071067811865476);
        assert_eq!(PriorPreset::Wide.scale(), 1.0);
        assert_eq!(PriorPreset::Ultrawide.scale(), 1.4142135623730951);
    }

    #[test]
    fn zero_effect_favors_null() {
        let s = SufficientStats::from_t(0.0, 50, 50).unwrap();
        let bf = jzs_bayes_factor(&s, &CauchyPrior::new(1.0).unwrap()).unwrap();
        assert!(bf.bf01 > 1.0);
    }

    #[test]
    fn symmetric_posterior_at_zero_t() {
        let s = SufficientStats::from_t(0.0, 50, 50).unwrap();
        let g =
            posterior_density_grid(&s, &CauchyPrior::new(1.0).unwrap(), -3.0, 3.0, 1025).unwrap();
        let d = g.densities();
        for i in 0..d.len() / 2 {
            assert_abs_diff_eq!(d[i], d[d.len() - 1 - i], epsilon = 1e-8);
        }
    }

    #[test]
    fn narrow_grid_is_truncated() {
        let s = SufficientStats::from_t(2.2, 50, 50).unwrap();
        let err = posterior_density_grid(&s, &CauchyPrior::new(1.0).unwrap(), -0.5, 0.5, 512)
            .unwrap_err();
        assert!(matches!(err, Error::TruncatedSupport { .. }));
    }

    #[test]
    fn one_sided_grids_live_on_half_line() {
        let s = SufficientStats::from_t(2.2, 50, 50).unwrap();
        let prior = CauchyPrior::new(1.0).unwrap();
        let h = Hypotheses {
            null_value: 0.0,
            alternative: Alternative::Greater,
        };
        let grids = model_grids(&s, &prior, &h, 2048).unwrap();
        assert_eq!(grids.posterior.support().0, 0.0);
        let sd = grids.posterior.density_at(0.0).unwrap() / grids.prior.density_at(0.0).unwrap();
        let bf = jzs_bayes_factor_with(&s, &prior, &h).unwrap();
        assert_relative_eq!(sd, bf.bf01, max_relative = 1e-3);
    }

    #[test]
    fn simulation_validation_and_determinism() {
        let a = simulate_two_sample(2.51, 1.81, 1.72, 1.51, 50, 9).unwrap();
        let b = simulate_two_sample(2.51, 1.81, 1.72, 1.51, 50, 9).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.group1().len(), 50);
        assert_eq!(a.group2().len(), 50);
        assert!(simulate_two_sample(0.0, 0.0, 0.0, 1.0, 50, 1).is_err());
        assert!(simulate_two_sample(0.0, 1.0, 0.0, 1.0, 1, 1).is_err());
    }
}
