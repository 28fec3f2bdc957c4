//! Scalar posterior representations and the geometry every index relies on.
//!
//! A posterior is either a [`SampleSet`] of draws or a [`DensityGrid`]. Both
//! implement [`Posterior`], so interval, mass and direction queries accept
//! either form.

mod grid;
mod kde;
mod samples;

use serde::Serialize;

pub use grid::{linspace, DensityGrid, MapEstimate, MIN_GRID_POINTS, NORMALIZATION_TOL};
pub use kde::{kde_density, silverman_bandwidth};
pub use samples::{SampleSet, MIN_SAMPLES};

use crate::error::{Error, Result};

/// A highest-density interval and the mass it was built for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CredibleInterval {
    pub lower: f64,
    pub upper: f64,
    pub mass: f64,
}

impl CredibleInterval {
    pub fn new(lower: f64, upper: f64, mass: f64) -> Result<Self> {
        if !(lower <= upper) {
            return Err(Error::InvalidArgument(format!(
                "interval bounds must satisfy lower <= upper, got [{lower}, {upper}]"
            )));
        }
        grid::check_mass(mass)?;
        Ok(CredibleInterval { lower, upper, mass })
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lower && x <= self.upper
    }
}

/// Reference function `r(θ)` dividing the posterior in the surprise function.
#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceFunction {
    /// `r(θ) = 1`.
    Flat,
    /// `r(θ)` is a prior density tabulated on its own grid.
    Prior(DensityGrid),
}

impl ReferenceFunction {
    pub fn kind(&self) -> &'static str {
        match self {
            ReferenceFunction::Flat => "flat",
            ReferenceFunction::Prior(_) => "prior",
        }
    }

    pub fn value_at(&self, x: f64) -> Result<f64> {
        match self {
            ReferenceFunction::Flat => Ok(1.0),
            ReferenceFunction::Prior(g) => g.density_at(x),
        }
    }
}

/// Queries shared by sample-based and grid-based posteriors.
pub trait Posterior {
    /// Highest-density interval holding `mass`.
    fn hpd(&self, mass: f64) -> Result<CredibleInterval>;

    /// Posterior probability of the closed interval `[lower, upper]`.
    fn mass_in(&self, lower: f64, upper: f64) -> Result<f64>;

    fn median(&self) -> f64;

    /// Probability of `θ > x`, or `θ >= x` when `inclusive`.
    fn mass_above(&self, x: f64, inclusive: bool) -> f64;

    /// Probability of `θ < x`, or `θ <= x` when `inclusive`.
    fn mass_below(&self, x: f64, inclusive: bool) -> f64;
}

impl Posterior for SampleSet {
    fn hpd(&self, mass: f64) -> Result<CredibleInterval> {
        SampleSet::hpd(self, mass)
    }

    fn mass_in(&self, lower: f64, upper: f64) -> Result<f64> {
        self.fraction_between(lower, upper)
    }

    fn median(&self) -> f64 {
        SampleSet::median(self)
    }

    fn mass_above(&self, x: f64, inclusive: bool) -> f64 {
        let s = self.sorted();
        let idx = if inclusive {
            s.partition_point(|&v| v < x)
        } else {
            s.partition_point(|&v| v <= x)
        };
        (s.len() - idx) as f64 / s.len() as f64
    }

    fn mass_below(&self, x: f64, inclusive: bool) -> f64 {
        let s = self.sorted();
        let idx = if inclusive {
            s.partition_point(|&v| v <= x)
        } else {
            s.partition_point(|&v| v < x)
        };
        idx as f64 / s.len() as f64
    }
}

impl Posterior for DensityGrid {
    fn hpd(&self, mass: f64) -> Result<CredibleInterval> {
        DensityGrid::hpd(self, mass)
    }

    fn mass_in(&self, lower: f64, upper: f64) -> Result<f64> {
        self.mass_between(lower, upper)
    }

    fn median(&self) -> f64 {
        DensityGrid::median(self)
    }

    // A continuous density puts no mass on a point, so `inclusive` is moot.
    fn mass_above(&self, x: f64, _inclusive: bool) -> f64 {
        let total = self.total_mass();
        ((total - self.cdf(x)) / total).clamp(0.0, 1.0)
    }

    fn mass_below(&self, x: f64, _inclusive: bool) -> f64 {
        (self.cdf(x) / self.total_mass()).clamp(0.0, 1.0)
    }
}

/// Rescales a grid so its trapezoidal integral is one.
pub fn normalize_grid(grid: DensityGrid) -> Result<DensityGrid> {
    grid.normalize()
}

pub fn hpd_interval<P: Posterior + ?Sized>(posterior: &P, mass: f64) -> Result<CredibleInterval> {
    posterior.hpd(mass)
}

pub fn mass_in_interval<P: Posterior + ?Sized>(
    posterior: &P,
    lower: f64,
    upper: f64,
) -> Result<f64> {
    posterior.mass_in(lower, upper)
}

pub fn map_estimate(posterior: &DensityGrid) -> MapEstimate {
    posterior.map_estimate()
}

pub fn level_set_mass(posterior: &DensityGrid, threshold: f64) -> f64 {
    posterior.level_set_mass(threshold)
}

pub fn sample_from_grid(grid: &DensityGrid, count: usize, seed: u64) -> Result<SampleSet> {
    grid.sample(count, seed)
}
