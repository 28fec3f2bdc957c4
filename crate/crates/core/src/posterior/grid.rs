use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{CredibleInterval, SampleSet};
use crate::error::{Error, Result};

/// Smallest number of points a grid may have.
pub const MIN_GRID_POINTS: usize = 64;

/// Tolerance on the trapezoidal integral of a normalized grid.
pub const NORMALIZATION_TOL: f64 = 1e-6;

/// A density tabulated on a strictly increasing grid. Between grid points the
/// density is the linear interpolant, and every integral is the matching
/// trapezoidal sum.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    points: Vec<f64>,
    densities: Vec<f64>,
}

/// Location and height of the posterior mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapEstimate {
    pub location: f64,
    pub density: f64,
    /// The discrete argmax sits on the first or last grid point.
    pub at_boundary: bool,
    #[serde(skip)]
    stencil: Option<Parabola>,
}

// Quadratic through the three grid points around the discrete argmax.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Parabola {
    lo: f64,
    hi: f64,
    a: f64,
    b: f64,
    c: f64,
}

impl Parabola {
    fn eval(&self, x: f64) -> f64 {
        (self.a * x + self.b) * x + self.c
    }
}

impl MapEstimate {
    /// Density near the mode. Inside the three-point interpolation stencil
    /// this uses the same quadratic that located the mode, so evaluating at
    /// `location` returns exactly `density`; elsewhere it returns `None`.
    pub fn local_density(&self, x: f64) -> Option<f64> {
        let p = self.stencil?;
        if x == self.location {
            return Some(self.density);
        }
        (x >= p.lo && x <= p.hi).then(|| p.eval(x).max(0.0))
    }
}

fn trapezoid(x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    0.5 * (x1 - x0) * (y0 + y1)
}

impl DensityGrid {
    /// Builds a grid without normalizing it.
    pub fn new(points: Vec<f64>, densities: Vec<f64>) -> Result<Self> {
        if points.len() != densities.len() {
            return Err(Error::InvalidArgument(format!(
                "grid has {} points but {} densities",
                points.len(),
                densities.len()
            )));
        }
        if points.len() < MIN_GRID_POINTS {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least {MIN_GRID_POINTS} points, got {}",
                points.len()
            )));
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("grid points must be finite".into()));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "grid points must be strictly increasing".into(),
            ));
        }
        if densities.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::InvalidArgument(
                "densities must be finite and nonnegative".into(),
            ));
        }
        Ok(DensityGrid { points, densities })
    }

    /// Tabulates `f` on `size` equally spaced points spanning `[lo, hi]`.
    pub fn from_fn<F: FnMut(f64) -> f64>(lo: f64, hi: f64, size: usize, mut f: F) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::InvalidArgument(format!(
                "grid bounds must satisfy lo < hi, got [{lo}, {hi}]"
            )));
        }
        let points = linspace(lo, hi, size);
        let densities = points.iter().map(|&x| f(x)).collect();
        DensityGrid::new(points, densities)
    }

    /// Same as [`DensityGrid::from_fn`] but with a fallible density.
    pub fn try_from_fn<F: FnMut(f64) -> Result<f64>>(
        lo: f64,
        hi: f64,
        size: usize,
        mut f: F,
    ) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::InvalidArgument(format!(
                "grid bounds must satisfy lo < hi, got [{lo}, {hi}]"
            )));
        }
        let points = linspace(lo, hi, size);
        let densities = points.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
        DensityGrid::new(points, densities)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// First and last grid point.
    pub fn support(&self) -> (f64, f64) {
        (self.points[0], self.points[self.points.len() - 1])
    }

    pub fn contains(&self, x: f64) -> bool {
        let (lo, hi) = self.support();
        x >= lo && x <= hi
    }

    pub fn total_mass(&self) -> f64 {
        self.cells()
            .map(|(x0, x1, y0, y1)| trapezoid(x0, x1, y0, y1))
            .sum()
    }

    /// Rescales the densities so the trapezoidal integral is one.
    pub fn normalize(mut self) -> Result<Self> {
        let total = self.total_mass();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::DegenerateDensity);
        }
        for d in &mut self.densities {
            *d /= total;
        }
        Ok(self)
    }

    fn cells(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        self.points
            .windows(2)
            .zip(self.densities.windows(2))
            .map(|(x, y)| (x[0], x[1], y[0], y[1]))
    }

    /// Linear interpolation of the density at `x`.
    pub fn density_at(&self, x: f64) -> Result<f64> {
        if !self.contains(x) {
            let (lower, upper) = self.support();
            return Err(Error::OutOfSupport {
                value: x,
                lower,
                upper,
            });
        }
        let i = self.points.partition_point(|&p| p <= x);
        if i == self.points.len() {
            return Ok(self.densities[i - 1]);
        }
        let (x0, x1) = (self.points[i - 1], self.points[i]);
        let (y0, y1) = (self.densities[i - 1], self.densities[i]);
        if x == x0 {
            return Ok(y0);
        }
        Ok(y0 + (y1 - y0) * (x - x0) / (x1 - x0))
    }

    /// Integral of the interpolated density over `[lower, upper]` intersected
    /// with the grid support.
    pub fn mass_between(&self, lower: f64, upper: f64) -> Result<f64> {
        if lower > upper || lower.is_nan() || upper.is_nan() {
            return Err(Error::InvalidArgument(format!(
                "interval bounds must satisfy lower <= upper, got [{lower}, {upper}]"
            )));
        }
        let (lo, hi) = self.support();
        let a = lower.max(lo);
        let b = upper.min(hi);
        if a >= b {
            return Ok(0.0);
        }
        Ok((self.cdf(b) - self.cdf(a)).clamp(0.0, 1.0))
    }

    /// Integral of the density from the lower support edge up to `x`,
    /// clamped to the support.
    pub fn cdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        let x = x.clamp(lo, hi);
        let mut acc = 0.0;
        for (x0, x1, y0, y1) in self.cells() {
            if x >= x1 {
                acc += trapezoid(x0, x1, y0, y1);
            } else {
                if x > x0 {
                    let yx = y0 + (y1 - y0) * (x - x0) / (x1 - x0);
                    acc += trapezoid(x0, x, y0, yx);
                }
                break;
            }
        }
        acc
    }

    /// Location where the cumulative mass reaches `p` times the total mass.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!(
                "quantile level must lie in [0, 1], got {p}"
            )));
        }
        let total = self.total_mass();
        let target = p * total;
        let mut acc = 0.0;
        for (x0, x1, y0, y1) in self.cells() {
            let m = trapezoid(x0, x1, y0, y1);
            if acc + m >= target && m > 0.0 {
                let offset = solve_cell(y0, y1, x1 - x0, target - acc);
                return Ok((x0 + offset).min(x1));
            }
            acc += m;
        }
        Ok(self.support().1)
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5).expect("0.5 is a valid level")
    }

    /// Posterior mean, exact for the piecewise-linear density.
    pub fn mean(&self) -> f64 {
        let mut first = 0.0;
        let mut total = 0.0;
        for (x0, x1, y0, y1) in self.cells() {
            let h = x1 - x0;
            // ∫ x·(linear) over the cell
            first += h * (y0 * (2.0 * x0 + x1) + y1 * (x0 + 2.0 * x1)) / 6.0;
            total += trapezoid(x0, x1, y0, y1);
        }
        first / total
    }

    /// Grid argmax refined by the vertex of the quadratic through the
    /// neighbouring points. Ties resolve to the smallest location.
    pub fn map_estimate(&self) -> MapEstimate {
        let mut i = 0;
        for (j, &d) in self.densities.iter().enumerate() {
            if d > self.densities[i] {
                i = j;
            }
        }
        let n = self.len();
        let discrete = MapEstimate {
            location: self.points[i],
            density: self.densities[i],
            at_boundary: i == 0 || i == n - 1,
            stencil: None,
        };
        if discrete.at_boundary {
            return discrete;
        }
        let (x0, x1, x2) = (self.points[i - 1], self.points[i], self.points[i + 1]);
        let (y0, y1, y2) = (
            self.densities[i - 1],
            self.densities[i],
            self.densities[i + 1],
        );
        // Newton divided differences.
        let d01 = (y1 - y0) / (x1 - x0);
        let d12 = (y2 - y1) / (x2 - x1);
        let a = (d12 - d01) / (x2 - x0);
        if !(a < 0.0) {
            return discrete;
        }
        let b = d01 - a * (x0 + x1);
        let c = y0 - (a * x0 + b) * x0;
        let parabola = Parabola {
            lo: x0,
            hi: x2,
            a,
            b,
            c,
        };
        let location = (-b / (2.0 * a)).clamp(x0, x2);
        let density = parabola.eval(location).max(y1);
        MapEstimate {
            location,
            density,
            at_boundary: false,
            stencil: Some(parabola),
        }
    }

    /// Mass of the sublevel set `{θ : density(θ) <= threshold}`, with the set
    /// boundaries placed where the linear interpolant crosses the threshold.
    pub fn level_set_mass(&self, threshold: f64) -> f64 {
        let mut mass = 0.0;
        for (x0, x1, y0, y1) in self.cells() {
            let w = x1 - x0;
            match (y0 <= threshold, y1 <= threshold) {
                (true, true) => mass += trapezoid(x0, x1, y0, y1),
                (false, false) => {}
                (true, false) => {
                    let f = (threshold - y0) / (y1 - y0);
                    mass += 0.5 * f * w * (y0 + threshold);
                }
                (false, true) => {
                    let f = (y0 - threshold) / (y0 - y1);
                    mass += 0.5 * (1.0 - f) * w * (threshold + y1);
                }
            }
        }
        mass.clamp(0.0, 1.0)
    }

    // Mass and segments of the superlevel set {density > threshold}.
    fn superlevel(&self, threshold: f64) -> (f64, Vec<(f64, f64)>) {
        let mut mass = 0.0;
        let mut segments: Vec<(f64, f64)> = Vec::new();
        let mut open: Option<f64> = (self.densities[0] > threshold).then_some(self.points[0]);
        for (x0, x1, y0, y1) in self.cells() {
            let w = x1 - x0;
            match (y0 > threshold, y1 > threshold) {
                (true, true) => mass += trapezoid(x0, x1, y0, y1),
                (false, false) => {}
                (false, true) => {
                    let f = (threshold - y0) / (y1 - y0);
                    mass += 0.5 * (1.0 - f) * w * (threshold + y1);
                    open = Some(x0 + f * w);
                }
                (true, false) => {
                    let f = (y0 - threshold) / (y0 - y1);
                    mass += 0.5 * f * w * (y0 + threshold);
                    if let Some(start) = open.take() {
                        segments.push((start, x0 + f * w));
                    }
                }
            }
        }
        if let Some(start) = open {
            segments.push((start, self.support().1));
        }
        (mass, segments)
    }

    /// Highest-density interval: the density threshold is lowered until the
    /// enclosed mass reaches `mass`. A disconnected level set is an error.
    pub fn hpd(&self, mass: f64) -> Result<CredibleInterval> {
        check_mass(mass)?;
        let total = self.total_mass();
        let target = mass * total;
        let mut hi = self.densities.iter().copied().fold(0.0, f64::max);
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.superlevel(mid).0 >= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (_, segments) = self.superlevel(lo);
        match segments.as_slice() {
            [] => Err(Error::DegenerateDensity),
            [(a, b)] => CredibleInterval::new(*a, *b, mass),
            _ => Err(Error::MultimodalHpd { segments }),
        }
    }

    /// Draws `count` values by inverse-CDF transform of the piecewise-linear
    /// density, using a ChaCha8 stream seeded with `seed`.
    pub fn sample(&self, count: usize, seed: u64) -> Result<SampleSet> {
        if count == 0 {
            return Err(Error::InvalidArgument(
                "sample count must be positive".into(),
            ));
        }
        let mut cumulative = Vec::with_capacity(self.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for (x0, x1, y0, y1) in self.cells() {
            acc += trapezoid(x0, x1, y0, y1);
            cumulative.push(acc);
        }
        if !(acc > 0.0) {
            return Err(Error::DegenerateDensity);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draws = (0..count)
            .map(|_| {
                let target = rng.random::<f64>() * acc;
                // cumulative[i] <= target < cumulative[i + 1]
                let i = (cumulative.partition_point(|&c| c <= target) - 1).min(self.len() - 2);
                let (x0, x1) = (self.points[i], self.points[i + 1]);
                let (y0, y1) = (self.densities[i], self.densities[i + 1]);
                (x0 + solve_cell(y0, y1, x1 - x0, target - cumulative[i])).min(x1)
            })
            .collect();
        SampleSet::with_seed(draws, seed)
    }
}

pub(crate) fn check_mass(mass: f64) -> Result<()> {
    if mass > 0.0 && mass < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "credible mass must lie strictly between 0 and 1, got {mass}"
        )))
    }
}

// Offset s in [0, w] at which the integral of the linear density y0→y1 over
// [0, s] equals `r`. Rationalized root of y0·s + (y1 − y0)·s²/(2w) = r.
fn solve_cell(y0: f64, y1: f64, w: f64, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let slope = (y1 - y0) / w;
    let disc = (y0 * y0 + 2.0 * slope * r).max(0.0);
    let denom = y0 + disc.sqrt();
    if denom > 0.0 {
        (2.0 * r / denom).min(w)
    } else {
        w
    }
}

/// `size` equally spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, size: usize) -> Vec<f64> {
    if size < 2 {
        return vec![lo; size];
    }
    let step = (hi - lo) / (size - 1) as f64;
    (0..size)
        .map(|i| {
            if i == size - 1 {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect()
}
