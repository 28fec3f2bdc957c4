use std::f64::consts::PI;

use super::samples::MIN_SAMPLES;
use super::{DensityGrid, SampleSet};
use crate::error::{Error, Result};

// Kernel contributions beyond this many bandwidths are below 1e-14 and skipped.
const KERNEL_CUTOFF: f64 = 8.0;

/// Silverman's rule of thumb, `0.9·min(sd, IQR/1.34)·n^(-1/5)`. Falls back to
/// the standard deviation when the IQR is zero.
pub fn silverman_bandwidth(samples: &SampleSet) -> Result<f64> {
    let sd = samples.sd();
    let iqr = samples.quantile(0.75) - samples.quantile(0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    if !(spread > 0.0) {
        return Err(Error::DegenerateData(
            "samples have zero spread; bandwidth is undefined".into(),
        ));
    }
    Ok(0.9 * spread * (samples.len() as f64).powf(-0.2))
}

/// Gaussian kernel density estimate on `grid_size` equally spaced points
/// spanning `[min − 3h, max + 3h]`, normalized on the grid.
pub fn kde_density(
    samples: &SampleSet,
    bandwidth: Option<f64>,
    grid_size: usize,
) -> Result<DensityGrid> {
    samples.require(MIN_SAMPLES)?;
    let h = match bandwidth {
        Some(h) if h > 0.0 && h.is_finite() => h,
        Some(h) => {
            return Err(Error::InvalidArgument(format!(
                "bandwidth must be positive, got {h}"
            )))
        }
        None => silverman_bandwidth(samples)?,
    };
    let sorted = samples.sorted();
    let lo = sorted[0] - 3.0 * h;
    let hi = sorted[sorted.len() - 1] + 3.0 * h;
    let norm = 1.0 / (samples.len() as f64 * h * (2.0 * PI).sqrt());
    DensityGrid::from_fn(lo, hi, grid_size, |x| {
        let start = sorted.partition_point(|&v| v < x - KERNEL_CUTOFF * h);
        let end = sorted.partition_point(|&v| v <= x + KERNEL_CUTOFF * h);
        sorted[start..end]
            .iter()
            .map(|&v| {
                let u = (x - v) / h;
                (-0.5 * u * u).exp()
            })
            .sum::<f64>()
            * norm
    })?
    .normalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn normal_draws(n: usize, seed: u64) -> SampleSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SampleSet::new((0..n).map(|_| StandardNormal.sample(&mut rng)).collect()).unwrap()
    }

    #[test]
    fn density_at_zero_matches_normal_pdf() {
        let g = kde_density(&normal_draws(10_000, 1), None, 1024).unwrap();
        let expected = 1.0 / (2.0 * PI).sqrt();
        assert!((g.density_at(0.0).unwrap() - expected).abs() < 0.02);
        assert!((g.total_mass() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn too_few_samples() {
        let err = kde_density(&normal_draws(50, 1), None, 128).unwrap_err();
        assert_eq!(
            err,
            Error::InsufficientSamples {
                needed: 100,
                got: 50
            }
        );
    }

    #[test]
    fn bad_bandwidth() {
        let s = normal_draws(200, 2);
        assert!(matches!(
            kde_density(&s, Some(0.0), 128),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            kde_density(&s, Some(-1.0), 128),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn constant_samples_have_no_bandwidth() {
        let s = SampleSet::new(vec![1.0; 200]).unwrap();
        assert!(matches!(
            kde_density(&s, None, 128),
            Err(Error::DegenerateData(_))
        ));
    }

    #[test]
    fn grid_spans_three_bandwidths() {
        let s = normal_draws(500, 3);
        let g = kde_density(&s, Some(0.25), 64).unwrap();
        let (lo, hi) = g.support();
        assert!((lo - (s.sorted()[0] - 0.75)).abs() < 1e-12);
        assert!((hi - (s.sorted()[499] + 0.75)).abs() < 1e-12);
    }
}
