use super::CredibleInterval;
use crate::error::{Error, Result};

/// Draws below this count are rejected by density and interval estimates.
pub const MIN_SAMPLES: usize = 100;

/// Posterior draws of a scalar parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    values: Vec<f64>,
    sorted: Vec<f64>,
    seed: Option<u64>,
}

impl SampleSet {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("sample set is empty".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("samples must be finite".into()));
        }
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        Ok(SampleSet {
            values,
            sorted,
            seed: None,
        })
    }

    /// Records the generator seed that produced the draws.
    pub fn with_seed(values: Vec<f64>, seed: u64) -> Result<Self> {
        let mut s = SampleSet::new(values)?;
        s.seed = Some(seed);
        Ok(s)
    }

    /// Draws in their original order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn require(&self, needed: usize) -> Result<()> {
        if self.len() < needed {
            Err(Error::InsufficientSamples {
                needed,
                got: self.len(),
            })
        } else {
            Ok(())
        }
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// Sample standard deviation (denominator n − 1); zero for one draw.
    pub fn sd(&self) -> f64 {
        let n = self.len();
        if n < 2 {
            return 0.0;
        }
        let m = self.mean();
        (self.values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    }

    /// Linear-interpolation quantile of the sorted draws.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.sorted.len();
        let h = (n - 1) as f64 * p.clamp(0.0, 1.0);
        let i = h.floor() as usize;
        if i + 1 >= n {
            return self.sorted[n - 1];
        }
        self.sorted[i] + (h - i as f64) * (self.sorted[i + 1] - self.sorted[i])
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }

    /// Fraction of draws inside the closed interval `[lower, upper]`.
    pub fn fraction_between(&self, lower: f64, upper: f64) -> Result<f64> {
        if lower > upper || lower.is_nan() || upper.is_nan() {
            return Err(Error::InvalidArgument(format!(
                "interval bounds must satisfy lower <= upper, got [{lower}, {upper}]"
            )));
        }
        let start = self.sorted.partition_point(|&v| v < lower);
        let end = self.sorted.partition_point(|&v| v <= upper);
        Ok((end - start) as f64 / self.len() as f64)
    }

    /// Shortest window of ⌈mass·n⌉ consecutive sorted draws. The first such
    /// window wins ties.
    pub fn hpd(&self, mass: f64) -> Result<CredibleInterval> {
        super::grid::check_mass(mass)?;
        self.require(MIN_SAMPLES)?;
        let n = self.sorted.len();
        let k = ((mass * n as f64).ceil() as usize).clamp(1, n);
        let (best, _) = self
            .sorted
            .windows(k)
            .map(|w| w[k - 1] - w[0])
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |(bi, bw), (i, w)| {
                    if w < bw {
                        (i, w)
                    } else {
                        (bi, bw)
                    }
                },
            );
        CredibleInterval::new(self.sorted[best], self.sorted[best + k - 1], mass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_nonfinite() {
        assert!(SampleSet::new(vec![]).is_err());
        assert!(SampleSet::new(vec![1.0, f64::NAN]).is_err());
        assert!(SampleSet::new(vec![1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn hpd_needs_enough_draws() {
        let s = SampleSet::new((0..50).map(f64::from).collect()).unwrap();
        assert_eq!(
            s.hpd(0.9).unwrap_err(),
            Error::InsufficientSamples {
                needed: 100,
                got: 50
            }
        );
    }

    #[test]
    fn hpd_picks_the_dense_end() {
        // Draws bunch up near 0 on a square-root scale.
        let s = SampleSet::new((0..1000).map(|i| (i as f64 / 1000.0).powi(2)).collect()).unwrap();
        let ci = s.hpd(0.5).unwrap();
        assert_eq!(ci.lower, 0.0);
        assert_eq!(ci.upper, (499.0f64 / 1000.0).powi(2));
    }

    #[test]
    fn fraction_is_closed_interval() {
        let s = SampleSet::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.fraction_between(1.0, 2.0).unwrap(), 0.5);
        assert_eq!(s.fraction_between(1.5, 1.5).unwrap(), 0.0);
        assert!(s.fraction_between(2.0, 1.0).is_err());
    }

    #[test]
    fn median_of_even_count() {
        let s = SampleSet::new(vec![4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(s.median(), 2.5);
        assert_eq!(s.values(), &[4.0, 1.0, 3.0, 2.0]);
    }
}
