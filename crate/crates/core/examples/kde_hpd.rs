//! Posterior draws → kernel density → HPD interval, MAP and level-set mass.

use posterior_indices::posterior::{kde_density, silverman_bandwidth, SampleSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

fn main() -> posterior_indices::Result<()> {
    // Right-skewed draws so sample and density HPDs differ visibly.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let gamma = Gamma::new(3.0, 0.2).unwrap();
    let draws: Vec<f64> = (0..20_000).map(|_| gamma.sample(&mut rng)).collect();
    let samples = SampleSet::with_seed(draws, 11)?;

    let h = silverman_bandwidth(&samples)?;
    let density = kde_density(&samples, None, 2048)?;
    let map = density.map_estimate();
    let hpd_samples = samples.hpd(0.95)?;
    let hpd_density = density.hpd(0.95)?;

    println!("draws           {}", samples.len());
    println!("bandwidth       {h:.5}");
    println!(
        "mean / median   {:.4} / {:.4}",
        samples.mean(),
        samples.median()
    );
    println!(
        "MAP             {:.4} (density {:.4})",
        map.location, map.density
    );
    println!(
        "95% HPD draws   [{:.4}, {:.4}]",
        hpd_samples.lower, hpd_samples.upper
    );
    println!(
        "95% HPD KDE     [{:.4}, {:.4}]",
        hpd_density.lower, hpd_density.upper
    );
    let half_peak = 0.5 * map.density;
    println!(
        "mass below half the peak density: {:.4}",
        density.level_set_mass(half_peak)
    );
    Ok(())
}
