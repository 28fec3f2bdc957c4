//! HPD + ROPE decision rule on three posteriors: clearly away from zero,
//! concentrated inside the ROPE, and straddling its edge.

use posterior_indices::indices::{rope_decision, Rope};
use posterior_indices::posterior::DensityGrid;

fn normal(mu: f64, sd: f64) -> posterior_indices::Result<DensityGrid> {
    DensityGrid::from_fn(mu - 8.0 * sd, mu + 8.0 * sd, 4001, |x| {
        (-0.5 * ((x - mu) / sd).powi(2)).exp()
    })?
    .normalize()
}

fn main() -> posterior_indices::Result<()> {
    let rope = Rope::effect_size_default();
    for (name, mu, sd) in [
        ("away", 0.6, 0.1),
        ("inside", 0.0, 0.03),
        ("edge", 0.15, 0.1),
    ] {
        let post = normal(mu, sd)?;
        let d = rope_decision(&post, &rope, 0.95)?;
        println!(
            "{name:<7} HPD [{:>7.4}, {:>7.4}]  mass in ROPE {:.4}  HPD share {:.4}  -> {:?}",
            d.hpd.lower, d.hpd.upper, d.mass_in_rope, d.hpd_share_in_rope, d.verdict
        );
    }
    Ok(())
}
