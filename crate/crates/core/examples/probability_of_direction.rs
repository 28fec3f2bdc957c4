//! Probability of direction from draws and from a grid of the same posterior.

use posterior_indices::indices::probability_of_direction;
use posterior_indices::ttest::{model_grids, CauchyPrior, Hypotheses, SufficientStats};

fn main() -> posterior_indices::Result<()> {
    let stats = SufficientStats::from_t(2.2078, 50, 50)?;
    let grids = model_grids(
        &stats,
        &CauchyPrior::new(1.0)?,
        &Hypotheses::default(),
        4096,
    )?;
    let on_grid = probability_of_direction(&grids.posterior);
    println!(
        "grid:    PD {:.5} (positive side: {})",
        on_grid.value, on_grid.positive
    );
    for seed in [1, 2, 3] {
        let draws = grids.posterior.sample(50_000, seed)?;
        let pd = probability_of_direction(&draws);
        println!(
            "seed {seed}:  PD {:.5} from {} draws",
            pd.value,
            draws.len()
        );
    }
    Ok(())
}
