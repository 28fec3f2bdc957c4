//! MAP-based p-value: posterior density at the null over the density at the
//! mode, as the observed effect grows.

use posterior_indices::indices::map_p_value;
use posterior_indices::ttest::{model_grids, CauchyPrior, Hypotheses, SufficientStats};

fn main() -> posterior_indices::Result<()> {
    let prior = CauchyPrior::new(1.0)?;
    for t in [0.0, 1.0, 2.0, 2.2078, 3.0, 4.0] {
        let stats = SufficientStats::from_t(t, 50, 50)?;
        let grids = model_grids(&stats, &prior, &Hypotheses::default(), 4096)?;
        let map = grids.posterior.map_estimate();
        let p = map_p_value(&grids.posterior, 0.0)?;
        println!("t = {t:<6} MAP {:>7.4}  p_MAP {p:.5}", map.location);
    }
    Ok(())
}
