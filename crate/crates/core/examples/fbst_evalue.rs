//! FBST e-value for a point null with flat and prior reference functions.

use posterior_indices::indices::fbst_evalue;
use posterior_indices::posterior::ReferenceFunction;
use posterior_indices::ttest::{model_grids, CauchyPrior, Hypotheses, SufficientStats};

fn main() -> posterior_indices::Result<()> {
    let prior = CauchyPrior::new(1.0)?;
    println!(
        "{:<6} {:>12} {:>12} {:>12}",
        "t", "ev flat", "ev prior", "ev(H0) flat"
    );
    for t in [0.5, 1.5, 2.2078, 3.0] {
        let stats = SufficientStats::from_t(t, 50, 50)?;
        let grids = model_grids(&stats, &prior, &Hypotheses::default(), 4096)?;
        let flat = fbst_evalue(&grids.posterior, &ReferenceFunction::Flat, 0.0)?;
        let vs_prior = fbst_evalue(
            &grids.posterior,
            &ReferenceFunction::Prior(grids.prior.clone()),
            0.0,
        )?;
        println!(
            "{t:<6} {:>12.5} {:>12.5} {:>12.5}",
            flat.ev_against, vs_prior.ev_against, flat.ev_for
        );
    }
    Ok(())
}
