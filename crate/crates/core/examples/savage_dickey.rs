//! Savage-Dickey density ratio on the posterior grid against the analytic
//! Bayes factor, with the four verbal evidence scales.

use posterior_indices::indices::{categorize_bf, savage_dickey_bf, EvidenceScale};
use posterior_indices::ttest::{
    jzs_bayes_factor, model_grids, CauchyPrior, Hypotheses, SufficientStats,
};

fn main() -> posterior_indices::Result<()> {
    let prior = CauchyPrior::new(1.0)?;
    let h = Hypotheses::default();
    for t in [0.0, 1.0, 2.2, 3.0, 4.5] {
        let stats = SufficientStats::from_t(t, 50, 50)?;
        let grids = model_grids(&stats, &prior, &h, 4096)?;
        let sd = savage_dickey_bf(&grids.posterior, &grids.prior, 0.0)?;
        let exact = jzs_bayes_factor(&stats, &prior)?.bf01;
        println!(
            "t = {t:<4} BF01 savage-dickey {sd:>10.5}  analytic {exact:>10.5}  rel diff {:.2e}",
            (sd - exact).abs() / exact
        );
        for scale in EvidenceScale::ALL {
            let c = categorize_bf(sd, scale)?;
            println!("    {:<26} {} ({:?})", scale.name(), c.label, c.direction);
        }
    }
    Ok(())
}
