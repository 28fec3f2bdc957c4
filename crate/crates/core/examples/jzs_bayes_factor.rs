//! Analytic JZS Bayes factor for a two-sample t statistic across prior widths
//! and alternatives.

use posterior_indices::ttest::{
    jzs_bayes_factor_with, Alternative, CauchyPrior, Hypotheses, PriorPreset, SufficientStats,
};

fn main() -> posterior_indices::Result<()> {
    let t: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(2.5);
    let stats = SufficientStats::from_t(t, 50, 50)?;
    println!(
        "t = {t}, df = {}, n_eff = {}, d = {:.4}",
        stats.df,
        stats.n_eff,
        stats.effect()
    );
    println!("{:<10} {:<10} {:>10} {:>10}", "prior", "H1", "BF01", "BF10");
    for preset in [
        PriorPreset::Medium,
        PriorPreset::Wide,
        PriorPreset::Ultrawide,
    ] {
        let prior = CauchyPrior::new(preset.scale())?;
        for alternative in [
            Alternative::TwoSided,
            Alternative::Greater,
            Alternative::Less,
        ] {
            let h = Hypotheses {
                null_value: 0.0,
                alternative,
            };
            let bf = jzs_bayes_factor_with(&stats, &prior, &h)?;
            println!(
                "{:<10} {:<10} {:>10.4} {:>10.4}",
                format!("{preset:?}"),
                format!("{alternative:?}"),
                bf.bf01,
                bf.bf10
            );
        }
    }
    Ok(())
}
