//! Complete analysis of a `group,value` CSV file, printed as text or JSON.
//!
//! `cargo run --example full_report -- data.csv [json]`; without a path a
//! seeded sample is analyzed.

use posterior_indices::config::AnalysisConfig;
use posterior_indices::io::read_two_group_file;
use posterior_indices::report::{analyze, to_json, to_text};
use posterior_indices::ttest::simulate_two_sample;

fn main() -> posterior_indices::Result<()> {
    let mut args = std::env::args().skip(1);
    let data = match args.next() {
        Some(path) => read_two_group_file(path.as_ref())?,
        None => simulate_two_sample(2.51, 1.81, 1.72, 1.51, 50, 2019)?,
    };
    let config = AnalysisConfig {
        seed: Some(1),
        ..AnalysisConfig::default()
    };
    let report = analyze(&data, &config)?;
    if args.next().as_deref() == Some("json") {
        print!("{}", to_json(&report)?);
    } else {
        print!("{}", to_text(&report));
    }
    Ok(())
}
