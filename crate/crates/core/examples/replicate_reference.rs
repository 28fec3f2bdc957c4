//! Calibrated replication of the running example: t is root-found from the
//! reported Bayes factor and every other index is compared to its reported
//! value.

use posterior_indices::replicate::{reference_expectations, replicate, to_text, ToleranceProfile};

fn main() -> posterior_indices::Result<()> {
    let rep = replicate(ToleranceProfile::Strict, &reference_expectations())?;
    print!("{}", to_text(&rep));
    if !rep.all_pass {
        std::process::exit(1);
    }
    Ok(())
}
