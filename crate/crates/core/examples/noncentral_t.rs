//! Noncentral t density against the central formula and across noncentrality.

use posterior_indices::ttest::{central_t_pdf, noncentral_t_pdf};

fn main() -> posterior_indices::Result<()> {
    for df in [1.0, 5.0, 98.0] {
        for x in [-3.0, 0.0, 2.2] {
            let c = central_t_pdf(x, df);
            let n0 = noncentral_t_pdf(x, df, 0.0)?;
            let n2 = noncentral_t_pdf(x, df, 2.0)?;
            println!("df {df:>4} x {x:>5}: central {c:.10}  ncp=0 {n0:.10}  ncp=2 {n2:.10}");
        }
    }
    Ok(())
}
