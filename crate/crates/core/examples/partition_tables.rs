//! How the partition ratio sets complexity, significance and resolution.
//!
//! ```text
//! cargo run --example partition_tables
//! ```

use lindley::analysis::{
    aic_resolution, bayes_resolution, bic_resolution, nu_resolution, significance_level,
};
use lindley::criteria::{bic_complexity, complexity_nu};

fn main() -> lindley::Result<()> {
    let n = 1000.0;
    println!("{:>10} {:>10} {:>12} {:>12}", "nu", "K_nu", "alpha", "threshold");
    for nu in [0.0, 0.01, 0.1, 1.0, 10.0, 100.0, n - 1.0] {
        println!(
            "{:>10} {:>10.5} {:>12.3e} {:>12.5}",
            nu,
            complexity_nu(1, nu)?,
            significance_level(1, nu)?,
            nu_resolution(1.0, nu)?
        );
    }
    println!();
    println!("BIC complexity at N = {n}: {:.5}", bic_complexity(1, n));
    println!("AIC threshold {:.5}, BIC threshold {:.5} (units of sigma_mu)", aic_resolution(1.0)?, bic_resolution(1.0, n)?);
    for ratio in [10.0, 100.0, 1000.0] {
        println!("Bayes threshold at tau/sigma_mu = {ratio}: {:.5}", bayes_resolution(1.0, ratio)?);
    }
    Ok(())
}
