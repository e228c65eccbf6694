//! A seeded Monte Carlo run: is IC^nu unbiased for the cross entropy?
//!
//! ```text
//! cargo run --release --example monte_carlo
//! ```

use lindley::simulation::{run_experiment, ExperimentConfig, ExperimentKind};

fn main() -> lindley::Result<()> {
    let config = ExperimentConfig {
        experiment: ExperimentKind::Unbiasedness,
        n_grid: "50".parse()?,
        nu_grid: "0.1,1,10".parse()?,
        replicates: 20_000,
        ..Default::default()
    };
    let report = run_experiment(&config, None)?;
    for c in &report.cells {
        let d = c.estimate("ic_minus_true").expect("always reported");
        println!(
            "nu={:<5} K={} bias {:+.4} +- {:.4}  z={:+.2}",
            c.nu.unwrap_or(f64::NAN),
            c.free_dims.unwrap_or(0),
            d.mean,
            d.se,
            c.values["z"]
        );
    }
    println!("all |z| < 3: {}", report.all_checks_pass());
    Ok(())
}
