//! Expected predictive and postdictive log-ratios as the sample grows, for a
//! small true displacement. Writes CSV to stdout.
//!
//! ```text
//! cargo run --release --example prepost > prepost.csv
//! ```

use lindley::simulation::{figure_prepost, ExperimentConfig, ExperimentKind};

fn main() -> lindley::Result<()> {
    let config = ExperimentConfig {
        experiment: ExperimentKind::Prepost,
        true_mean: vec![0.1],
        tau: Some(1.0),
        n_grid: "pow2:0:16".parse()?,
        replicates: 500,
        ..Default::default()
    };
    let report = figure_prepost(&config, None)?;
    let echo: Vec<(String, String)> = report
        .markers
        .iter()
        .map(|(k, v)| (k.clone(), v.to_string()))
        .collect();
    report
        .curve
        .expect("figure emits a curve")
        .write_csv(&mut std::io::stdout().lock(), &echo)
}
