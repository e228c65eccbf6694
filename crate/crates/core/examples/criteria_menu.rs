//! Every criterion over a nested menu, and the model each one picks.
//!
//! ```text
//! cargo run --example criteria_menu
//! ```

use lindley::criteria::{evaluate_menu, MenuOptions, ModelSpec, Partition};
use lindley::gaussian::{GaussianModel, PriorSpec};
use lindley::rng::{stream, DEFAULT_SEED};
use lindley::simulation::generate_dataset;

fn main() -> lindley::Result<()> {
    let mut rng = stream(DEFAULT_SEED, &[1]);
    // the second coordinate is displaced, the third is not
    let samples = generate_dataset(&[0.0, 0.4, 0.0], 1.0, 40, &mut rng)?;

    let prior = PriorSpec::normal(3.0)?;
    let menu: Vec<ModelSpec> = (0..=3)
        .map(|k| ModelSpec::new(format!("k{k}"), GaussianModel::nested(k, 3), prior))
        .collect();
    let options = MenuOptions {
        partition: Partition::from_nu(1.0, samples.n())?,
        budget: 2_000,
        seed: DEFAULT_SEED,
        fraction: None,
    };
    let eval = evaluate_menu(&samples, &menu, &options)?;

    for r in &eval.reports {
        println!("{:<18} {:<3} {:>12.5}", r.criterion_id.to_string(), r.model_id, r.value);
    }
    println!();
    for s in &eval.selections {
        println!("{:<18} -> {}", s.criterion_id.to_string(), s.model_id);
    }
    Ok(())
}
