//! Parameter information, missing information and the Occam factor.
//!
//! ```text
//! cargo run --example information
//! ```

use lindley::analysis::{missing_information, occam_decomposition, parameter_information};
use lindley::gaussian::{GaussianModel, PriorSpec};
use lindley::rng::stream;
use lindley::simulation::generate_dataset;

fn main() -> lindley::Result<()> {
    let model = GaussianModel::nested(1, 1);
    let prior = PriorSpec::normal(10.0)?;
    println!("{:>6} {:>10} {:>10} {:>12}", "N", "I", "I'", "occam err");
    for (i, n) in [10, 100, 1000].into_iter().enumerate() {
        let s = generate_dataset(&[0.2], 1.0, n, &mut stream(5, &[i as u64]))?;
        let info = parameter_information(s.summary(), &model, &prior)?;
        let missing = missing_information(&s, &model, &prior, 10_000, 3)?;
        let occam = occam_decomposition(s.summary(), &model, &prior)?;
        println!("{n:>6} {info:>10.4} {missing:>10.4} {:>12.2e}", occam.discrepancy);
    }
    Ok(())
}
