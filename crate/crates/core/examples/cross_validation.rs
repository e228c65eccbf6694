//! Leave-k-out cross entropy against its closed-form counterparts.
//!
//! ```text
//! cargo run --example cross_validation
//! ```

use lindley::criteria::{
    generalized_ic_for, leave_k_out_cross_entropy, loo_cross_entropy, pseudo_bayes_factor, Partition,
};
use lindley::gaussian::{GaussianModel, PriorSpec};
use lindley::rng::stream;
use lindley::simulation::generate_dataset;

fn main() -> lindley::Result<()> {
    let samples = generate_dataset(&[0.25], 1.0, 30, &mut stream(11, &[]))?;
    let alt = GaussianModel::nested(1, 1);
    let null = GaussianModel::null(1);
    let flat = PriorSpec::ImproperFlat;

    let loo = Partition::leave_one_out(samples.n())?;
    let enumerated = leave_k_out_cross_entropy(&samples, &alt, &flat, loo, 10_000, 1)?;
    println!(
        "leave-one-out: enumerated {:.8} ({} subsets), closed form {:.8}",
        enumerated.value,
        enumerated.subsets,
        loo_cross_entropy(samples.summary(), &alt, &flat)?
    );

    for (t, g) in [(20, 10), (10, 20), (3, 27)] {
        let p = Partition::new(t, g)?;
        let est = leave_k_out_cross_entropy(&samples, &alt, &flat, p, 5_000, 7)?;
        let ic = generalized_ic_for(samples.summary(), &alt, "alt", p)?;
        println!(
            "N_T={t:>2} N_G={g:>2}: sampled {:.4} (exhaustive: {}), IC^nu {:.4}",
            est.value, est.exhaustive, ic.value
        );
    }

    let pbf = pseudo_bayes_factor(&samples, &null, &alt, &flat, &flat, loo, 10_000, 1)?;
    println!("pseudo-Bayes factor {:.4}, picks null: {}", pbf.lambda, pbf.selects_model_zero());
    Ok(())
}
