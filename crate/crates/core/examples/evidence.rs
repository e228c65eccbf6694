//! Exact evidence, posterior and Bayes factor for a one-dimensional dataset.
//!
//! ```text
//! cargo run --example evidence
//! ```

use lindley::criteria::log_bayes_factor;
use lindley::gaussian::{log_evidence, posterior, GaussianModel, PriorSpec, SampleSet};

fn main() -> lindley::Result<()> {
    let x = [0.31, -0.12, 0.54, 0.08, 0.27, -0.05, 0.44, 0.19];
    let samples = SampleSet::scalar(&x, 0.5)?;
    let null = GaussianModel::null(1);
    let alt = GaussianModel::nested(1, 1);
    let prior = PriorSpec::normal(2.0)?;

    println!("ln q(x | null) = {:.6}", log_evidence(samples.summary(), &null, &prior)?);
    println!("ln q(x | alt)  = {:.6}", log_evidence(samples.summary(), &alt, &prior)?);

    let post = posterior(samples.summary(), &alt, &prior)?;
    println!("posterior mean {:.6}, sd {:.6}", post.mean[0], post.sd);

    let bf = log_bayes_factor(samples.summary(), &null, &alt, &prior, &prior)?;
    println!("lambda_B = {:.6}, P(null | x) = {:.4}", bf.lambda, bf.posterior_null);

    // a flat prior has no evidence; the error says so
    match log_evidence(samples.summary(), &alt, &PriorSpec::ImproperFlat) {
        Err(e) => println!("flat prior: {e}"),
        Ok(v) => println!("unexpected: {v}"),
    }
    Ok(())
}
