//! A dataset rejected at 95% confidence whose Bayes factor still gives the
//! null 95% posterior probability.
//!
//! ```text
//! cargo run --example lindley_paradox
//! ```

use lindley::simulation::lindley_search;

fn main() -> lindley::Result<()> {
    let w = lindley_search(0.95, 0.95, 100, 1.0)?;
    println!("N = {}, sigma = {}, tau = {:.4}", w.n, w.sigma, w.tau);
    println!("mu_hat = {:.5} = {:.4} sigma_mu", w.mu_hat, w.z);
    println!("p = {:.5}  (rejected: {})", w.p_value, w.rejected);
    println!("P(null | x) = {:.5}  (target met: {})", w.posterior_null, w.posterior_met);
    println!("smallest N tau^2 / sigma^2 = {:.1}", w.r_min);
    Ok(())
}
