//! Splits the Mehler kernel into five factors and fits its singular values.
//!
//! ```bash
//! cargo run --example factor_chain
//! ```

use kernel_factor::coeff::reconstruction_error;
use kernel_factor::factorize::{factor_chain, Branch};
use kernel_factor::generate::mehler;
use kernel_factor::schatten::{decay_fit, operator_matrix, singular_values, tail_ratio, HermiteWeight};

fn main() -> kernel_factor::Result<()> {
    let a = mehler(0.5, 64)?;
    let chain = factor_chain(&a, 0.5, 5, Branch::Roumieu)?;
    let product = chain.product()?;
    println!("{} factors, reconstruction error {:.2e}", chain.factors.len(), reconstruction_error(&a, &product));
    for (k, d) in chain.decay.iter().enumerate() {
        if let Some(d) = d {
            println!("  K{}: r_hat = {:.6}", chain.factors.len() - k, d.r_hat);
        }
    }

    let unit = HermiteWeight::unit(1)?;
    let sigma = singular_values(&operator_matrix(&product, &unit, &unit)?);
    let fit = decay_fit(&sigma, 0.5)?;
    println!("sigma_j ~ {:.4} exp(-{:.6} j), r^2 = {:.8}, {} values", fit.c, fit.rho, fit.r_squared, fit.n_used);
    println!("tail ratio of sigma^0.1: {:.4}", tail_ratio(&sigma, 0.1)?);
    Ok(())
}
