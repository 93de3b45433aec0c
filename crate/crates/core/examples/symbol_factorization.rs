//! Factors a Weyl symbol as `a = a1 # a2` through its Hermite coefficients.
//!
//! ```bash
//! cargo run --release --example symbol_factorization
//! ```

use kernel_factor::factorize::Branch;
use kernel_factor::generate::mehler;
use kernel_factor::weyl::{coeffs_to_kernel_grid, factorize_symbol, kernel_to_symbol, sharp, PhaseGrid};

fn main() -> kernel_factor::Result<()> {
    let grid = PhaseGrid::square(-12.0, 12.0, 384)?;
    let a = kernel_to_symbol(&coeffs_to_kernel_grid(&mehler(0.5, 64)?, &grid)?, 0.5)?;
    let f = factorize_symbol(&a, 0.5, 0.5, Branch::Roumieu)?;
    println!("coefficients kept: {}", f.coeffs.len());
    println!("max |a1| = {:.4e}, max |a2| = {:.4e}", f.a1.max_abs(), f.a2.max_abs());
    println!("sharp(a1, a2) - a: {:.2e}", sharp(&f.a1, &f.a2, 0.5)?.max_diff(&a)?);
    Ok(())
}
