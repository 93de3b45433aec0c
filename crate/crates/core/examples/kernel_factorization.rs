//! `A = B ∘ C` with `C` a positive Hermite diagonal, on every branch.
//!
//! ```bash
//! cargo run --example kernel_factorization
//! ```

use kernel_factor::coeff::reconstruction_error;
use kernel_factor::factorize::{factorize, is_positive_hermite_diagonal, Branch, FactorOptions};
use kernel_factor::generate::random_gs;

fn main() -> kernel_factor::Result<()> {
    let a = random_gs(2, 6, 1.0, 0.6, 3)?;
    for (branch, s) in [(Branch::Roumieu, 1.0), (Branch::Beurling, 1.0), (Branch::Schwartz, 1.0)] {
        let mut opts = FactorOptions::new(branch, s);
        if branch == Branch::Roumieu {
            opts.r = Some(0.6);
        }
        let pair = factorize(&a, &opts)?;
        let err = reconstruction_error(&a, &pair.product()?);
        let (positive, diag) = is_positive_hermite_diagonal(&pair.c);
        let smallest = diag.eigenvalues.values().cloned().fold(f64::INFINITY, f64::min);
        println!(
            "{branch:?}: error {err:.2e}, diagonal positive {positive}, smallest eigenvalue {smallest:.3e}, max |b| {:.3e}",
            pair.b.max_abs()
        );
    }

    // Inner dimension 3 > 2: both factors pick up an h_0 tensor factor.
    let mut opts = FactorOptions::new(Branch::Schwartz, 1.0);
    opts.d0 = Some(3);
    let ext = factorize(&a, &opts)?;
    println!(
        "d0 = 3: B is {}x{}, tensor order {:?}, error {:.2e}",
        ext.b.d_left(),
        ext.b.d_right(),
        ext.tensor_order,
        reconstruction_error(&a, &ext.product()?)
    );
    Ok(())
}
