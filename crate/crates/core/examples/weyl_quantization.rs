//! Weyl symbol of the `h_0` projection: kernel, Kohn-Nirenberg symbol and `a # a = a`.
//!
//! ```bash
//! cargo run --example weyl_quantization
//! ```

use std::f64::consts::PI;

use kernel_factor::generate::projector_symbol;
use kernel_factor::weyl::{change_quantization, sharp, symbol_to_kernel, GridKernel, PhaseGrid};
use kernel_factor::Complex64;

fn main() -> kernel_factor::Result<()> {
    let grid = PhaseGrid::default();
    let a = projector_symbol(grid);

    let k = symbol_to_kernel(&a, 0.5)?;
    let exact = GridKernel::from_fn(grid, |x, y| Complex64::new(PI.powf(-0.5) * (-(x * x + y * y) / 2.0).exp(), 0.0));
    println!("kernel vs h0 x h0: {:.2e}", k.max_diff(&exact)?);

    let kn = change_quantization(&a, 0.5, 0.0)?;
    let n = grid.axis1.n;
    let (i, j) = (n / 2 + 8, n / 2 - 12);
    println!(
        "Kohn-Nirenberg symbol at (x, xi) = ({}, {}): {:.6}",
        grid.axis1.point(i),
        grid.axis2.point(j),
        kn.at(i, j)
    );

    let square = sharp(&a, &a, 0.5)?;
    println!("a # a - a: {:.2e}", square.max_diff(&a)?);
    Ok(())
}
