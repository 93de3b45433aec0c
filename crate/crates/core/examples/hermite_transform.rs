//! Hermite coefficients of a shifted Gaussian by Gauss-Hermite quadrature,
//! then resynthesis on a few points.
//!
//! ```bash
//! cargo run --example hermite_transform
//! ```

use kernel_factor::hermite::{analyze, gauss_hermite_rule, synthesize, HermiteBasis};
use kernel_factor::Complex64;

fn main() -> kernel_factor::Result<()> {
    let basis = HermiteBasis::new(1, 40)?;
    let rule = gauss_hermite_rule(64)?;
    let f = |x: &[f64]| Complex64::new((-(x[0] - 0.7).powi(2)).exp(), 0.0);
    let c = analyze(f, &basis, &rule)?;

    for (n, v) in c.iter().enumerate().take(8) {
        println!("c_{n:<2} = {:+.12}", v.re);
    }
    let points: Vec<Vec<f64>> = [-2.0, -0.5, 0.0, 0.7, 1.5].iter().map(|&x| vec![x]).collect();
    let back = synthesize(&c, &basis, &points)?;
    for (p, v) in points.iter().zip(back) {
        let exact = f(p).re;
        println!("x = {:+.2}: synthesized {:.12}, exact {:.12}", p[0], v.re, exact);
    }
    Ok(())
}
