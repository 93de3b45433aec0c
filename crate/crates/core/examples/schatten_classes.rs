//! Singular values, Schatten quasi-norms and the Hölder inequality between
//! weighted Hermite spaces.
//!
//! ```bash
//! cargo run --example schatten_classes
//! ```

use kernel_factor::generate::mehler;
use kernel_factor::schatten::{
    holder_check, hs_identity_check, operator_matrix, schatten_norm, singular_values, HermiteWeight, SchattenOrder,
};

fn main() -> kernel_factor::Result<()> {
    let a = mehler(0.5, 64)?;
    let unit = HermiteWeight::unit(1)?;
    let sigma = singular_values(&operator_matrix(&a, &unit, &unit)?);
    for p in [0.1, 0.5, 1.0, 2.0] {
        println!("|T|_I{p} = {:.10}", schatten_norm(&sigma, SchattenOrder::new(p)?));
    }
    println!("|T|_Iinf = {:.10}", schatten_norm(&sigma, SchattenOrder::Infinity));

    // Sobolev-type weights (1 + n)^k.
    let w = |k: i32| HermiteWeight::from_fn(1, 64, move |a| (1.0 + a.modulus() as f64).powi(k));
    let (w1, w2, w3) = (w(-2)?, w(1)?, w(3)?);
    let hs = hs_identity_check(&a, &w1, &w2)?;
    println!("HS identity: spectrum {:.12e}, kernel {:.12e}", hs.lhs, hs.rhs);
    let h = holder_check(&a, &a, (&w1, &w2, &w3), SchattenOrder::Finite(4.0), SchattenOrder::Finite(4.0 / 3.0))?;
    println!("Hoelder (4, 4/3): {:.6e} <= {:.6e}: {}", h.lhs, h.rhs, h.pass);
    Ok(())
}
