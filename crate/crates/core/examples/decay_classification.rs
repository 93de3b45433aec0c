//! Decay rate and heuristic space class of a few generated kernels.
//!
//! ```bash
//! cargo run --example decay_classification
//! ```

use kernel_factor::coeff::{check_bound, classify, estimate_decay, ClassMode};
use kernel_factor::generate::{mehler, random_gs};

fn main() -> kernel_factor::Result<()> {
    let inputs = [
        ("mehler tau=0.5", mehler(0.5, 64)?),
        ("mehler tau=2", mehler(2.0, 64)?),
        ("random-gs s=1 r=0.3", random_gs(1, 32, 1.0, 0.3, 11)?),
    ];
    for (name, a) in &inputs {
        let d = estimate_decay(a, 0.5)?;
        let c = classify(a, 0.5, ClassMode::Roumieu)?;
        println!("{name}: r_hat = {:.6}, bound = {:.4e}", d.r_hat, d.bound);
        println!("  class: {}", serde_json::to_string(&c.class).unwrap());
        for r in [0.25, 0.5, 1.0] {
            println!("  sup |a| e^(r w) at r = {r}: {:.4e}", check_bound(a, 0.5, r)?);
        }
    }
    Ok(())
}
