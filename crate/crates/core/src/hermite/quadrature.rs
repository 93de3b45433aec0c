use nalgebra::{DMatrix, SymmetricEigen};

use super::eval::scaled_values;
use crate::{Error, Result};

/// Gauss-Hermite rule for the weight `e^{-x²}` on ℝ.
///
/// Besides the classical weights `wᵢ` the rule keeps `wᵢ e^{xᵢ²}`, which stays
/// O(1) at the outer nodes where `wᵢ` itself underflows. Transforms of
/// functions with Gaussian decay use the compensated weights.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    compensated: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `wᵢ e^{xᵢ²}`.
    pub fn compensated_weights(&self) -> &[f64] {
        &self.compensated
    }

    /// `Σ wᵢ g(xᵢ) ≈ ∫ g(x) e^{-x²} dx`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * g(x))
            .sum()
    }
}

/// n-point Gauss-Hermite rule, nodes ascending.
///
/// Golub-Welsch supplies starting nodes; each is polished by Newton steps on
/// `h_n` and the weights come from `wᵢ e^{xᵢ²} = 1 / Σ_{k<n} h_k(xᵢ)²`, which
/// keeps full relative accuracy for the tiny outer weights.
pub fn gauss_hermite_rule(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "quadrature order must be at least 1".into(),
        ));
    }
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = (k as f64 / 2.0).sqrt();
        jacobi[(k, k - 1)] = b;
        jacobi[(k - 1, k)] = b;
    }
    let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    nodes.sort_by(f64::total_cmp);

    let nf = n as f64;
    let mut compensated = vec![0.0; n];
    for (x, lam) in nodes.iter_mut().zip(compensated.iter_mut()) {
        for _ in 0..3 {
            let sv = scaled_values(n, *x);
            let deriv = (2.0 * nf).sqrt() * sv.mant[n - 1] - *x * sv.mant[n];
            if deriv == 0.0 {
                break;
            }
            let step = sv.mant[n] / deriv;
            *x -= step;
            if step.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let sv = scaled_values(n, *x);
        let sum: f64 = sv.mant[..n].iter().map(|m| m * m).sum();
        *lam = (-2.0 * sv.log_scale).exp() / sum;
    }

    // Enforce exact symmetry about the origin.
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        let l = 0.5 * (compensated[i] + compensated[j]);
        nodes[i] = -x;
        nodes[j] = x;
        compensated[i] = l;
        compensated[j] = l;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    let weights = nodes
        .iter()
        .zip(&compensated)
        .map(|(x, l)| l * (-x * x).exp())
        .collect();
    Ok(QuadratureRule {
        nodes,
        weights,
        compensated,
    })
}
