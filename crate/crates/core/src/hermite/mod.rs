//! Hermite functions, Gauss-Hermite quadrature and Hermite transforms.
//!
//! `h_n(x) = π^{-1/4} (2ⁿ n!)^{-1/2} Hₙ(x) e^{-x²/2}` is the L²-normalized
//! Hermite function; tensor products `h_α = h_{α₁} ⊗ … ⊗ h_{α_d}` form an
//! orthonormal basis of `L²(ℝ^d)`.

mod eval;
mod quadrature;
mod transform;

pub use eval::{hermite_eval, hermite_eval_multi, hermite_values};
pub use quadrature::{gauss_hermite_rule, QuadratureRule};
pub use transform::{analyze, analyze_samples, fourier_coeffs, synthesize};

use crate::MultiIndex;

/// Tensor Hermite basis of dimension `dim` truncated at order `trunc` per axis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteBasis {
    dim: usize,
    trunc: usize,
}

impl HermiteBasis {
    pub fn new(dim: usize, trunc: usize) -> crate::Result<Self> {
        if dim == 0 {
            return Err(crate::Error::InvalidParameter(
                "basis dimension must be at least 1".into(),
            ));
        }
        Ok(HermiteBasis { dim, trunc })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn per_axis(&self) -> usize {
        self.trunc + 1
    }

    pub fn len(&self) -> usize {
        self.per_axis().pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn truncs(&self) -> Vec<usize> {
        vec![self.trunc; self.dim]
    }

    /// Basis labels in coefficient order.
    pub fn indices(&self) -> Vec<MultiIndex> {
        MultiIndex::box_indices(&self.truncs())
    }

    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        let t = self.truncs();
        alpha.within(&t).then(|| alpha.box_position(&t))
    }
}
