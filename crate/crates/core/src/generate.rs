//! Test-data generators with known decay.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::index_weight;
use crate::weyl::{GridSymbol, PhaseGrid};
use crate::{CoeffTensor, Error, MultiIndex, Result};

/// Diagonal kernel `Σ_{n≤N} e^{-(2n+1)τ} h_n ⊗ h_n` (harmonic-oscillator heat kernel).
pub fn mehler(tau: f64, n: usize) -> Result<CoeffTensor> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::InvalidParameter(format!("Mehler τ must be positive, got {tau}")));
    }
    CoeffTensor::from_entries(
        vec![n],
        vec![n],
        (0..=n).map(|k| {
            let v = (-((2 * k + 1) as f64) * tau).exp();
            (MultiIndex::new(vec![k]), MultiIndex::new(vec![k]), Complex64::new(v, 0.0))
        }),
    )
}

/// Full-box tensor with `a_{α,β} = u_{α,β} e^{-r(|α|^{1/2s}+|β|^{1/2s})}`,
/// `u` uniform on the complex unit disk, drawn from a seeded ChaCha stream.
pub fn random_gs(dim: usize, n: usize, s: f64, r: f64, seed: u64) -> Result<CoeffTensor> {
    if dim == 0 || !(s >= 0.5) || !(r > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "random-gs needs dim >= 1, s >= 1/2 and r > 0 (got dim={dim}, s={s}, r={r})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trunc = vec![n; dim];
    let idx = MultiIndex::box_indices(&trunc);
    let mut entries = Vec::with_capacity(idx.len() * idx.len());
    for a in &idx {
        for b in &idx {
            let rad: f64 = rng.gen::<f64>().sqrt();
            let phi: f64 = 2.0 * PI * rng.gen::<f64>();
            let decay = (-r * (index_weight(a, s) + index_weight(b, s))).exp();
            entries.push((a.clone(), b.clone(), Complex64::from_polar(rad * decay, phi)));
        }
    }
    CoeffTensor::from_entries(trunc.clone(), trunc, entries)
}

/// Single entry 1 at `(α, β)`: the kernel `h_α ⊗ h_β`.
pub fn rank_one(alpha: MultiIndex, beta: MultiIndex, n: usize) -> Result<CoeffTensor> {
    let (dl, dr) = (alpha.dim(), beta.dim());
    CoeffTensor::from_entries(vec![n; dl], vec![n; dr], [(alpha, beta, Complex64::new(1.0, 0.0))])
}

/// Weyl symbol `2 e^{-(x²+ξ²)}` of the projection onto `h_0`.
pub fn projector_symbol(grid: PhaseGrid) -> GridSymbol {
    GridSymbol::from_fn(grid, |x, xi| Complex64::new(2.0 * (-(x * x + xi * xi)).exp(), 0.0))
}
