//! Sparse Hermite coefficient tensors of operator kernels.
//!
//! A kernel `K(x, y) = Σ a_{α,β} h_α(x) h_β(y)` on `ℝ^{d_left} × ℝ^{d_right}`
//! is stored as the map `(α, β) ↦ a_{α,β}` restricted to a truncation box.
//! Because the `h_γ` are orthonormal, `∫ K₂(x, z) K₁(z, y) dz` has coefficients
//! `Σ_γ b_{α,γ} c_{γ,β}`, so operator composition is a sparse matrix product.

mod decay;

pub use decay::{
    check_bound, classify, estimate_decay, index_weight, pointwise_decay_check, ClassDiagnostics,
    ClassMode, Classification, DecayProfile, EnvelopeFit, PointwiseDecay, SpaceClass,
};

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, MultiIndex, Result};

/// Entries smaller than this are not stored.
pub const DROP_BELOW: f64 = 1e-300;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TensorRepr", into = "TensorRepr")]
pub struct CoeffTensor {
    trunc_left: Vec<usize>,
    trunc_right: Vec<usize>,
    entries: BTreeMap<(MultiIndex, MultiIndex), Complex64>,
}

impl CoeffTensor {
    /// Empty (zero) tensor on the given truncation boxes.
    pub fn zeros(trunc_left: Vec<usize>, trunc_right: Vec<usize>) -> Result<Self> {
        if trunc_left.is_empty() || trunc_right.is_empty() {
            return Err(Error::InvalidParameter(
                "kernel dimensions must be at least 1".into(),
            ));
        }
        Ok(CoeffTensor {
            trunc_left,
            trunc_right,
            entries: BTreeMap::new(),
        })
    }

    /// Builds a tensor from `(α, β, a_{α,β})` triples. Repeated keys are summed;
    /// entries below [`DROP_BELOW`] in magnitude are dropped.
    pub fn from_entries<I>(trunc_left: Vec<usize>, trunc_right: Vec<usize>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, MultiIndex, Complex64)>,
    {
        let mut t = CoeffTensor::zeros(trunc_left, trunc_right)?;
        for (alpha, beta, v) in entries {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "non-finite coefficient at {alpha},{beta}"
                )));
            }
            if !alpha.within(&t.trunc_left) || !beta.within(&t.trunc_right) {
                return Err(Error::DimensionMismatch(format!(
                    "entry {alpha},{beta} lies outside the truncation box {:?} x {:?}",
                    t.trunc_left, t.trunc_right
                )));
            }
            *t.entries.entry((alpha, beta)).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        t.entries.retain(|_, v| v.norm() >= DROP_BELOW);
        Ok(t)
    }

    /// Identity-diagonal `δ_{α,β}` on the box `trunc`.
    pub fn identity(trunc: Vec<usize>) -> Result<Self> {
        let idx = MultiIndex::box_indices(&trunc);
        CoeffTensor::from_entries(
            trunc.clone(),
            trunc,
            idx.into_iter().map(|a| (a.clone(), a, Complex64::new(1.0, 0.0))),
        )
    }

    pub fn d_left(&self) -> usize {
        self.trunc_left.len()
    }

    pub fn d_right(&self) -> usize {
        self.trunc_right.len()
    }

    pub fn trunc_left(&self) -> &[usize] {
        &self.trunc_left
    }

    pub fn trunc_right(&self) -> &[usize] {
        &self.trunc_right
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, alpha: &MultiIndex, beta: &MultiIndex) -> Complex64 {
        self.entries
            .get(&(alpha.clone(), beta.clone()))
            .copied()
            .unwrap_or_default()
    }

    /// Entries in lexicographic `(α, β)` order.
    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &MultiIndex, Complex64)> {
        self.entries.iter().map(|((a, b), v)| (a, b, *v))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Same tensor with entries below `rel_tol · max|a|` removed.
    pub fn pruned(&self, rel_tol: f64) -> CoeffTensor {
        let cut = rel_tol * self.max_abs();
        let mut out = self.clone();
        out.entries.retain(|_, v| v.norm() >= cut);
        out
    }

    /// Restriction to smaller truncation boxes (nested-truncation diagnostics).
    pub fn restricted(&self, trunc_left: Vec<usize>, trunc_right: Vec<usize>) -> Result<CoeffTensor> {
        if trunc_left.len() != self.d_left() || trunc_right.len() != self.d_right() {
            return Err(Error::DimensionMismatch(
                "restriction must keep the kernel dimensions".into(),
            ));
        }
        let entries = self
            .iter()
            .filter(|(a, b, _)| a.within(&trunc_left) && b.within(&trunc_right))
            .map(|(a, b, v)| (a.clone(), b.clone(), v))
            .collect::<Vec<_>>();
        CoeffTensor::from_entries(trunc_left, trunc_right, entries)
    }

    /// Kernel of the adjoint operator: `ā_{β,α}` with the dimensions swapped.
    pub fn adjoint(&self) -> CoeffTensor {
        CoeffTensor {
            trunc_left: self.trunc_right.clone(),
            trunc_right: self.trunc_left.clone(),
            entries: self
                .entries
                .iter()
                .map(|((a, b), v)| ((b.clone(), a.clone()), v.conj()))
                .collect(),
        }
    }

    /// Coefficient matrix over the full truncation boxes (rows `α`, columns `β`,
    /// both in lexicographic order).
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let rows: usize = self.trunc_left.iter().map(|n| n + 1).product();
        let cols: usize = self.trunc_right.iter().map(|n| n + 1).product();
        let mut m = DMatrix::zeros(rows, cols);
        for (a, b, v) in self.iter() {
            m[(a.box_position(&self.trunc_left), b.box_position(&self.trunc_right))] = v;
        }
        m
    }

    /// Canonical JSON text.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Coefficients of the composition `T₂ ∘ T₁`: `Σ_γ b_{α,γ} c_{γ,β}`.
pub fn matmul(a2: &CoeffTensor, a1: &CoeffTensor) -> Result<CoeffTensor> {
    if a2.trunc_right != a1.trunc_left {
        return Err(Error::DimensionMismatch(format!(
            "cannot compose: inner boxes {:?} and {:?} differ",
            a2.trunc_right, a1.trunc_left
        )));
    }
    let mut by_row: BTreeMap<&MultiIndex, Vec<(&MultiIndex, Complex64)>> = BTreeMap::new();
    for (g, b, v) in a1.iter() {
        by_row.entry(g).or_default().push((b, v));
    }
    let mut acc: BTreeMap<(MultiIndex, MultiIndex), Complex64> = BTreeMap::new();
    for (a, g, v) in a2.iter() {
        if let Some(row) = by_row.get(g) {
            for &(b, w) in row {
                *acc.entry((a.clone(), b.clone())).or_default() += v * w;
            }
        }
    }
    acc.retain(|_, v| v.norm() >= DROP_BELOW);
    Ok(CoeffTensor {
        trunc_left: a2.trunc_left.clone(),
        trunc_right: a1.trunc_right.clone(),
        entries: acc,
    })
}

/// Largest entrywise deviation of `approx` from `exact`, relative to each
/// exact entry; entries absent from `exact` are measured against `max|exact|`.
pub fn reconstruction_error(exact: &CoeffTensor, approx: &CoeffTensor) -> f64 {
    let scale = exact.max_abs();
    let mut worst: f64 = 0.0;
    for (a, b, v) in exact.iter() {
        let w = approx.get(a, b);
        worst = worst.max((w - v).norm() / v.norm());
    }
    for (a, b, w) in approx.iter() {
        if exact.get(a, b) == Complex64::default() {
            let rel = if scale > 0.0 { w.norm() / scale } else { f64::INFINITY };
            worst = worst.max(rel);
        }
    }
    worst
}

#[derive(Serialize, Deserialize)]
struct TensorRepr {
    d_left: usize,
    d_right: usize,
    trunc_left: Vec<usize>,
    trunc_right: Vec<usize>,
    entries: Vec<(Vec<usize>, Vec<usize>, f64, f64)>,
}

impl From<CoeffTensor> for TensorRepr {
    fn from(t: CoeffTensor) -> Self {
        TensorRepr {
            d_left: t.d_left(),
            d_right: t.d_right(),
            entries: t
                .entries
                .into_iter()
                .map(|((a, b), v)| (a.entries().to_vec(), b.entries().to_vec(), v.re, v.im))
                .collect(),
            trunc_left: t.trunc_left,
            trunc_right: t.trunc_right,
        }
    }
}

impl TryFrom<TensorRepr> for CoeffTensor {
    type Error = Error;

    fn try_from(r: TensorRepr) -> Result<Self> {
        if r.d_left != r.trunc_left.len() || r.d_right != r.trunc_right.len() {
            return Err(Error::DimensionMismatch(
                "d_left/d_right disagree with the truncation arrays".into(),
            ));
        }
        let n = r.entries.len();
        let t = CoeffTensor::from_entries(
            r.trunc_left,
            r.trunc_right,
            r.entries
                .into_iter()
                .map(|(a, b, re, im)| (MultiIndex::new(a), MultiIndex::new(b), Complex64::new(re, im))),
        )?;
        if t.len() != n {
            return Err(Error::InvalidParameter(
                "tensor file contains duplicate or sub-threshold entries".into(),
            ));
        }
        Ok(t)
    }
}
