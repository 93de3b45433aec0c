use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coeff::index_weight;
use crate::{CoeffTensor, MultiIndex};

/// Upper end of the automatic block count.
pub const JMAX_CAP: usize = 64;

/// Log-weight `λ(β)` driving the block construction: the thresholds are
/// `e^{-2(N+1)(λ(α)+λ(β))}` and block `j` gets the weight `e^{jλ(β)}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BlockWeight {
    /// `λ(β) = |β|^{1/2s}` (Gelfand-Shilov).
    Exponential { s: f64 },
    /// `λ(β) = ln⟨β⟩` (Schwartz).
    Polynomial,
}

impl BlockWeight {
    pub fn log_weight(&self, beta: &MultiIndex) -> f64 {
        match *self {
            BlockWeight::Exponential { s } => index_weight(beta, s),
            BlockWeight::Polynomial => 0.5 * beta.euclidean().powi(2).ln_1p(),
        }
    }
}

/// `Θ_0, …, Θ_jmax` and the assignment of every column index to a block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    /// `Θ_N`, with −1 standing for the supremum over the empty set.
    pub theta: Vec<i64>,
    pub jmax: usize,
    /// `β ↦ j` with `β ∈ I_j`; indices left after block `jmax` sit in `jmax + 1`.
    pub blocks: BTreeMap<MultiIndex, usize>,
}

impl Partition {
    pub fn block_of(&self, beta: &MultiIndex) -> Option<usize> {
        self.blocks.get(beta).copied()
    }

    /// Every `β` of the box is assigned exactly once and `|β| ≤ Θ_j + j` holds
    /// for each `β ∈ I_j`, `j ≤ jmax`.
    pub fn laws_hold(&self, trunc: &[usize]) -> bool {
        let all = MultiIndex::box_indices(trunc);
        if self.blocks.len() != all.len() || !all.iter().all(|b| self.blocks.contains_key(b)) {
            return false;
        }
        if self.theta.iter().all(|&t| t < 0) {
            return true;
        }
        self.blocks.iter().all(|(beta, &j)| {
            j > self.jmax || (beta.modulus() as i64) <= self.theta[j] + j as i64
        })
    }
}

/// Smallest `N` at which the entry passes `|a| ≥ e^{-2(N+1)(λ(α)+λ(β))}`, if any up to `n_max`.
fn first_level(v: f64, lam: f64, n_max: usize) -> Option<usize> {
    (0..=n_max).find(|&n| v >= (-2.0 * (n as f64 + 1.0) * lam).exp())
}

fn thetas(a: &CoeffTensor, weight: BlockWeight, n_max: usize) -> Vec<i64> {
    let mut theta = vec![-1i64; n_max + 1];
    for (alpha, beta, v) in a.iter() {
        let lam = weight.log_weight(alpha) + weight.log_weight(beta);
        if let Some(n0) = first_level(v.norm(), lam, n_max) {
            let m = beta.modulus() as i64;
            for t in &mut theta[n0..] {
                *t = (*t).max(m);
            }
        }
    }
    theta
}

/// Block partition of the column indices of `a`.
pub fn partition_with(a: &CoeffTensor, weight: BlockWeight, jmax: usize) -> Partition {
    let jmax = jmax.max(1);
    let theta = thetas(a, weight, jmax);
    let box_idx = MultiIndex::box_indices(a.trunc_right());
    let blocks = box_idx
        .into_iter()
        .map(|beta| {
            let j = if a.is_empty() {
                1
            } else {
                let m = beta.modulus() as i64;
                (1..=jmax)
                    .find(|&j| m <= theta[j] + j as i64)
                    .unwrap_or(jmax + 1)
            };
            (beta, j)
        })
        .collect();
    Partition { theta, jmax, blocks }
}

/// Smallest `jmax` whose blocks cover the whole box without a residual block,
/// capped at [`JMAX_CAP`].
pub fn auto_jmax(a: &CoeffTensor, weight: BlockWeight) -> usize {
    let top = a.trunc_right().iter().sum::<usize>() as i64;
    let theta = thetas(a, weight, JMAX_CAP);
    (1..=JMAX_CAP)
        .find(|&j| theta[j] + j as i64 >= top)
        .unwrap_or(JMAX_CAP)
}

/// `Θ_N` partition with the exponential Gelfand-Shilov thresholds.
pub fn theta_partition(a: &CoeffTensor, s: f64, jmax: usize) -> Partition {
    partition_with(a, BlockWeight::Exponential { s }, jmax)
}
