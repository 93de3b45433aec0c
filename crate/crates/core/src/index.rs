use std::fmt;

use serde::{Deserialize, Serialize};

/// Multi-index `α ∈ ℕ^d` labelling the tensor Hermite basis.
///
/// Ordering is lexicographic on the entries, which fixes the coefficient order
/// used by every transform and by serialization.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|α| = α₁ + … + α_d`.
    pub fn modulus(&self) -> usize {
        self.0.iter().sum()
    }

    /// Euclidean length of the index viewed as a point of `ℝ^d`.
    pub fn euclidean(&self) -> f64 {
        self.0.iter().map(|&a| (a * a) as f64).sum::<f64>().sqrt()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// Concatenation `(α, β)`.
    pub fn join(&self, other: &MultiIndex) -> MultiIndex {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        MultiIndex(v)
    }

    /// Splits into the leading `k` axes and the rest.
    pub fn split_at(&self, k: usize) -> (MultiIndex, MultiIndex) {
        let (a, b) = self.0.split_at(k);
        (MultiIndex(a.to_vec()), MultiIndex(b.to_vec()))
    }

    /// Entries sorted ascending; the representative of the permutation orbit.
    pub fn sorted(&self) -> MultiIndex {
        let mut v = self.0.clone();
        v.sort_unstable();
        MultiIndex(v)
    }

    /// True when every entry is at most the matching truncation.
    pub fn within(&self, trunc: &[usize]) -> bool {
        self.0.len() == trunc.len() && self.0.iter().zip(trunc).all(|(a, n)| a <= n)
    }

    /// All multi-indices of the box `0..=trunc[k]`, in lexicographic order.
    pub fn box_indices(trunc: &[usize]) -> Vec<MultiIndex> {
        let total: usize = trunc.iter().map(|n| n + 1).product();
        let mut out = Vec::with_capacity(total);
        let mut cur = vec![0usize; trunc.len()];
        for _ in 0..total {
            out.push(MultiIndex(cur.clone()));
            for k in (0..cur.len()).rev() {
                if cur[k] < trunc[k] {
                    cur[k] += 1;
                    break;
                }
                cur[k] = 0;
            }
        }
        out
    }

    /// Position of the index in [`MultiIndex::box_indices`] order.
    pub fn box_position(&self, trunc: &[usize]) -> usize {
        self.0
            .iter()
            .zip(trunc)
            .fold(0, |acc, (a, n)| acc * (n + 1) + a)
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(v: Vec<usize>) -> Self {
        MultiIndex(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}
