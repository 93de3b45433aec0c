use serde::{Deserialize, Serialize};

use super::{factorize, Branch, FactorOptions};
use crate::coeff::{estimate_decay, matmul, DecayProfile};
use crate::{CoeffTensor, Error, Result};

/// `A = K_N ∘ ⋯ ∘ K_1`, stored left to right.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorChain {
    pub branch: Branch,
    pub s: f64,
    pub factors: Vec<CoeffTensor>,
    /// Decay profile of each factor, `None` for an empty factor.
    pub decay: Vec<Option<DecayProfile>>,
}

impl FactorChain {
    pub fn product(&self) -> Result<CoeffTensor> {
        let mut it = self.factors.iter().rev();
        let mut acc = it.next().cloned().ok_or(Error::ZeroTensor)?;
        for k in it {
            acc = matmul(k, &acc)?;
        }
        Ok(acc)
    }
}

/// Factorizes `A`, then repeatedly the left factor, until `n_factors` factors
/// exist. Every factor but the leftmost is a positive Hermite diagonal.
pub fn factor_chain(a: &CoeffTensor, s: f64, n_factors: usize, branch: Branch) -> Result<FactorChain> {
    if n_factors < 2 {
        return Err(Error::InvalidParameter(format!(
            "a chain needs at least 2 factors, got {n_factors}"
        )));
    }
    let opts = FactorOptions::new(branch, s);
    let mut right = Vec::with_capacity(n_factors - 1);
    let mut left = a.clone();
    for _ in 1..n_factors {
        let pair = factorize(&left, &opts)?;
        right.push(pair.c);
        left = pair.b;
    }
    let mut factors = vec![left];
    factors.extend(right.into_iter().rev());
    let decay = factors
        .iter()
        .map(|k| {
            if k.is_empty() {
                Ok(None)
            } else {
                estimate_decay(k, s).map(Some)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FactorChain {
        branch,
        s,
        factors,
        decay,
    })
}
