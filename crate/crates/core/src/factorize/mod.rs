//! Constructive decomposition `T = T₂ ∘ T₁` of operators with rapidly
//! decaying Hermite coefficients.
//!
//! All three branches put the positive Hermite diagonal on the right:
//! `C = diag(c_β)` and `B = A · diag(1/c_β)`, so `matmul(B, C) = A` up to one
//! rounding per factor. The branches differ only in how the diagonal is chosen:
//!
//! * Roumieu (`𝒮_s`): `c_β = e^{-r|β|^{1/2s}/2}` for a fixed rate `r`;
//! * Beurling (`Σ_s`): `c_β = e^{-j|β|^{1/2s}}` for `β` in block `I_j` of the
//!   `Θ_N` partition, so that `B` and `C` keep every exponential rate;
//! * Schwartz: as Beurling with `⟨β⟩^{-j}` in place of `e^{-j|β|^{1/2s}}`.

mod chain;
mod partition;

pub use chain::{factor_chain, FactorChain};
pub use partition::{auto_jmax, partition_with, theta_partition, BlockWeight, Partition, JMAX_CAP};

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coeff::{estimate_decay, index_weight, matmul, reconstruction_error, DecayProfile};
use crate::{CoeffTensor, Error, MultiIndex, Result};

/// Imaginary parts and negative eigenvalues up to this size still count as
/// real non-negative.
pub const POSITIVITY_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Schwartz,
    Roumieu,
    Beurling,
}

/// Which factor carries the positive Hermite diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagonalSide {
    /// `C` (the usual construction, `T₁` diagonal).
    Right,
    /// `B` (obtained through adjoints when the inner dimension follows `d₂`).
    Left,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FactorParams {
    Rate { s: f64, r: f64 },
    Blocks {
        s: Option<f64>,
        jmax: usize,
        theta: Vec<i64>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorPair {
    pub branch: Branch,
    pub params: FactorParams,
    pub d0: usize,
    pub diagonal: DiagonalSide,
    /// Hermite order of the extra factor `g` after [`extend_inner_dim`].
    pub tensor_order: Option<MultiIndex>,
    #[serde(rename = "B")]
    pub b: CoeffTensor,
    #[serde(rename = "C")]
    pub c: CoeffTensor,
}

impl FactorPair {
    pub fn product(&self) -> Result<CoeffTensor> {
        matmul(&self.b, &self.c)
    }

    /// `A* = C* B*`: swaps the roles of the factors.
    pub fn adjoint(&self) -> FactorPair {
        FactorPair {
            branch: self.branch,
            params: self.params.clone(),
            d0: self.d0,
            diagonal: match self.diagonal {
                DiagonalSide::Right => DiagonalSide::Left,
                DiagonalSide::Left => DiagonalSide::Right,
            },
            tensor_order: self.tensor_order.clone(),
            b: self.c.adjoint(),
            c: self.b.adjoint(),
        }
    }

    pub fn diagonal_factor(&self) -> &CoeffTensor {
        match self.diagonal {
            DiagonalSide::Right => &self.c,
            DiagonalSide::Left => &self.b,
        }
    }
}

/// Splits `A` against a diagonal given by `log_c(β)`: `c_β = e^{-log_c(β)}`,
/// `b_{α,β} = a_{α,β} e^{log_c(β)}`.
fn split_diagonal<F>(a: &CoeffTensor, log_c: F) -> Result<(CoeffTensor, CoeffTensor)>
where
    F: Fn(&MultiIndex) -> f64,
{
    let box_idx = MultiIndex::box_indices(a.trunc_right());
    let logs: BTreeMap<&MultiIndex, f64> = box_idx.iter().map(|b| (b, log_c(b))).collect();
    let b_entries = a.iter().map(|(alpha, beta, v)| {
        let l = logs[beta];
        let grow = l.exp();
        let w = if grow.is_finite() {
            v * grow
        } else {
            Complex64::from_polar((v.norm().ln() + l).exp(), v.arg())
        };
        (alpha.clone(), beta.clone(), w)
    });
    let b = CoeffTensor::from_entries(a.trunc_left().to_vec(), a.trunc_right().to_vec(), b_entries)?;
    let c = CoeffTensor::from_entries(
        a.trunc_right().to_vec(),
        a.trunc_right().to_vec(),
        box_idx
            .iter()
            .map(|beta| (beta.clone(), beta.clone(), Complex64::new((-logs[beta]).exp(), 0.0))),
    )?;
    Ok((b, c))
}

fn check_s(s: f64) -> Result<()> {
    if !(s >= 0.5) || !s.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Gelfand-Shilov index must satisfy s >= 1/2, got {s}"
        )));
    }
    Ok(())
}

/// `b_{α,β} = a_{α,β} e^{r|β|^{1/2s}/2}`, `c_{α,β} = δ_{α,β} e^{-r|α|^{1/2s}/2}`.
pub fn factorize_roumieu(a: &CoeffTensor, s: f64, r: f64) -> Result<FactorPair> {
    check_s(s)?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("rate r must be positive and finite, got {r}")));
    }
    let (b, c) = split_diagonal(a, |beta| 0.5 * r * index_weight(beta, s))?;
    Ok(FactorPair {
        branch: Branch::Roumieu,
        params: FactorParams::Rate { s, r },
        d0: a.d_right(),
        diagonal: DiagonalSide::Right,
        tensor_order: None,
        b,
        c,
    })
}

/// Rate used by the Roumieu branch when none is given: the conservative
/// `r̂` of [`estimate_decay`], or 1 when only the `(0,0)` entry exists.
pub fn default_rate(a: &CoeffTensor, s: f64) -> Result<f64> {
    let r_hat = estimate_decay(a, s)?.r_hat;
    if r_hat.is_infinite() {
        Ok(1.0)
    } else if r_hat > 0.0 {
        Ok(r_hat)
    } else {
        Err(Error::InvalidParameter(
            "coefficients show no positive exponential decay rate".into(),
        ))
    }
}

fn factorize_blocks(a: &CoeffTensor, weight: BlockWeight, jmax: usize, branch: Branch) -> Result<FactorPair> {
    if a.is_empty() {
        return Err(Error::ZeroTensor);
    }
    let part = partition_with(a, weight, jmax);
    let (b, c) = split_diagonal(a, |beta| {
        let j = part.block_of(beta).unwrap_or(jmax + 1) as f64;
        j * weight.log_weight(beta)
    })?;
    Ok(FactorPair {
        branch,
        params: FactorParams::Blocks {
            s: match weight {
                BlockWeight::Exponential { s } => Some(s),
                BlockWeight::Polynomial => None,
            },
            jmax: part.jmax,
            theta: part.theta,
        },
        d0: a.d_right(),
        diagonal: DiagonalSide::Right,
        tensor_order: None,
        b,
        c,
    })
}

/// Block construction with `b = a e^{j|β|^{1/2s}}`, `c = δ e^{-j|β|^{1/2s}}` on `I_j`,
/// using the smallest block count that covers the box.
pub fn factorize_beurling(a: &CoeffTensor, s: f64) -> Result<FactorPair> {
    check_s(s)?;
    if s <= 0.5 {
        return Err(Error::InvalidParameter(
            "the Beurling branch needs s > 1/2".into(),
        ));
    }
    let weight = BlockWeight::Exponential { s };
    factorize_blocks(a, weight, auto_jmax(a, weight), Branch::Beurling)
}

/// As [`factorize_beurling`] with an explicit block count.
pub fn factorize_beurling_with(a: &CoeffTensor, s: f64, jmax: usize) -> Result<FactorPair> {
    check_s(s)?;
    if s <= 0.5 {
        return Err(Error::InvalidParameter(
            "the Beurling branch needs s > 1/2".into(),
        ));
    }
    factorize_blocks(a, BlockWeight::Exponential { s }, jmax, Branch::Beurling)
}

/// Block construction with polynomial weights `⟨β⟩^j` and thresholds
/// `⟨α⟩^{-2(N+1)}⟨β⟩^{-2(N+1)}`. `jmax = None` picks the covering block count.
pub fn factorize_schwartz(a: &CoeffTensor, jmax: Option<usize>) -> Result<FactorPair> {
    let weight = BlockWeight::Polynomial;
    let jmax = jmax.unwrap_or_else(|| auto_jmax(a, weight));
    factorize_blocks(a, weight, jmax, Branch::Schwartz)
}

/// Tensors both factors with `h_0` in `d0 − d₀` extra inner variables:
/// `K₁(z, y) = K₀,₁(z₁, y) h_0(z₂)`, `K₂(x, z) = K₀,₂(x, z₁) h_0(z₂)`.
pub fn extend_inner_dim(pair: &FactorPair, d0: usize) -> Result<FactorPair> {
    if d0 <= pair.d0 {
        return Err(Error::InvalidParameter(format!(
            "inner dimension {d0} does not exceed the current {}",
            pair.d0
        )));
    }
    if pair.diagonal == DiagonalSide::Left {
        return Ok(extend_inner_dim(&pair.adjoint(), d0)?.adjoint());
    }
    let extra = d0 - pair.d0;
    let zeros = MultiIndex::zero(extra);
    let mut inner = pair.b.trunc_right().to_vec();
    inner.extend(std::iter::repeat_n(0, extra));
    let b = CoeffTensor::from_entries(
        pair.b.trunc_left().to_vec(),
        inner.clone(),
        pair.b.iter().map(|(a, g, v)| (a.clone(), g.join(&zeros), v)),
    )?;
    let c = CoeffTensor::from_entries(
        inner,
        pair.c.trunc_right().to_vec(),
        pair.c.iter().map(|(g, bb, v)| (g.join(&zeros), bb.clone(), v)),
    )?;
    let tensor_order = Some(match &pair.tensor_order {
        Some(t) => t.join(&zeros),
        None => zeros,
    });
    Ok(FactorPair {
        d0,
        tensor_order,
        b,
        c,
        ..pair.clone()
    })
}

/// Contracts the extra inner variables against `h_0`, undoing [`extend_inner_dim`].
pub fn project_inner_dim(pair: &FactorPair, d0: usize) -> Result<FactorPair> {
    if d0 >= pair.d0 {
        return Err(Error::InvalidParameter(format!(
            "target inner dimension {d0} is not below the current {}",
            pair.d0
        )));
    }
    if pair.diagonal == DiagonalSide::Left {
        return Ok(project_inner_dim(&pair.adjoint(), d0)?.adjoint());
    }
    let keep = |g: &MultiIndex| {
        let (head, tail) = g.split_at(d0);
        tail.is_zero().then_some(head)
    };
    let b = CoeffTensor::from_entries(
        pair.b.trunc_left().to_vec(),
        pair.b.trunc_right()[..d0].to_vec(),
        pair.b
            .iter()
            .filter_map(|(a, g, v)| keep(g).map(|h| (a.clone(), h, v))),
    )?;
    let c = CoeffTensor::from_entries(
        pair.c.trunc_left()[..d0].to_vec(),
        pair.c.trunc_right().to_vec(),
        pair.c
            .iter()
            .filter_map(|(g, bb, v)| keep(g).map(|h| (h, bb.clone(), v))),
    )?;
    let tensor_order = match &pair.tensor_order {
        Some(t) if t.dim() > pair.d0 - d0 => Some(t.split_at(t.dim() - (pair.d0 - d0)).0),
        _ => None,
    };
    Ok(FactorPair {
        d0,
        tensor_order,
        b,
        c,
        ..pair.clone()
    })
}

/// Eigenvalues of a Hermite diagonal operator `T₀ ⊗ g`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HermiteDiagonal {
    pub eigenvalues: BTreeMap<MultiIndex, f64>,
    /// Hermite order of `g` when the dimensions differ.
    pub tensor_order: Option<MultiIndex>,
}

/// True iff every stored entry is diagonal (after stripping a fixed-order
/// Hermite factor on the larger side) with a real eigenvalue `≥ −1e-14`.
pub fn is_positive_hermite_diagonal(c: &CoeffTensor) -> (bool, HermiteDiagonal) {
    let core = c.d_left().min(c.d_right());
    let mut diag = HermiteDiagonal::default();
    let mut ok = true;
    for (alpha, beta, v) in c.iter() {
        let (a_core, a_extra) = alpha.split_at(core.min(alpha.dim()));
        let (b_core, b_extra) = beta.split_at(core.min(beta.dim()));
        let extra = if a_extra.dim() > 0 { a_extra } else { b_extra };
        if extra.dim() > 0 {
            match &diag.tensor_order {
                None => diag.tensor_order = Some(extra),
                Some(t) if *t == extra => {}
                Some(_) => ok = false,
            }
        }
        if a_core != b_core || v.im.abs() > POSITIVITY_TOL || v.re < -POSITIVITY_TOL {
            ok = false;
        }
        diag.eigenvalues.insert(a_core, v.re);
    }
    (ok, diag)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorOptions {
    pub branch: Branch,
    pub s: f64,
    /// Roumieu rate; defaults to [`default_rate`].
    pub r: Option<f64>,
    /// Block count for the Schwartz/Beurling branches; defaults to covering.
    pub jmax: Option<usize>,
    /// Inner dimension; defaults to `d_right`.
    pub d0: Option<usize>,
}

impl FactorOptions {
    pub fn new(branch: Branch, s: f64) -> Self {
        FactorOptions {
            branch,
            s,
            r: None,
            jmax: None,
            d0: None,
        }
    }
}

fn factorize_same_dim(a: &CoeffTensor, opts: &FactorOptions) -> Result<FactorPair> {
    match opts.branch {
        Branch::Roumieu => {
            if a.is_empty() {
                return Err(Error::ZeroTensor);
            }
            let r = match opts.r {
                Some(r) => r,
                None => default_rate(a, opts.s)?,
            };
            factorize_roumieu(a, opts.s, r)
        }
        Branch::Beurling => match opts.jmax {
            Some(j) => factorize_beurling_with(a, opts.s, j),
            None => factorize_beurling(a, opts.s),
        },
        Branch::Schwartz => factorize_schwartz(a, opts.jmax),
    }
}

/// Full dispatcher: any inner dimension `d0 ≥ min(d₁, d₂)`. For `d0 < d₁` the
/// construction runs on the adjoint and the pair is adjoined back, which moves
/// the positive diagonal to the left factor.
pub fn factorize(a: &CoeffTensor, opts: &FactorOptions) -> Result<FactorPair> {
    let d1 = a.d_right();
    let d2 = a.d_left();
    let d0 = opts.d0.unwrap_or(d1);
    if d0 >= d1 {
        let pair = factorize_same_dim(a, opts)?;
        if d0 > d1 {
            extend_inner_dim(&pair, d0)
        } else {
            Ok(pair)
        }
    } else if d0 >= d2 {
        let mut pair = factorize_same_dim(&a.adjoint(), opts)?;
        if d0 > d2 {
            pair = extend_inner_dim(&pair, d0)?;
        }
        Ok(pair.adjoint())
    } else {
        Err(Error::InvalidParameter(format!(
            "inner dimension {d0} is below min(d1, d2) = {}",
            d1.min(d2)
        )))
    }
}

/// Post-hoc checks attached to a factorization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub reconstruction_error: f64,
    pub positive_diagonal: bool,
    pub decay: BTreeMap<String, DecayProfile>,
}

pub fn verify_pair(a: &CoeffTensor, pair: &FactorPair, s: f64) -> Result<Verification> {
    let product = pair.product()?;
    let mut decay = BTreeMap::new();
    for (name, t) in [("B", &pair.b), ("C", &pair.c)] {
        if !t.is_empty() {
            decay.insert(name.to_string(), estimate_decay(t, s)?);
        }
    }
    Ok(Verification {
        reconstruction_error: reconstruction_error(a, &product),
        positive_diagonal: is_positive_hermite_diagonal(pair.diagonal_factor()).0,
        decay,
    })
}
