//! Weighted Hermite-type Hilbert spaces and Schatten-von Neumann classes.
//!
//! A space `ℋ` is described by positive weights `w_α = ‖h_α‖_ℋ`, so that
//! `h_α / w_α` is an orthonormal basis and `‖f‖_ℋ² = Σ |c_α|² w_α²`. Its dual
//! under the `L²` form carries the weights `1/w_α`. An operator with kernel
//! coefficients `a_{α,β}` from `ℋ₁` to `ℋ₂` then has the matrix
//! `M_{α,β} = w₂,α a_{α,β} / w₁,β` in the two orthonormal bases, and all
//! singular values are those of `M`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::hermite::HermiteBasis;
use crate::{CoeffTensor, Error, MultiIndex, Result};

/// Absolute slack in the inequality checks.
pub const CHECK_TOL: f64 = 1e-10;
/// Allowed gap between the SVD and Frobenius sides of the Hilbert-Schmidt identity.
pub const HS_TOL: f64 = 1e-12;
/// Singular values below `σ₁ · FIT_REL_FLOOR` are left out of [`decay_fit`].
pub const FIT_REL_FLOOR: f64 = 1e-13;
pub const FIT_ABS_FLOOR: f64 = 1e-250;
pub const FIT_MIN_POINTS: usize = 8;

/// Per-index weights of a Hermite-type space, symmetric under permutation of
/// the axes. Lookups go through the sorted multi-index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermiteWeight {
    dim: usize,
    weights: BTreeMap<MultiIndex, f64>,
    /// Weight of every index without an explicit entry.
    fill: Option<f64>,
}

fn check_positive(w: f64, what: &str) -> Result<()> {
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::InvalidParameter(format!("{what} must be positive and finite, got {w}")));
    }
    Ok(())
}

impl HermiteWeight {
    pub fn new<I>(dim: usize, weights: I, fill: Option<f64>) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, f64)>,
    {
        if dim == 0 {
            return Err(Error::InvalidParameter("weights need dimension >= 1".into()));
        }
        if let Some(f) = fill {
            check_positive(f, "fill weight")?;
        }
        let mut map = BTreeMap::new();
        for (alpha, w) in weights {
            if alpha.dim() != dim {
                return Err(Error::DimensionMismatch(format!("weight index {alpha} in a {dim}-dimensional space")));
            }
            check_positive(w, "weight")?;
            let key = alpha.sorted();
            if let Some(prev) = map.insert(key, w) {
                if prev != w {
                    return Err(Error::InvalidParameter(format!(
                        "weights must be invariant under permutation of the axes ({alpha})"
                    )));
                }
            }
        }
        Ok(HermiteWeight { dim, weights: map, fill })
    }

    /// `L²` itself.
    pub fn unit(dim: usize) -> Result<Self> {
        Self::new(dim, [], Some(1.0))
    }

    /// Weights `w(α)` on the box of per-axis truncation `trunc`.
    pub fn from_fn<F: Fn(&MultiIndex) -> f64>(dim: usize, trunc: usize, f: F) -> Result<Self> {
        let idx = MultiIndex::box_indices(&vec![trunc; dim]);
        Self::new(dim, idx.into_iter().map(|a| {
            let w = f(&a);
            (a, w)
        }), None)
    }

    /// Parses `{"[0,1]": 2.0, ...}` (keys may also be written `"0,1"`);
    /// indices not listed get weight 1.
    pub fn from_json(text: &str, dim: usize) -> Result<Self> {
        let raw: BTreeMap<String, f64> = serde_json::from_str(text)?;
        let mut entries = Vec::with_capacity(raw.len());
        for (key, w) in raw {
            let inner = key.trim().trim_start_matches('[').trim_end_matches(']');
            let parsed: std::result::Result<Vec<usize>, _> = inner.split(',').map(|p| p.trim().parse()).collect();
            let alpha = parsed.map_err(|_| Error::InvalidParameter(format!("bad multi-index key {key:?}")))?;
            entries.push((MultiIndex::new(alpha), w));
        }
        Self::new(dim, entries, Some(1.0))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, alpha: &MultiIndex) -> Result<f64> {
        if alpha.dim() != self.dim {
            return Err(Error::DimensionMismatch(format!("index {alpha} in a {}-dimensional space", self.dim)));
        }
        self.weights
            .get(&alpha.sorted())
            .copied()
            .or(self.fill)
            .ok_or_else(|| Error::MissingWeight(alpha.to_string()))
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        check_positive(c, "scale")?;
        Ok(HermiteWeight {
            dim: self.dim,
            weights: self.weights.iter().map(|(k, w)| (k.clone(), w * c)).collect(),
            fill: self.fill.map(|f| f * c),
        })
    }

    /// Weights of the dual space, `1/w_α`.
    pub fn dual(&self) -> Self {
        HermiteWeight {
            dim: self.dim,
            weights: self.weights.iter().map(|(k, w)| (k.clone(), 1.0 / w)).collect(),
            fill: self.fill.map(|f| 1.0 / f),
        }
    }
}

/// `‖f‖_ℋ = (Σ |c_α|² w_α²)^{1/2}` for coefficients in the order of `basis`.
pub fn space_norm(c: &[Complex64], basis: &HermiteBasis, w: &HermiteWeight) -> Result<f64> {
    if c.len() != basis.len() || basis.dim() != w.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for a basis of {} functions in dimension {}",
            c.len(),
            basis.len(),
            basis.dim()
        )));
    }
    let mut sum = 0.0;
    for (v, alpha) in c.iter().zip(basis.indices()) {
        sum += v.norm_sqr() * w.get(&alpha)?.powi(2);
    }
    Ok(sum.sqrt())
}

/// Matrix of an operator between two Hermite-type spaces in their orthonormal bases.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub rows: Vec<MultiIndex>,
    pub cols: Vec<MultiIndex>,
    pub values: DMatrix<Complex64>,
}

impl OperatorMatrix {
    /// `self ∘ right`.
    pub fn compose(&self, right: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.cols != right.rows {
            return Err(Error::DimensionMismatch("inner indices of the composition differ".into()));
        }
        Ok(OperatorMatrix {
            rows: self.rows.clone(),
            cols: right.cols.clone(),
            values: &self.values * &right.values,
        })
    }
}

/// `M_{α,β} = w₂,α a_{α,β} / w₁,β` over the truncation box of `a`, for `T: ℋ₁ → ℋ₂`.
pub fn operator_matrix(a: &CoeffTensor, w1: &HermiteWeight, w2: &HermiteWeight) -> Result<OperatorMatrix> {
    if w1.dim() != a.d_right() || w2.dim() != a.d_left() {
        return Err(Error::DimensionMismatch(format!(
            "weights of dimensions ({}, {}) for a {}x{} kernel",
            w2.dim(),
            w1.dim(),
            a.d_left(),
            a.d_right()
        )));
    }
    let rows = MultiIndex::box_indices(a.trunc_left());
    let cols = MultiIndex::box_indices(a.trunc_right());
    let wr = rows.iter().map(|r| w2.get(r)).collect::<Result<Vec<_>>>()?;
    let wc = cols.iter().map(|c| w1.get(c)).collect::<Result<Vec<_>>>()?;
    let mut values = DMatrix::zeros(rows.len(), cols.len());
    for (alpha, beta, v) in a.iter() {
        let i = alpha.box_position(a.trunc_left());
        let j = beta.box_position(a.trunc_right());
        values[(i, j)] = v * wr[i] / wc[j];
    }
    Ok(OperatorMatrix { rows, cols, values })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularSpectrum {
    pub sigma: Vec<f64>,
}

impl SingularSpectrum {
    pub fn new(mut sigma: Vec<f64>) -> Result<Self> {
        if sigma.iter().any(|s| !(*s >= 0.0 && s.is_finite())) {
            return Err(Error::InvalidParameter("singular values must be finite and non-negative".into()));
        }
        sigma.sort_by(|a, b| b.total_cmp(a));
        Ok(SingularSpectrum { sigma })
    }

    pub fn largest(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }
}

/// Singular values of a matrix with at most one non-zero per row and column.
fn monomial_singular_values(m: &DMatrix<Complex64>) -> Option<Vec<f64>> {
    let mut row_used = vec![false; m.nrows()];
    let mut out = Vec::new();
    for j in 0..m.ncols() {
        let mut found = None;
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            if v.re != 0.0 || v.im != 0.0 {
                if found.is_some() || row_used[i] {
                    return None;
                }
                found = Some(v.norm());
                row_used[i] = true;
            }
        }
        out.push(found.unwrap_or(0.0));
    }
    out.resize(m.nrows().min(m.ncols()), 0.0);
    Some(out)
}

/// Descending singular values; exact for diagonal (and monomial) matrices.
pub fn singular_values(m: &OperatorMatrix) -> SingularSpectrum {
    let mut sigma = match monomial_singular_values(&m.values) {
        Some(s) => s,
        None if m.values.is_empty() => Vec::new(),
        None => m.values.clone().singular_values().iter().map(|s| s.max(0.0)).collect(),
    };
    sigma.sort_by(|a, b| b.total_cmp(a));
    SingularSpectrum { sigma }
}

/// `p ∈ (0, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SchattenOrder {
    Finite(f64),
    Infinity,
}

impl SchattenOrder {
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(SchattenOrder::Infinity)
        } else if p > 0.0 && p.is_finite() {
            Ok(SchattenOrder::Finite(p))
        } else {
            Err(Error::InvalidParameter(format!("Schatten order must lie in (0, inf], got {p}")))
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            SchattenOrder::Finite(p) => p,
            SchattenOrder::Infinity => f64::INFINITY,
        }
    }

    /// `1/r = 1/p₁ + 1/p₂`.
    pub fn holder_exponent(p1: SchattenOrder, p2: SchattenOrder) -> SchattenOrder {
        let inv = 1.0 / p1.value() + 1.0 / p2.value();
        if inv == 0.0 {
            SchattenOrder::Infinity
        } else {
            SchattenOrder::Finite(1.0 / inv)
        }
    }
}

impl std::str::FromStr for SchattenOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(SchattenOrder::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad Schatten order {other:?}")))?;
                SchattenOrder::new(p)
            }
        }
    }
}

impl std::fmt::Display for SchattenOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SchattenOrder::Finite(p) => write!(f, "{p}"),
            SchattenOrder::Infinity => f.write_str("inf"),
        }
    }
}

/// `‖(σ_j)‖_{l^p}`, evaluated after scaling by `σ₁`.
pub fn schatten_norm(sigma: &SingularSpectrum, p: SchattenOrder) -> f64 {
    let top = sigma.largest();
    if top == 0.0 {
        return 0.0;
    }
    match p {
        SchattenOrder::Infinity => top,
        SchattenOrder::Finite(p) => {
            let sum: f64 = sigma.sigma.iter().map(|s| (s / top).powf(p)).sum();
            top * sum.powf(1.0 / p)
        }
    }
}

/// Outcome of one numerical inequality or identity check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    /// SHA-256 of the canonical JSON of the inputs.
    pub inputs_digest: String,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub pass: bool,
}

fn digest(inputs: &serde_json::Value) -> String {
    hex::encode(Sha256::digest(inputs.to_string().as_bytes()))
}

fn weight_json(w: &HermiteWeight) -> serde_json::Value {
    serde_json::to_value(w).unwrap_or(serde_json::Value::Null)
}

fn tensor_json(a: &CoeffTensor) -> serde_json::Value {
    serde_json::to_value(a).unwrap_or(serde_json::Value::Null)
}

/// `‖T₂T₁‖_{I_r} ≤ ‖T₁‖_{I_{p₁}} ‖T₂‖_{I_{p₂}}` for `T₁: ℋ₁ → ℋ₂`, `T₂: ℋ₂ → ℋ₃`
/// with `1/r = 1/p₁ + 1/p₂` and constant 1.
pub fn holder_check(
    a1: &CoeffTensor,
    a2: &CoeffTensor,
    weights: (&HermiteWeight, &HermiteWeight, &HermiteWeight),
    p1: SchattenOrder,
    p2: SchattenOrder,
) -> Result<CheckReport> {
    let (w1, w2, w3) = weights;
    if a2.trunc_right() != a1.trunc_left() {
        return Err(Error::DimensionMismatch("operators are not composable".into()));
    }
    let m1 = operator_matrix(a1, w1, w2)?;
    let m2 = operator_matrix(a2, w2, w3)?;
    let r = SchattenOrder::holder_exponent(p1, p2);
    let lhs = schatten_norm(&singular_values(&m2.compose(&m1)?), r);
    let rhs = schatten_norm(&singular_values(&m1), p1) * schatten_norm(&singular_values(&m2), p2);
    let inputs = serde_json::json!({
        "a1": tensor_json(a1), "a2": tensor_json(a2),
        "w1": weight_json(w1), "w2": weight_json(w2), "w3": weight_json(w3),
        "p1": p1.to_string(), "p2": p2.to_string(),
    });
    Ok(CheckReport {
        check: "hoelder".into(),
        inputs_digest: digest(&inputs),
        lhs,
        rhs,
        constant: 1.0,
        pass: lhs <= rhs + CHECK_TOL,
    })
}

/// `‖T‖_{I₂(ℋ₁,ℋ₂)}` from the spectrum against the weighted norm
/// `(Σ |a_{α,β}|² w₂,α² / w₁,β²)^{1/2}` of the kernel.
pub fn hs_identity_check(a: &CoeffTensor, w1: &HermiteWeight, w2: &HermiteWeight) -> Result<CheckReport> {
    let m = operator_matrix(a, w1, w2)?;
    let lhs = schatten_norm(&singular_values(&m), SchattenOrder::Finite(2.0));
    let mut sq = 0.0;
    for (alpha, beta, v) in a.iter() {
        sq += v.norm_sqr() * (w2.get(alpha)? / w1.get(beta)?).powi(2);
    }
    let rhs = sq.sqrt();
    let inputs = serde_json::json!({ "a": tensor_json(a), "w1": weight_json(w1), "w2": weight_json(w2) });
    Ok(CheckReport {
        check: "hs".into(),
        inputs_digest: digest(&inputs),
        lhs,
        rhs,
        constant: 1.0,
        pass: (lhs - rhs).abs() <= HS_TOL * rhs.max(1.0),
    })
}

fn max_ratio(num: &HermiteWeight, den: &HermiteWeight, idx: &[MultiIndex]) -> Result<f64> {
    let mut m = 0.0f64;
    for a in idx {
        m = m.max(num.get(a)? / den.get(a)?);
    }
    Ok(m)
}

/// `σ_j(𝒞₁, 𝒞₂, T) ≤ C_a C_b σ_j(ℬ₁, ℬ₂, T)` with `C_a = max w_{ℬ₁}/w_{𝒞₁}`
/// and `C_b = max w_{𝒞₂}/w_{ℬ₂}` over the truncation box. `lhs` is the
/// smallest constant that works, `rhs` is `C_a C_b`.
pub fn embedding_monotonicity_check(
    a: &CoeffTensor,
    inner: (&HermiteWeight, &HermiteWeight),
    outer: (&HermiteWeight, &HermiteWeight),
) -> Result<CheckReport> {
    let (b1, b2) = inner;
    let (c1, c2) = outer;
    let cols = MultiIndex::box_indices(a.trunc_right());
    let rows = MultiIndex::box_indices(a.trunc_left());
    let constant = max_ratio(b1, c1, &cols)? * max_ratio(c2, b2, &rows)?;
    let sb = singular_values(&operator_matrix(a, b1, b2)?);
    let sc = singular_values(&operator_matrix(a, c1, c2)?);
    let mut observed = 0.0f64;
    let mut pass = true;
    for (s_in, s_out) in sb.sigma.iter().zip(&sc.sigma) {
        pass &= *s_out <= constant * s_in + CHECK_TOL;
        if *s_in > 0.0 {
            observed = observed.max(s_out / s_in);
        }
    }
    let inputs = serde_json::json!({
        "a": tensor_json(a),
        "b1": weight_json(b1), "b2": weight_json(b2),
        "c1": weight_json(c1), "c2": weight_json(c2),
    });
    Ok(CheckReport {
        check: "embed".into(),
        inputs_digest: digest(&inputs),
        lhs: observed,
        rhs: constant,
        constant,
        pass,
    })
}

/// Least-squares fit `ln σ_j ≈ ln c − ρ j^{1/2s}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub c: f64,
    pub rho: f64,
    pub r_squared: f64,
    /// Leading singular values used (`σ_j > max(1e-250, σ₁·1e-13)`).
    pub n_used: usize,
}

fn reliable(sigma: &SingularSpectrum) -> &[f64] {
    let floor = FIT_ABS_FLOOR.max(sigma.largest() * FIT_REL_FLOOR);
    let n = sigma.sigma.iter().take_while(|s| **s > floor).count();
    &sigma.sigma[..n]
}

pub fn decay_fit(sigma: &SingularSpectrum, s: f64) -> Result<DecayFit> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!("decay index must be positive, got {s}")));
    }
    let used = reliable(sigma);
    if used.len() < FIT_MIN_POINTS {
        return Err(Error::DegenerateFit(format!(
            "{} singular values in the reliable range, need {FIT_MIN_POINTS}",
            used.len()
        )));
    }
    let pts: Vec<(f64, f64)> = used
        .iter()
        .enumerate()
        .map(|(j, v)| (((j + 1) as f64).powf(0.5 / s), v.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let ss_res: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(DecayFit {
        c: intercept.exp(),
        rho: -slope,
        r_squared,
        n_used: used.len(),
    })
}

/// Partial sums `Σ_{j≤k} σ_j^p`.
pub fn partial_sums(sigma: &SingularSpectrum, p: f64) -> Vec<f64> {
    sigma
        .sigma
        .iter()
        .scan(0.0, |acc, s| {
            *acc += s.powf(p);
            Some(*acc)
        })
        .collect()
}

/// Geometric-mean ratio `σ_{j+1}^p / σ_j^p` over the second half of the
/// reliable range; below 1 the terms decay at least geometrically there.
pub fn tail_ratio(sigma: &SingularSpectrum, p: f64) -> Result<f64> {
    let used = reliable(sigma);
    if used.len() < FIT_MIN_POINTS {
        return Err(Error::DegenerateFit(format!(
            "{} singular values in the reliable range, need {FIT_MIN_POINTS}",
            used.len()
        )));
    }
    let tail = &used[used.len() / 2..];
    let mean_log = tail.windows(2).map(|w| (w[1] / w[0]).ln()).sum::<f64>() / (tail.len() - 1) as f64;
    Ok((p * mean_log).exp())
}
