//! Exponential and polynomial decay of kernel coefficients.
//!
//! `K` lies in the Roumieu space `𝒮_s` iff `sup |a_{α,β}| e^{r(|α|^{1/2s}+|β|^{1/2s})}`
//! is finite for some `r > 0`, and in the Beurling space `Σ_s` iff it is finite
//! for every `r > 0`. From finitely many coefficients neither can be decided;
//! the estimators here are conservative and the classifier is a tagged
//! heuristic that always carries its diagnostics.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CoeffTensor;
use crate::hermite::{fourier_coeffs, synthesize, HermiteBasis};
use crate::{Error, MultiIndex, Result};

/// `|α|^{1/2s}`.
pub fn index_weight(alpha: &MultiIndex, s: f64) -> f64 {
    let m = alpha.modulus();
    if m == 0 {
        0.0
    } else {
        (m as f64).powf(0.5 / s)
    }
}

fn exp_weight(alpha: &MultiIndex, beta: &MultiIndex, s: f64) -> f64 {
    index_weight(alpha, s) + index_weight(beta, s)
}

/// `ln⟨(α, β)⟩` with `⟨x⟩ = (1 + |x|²)^{1/2}`.
fn poly_weight(alpha: &MultiIndex, beta: &MultiIndex) -> f64 {
    let sq = alpha.euclidean().powi(2) + beta.euclidean().powi(2);
    0.5 * sq.ln_1p()
}

fn check_s(s: f64) -> Result<()> {
    if !(s >= 0.5) || !s.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Gelfand-Shilov index must satisfy s >= 1/2, got {s}"
        )));
    }
    Ok(())
}

/// `|a| e^{r w}` evaluated in log space; weight zero never picks up the factor.
fn weighted(v: Complex64, r: f64, w: f64) -> f64 {
    if w == 0.0 {
        v.norm()
    } else {
        (v.norm().ln() + r * w).exp()
    }
}

fn sup_weighted<'a, I>(entries: I, r: f64, s: f64) -> f64
where
    I: Iterator<Item = (&'a MultiIndex, &'a MultiIndex, Complex64)>,
{
    entries
        .map(|(a, b, v)| weighted(v, r, exp_weight(a, b, s)))
        .fold(0.0, f64::max)
}

/// `sup_{α,β} |a_{α,β}| e^{r(|α|^{1/2s}+|β|^{1/2s})}` over the stored entries.
pub fn check_bound(a: &CoeffTensor, s: f64, r: f64) -> Result<f64> {
    check_s(s)?;
    Ok(sup_weighted(a.iter(), r, s))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayProfile {
    pub s: f64,
    /// Largest rate for which `|a| ≤ M e^{-r̂ w}` holds entrywise; `+∞` when
    /// only the `(0,0)` entry is present.
    #[serde(with = "crate::float_serde")]
    pub r_hat: f64,
    /// `check_bound(A, s, r_hat)`.
    pub bound: f64,
    pub n_entries: usize,
    /// Least-squares slope of `−ln|a|` against the weight (diagnostic only).
    pub regression_rate: Option<f64>,
}

/// Least-squares slope and intercept of `y` against `x`.
fn least_squares(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Conservative min-ratio decay rate:
/// `r̂ = min_{(α,β)≠(0,0)} (ln M − ln|a_{α,β}|) / (|α|^{1/2s}+|β|^{1/2s})`.
pub fn estimate_decay(a: &CoeffTensor, s: f64) -> Result<DecayProfile> {
    check_s(s)?;
    if a.is_empty() {
        return Err(Error::ZeroTensor);
    }
    let m = a.max_abs();
    let ln_m = m.ln();
    let weights: Vec<(f64, f64)> = a
        .iter()
        .map(|(x, y, v)| (exp_weight(x, y, s), v.norm()))
        .collect();
    let mut r_hat = weights
        .iter()
        .filter(|(w, _)| *w > 0.0)
        .map(|(w, v)| (ln_m - v.ln()) / w)
        .fold(f64::INFINITY, f64::min);
    // Rounding can leave |a| a few ulps above M e^{-r̂ w}; step r̂ down until
    // the bound holds as evaluated in floating point.
    if r_hat.is_finite() {
        for _ in 0..64 {
            let ok = weights
                .iter()
                .all(|&(w, v)| w == 0.0 || v <= m * (-r_hat * w).exp());
            if ok {
                break;
            }
            r_hat = r_hat.next_down();
        }
        r_hat = r_hat.max(0.0);
    }
    let pts: Vec<(f64, f64)> = weights.iter().map(|&(w, v)| (w, -v.ln())).collect();
    Ok(DecayProfile {
        s,
        r_hat,
        bound: check_bound(a, s, r_hat)?,
        n_entries: a.len(),
        regression_rate: least_squares(&pts).map(|(slope, _)| slope),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassMode {
    Schwartz,
    Roumieu,
    Beurling,
    Dual,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class")]
pub enum SpaceClass {
    /// Rapid decay; `t` is the fitted polynomial order.
    Schwartz { t: f64 },
    Roumieu {
        s: f64,
        #[serde(with = "crate::float_serde")]
        r_hat: f64,
    },
    Beurling { s: f64 },
    /// Growth/decay rates with sign: negative means the coefficients grow.
    Dual { t: f64, r: f64 },
    Indeterminate { reason: String },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassDiagnostics {
    /// Nested truncation levels `N/4, N/2, N`.
    pub levels: Vec<usize>,
    /// Min-ratio rate restricted to the shell added at each level.
    pub shell_rates: Vec<Option<f64>>,
    pub probes: Vec<f64>,
    /// `probe_bounds[p][k]`: weighted sup at probe `p` over level `k`.
    pub probe_bounds: Vec<Vec<f64>>,
    pub regression_rate: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    #[serde(flatten)]
    pub class: SpaceClass,
    pub mode: ClassMode,
    pub diagnostics: ClassDiagnostics,
}

const MIN_TRUNC: usize = 8;
const PROBES: [f64; 4] = [1.0, 2.0, 4.0, 8.0];
/// Relative growth of a probe bound from level N/2 to N still read as "bounded".
const STABLE_GROWTH: f64 = 0.05;
const RATE_FLOOR: f64 = 1e-8;

fn level_of(a: &MultiIndex, b: &MultiIndex) -> usize {
    a.entries().iter().chain(b.entries()).copied().max().unwrap_or(0)
}

/// Heuristic membership test per mode; see the module docs.
pub fn classify(a: &CoeffTensor, s: f64, mode: ClassMode) -> Result<Classification> {
    check_s(s)?;
    let indeterminate = |reason: &str, diagnostics| Classification {
        class: SpaceClass::Indeterminate {
            reason: reason.to_string(),
        },
        mode,
        diagnostics,
    };
    if a.is_empty() {
        return Ok(indeterminate("empty", ClassDiagnostics::default()));
    }
    let n = a
        .trunc_left()
        .iter()
        .chain(a.trunc_right())
        .copied()
        .min()
        .unwrap_or(0);
    if n < MIN_TRUNC {
        return Ok(indeterminate("truncation below 8", ClassDiagnostics::default()));
    }

    let polynomial = mode == ClassMode::Schwartz;
    let weight = |x: &MultiIndex, y: &MultiIndex| {
        if polynomial {
            poly_weight(x, y)
        } else {
            exp_weight(x, y, s)
        }
    };
    let levels = vec![n / 4, n / 2, n];
    let ln_m = a.max_abs().ln();

    let mut shell_rates = Vec::new();
    for (k, &lvl) in levels.iter().enumerate() {
        let lower = if k == 0 { None } else { Some(levels[k - 1]) };
        let rate = a
            .iter()
            .filter(|(x, y, _)| {
                let l = level_of(x, y);
                l <= lvl && lower.is_none_or(|lo| l > lo)
            })
            .filter_map(|(x, y, v)| {
                let w = weight(x, y);
                (w > 0.0).then(|| (ln_m - v.norm().ln()) / w)
            })
            .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |m| m.min(r))));
        shell_rates.push(rate);
    }

    let probe_bounds: Vec<Vec<f64>> = PROBES
        .iter()
        .map(|&r| {
            levels
                .iter()
                .map(|&lvl| {
                    a.iter()
                        .filter(|(x, y, _)| level_of(x, y) <= lvl)
                        .map(|(x, y, v)| weighted(v, r, weight(x, y)))
                        .fold(0.0, f64::max)
                })
                .collect()
        })
        .collect();

    let pts: Vec<(f64, f64)> = a
        .iter()
        .map(|(x, y, v)| (weight(x, y), -v.norm().ln()))
        .collect();
    let regression = least_squares(&pts).map(|(slope, _)| slope);

    let diagnostics = ClassDiagnostics {
        levels,
        shell_rates: shell_rates.clone(),
        probes: PROBES.to_vec(),
        probe_bounds: probe_bounds.clone(),
        regression_rate: regression,
    };
    let global_rate = a
        .iter()
        .filter_map(|(x, y, v)| {
            let w = weight(x, y);
            (w > 0.0).then(|| (ln_m - v.norm().ln()) / w)
        })
        .fold(f64::INFINITY, f64::min);
    let outer_not_slower = match (shell_rates[1], shell_rates[2]) {
        (Some(mid), Some(out)) => out >= mid,
        _ => true,
    };

    let class = match mode {
        ClassMode::Roumieu => {
            let r_hat = estimate_decay(a, s)?.r_hat;
            if r_hat > RATE_FLOOR {
                SpaceClass::Roumieu { s, r_hat }
            } else {
                return Ok(indeterminate("no positive decay rate", diagnostics));
            }
        }
        ClassMode::Beurling => {
            let unstable: Vec<f64> = PROBES
                .iter()
                .zip(&probe_bounds)
                .filter(|(_, b)| b[2] > b[1] * (1.0 + STABLE_GROWTH))
                .map(|(r, _)| *r)
                .collect();
            if !unstable.is_empty() {
                let reason = format!("bounds grow across truncations for probe rates {unstable:?}");
                return Ok(indeterminate(&reason, diagnostics));
            }
            if !outer_not_slower {
                return Ok(indeterminate("shell decay rates decrease", diagnostics));
            }
            SpaceClass::Beurling { s }
        }
        ClassMode::Schwartz => {
            let stable = match (shell_rates[1], shell_rates[2]) {
                (Some(mid), Some(out)) => out >= 0.95 * mid,
                _ => true,
            };
            if global_rate > RATE_FLOOR && stable {
                SpaceClass::Schwartz { t: global_rate }
            } else {
                return Ok(indeterminate("polynomial decay order unstable", diagnostics));
            }
        }
        ClassMode::Dual => {
            let t = least_squares(
                &a.iter()
                    .map(|(x, y, v)| (poly_weight(x, y), -v.norm().ln()))
                    .collect::<Vec<_>>(),
            );
            match (t, regression) {
                (Some((t, _)), Some(r)) => SpaceClass::Dual { t, r },
                _ => return Ok(indeterminate("fewer than two distinct weights", diagnostics)),
            }
        }
    };
    Ok(Classification {
        class,
        mode,
        diagnostics,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeFit {
    /// Fitted rate `ε` in `|f(x)| ≤ C e^{-ε|x|^{1/s}}`.
    pub eps: f64,
    /// Smallest `C` making the bound hold at every grid point for the fitted `ε`.
    pub c: f64,
    pub n_used: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointwiseDecay {
    pub function: EnvelopeFit,
    pub fourier: EnvelopeFit,
}

const FIT_FLOOR: f64 = 1e-300;

fn envelope_fit(xs: &[f64], values: &[Complex64], s: f64) -> Result<EnvelopeFit> {
    let mut samples: Vec<(f64, f64)> = xs
        .iter()
        .zip(values)
        .filter(|(_, v)| v.norm() > FIT_FLOOR)
        .map(|(&x, v)| (x.abs().powf(1.0 / s), v.norm()))
        .collect();
    if samples.is_empty() {
        return Err(Error::DegenerateFit("all samples below 1e-300".into()));
    }
    // Outer envelope: running maximum from large |x| inwards.
    samples.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut run = 0.0f64;
    let env: Vec<(f64, f64)> = samples
        .iter()
        .map(|&(u, v)| {
            run = run.max(v);
            (u, run.ln())
        })
        .collect();
    let (slope, _) = least_squares(&env)
        .ok_or_else(|| Error::DegenerateFit("fewer than two distinct abscissae".into()))?;
    let eps = -slope;
    let ln_c = samples
        .iter()
        .map(|&(u, v)| v.ln() + eps * u)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(EnvelopeFit {
        eps,
        c: ln_c.exp(),
        n_used: samples.len(),
    })
}

/// Fits `|f(x)| ≤ C e^{-ε|x|^{1/s}}` for `f = Σ c_n h_n` and for its Fourier
/// transform on a one-dimensional grid. Diagnostic only.
pub fn pointwise_decay_check(c: &[Complex64], s: f64, grid: &[f64]) -> Result<PointwiseDecay> {
    check_s(s)?;
    if c.is_empty() {
        return Err(Error::InvalidParameter("empty coefficient vector".into()));
    }
    let basis = HermiteBasis::new(1, c.len() - 1)?;
    let reach = (2.0 * c.len() as f64).sqrt();
    if let Some(x) = grid.iter().find(|x| x.abs() > reach) {
        return Err(Error::InvalidParameter(format!(
            "grid point {x} beyond the reliable synthesis range ±{reach:.3}"
        )));
    }
    let pts: Vec<Vec<f64>> = grid.iter().map(|&x| vec![x]).collect();
    let f = synthesize(c, &basis, &pts)?;
    let fhat = synthesize(&fourier_coeffs(c, &basis)?, &basis, &pts)?;
    Ok(PointwiseDecay {
        function: envelope_fit(grid, &f, s)?,
        fourier: envelope_fit(grid, &fhat, s)?,
    })
}
