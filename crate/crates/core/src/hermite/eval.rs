use std::f64::consts::PI;

use crate::{Error, MultiIndex, Result};

/// Beyond this |x| the recurrence is run on rescaled values, since
/// `e^{-x²/2}` alone would underflow long before the higher orders peak.
const SCALED_BEYOND: f64 = 20.0;
const RESCALE: f64 = 1e150;

/// `h_0(x), …, h_{n_max}(x)` as mantissas with a common log-scale:
/// `h_k(x) = mant[k] · exp(log_scale)`.
pub(crate) struct ScaledValues {
    pub mant: Vec<f64>,
    pub log_scale: f64,
}

pub(crate) fn scaled_values(n_max: usize, x: f64) -> ScaledValues {
    let mut mant = Vec::with_capacity(n_max + 1);
    let mut scales = Vec::with_capacity(n_max + 1);
    let mut log_scale = -0.5 * x * x;
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25);
    mant.push(cur);
    scales.push(log_scale);
    for k in 0..n_max {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            prev /= RESCALE;
            cur /= RESCALE;
            log_scale += RESCALE.ln();
        }
        mant.push(cur);
        scales.push(log_scale);
    }
    for (m, s) in mant.iter_mut().zip(&scales) {
        if *s != log_scale {
            *m *= (s - log_scale).exp();
        }
    }
    ScaledValues { mant, log_scale }
}

/// `h_0(x), …, h_{n_max}(x)` by the three-term recurrence
/// `h_{k+1} = √(2/(k+1)) x h_k − √(k/(k+1)) h_{k−1}`.
pub fn hermite_values(n_max: usize, x: f64) -> Vec<f64> {
    if x.abs() > SCALED_BEYOND {
        let sv = scaled_values(n_max, x);
        return sv.mant.iter().map(|m| m * sv.log_scale.exp()).collect();
    }
    let mut out = Vec::with_capacity(n_max + 1);
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(cur);
    for k in 0..n_max {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// Normalized Hermite function `h_n(x)`.
pub fn hermite_eval(n: usize, x: f64) -> f64 {
    hermite_values(n, x)[n]
}

/// `h_α(x) = Π_k h_{α_k}(x_k)`.
pub fn hermite_eval_multi(alpha: &MultiIndex, x: &[f64]) -> Result<f64> {
    if alpha.dim() != x.len() {
        return Err(Error::DimensionMismatch(format!(
            "multi-index has dimension {} but the point has {}",
            alpha.dim(),
            x.len()
        )));
    }
    Ok(alpha
        .entries()
        .iter()
        .zip(x)
        .map(|(&a, &xk)| hermite_eval(a, xk))
        .product())
}

#[cfg(test)]
mod tests {
    use super::*;

    // Physicists' Hermite polynomials written out, for comparison with the recurrence.
    fn explicit(n: usize, x: f64) -> f64 {
        let poly = match n {
            0 => 1.0,
            1 => 2.0 * x,
            2 => 4.0 * x * x - 2.0,
            3 => 8.0 * x.powi(3) - 12.0 * x,
            4 => 16.0 * x.powi(4) - 48.0 * x * x + 12.0,
            5 => 32.0 * x.powi(5) - 160.0 * x.powi(3) + 120.0 * x,
            6 => 64.0 * x.powi(6) - 480.0 * x.powi(4) + 720.0 * x * x - 120.0,
            _ => unreachable!(),
        };
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        PI.powf(-0.25) * poly * (-0.5 * x * x).exp() / (2f64.powi(n as i32) * fact).sqrt()
    }

    #[test]
    fn ground_state_at_origin() {
        assert!((hermite_eval(0, 0.0) - 0.7511255444649425).abs() < 1e-16);
        assert_eq!(hermite_eval(1, 0.0), 0.0);
    }

    #[test]
    fn second_order_at_one() {
        let expected = PI.powf(-0.25) * (2.0 - 1.0) / 2f64.sqrt() * (-0.5f64).exp();
        assert!((hermite_eval(2, 1.0) - expected).abs() < 1e-15);
    }

    #[test]
    fn recurrence_matches_explicit_formula() {
        for n in 0..=6 {
            for i in -40..=40 {
                let x = i as f64 * 0.15;
                assert!((hermite_eval(n, x) - explicit(n, x)).abs() < 1e-12, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn parity_is_exact() {
        for n in 0..40 {
            for &x in &[0.3, 1.7, 5.5, 19.9, 20.5, 31.0] {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(hermite_eval(n, -x), sign * hermite_eval(n, x));
            }
        }
    }

    #[test]
    fn scaled_branch_is_continuous() {
        // Straddle the switch between the direct and rescaled recurrences.
        for n in [0, 5, 50, 300, 600] {
            let a = hermite_eval(n, 20.0 - 1e-9);
            let b = hermite_eval(n, 20.0 + 1e-9);
            assert!((a - b).abs() <= 1e-6 * a.abs().max(1e-300), "n={n}: {a} vs {b}");
        }
        // Large orders near their turning point stay O(1) instead of overflowing.
        let v = hermite_eval(800, 30.0);
        assert!(v.is_finite() && v.abs() < 1.0 && v != 0.0);
    }

    #[test]
    fn multi_is_product_of_axes() {
        let a = MultiIndex::new(vec![0, 0]);
        assert!((hermite_eval_multi(&a, &[0.0, 0.0]).unwrap() - PI.powf(-0.5)).abs() < 1e-16);
        let b = MultiIndex::new(vec![1, 0]);
        assert_eq!(hermite_eval_multi(&b, &[0.0, 3.7]).unwrap(), 0.0);
        let c = MultiIndex::new(vec![2, 3]);
        let v = hermite_eval_multi(&c, &[0.5, -0.5]).unwrap();
        assert!((v - explicit(2, 0.5) * explicit(3, -0.5)).abs() < 1e-15);
        assert!(hermite_eval_multi(&c, &[0.5]).is_err());
    }
}
