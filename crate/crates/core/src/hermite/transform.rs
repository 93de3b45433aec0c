use num_complex::Complex64;

use super::{hermite_values, HermiteBasis, QuadratureRule};
use crate::{Error, Result};

/// Applies `mat` (rows × dims[axis], row-major) along one axis of a row-major tensor.
fn contract_axis(data: &[Complex64], dims: &[usize], axis: usize, mat: &[f64], rows: usize) -> Vec<Complex64> {
    let len = dims[axis];
    let outer: usize = dims[..axis].iter().product();
    let inner: usize = dims[axis + 1..].iter().product();
    let mut out = vec![Complex64::new(0.0, 0.0); outer * rows * inner];
    for o in 0..outer {
        for r in 0..rows {
            let row = &mat[r * len..(r + 1) * len];
            let dst = &mut out[(o * rows + r) * inner..(o * rows + r + 1) * inner];
            for (k, &m) in row.iter().enumerate() {
                if m == 0.0 {
                    continue;
                }
                let src = &data[(o * len + k) * inner..(o * len + k + 1) * inner];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += s * m;
                }
            }
        }
    }
    out
}

fn check_rule(basis: &HermiteBasis, rule: &QuadratureRule) -> Result<()> {
    if rule.order() < basis.per_axis() {
        return Err(Error::RuleTooSmall {
            order: rule.order(),
            needed: basis.per_axis(),
        });
    }
    Ok(())
}

/// Hermite coefficients from samples of `f` at the tensor quadrature nodes
/// (row-major, last axis fastest).
pub fn analyze_samples(
    samples: &[Complex64],
    basis: &HermiteBasis,
    rule: &QuadratureRule,
) -> Result<Vec<Complex64>> {
    check_rule(basis, rule)?;
    let n = rule.order();
    let expected = n.pow(basis.dim() as u32);
    if samples.len() != expected {
        return Err(Error::DimensionMismatch(format!(
            "expected {expected} samples at the tensor nodes, got {}",
            samples.len()
        )));
    }
    let m = basis.per_axis();
    // G[a][i] = wᵢ e^{xᵢ²} h_a(xᵢ)
    let mut g = vec![0.0; m * n];
    for (i, (&x, &lam)) in rule.nodes().iter().zip(rule.compensated_weights()).enumerate() {
        for (a, h) in hermite_values(basis.trunc(), x).into_iter().enumerate() {
            g[a * n + i] = lam * h;
        }
    }
    let mut dims = vec![n; basis.dim()];
    let mut data = samples.to_vec();
    for axis in 0..basis.dim() {
        data = contract_axis(&data, &dims, axis, &g, m);
        dims[axis] = m;
    }
    Ok(data)
}

/// `c_α = (f, h_α)` by tensor Gauss-Hermite quadrature with compensated
/// weights; valid for integrands decaying at least like `e^{-|x|²}`.
pub fn analyze<F>(f: F, basis: &HermiteBasis, rule: &QuadratureRule) -> Result<Vec<Complex64>>
where
    F: Fn(&[f64]) -> Complex64,
{
    check_rule(basis, rule)?;
    let n = rule.order();
    let d = basis.dim();
    let total = n.pow(d as u32);
    let mut point = vec![0.0; d];
    let mut samples = Vec::with_capacity(total);
    for flat in 0..total {
        let mut rem = flat;
        for k in (0..d).rev() {
            point[k] = rule.nodes()[rem % n];
            rem /= n;
        }
        samples.push(f(&point));
    }
    analyze_samples(&samples, basis, rule)
}

/// `Σ_α c_α h_α(x)` at each point.
pub fn synthesize(c: &[Complex64], basis: &HermiteBasis, points: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    if c.len() != basis.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for a basis of size {}",
            c.len(),
            basis.len()
        )));
    }
    let d = basis.dim();
    let m = basis.per_axis();
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        if p.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "point of dimension {} for a basis of dimension {d}",
                p.len()
            )));
        }
        let tables: Vec<Vec<f64>> = p.iter().map(|&x| hermite_values(basis.trunc(), x)).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (flat, &coef) in c.iter().enumerate() {
            if coef == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut rem = flat;
            let mut prod = 1.0;
            for k in (0..d).rev() {
                prod *= tables[k][rem % m];
                rem /= m;
            }
            acc += coef * prod;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Exact Fourier action on coefficients: `ĥ_α = (−i)^{|α|} h_α`.
pub fn fourier_coeffs(c: &[Complex64], basis: &HermiteBasis) -> Result<Vec<Complex64>> {
    if c.len() != basis.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for a basis of size {}",
            c.len(),
            basis.len()
        )));
    }
    Ok(basis
        .indices()
        .iter()
        .zip(c)
        .map(|(alpha, &v)| match alpha.modulus() % 4 {
            0 => v,
            1 => Complex64::new(v.im, -v.re),
            2 => -v,
            _ => Complex64::new(-v.im, v.re),
        })
        .collect())
}
