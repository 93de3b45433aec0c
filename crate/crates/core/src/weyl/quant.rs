use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{check_window, Axis, GridKernel, GridSymbol, PhaseGrid};
use crate::{Error, Result};

/// Shifts every column of `cols` (length `axis.n`, one per lag `q`) by
/// `shift(q)`, i.e. `f(x) ↦ f(x − δ)`, by trigonometric interpolation.
/// The Nyquist bin uses the real multiplier `cos(ω_N δ)`.
fn spectral_shift<F>(cols: &mut DMatrix<Complex64>, axis: &Axis, shift: F)
where
    F: Fn(usize) -> f64,
{
    let n = axis.n;
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let omega: Vec<f64> = (0..n).map(|k| axis.frequency(k)).collect();
    let scale = 1.0 / n as f64;
    for (q, mut col) in cols.column_iter_mut().enumerate() {
        let delta = shift(q);
        if delta == 0.0 {
            continue;
        }
        let mut buf: Vec<Complex64> = col.iter().copied().collect();
        fwd.process(&mut buf);
        for (k, v) in buf.iter_mut().enumerate() {
            let m = if k == n / 2 {
                Complex64::new((omega[k] * delta).cos(), 0.0)
            } else {
                Complex64::from_polar(1.0, -omega[k] * delta)
            };
            *v *= m * scale;
        }
        inv.process(&mut buf);
        for (c, b) in col.iter_mut().zip(buf) {
            *c = b;
        }
    }
}

/// Lag `u_q = (q − (n−1))·h` for column `q` of a lag matrix.
fn lag(q: usize, n: usize, h: f64) -> f64 {
    (q as f64 - (n as f64 - 1.0)) * h
}

fn as_matrix(values: &[Complex64], n1: usize, n2: usize) -> DMatrix<Complex64> {
    DMatrix::from_column_slice(n1, n2, values)
}

/// `K(x, y) = (2π)^{-1} ∫ a((1−t)x + ty, ξ) e^{i(x−y)ξ} dξ` on the `x` axis of `a`.
pub fn symbol_to_kernel(a: &GridSymbol, t: f64) -> Result<GridKernel> {
    check_t(t)?;
    check_window(&a.grid(), &a.values)?;
    let xa = a.axis1;
    let xi = a.axis2;
    let n = xa.n;
    let h = xa.spacing();
    let lags = 2 * n - 1;
    let xi_pts = xi.points();
    // ǎ(x_m, u_q) = (2π)^{-1} h_ξ Σ_k a(x_m, ξ_k) e^{i u_q ξ_k}
    let c = xi.spacing() / (2.0 * PI);
    let phase = DMatrix::from_fn(xi.n, lags, |k, q| Complex64::from_polar(c, lag(q, n, h) * xi_pts[k]));
    let mut slices = as_matrix(&a.values, n, xi.n) * phase;
    // g_q(x) = ǎ(x − t u_q, u_q)
    spectral_shift(&mut slices, &xa, |q| t * lag(q, n, h));
    let mut values = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            values.push(slices[(i, i + n - 1 - j)]);
        }
    }
    GridKernel::new(PhaseGrid::new(xa, xa), values)
}

/// Inverse of [`symbol_to_kernel`], with the kernel's second axis as the `ξ` axis.
pub fn kernel_to_symbol(k: &GridKernel, t: f64) -> Result<GridSymbol> {
    kernel_to_symbol_with(k, t, k.axis2)
}

/// Inverse of [`symbol_to_kernel`] sampled on the given `ξ` axis:
/// `a(x, ξ) = ∫ K(x + tu, x − (1−t)u) e^{-iuξ} du`.
pub fn kernel_to_symbol_with(k: &GridKernel, t: f64, xi: Axis) -> Result<GridSymbol> {
    check_t(t)?;
    if k.axis1 != k.axis2 {
        return Err(Error::GridMismatch("kernel axes must coincide".into()));
    }
    check_window(&k.grid(), &k.values)?;
    let xa = k.axis1;
    let n = xa.n;
    let h = xa.spacing();
    let lags = 2 * n - 1;
    // D_q(x_i) = K(x_i, x_i − u_q), zero off the grid
    let mut slices = DMatrix::from_fn(n, lags, |i, q| {
        let j = i as isize - (q as isize - (n as isize - 1));
        if (0..n as isize).contains(&j) {
            k.at(i, j as usize)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    spectral_shift(&mut slices, &xa, |q| -t * lag(q, n, h));
    let xi_pts = xi.points();
    let phase = DMatrix::from_fn(lags, xi.n, |q, m| Complex64::from_polar(h, -lag(q, n, h) * xi_pts[m]));
    let sym = slices * phase;
    GridSymbol::new(PhaseGrid::new(xa, xi), sym.as_slice().to_vec())
}

fn check_t(t: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(Error::InvalidParameter(format!("quantization parameter must be finite, got {t}")));
    }
    Ok(())
}

fn fft_axes(values: &mut [Complex64], n1: usize, n2: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let (p1, p2) = if inverse {
        (planner.plan_fft_inverse(n1), planner.plan_fft_inverse(n2))
    } else {
        (planner.plan_fft_forward(n1), planner.plan_fft_forward(n2))
    };
    for row in values.chunks_exact_mut(n1) {
        p1.process(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); n2];
    for i1 in 0..n1 {
        for (i2, c) in col.iter_mut().enumerate() {
            *c = values[i1 + n1 * i2];
        }
        p2.process(&mut col);
        for (i2, c) in col.iter().enumerate() {
            values[i1 + n1 * i2] = *c;
        }
    }
}

/// Symbol `b` with `Op_t(b) = Op_s(a)`: the Fourier multiplier `e^{i(s−t)ηζ}`,
/// `(η, ζ)` dual to `(x, ξ)`.
pub fn change_quantization(a: &GridSymbol, s: f64, t: f64) -> Result<GridSymbol> {
    check_t(s)?;
    check_t(t)?;
    check_window(&a.grid(), &a.values)?;
    if s == t {
        return Ok(a.clone());
    }
    let (ax, az) = (a.axis1, a.axis2);
    let (n1, n2) = (ax.n, az.n);
    let mut buf = a.values.clone();
    fft_axes(&mut buf, n1, n2, false);
    let c = s - t;
    let scale = 1.0 / (n1 * n2) as f64;
    for i2 in 0..n2 {
        let zeta = az.frequency(i2);
        for i1 in 0..n1 {
            let eta = ax.frequency(i1);
            let theta = c * eta * zeta;
            let m = if i1 == n1 / 2 || i2 == n2 / 2 {
                Complex64::new(theta.cos(), 0.0)
            } else {
                Complex64::from_polar(1.0, theta)
            };
            buf[i1 + n1 * i2] *= m * scale;
        }
    }
    fft_axes(&mut buf, n1, n2, true);
    GridSymbol::new(a.grid(), buf)
}

/// `a #_t b` through the kernels: `K = ∫ K_a(·, z) K_b(z, ·) dz` by the trapezoid rule.
pub fn sharp(a: &GridSymbol, b: &GridSymbol, t: f64) -> Result<GridSymbol> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch("sharp product needs both symbols on one grid".into()));
    }
    let ka = symbol_to_kernel(a, t)?;
    let kb = symbol_to_kernel(b, t)?;
    let n = ka.axis1.n;
    let h = ka.axis1.spacing();
    let prod = as_matrix(&ka.values, n, n) * as_matrix(&kb.values, n, n) * Complex64::new(h, 0.0);
    let k = GridKernel::new(ka.grid(), prod.as_slice().to_vec())?;
    kernel_to_symbol_with(&k, t, a.axis2)
}
