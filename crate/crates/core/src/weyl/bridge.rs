use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{kernel_to_symbol_with, symbol_to_kernel, Axis, GridKernel, GridSymbol, PhaseGrid};
use crate::factorize::{factorize, Branch, FactorOptions, FactorPair};
use crate::hermite::{hermite_values, HermiteBasis};
use crate::{CoeffTensor, Error, MultiIndex, Result};

/// `H[i, n] = h_n(x_i)`.
fn hermite_matrix(axis: &Axis, trunc: usize) -> DMatrix<Complex64> {
    let rows: Vec<Vec<f64>> = axis.points().iter().map(|&x| hermite_values(trunc, x)).collect();
    DMatrix::from_fn(axis.n, trunc + 1, |i, n| Complex64::new(rows[i][n], 0.0))
}

/// Products `h_m h_n` with `m, n ≤ trunc` oscillate at up to `2√(2·trunc+1)`.
fn check_resolution(axis: &Axis, trunc: usize) -> Result<()> {
    let needed = 2.0 * (2.0 * trunc as f64 + 1.0).sqrt();
    let nyquist = PI / axis.spacing();
    if nyquist < needed {
        return Err(Error::InvalidParameter(format!(
            "grid spacing {} cannot resolve Hermite order {trunc}",
            axis.spacing()
        )));
    }
    Ok(())
}

fn check_one_dim(a: &CoeffTensor) -> Result<()> {
    if a.d_left() != 1 || a.d_right() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "grid kernels are one-dimensional, got {}x{}",
            a.d_left(),
            a.d_right()
        )));
    }
    Ok(())
}

/// Largest Hermite order whose oscillatory region `|x| ≤ √(2n+1)` fits in the
/// window and whose products the grid resolves.
pub fn default_trunc(axis: &Axis) -> usize {
    let half = axis.min.abs().min(axis.max.abs());
    let reach = half.min(PI / (2.0 * axis.spacing()));
    (((reach * reach - 1.0) / 2.0).floor().max(0.0)) as usize
}

/// `a_{m,n} = ∬ K(x, y) h_m(x) h_n(y) dx dy` by the trapezoid rule on the grid.
pub fn kernel_grid_to_coeffs(k: &GridKernel, basis: &HermiteBasis) -> Result<CoeffTensor> {
    if basis.dim() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "grid kernels are one-dimensional, basis has dimension {}",
            basis.dim()
        )));
    }
    let n = basis.trunc();
    check_resolution(&k.axis1, n)?;
    check_resolution(&k.axis2, n)?;
    let hx = hermite_matrix(&k.axis1, n);
    let hy = hermite_matrix(&k.axis2, n);
    let km = DMatrix::from_column_slice(k.axis1.n, k.axis2.n, &k.values);
    let w = k.axis1.spacing() * k.axis2.spacing();
    let c = hx.transpose() * km * hy * Complex64::new(w, 0.0);
    let entries = (0..=n).flat_map(|a| (0..=n).map(move |b| (a, b))).map(|(a, b)| {
        (MultiIndex::new(vec![a]), MultiIndex::new(vec![b]), c[(a, b)])
    });
    CoeffTensor::from_entries(vec![n], vec![n], entries)
}

/// `K(x_i, y_j) = Σ a_{m,n} h_m(x_i) h_n(y_j)`.
pub fn coeffs_to_kernel_grid(a: &CoeffTensor, grid: &PhaseGrid) -> Result<GridKernel> {
    check_one_dim(a)?;
    let hx = hermite_matrix(&grid.axis1, a.trunc_left()[0]);
    let hy = hermite_matrix(&grid.axis2, a.trunc_right()[0]);
    let k = hx * a.to_dense() * hy.transpose();
    GridKernel::new(*grid, k.as_slice().to_vec())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymbolFactorOptions {
    pub t: f64,
    pub s: f64,
    pub branch: Branch,
    /// Hermite truncation of the kernel; defaults to [`default_trunc`].
    pub trunc: Option<usize>,
    /// Coefficients below `prune · max|a|` are treated as quadrature noise.
    pub prune: f64,
    pub r: Option<f64>,
    pub jmax: Option<usize>,
}

impl SymbolFactorOptions {
    pub fn new(t: f64, s: f64, branch: Branch) -> Self {
        SymbolFactorOptions {
            t,
            s,
            branch,
            trunc: None,
            prune: 1e-14,
            r: None,
            jmax: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SymbolFactors {
    /// Symbol of the left factor (`B`).
    pub a1: GridSymbol,
    /// Symbol of the right, positive Hermite diagonal factor (`C`).
    pub a2: GridSymbol,
    pub coeffs: CoeffTensor,
    pub pair: FactorPair,
}

/// `a = a₁ #_t a₂` with default options.
pub fn factorize_symbol(a: &GridSymbol, t: f64, s: f64, branch: Branch) -> Result<SymbolFactors> {
    factorize_symbol_with(a, &SymbolFactorOptions::new(t, s, branch))
}

/// Symbol → kernel → Hermite coefficients → factor pair → kernels → symbols.
pub fn factorize_symbol_with(a: &GridSymbol, opts: &SymbolFactorOptions) -> Result<SymbolFactors> {
    let k = symbol_to_kernel(a, opts.t)?;
    let trunc = opts.trunc.unwrap_or_else(|| default_trunc(&k.axis1));
    let full = kernel_grid_to_coeffs(&k, &HermiteBasis::new(1, trunc)?)?.pruned(opts.prune);
    let top = |pick: fn(&(&MultiIndex, &MultiIndex, Complex64)) -> usize| {
        full.iter().map(|e| pick(&e)).max().unwrap_or(0)
    };
    let coeffs = full.restricted(vec![top(|e| e.0.modulus())], vec![top(|e| e.1.modulus())])?;
    let pair = factorize(
        &coeffs,
        &FactorOptions {
            branch: opts.branch,
            s: opts.s,
            r: opts.r,
            jmax: opts.jmax,
            d0: None,
        },
    )?;
    let grid = k.grid();
    let a1 = kernel_to_symbol_with(&coeffs_to_kernel_grid(&pair.b, &grid)?, opts.t, a.axis2)?;
    let a2 = kernel_to_symbol_with(&coeffs_to_kernel_grid(&pair.c, &grid)?, opts.t, a.axis2)?;
    Ok(SymbolFactors { a1, a2, coeffs, pair })
}
