//! `Op_t` calculus on uniform grids in one space dimension.
//!
//! A symbol `a(x, ξ)` and its kernel are linked by
//! `K(x, y) = (2π)^{-1} ∫ a((1−t)x + ty, ξ) e^{i(x−y)ξ} dξ`.
//! Kernels live on the symbol's `x` axis in both variables. All maps assume
//! the data has decayed to the noise level on the outer rings of the grid,
//! which is checked ([`check_window`]) instead of silently aliasing.

mod bridge;
mod quant;

pub use bridge::{
    coeffs_to_kernel_grid, default_trunc, factorize_symbol, factorize_symbol_with, kernel_grid_to_coeffs,
    SymbolFactorOptions, SymbolFactors,
};
pub use quant::{change_quantization, kernel_to_symbol, kernel_to_symbol_with, sharp, symbol_to_kernel};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Boundary values must stay below this fraction of the largest magnitude.
pub const WINDOW_TOL: f64 = 1e-10;
/// Width of the boundary frame inspected by [`check_window`].
pub const WINDOW_RINGS: usize = 2;

/// Periodic uniform axis: `n` points `min + k·h`, `h = (max − min)/n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AxisRepr")]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

#[derive(Deserialize)]
struct AxisRepr {
    min: f64,
    max: f64,
    n: usize,
}

impl TryFrom<AxisRepr> for Axis {
    type Error = Error;

    fn try_from(r: AxisRepr) -> Result<Self> {
        Axis::new(r.min, r.max, r.n)
    }
}

impl Axis {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && max > min) {
            return Err(Error::InvalidParameter(format!("axis needs finite min < max, got [{min}, {max}]")));
        }
        if n < 16 || !n.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("axis needs an even point count >= 16, got {n}")));
        }
        Ok(Axis { min, max, n })
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / self.n as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        self.min + k as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.point(k)).collect()
    }

    /// Angular frequency of FFT bin `k` (signed, Nyquist at `n/2` taken positive).
    pub(crate) fn frequency(&self, k: usize) -> f64 {
        let p = if k <= self.n / 2 { k as f64 } else { k as f64 - self.n as f64 };
        2.0 * std::f64::consts::PI * p / (self.max - self.min)
    }
}

impl Default for Axis {
    fn default() -> Self {
        Axis { min: -8.0, max: 8.0, n: 256 }
    }
}

/// Product of two axes: `(x, ξ)` for symbols, `(x, y)` for kernels.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub axis1: Axis,
    pub axis2: Axis,
}

impl PhaseGrid {
    pub fn new(axis1: Axis, axis2: Axis) -> Self {
        PhaseGrid { axis1, axis2 }
    }

    pub fn square(min: f64, max: f64, n: usize) -> Result<Self> {
        let a = Axis::new(min, max, n)?;
        Ok(PhaseGrid { axis1: a, axis2: a })
    }

    pub fn len(&self) -> usize {
        self.axis1.n * self.axis2.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

macro_rules! grid_values {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
        #[serde(try_from = "GridRepr")]
        pub struct $name {
            pub axis1: Axis,
            pub axis2: Axis,
            /// Row-major with `axis1` fastest: `values[i1 + n1·i2]`.
            pub values: Vec<Complex64>,
        }

        impl TryFrom<GridRepr> for $name {
            type Error = Error;

            fn try_from(r: GridRepr) -> Result<Self> {
                $name::new(PhaseGrid::new(r.axis1, r.axis2), r.values)
            }
        }

        impl $name {
            pub fn new(grid: PhaseGrid, values: Vec<Complex64>) -> Result<Self> {
                if values.len() != grid.len() {
                    return Err(Error::GridMismatch(format!(
                        "{} values for a {}x{} grid",
                        values.len(),
                        grid.axis1.n,
                        grid.axis2.n
                    )));
                }
                if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
                    return Err(Error::InvalidParameter("grid values must be finite".into()));
                }
                Ok($name { axis1: grid.axis1, axis2: grid.axis2, values })
            }

            pub fn zeros(grid: PhaseGrid) -> Self {
                $name { axis1: grid.axis1, axis2: grid.axis2, values: vec![Complex64::new(0.0, 0.0); grid.len()] }
            }

            pub fn from_fn<F: Fn(f64, f64) -> Complex64>(grid: PhaseGrid, f: F) -> Self {
                let p1 = grid.axis1.points();
                let p2 = grid.axis2.points();
                let values = p2.iter().flat_map(|&v| p1.iter().map(move |&u| (u, v))).map(|(u, v)| f(u, v)).collect();
                $name { axis1: grid.axis1, axis2: grid.axis2, values }
            }

            pub fn grid(&self) -> PhaseGrid {
                PhaseGrid::new(self.axis1, self.axis2)
            }

            pub fn at(&self, i1: usize, i2: usize) -> Complex64 {
                self.values[i1 + self.axis1.n * i2]
            }

            pub fn max_abs(&self) -> f64 {
                self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
            }

            /// `max |self − other|` on a shared grid.
            pub fn max_diff(&self, other: &Self) -> Result<f64> {
                if self.grid() != other.grid() {
                    return Err(Error::GridMismatch("grids differ".into()));
                }
                Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
            }

            pub fn scaled(&self, c: Complex64) -> Self {
                $name { values: self.values.iter().map(|v| v * c).collect(), ..self.clone() }
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                if self.grid() != other.grid() {
                    return Err(Error::GridMismatch("grids differ".into()));
                }
                Ok($name { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(), ..self.clone() })
            }

            pub fn to_json(&self) -> Result<String> {
                Ok(serde_json::to_string(self)?)
            }

            pub fn from_json(text: &str) -> Result<Self> {
                Ok(serde_json::from_str(text)?)
            }
        }
    };
}

#[derive(Deserialize)]
struct GridRepr {
    axis1: Axis,
    axis2: Axis,
    values: Vec<Complex64>,
}

grid_values!(GridSymbol, "Symbol `a(x, ξ)` sampled on a phase-space grid.");
grid_values!(GridKernel, "Kernel `K(x, y)` sampled on a grid.");

/// Largest magnitude on the outer [`WINDOW_RINGS`] rings.
fn boundary_max(values: &[Complex64], n1: usize, n2: usize) -> f64 {
    let mut m = 0.0f64;
    for i2 in 0..n2 {
        let edge2 = i2 < WINDOW_RINGS || i2 >= n2 - WINDOW_RINGS;
        for i1 in 0..n1 {
            if edge2 || i1 < WINDOW_RINGS || i1 >= n1 - WINDOW_RINGS {
                m = m.max(values[i1 + n1 * i2].norm());
            }
        }
    }
    m
}

/// Fails when the outer rings exceed `WINDOW_TOL · max|values|`.
pub fn check_window(grid: &PhaseGrid, values: &[Complex64]) -> Result<()> {
    let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let boundary = boundary_max(values, grid.axis1.n, grid.axis2.n);
    let threshold = WINDOW_TOL * peak;
    if boundary > threshold {
        return Err(Error::WindowInadequate { boundary, threshold });
    }
    Ok(())
}
