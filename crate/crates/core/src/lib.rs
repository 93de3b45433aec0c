//! Hermite-spectral operator calculus for kernels with Gelfand-Shilov decay.
//!
//! An operator `T` with kernel `K(x, y) = Σ a_{α,β} h_α(x) h_β(y)` is stored as
//! its coefficient tensor ([`CoeffTensor`]). Composition of operators is then a
//! contraction over the shared Hermite index, which makes the decomposition
//! `T = T₂ ∘ T₁` with a positive Hermite diagonal `T₁` an explicit operation on
//! coefficients ([`factorize`]).
//!
//! Around that core sit
//!
//! * [`hermite`]: Hermite functions, Gauss-Hermite rules and transforms,
//! * [`coeff`]: sparse coefficient tensors, decay estimation and classification,
//! * [`weyl`]: grid-based `Op_t` calculus (symbol/kernel maps, change of
//!   quantization, the `#_t` product and symbol factorization),
//! * [`schatten`]: weighted Hermite-type spaces, singular values and
//!   Schatten-von Neumann quasi-norms,
//! * [`cli`]: the `kernel-factor` command line front end.

pub mod cli;
pub mod coeff;
mod error;
mod float_serde;
pub mod factorize;
pub mod generate;
pub mod hermite;
mod index;
pub mod schatten;
pub mod weyl;

pub use coeff::CoeffTensor;
pub use error::{Error, Result};
pub use index::MultiIndex;
pub use num_complex::Complex64;
