//! Spectral computation of left-sided Caputo-type fractional derivatives on
//! the real line, and a semi-implicit solver for the non-local KdV–Burgers
//! equation `v_t + (v²)_x = ∂x𝒟^α v + τ v_xxx`.
//!
//! The real line is mapped onto `(0, π)` by `x = L cot s`, functions are
//! evenly extended to a full period and expanded in `e^{iks}`. The
//! fractional operator is a dense matrix acting on those coefficients,
//! assembled once per `(α, N, levels)` and improved by Richardson
//! extrapolation over a ladder of quadrature refinements.

pub mod error;
pub mod evolve;
pub mod fourier;
pub mod fracderiv;
pub mod grid;
pub mod oracles;
pub mod special;
pub mod validation;

pub use error::{Error, Result};
pub use fourier::{CleaningPolicy, DiffOperator, FourierField, FourierTransform};
pub use fracderiv::{AssemblyBudget, CacheKey, FracOpMatrix, OperatorCache};
pub use grid::{RefinedNodes, SpectralGrid};
