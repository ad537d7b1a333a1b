//! Operator matrices for `∂x𝒟^α` on the rational-Chebyshev/Fourier grid and
//! their Richardson-extrapolated combinations.

mod assemble;
mod cache;
mod kernel;
mod ladder;
mod matrix;

pub use assemble::{assemble, assemble_naive, quadrature_apply, AssemblyBudget};
pub use cache::{
    read_coefficients, read_operator, write_coefficients, write_operator, CacheKey, EntryInfo,
    OperatorCache, FORMAT_VERSION,
};
pub use kernel::{eval_w, eval_w_expanded, mode_expansion};
pub use ladder::{assemble_ladder, extrapolate, ladder_weights};
pub use matrix::FracOpMatrix;

/// The ladder used for time stepping by default.
pub const DEFAULT_LEVELS: [u32; 6] = [1, 2, 3, 4, 5, 6];

/// Computes nodal values of `∂x𝒟^α` for `field` with operator `op` at scale `L`.
pub fn apply_operator(
    op: &FracOpMatrix,
    field: &crate::fourier::FourierField,
    scale: f64,
) -> crate::error::Result<Vec<num_complex::Complex64>> {
    op.apply(field, scale)
}
