use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::FourierField;

// Row count above which products are split across threads.
const PARALLEL_ROWS: usize = 128;

/// Dense `2N × 2N` operator mapping Fourier coefficients (`k = -N..N-1`) to
/// nodal values of `[∂x𝒟^α]^{(levels)}` at `L = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FracOpMatrix {
    pub(crate) n: usize,
    pub(crate) alpha: f64,
    pub(crate) levels: Vec<u32>,
    /// Row-major, row `j` = node `s_j`, column `k + N` = mode `k`.
    pub(crate) entries: Vec<Complex64>,
}

impl FracOpMatrix {
    pub fn from_parts(n: usize, alpha: f64, levels: Vec<u32>, entries: Vec<Complex64>) -> Result<Self> {
        let dim = 2 * n;
        if entries.len() != dim * dim {
            return Err(Error::LengthMismatch { expected: dim * dim, got: entries.len() });
        }
        Ok(Self { n, alpha, levels, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Refinement levels combined into this operator, ascending.
    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entry(&self, row: usize, k: i64) -> Complex64 {
        self.entries[row * self.dim() + (k + self.n as i64) as usize]
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        let d = self.dim();
        &self.entries[row * d..(row + 1) * d]
    }

    pub fn column(&self, k: i64) -> Vec<Complex64> {
        (0..self.dim()).map(|j| self.entry(j, k)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `L^{-1-α}` times the matrix–coefficient product at all `2N` nodes. Real
    /// fields produce real nodal values.
    pub fn apply(&self, field: &FourierField, scale: f64) -> Result<Vec<Complex64>> {
        self.check_field(field)?;
        let factor = scale.powf(-1.0 - self.alpha);
        let coeffs = field.coeffs();
        let d = self.dim();
        let out = (0..d)
            .map(|j| {
                let row = &self.entries[j * d..(j + 1) * d];
                let acc: Complex64 = row.iter().zip(coeffs).map(|(m, c)| m * c).sum();
                let mut v = acc * factor;
                if field.is_real() {
                    v.im = 0.0;
                }
                v
            })
            .collect();
        Ok(out)
    }

    /// Real nodal values for a Hermitian field. Uses the conjugate-column and
    /// `(-1)^k` row structure of assembled operators, so only the `k >= 0`
    /// columns of the first `N` rows are read.
    pub fn apply_real(&self, field: &FourierField, scale: f64) -> Result<Vec<f64>> {
        self.check_field(field)?;
        if !field.is_real() {
            return Err(Error::InvalidParameter("apply_real needs a real field".into()));
        }
        let n = self.n;
        let d = self.dim();
        let factor = scale.powf(-1.0 - self.alpha);
        let coeffs = field.coeffs();
        let nyquist = coeffs[0];
        let row_sums = |j: usize| {
            let row = &self.entries[j * d..(j + 1) * d];
            let mut even = (row[n] * coeffs[n]).re;
            let mut odd = 0.0;
            for k in 1..n {
                let t = 2.0 * (row[n + k] * coeffs[n + k]).re;
                if k % 2 == 0 {
                    even += t;
                } else {
                    odd += t;
                }
            }
            // k = -N has the parity of N
            let ny = (row[0] * nyquist).re;
            if n % 2 == 0 {
                even += ny;
            } else {
                odd += ny;
            }
            (even, odd)
        };
        let sums: Vec<(f64, f64)> = if n >= PARALLEL_ROWS {
            (0..n).into_par_iter().map(row_sums).collect()
        } else {
            (0..n).map(row_sums).collect()
        };
        let mut out = vec![0.0; d];
        for (j, (even, odd)) in sums.into_iter().enumerate() {
            out[j] = (even + odd) * factor;
            out[j + n] = (even - odd) * factor;
        }
        Ok(out)
    }

    fn check_field(&self, field: &FourierField) -> Result<()> {
        if field.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "operator N = {}, field N = {}",
                self.n,
                field.n()
            )));
        }
        Ok(())
    }
}
