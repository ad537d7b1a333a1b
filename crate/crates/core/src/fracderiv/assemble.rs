//! Quadrature of `∂x𝒟^α e^{iks}` on the refined node families and assembly
//! of the operator matrix `M^{(m)}`.
//!
//! For a primary node `s_j` (`j < N`) the level-`m` rule is
//!
//! ```text
//! π/(2^m N Γ(2-α)) · Σ_{l >= 2^{m-1}(2j+1)} w_k(s_l^(m)) (cot s_j - cot s_l^(m))^{1-α}
//! ```
//!
//! and rows `j + N` reuse it through `w_k(s + π) = (-1)^k w_k(s)`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::kernel::{eval_w, mode_expansion};
use super::matrix::FracOpMatrix;
use crate::error::{Error, Result};
use crate::special::gamma;

/// Upper bound on `N · 2^m` accepted by the assembler.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssemblyBudget {
    pub max_work: u64,
}

impl Default for AssemblyBudget {
    fn default() -> Self {
        Self { max_work: 1 << 20 }
    }
}

impl AssemblyBudget {
    pub fn unlimited() -> Self {
        Self { max_work: u64::MAX }
    }

    pub fn check(&self, n: usize, level: u32) -> Result<()> {
        let work = (n as u64).checked_shl(level).unwrap_or(u64::MAX);
        if work > self.max_work {
            return Err(Error::BudgetExceeded { work, budget: self.max_work });
        }
        Ok(())
    }
}

pub(crate) fn validate(alpha: f64, n: usize, level: u32) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!("N must be >= 2, got {n}")));
    }
    if level < 1 || level > 30 {
        return Err(Error::InvalidParameter(format!("refinement level must be in 1..=30, got {level}")));
    }
    Ok(())
}

/// First refined index with `s_l^(m) > s_j`.
fn first_index(j: usize, level: u32) -> usize {
    (2 * j + 1) << (level - 1)
}

/// `(cot s_j - cot s_l^(m))^{1-α}` for `l` past the singular point, with the
/// difference formed as `sin(s_l - s_j) / (sin s_j sin s_l)` and the angle
/// gap taken from integers.
fn kernel_weight(j: usize, l: usize, n: usize, level: u32, alpha: f64) -> f64 {
    let p = (2 * n) << level; // 2^{m+1} N
    let sj = PI * (2 * j + 1) as f64 / (2 * n) as f64;
    let sl = PI * (2 * l + 1) as f64 / p as f64;
    let gap_units = (2 * l + 1) as i64 - (((2 * j + 1) as i64) << level);
    let gap = PI * gap_units as f64 / p as f64;
    let base = gap.sin() / (sj.sin() * sl.sin());
    assert!(base > 0.0, "non-positive kernel base {base} at j={j}, l={l}");
    if alpha == 1.0 {
        1.0
    } else {
        ((1.0 - alpha) * base.ln()).exp()
    }
}

fn prefactor(n: usize, level: u32, alpha: f64) -> f64 {
    PI / ((n << level) as f64 * gamma(2.0 - alpha))
}

/// Level-`m` quadrature of `∂x𝒟^α e^{iks}` at node `s_j`, `j < 2N`, by direct
/// summation with `L = 1`.
pub fn quadrature_apply(k: i64, alpha: f64, n: usize, level: u32, j: usize) -> Result<Complex64> {
    validate(alpha, n, level)?;
    if j >= 2 * n {
        return Err(Error::InvalidParameter(format!("node index {j} out of range for N = {n}")));
    }
    if k == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (jj, shifted) = if j >= n { (j - n, true) } else { (j, false) };
    let count = n << level;
    let p = 2 * count;
    let mut acc = Complex64::new(0.0, 0.0);
    for l in first_index(jj, level)..count {
        let sl = PI * (2 * l + 1) as f64 / p as f64;
        acc += eval_w(k, sl) * kernel_weight(jj, l, n, level, alpha);
    }
    if shifted && k % 2 != 0 {
        acc = -acc;
    }
    Ok(acc * prefactor(n, level, alpha))
}

/// Column-by-column triple loop. `O(N² · 2^m N)`; meant as a reference.
pub fn assemble_naive(alpha: f64, n: usize, level: u32) -> Result<FracOpMatrix> {
    validate(alpha, n, level)?;
    let dim = 2 * n;
    let ni = n as i64;
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for j in 0..dim {
        for k in -ni..ni {
            entries[j * dim + (k + ni) as usize] = quadrature_apply(k, alpha, n, level, j)?;
        }
    }
    FracOpMatrix::from_parts(n, alpha, vec![level], entries)
}

/// Assembles `M^{(m)}` row by row with one FFT per row.
///
/// Writing `w_k(s) = Σ_d c_d(k) e^{i(k+d)s}`, each entry becomes
/// `Σ_d c_d(k) S_j(k+d)` with `S_j(q) = Σ_l g_{jl} e^{iq s_l}`. Because
/// `s_l = π(2l+1)/P`, `S_j(q) = e^{iπq/P} · Σ_l g_{jl} e^{2πiql/P}`, which is
/// a length-`P` inverse DFT of the kernel weights.
pub fn assemble(alpha: f64, n: usize, level: u32, budget: AssemblyBudget) -> Result<FracOpMatrix> {
    validate(alpha, n, level)?;
    budget.check(n, level)?;
    let dim = 2 * n;
    let ni = n as i64;
    let count = n << level;
    let p = 2 * count;
    let fft: Arc<dyn Fft<f64>> = FftPlanner::new().plan_fft_inverse(p);
    let pref = prefactor(n, level, alpha);

    // Mode k uses S(k + d) for |d| <= 4.
    let q_lo = -ni - 4;
    let q_hi = ni + 4;
    let shift_phase: Vec<Complex64> = (q_lo..q_hi)
        .map(|q| Complex64::cis(PI * q as f64 / p as f64))
        .collect();
    let expansions: Vec<[(i64, Complex64); 5]> = (0..=ni).map(mode_expansion).collect();

    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    let (top, bottom) = entries.split_at_mut(n * dim);
    top.par_chunks_mut(dim)
        .zip(bottom.par_chunks_mut(dim))
        .enumerate()
        .for_each_init(
            || {
                (
                    vec![Complex64::new(0.0, 0.0); p],
                    vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()],
                    vec![Complex64::new(0.0, 0.0); (q_hi - q_lo) as usize],
                )
            },
            |(buf, scratch, sums), (j, (row, mirror))| {
                buf.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
                for l in first_index(j, level)..count {
                    buf[l] = Complex64::new(kernel_weight(j, l, n, level, alpha), 0.0);
                }
                fft.process_with_scratch(buf, scratch);
                for (idx, q) in (q_lo..q_hi).enumerate() {
                    let r = q.rem_euclid(p as i64) as usize;
                    sums[idx] = shift_phase[idx] * buf[r];
                }
                let entry = |k: i64| -> Complex64 {
                    let exp = if k >= 0 {
                        expansions[k as usize]
                    } else {
                        mode_expansion(k)
                    };
                    let acc: Complex64 = exp
                        .iter()
                        .map(|&(d, c)| c * sums[(k + d - q_lo) as usize])
                        .sum();
                    acc * pref
                };
                for k in 1..ni {
                    let v = entry(k);
                    row[(ni + k) as usize] = v;
                    row[(ni - k) as usize] = v.conj();
                }
                row[0] = entry(-ni);
                for k in -ni..ni {
                    let idx = (k + ni) as usize;
                    mirror[idx] = if k % 2 == 0 { row[idx] } else { -row[idx] };
                }
            },
        );
    FracOpMatrix::from_parts(n, alpha, vec![level], entries)
}
