//! Richardson extrapolation across consecutive refinement levels.
//!
//! Level `r` of the table combines two neighbours of level `r - 1` with
//! weight `2^{r+1-α}`, which removes the `m^{-(r+1-α)}` error term.

use num_complex::Complex64;

use super::assemble::{assemble, validate, AssemblyBudget};
use super::matrix::FracOpMatrix;
use crate::error::{Error, Result};

fn weight(order: usize, alpha: f64) -> f64 {
    2f64.powf(order as f64 + 1.0 - alpha)
}

/// Combines single-level operators at levels `m, m+1, ..., m+n` into
/// `M^{(m, ..., m+n)}`.
pub fn extrapolate(matrices: &[FracOpMatrix]) -> Result<FracOpMatrix> {
    let first = matrices
        .first()
        .ok_or_else(|| Error::IncompatibleLadder("no operators given".into()))?;
    let (n, alpha) = (first.n(), first.alpha());
    for (i, m) in matrices.iter().enumerate() {
        if m.n() != n || m.alpha() != alpha {
            return Err(Error::IncompatibleLadder(format!(
                "entry {i} has (α, N) = ({}, {}), expected ({alpha}, {n})",
                m.alpha(),
                m.n()
            )));
        }
        if m.levels().len() != 1 {
            return Err(Error::IncompatibleLadder(format!(
                "entry {i} is already a combination {:?}",
                m.levels()
            )));
        }
        if m.levels()[0] != first.levels()[0] + i as u32 {
            return Err(Error::IncompatibleLadder(format!(
                "levels are not consecutive: entry {i} has level {}",
                m.levels()[0]
            )));
        }
    }

    let mut column: Vec<Vec<Complex64>> = matrices.iter().map(|m| m.entries().to_vec()).collect();
    for order in 1..matrices.len() {
        let w = weight(order, alpha);
        let denom = w - 1.0;
        column = column
            .windows(2)
            .map(|pair| {
                pair[1]
                    .iter()
                    .zip(&pair[0])
                    .map(|(fine, coarse)| (fine * w - coarse) / denom)
                    .collect()
            })
            .collect();
    }
    let levels = matrices.iter().map(|m| m.levels()[0]).collect();
    FracOpMatrix::from_parts(n, alpha, levels, column.pop().expect("non-empty ladder"))
}

/// Scalar weights `c_i` with `M^{(m..m+n)} = Σ_i c_i M^{(m+i)}`.
pub fn ladder_weights(alpha: f64, len: usize) -> Vec<f64> {
    let mut column: Vec<Vec<f64>> = (0..len)
        .map(|i| {
            let mut e = vec![0.0; len];
            e[i] = 1.0;
            e
        })
        .collect();
    for order in 1..len {
        let w = weight(order, alpha);
        column = column
            .windows(2)
            .map(|pair| {
                pair[1]
                    .iter()
                    .zip(&pair[0])
                    .map(|(fine, coarse)| (fine * w - coarse) / (w - 1.0))
                    .collect()
            })
            .collect();
    }
    column.pop().unwrap_or_default()
}

/// Builds `M^{(levels)}` for consecutive `levels` while holding at most two
/// dense matrices at a time.
pub fn assemble_ladder(
    alpha: f64,
    n: usize,
    levels: &[u32],
    budget: AssemblyBudget,
) -> Result<FracOpMatrix> {
    check_levels(levels)?;
    for &m in levels {
        validate(alpha, n, m)?;
        budget.check(n, m)?;
    }
    let weights = ladder_weights(alpha, levels.len());
    let dim = 2 * n;
    let mut acc = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (&m, &c) in levels.iter().zip(&weights) {
        let base = assemble(alpha, n, m, budget)?;
        for (a, b) in acc.iter_mut().zip(base.entries()) {
            *a += b * c;
        }
    }
    FracOpMatrix::from_parts(n, alpha, levels.to_vec(), acc)
}

pub(crate) fn check_levels(levels: &[u32]) -> Result<()> {
    if levels.is_empty() {
        return Err(Error::IncompatibleLadder("empty level set".into()));
    }
    if levels.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(Error::IncompatibleLadder(format!("levels {levels:?} are not consecutive")));
    }
    Ok(())
}
