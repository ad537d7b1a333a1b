//! Error measurements of the fractional operator ladder against closed forms.
//!
//! For each `α` the single-level results `M^{(m)}·û` are computed once; every
//! consecutive ladder is a fixed linear combination of them (see
//! [`ladder_weights`]), so all ladder errors come from the same products.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::FourierTransform;
use crate::fracderiv::{assemble, ladder_weights, AssemblyBudget};
use crate::grid::SpectralGrid;
use crate::oracles::{FunctionId, TestFunction};

/// `points` equispaced values covering `[0, 1]`, endpoints included.
pub fn alpha_grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points).map(|j| j as f64 / (points - 1) as f64).collect(),
    }
}

/// A set of consecutive refinement levels `start..start+len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LevelSet {
    pub start: u32,
    pub len: u32,
}

impl LevelSet {
    pub fn new(start: u32, len: u32) -> Self {
        Self { start, len }
    }

    pub fn levels(&self) -> Vec<u32> {
        (self.start..self.start + self.len).collect()
    }

    pub fn last(&self) -> u32 {
        self.start + self.len - 1
    }

    /// `M^(1,2,3)` style label.
    pub fn label(&self) -> String {
        let inner: Vec<String> = self.levels().iter().map(u32::to_string).collect();
        format!("M^({})", inner.join(","))
    }
}

/// Function, grid and quadrature depth of one experiment.
#[derive(Debug, Clone, Copy)]
pub struct Experiment {
    pub function: FunctionId,
    pub n: usize,
    pub scale: f64,
    pub max_level: u32,
}

impl Experiment {
    /// Uses the function's recommended `N` and `L` with levels up to 6.
    pub fn recommended(function: FunctionId) -> Self {
        let f = TestFunction::get(function);
        Self { function, n: f.recommended_n, scale: f.recommended_l, max_level: 6 }
    }
}

/// Per-`α` maximum nodal errors for every consecutive level set within
/// `1..=max_level`.
#[derive(Debug, Clone)]
pub struct ErrorCurves {
    pub experiment: Experiment,
    pub alphas: Vec<f64>,
    sets: Vec<LevelSet>,
    // errors[set][alpha]
    errors: Vec<Vec<f64>>,
}

impl ErrorCurves {
    pub fn sets(&self) -> &[LevelSet] {
        &self.sets
    }

    pub fn curve(&self, set: LevelSet) -> Option<&[f64]> {
        self.sets.iter().position(|s| *s == set).map(|i| self.errors[i].as_slice())
    }

    /// `max_α E^{(set)}(α)`.
    pub fn max_error(&self, set: LevelSet) -> Option<f64> {
        self.curve(set).map(|c| c.iter().copied().fold(0.0, f64::max))
    }

    /// `log₂(E^{(coarse)}(α) / E^{(fine)}(α))` for every `α`.
    pub fn rate_curve(&self, coarse: LevelSet, fine: LevelSet) -> Option<Vec<f64>> {
        let a = self.curve(coarse)?;
        let b = self.curve(fine)?;
        Some(a.iter().zip(b).map(|(x, y)| (x / y).log2()).collect())
    }
}

fn all_sets(max_level: u32) -> Vec<LevelSet> {
    let mut sets = Vec::new();
    for len in 1..=max_level {
        for start in 1..=max_level + 1 - len {
            sets.push(LevelSet::new(start, len));
        }
    }
    sets
}

/// Samples the test function, transforms it, and returns the field together
/// with the physical nodes.
fn prepare(experiment: &Experiment) -> Result<(SpectralGrid, crate::fourier::FourierField)> {
    let f = TestFunction::get(experiment.function);
    let grid = SpectralGrid::new(experiment.n, experiment.scale)?;
    let samples = grid.sample_even_extension(f.v)?;
    let field = FourierTransform::new(experiment.n)?.forward_real(&samples)?;
    Ok((grid, field))
}

/// Nodal values of `M^{(m)}` applied to the experiment's function at the `N`
/// physical nodes, for `m = 1..=max_level`.
pub fn single_level_results(experiment: &Experiment, alpha: f64) -> Result<Vec<Vec<f64>>> {
    let (_, field) = prepare(experiment)?;
    let n = experiment.n;
    (1..=experiment.max_level)
        .map(|m| {
            let op = assemble(alpha, n, m, AssemblyBudget::unlimited())?;
            let mut out = op.apply_real(&field, experiment.scale)?;
            out.truncate(n);
            Ok(out)
        })
        .collect()
}

/// Combines single-level results into the ladder `set`.
pub fn combine(singles: &[Vec<f64>], set: LevelSet, alpha: f64) -> Vec<f64> {
    let weights = ladder_weights(alpha, set.len as usize);
    let first = (set.start - 1) as usize;
    let mut out = vec![0.0; singles[first].len()];
    for (i, w) in weights.iter().enumerate() {
        for (o, v) in out.iter_mut().zip(&singles[first + i]) {
            *o += w * v;
        }
    }
    out
}

/// Error curves over `alphas`, parallel over `α`.
pub fn error_curves(experiment: Experiment, alphas: &[f64]) -> Result<ErrorCurves> {
    let f = TestFunction::get(experiment.function);
    if experiment.max_level == 0 {
        return Err(Error::InvalidParameter("max_level must be >= 1".into()));
    }
    for &a in alphas {
        if f.exact(0.0, a).is_none() {
            return Err(Error::InvalidParameter(format!(
                "{} has no closed form at alpha = {a}",
                experiment.function
            )));
        }
    }
    let (grid, _) = prepare(&experiment)?;
    let sets = all_sets(experiment.max_level);
    let per_alpha: Vec<Vec<f64>> = alphas
        .par_iter()
        .map(|&alpha| -> Result<Vec<f64>> {
            let singles = single_level_results(&experiment, alpha)?;
            let exact = grid
                .x_nodes()
                .iter()
                .map(|&x| f.exact(x, alpha).expect("checked above"))
                .collect::<Result<Vec<f64>>>()?;
            Ok(sets
                .iter()
                .map(|&set| {
                    combine(&singles, set, alpha)
                        .iter()
                        .zip(&exact)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    let errors = (0..sets.len()).map(|s| per_alpha.iter().map(|row| row[s]).collect()).collect();
    Ok(ErrorCurves { experiment, alphas: alphas.to_vec(), sets, errors })
}

/// Which ladder rows a table reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowFamily {
    /// `M^(m)`, `m = 1..=6`.
    Single,
    /// `M^(m,m+1)`.
    Pairs,
    /// `M^(m,m+1,m+2)`.
    Triples,
    /// Four-, five- and six-level ladders.
    Higher,
    /// `M^(1)`, `M^(1,2)`, …, `M^(1,…,6)`.
    Prefixes,
}

impl RowFamily {
    pub fn rows(self) -> Vec<LevelSet> {
        match self {
            RowFamily::Single => (1..=6).map(|m| LevelSet::new(m, 1)).collect(),
            RowFamily::Pairs => (1..=5).map(|m| LevelSet::new(m, 2)).collect(),
            RowFamily::Triples => (1..=4).map(|m| LevelSet::new(m, 3)).collect(),
            RowFamily::Higher => vec![
                LevelSet::new(1, 4),
                LevelSet::new(2, 4),
                LevelSet::new(3, 4),
                LevelSet::new(1, 5),
                LevelSet::new(2, 5),
                LevelSet::new(1, 6),
            ],
            RowFamily::Prefixes => (1..=6).map(|len| LevelSet::new(1, len)).collect(),
        }
    }
}

/// Rows are level sets, columns are labelled error curves reduced by max.
#[derive(Debug, Clone)]
pub struct ErrorTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<LevelSet>,
    /// values[row][column]
    pub values: Vec<Vec<f64>>,
    pub alphas: Vec<f64>,
}

impl ErrorTable {
    /// Max-over-`α` table for one row family across several experiments.
    pub fn from_curves(name: &str, family: RowFamily, curves: &[ErrorCurves]) -> Result<Self> {
        let rows = family.rows();
        let columns = curves.iter().map(|c| c.experiment.function.to_string()).collect();
        let values = rows
            .iter()
            .map(|&set| {
                curves
                    .iter()
                    .map(|c| {
                        c.max_error(set).ok_or_else(|| {
                            Error::InvalidParameter(format!("{} not computed", set.label()))
                        })
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?;
        let alphas = curves.first().map(|c| c.alphas.clone()).unwrap_or_default();
        Ok(Self { name: name.to_string(), columns, rows, values, alphas })
    }

    /// One column per `(function, α)` pair, for the endpoint-only studies.
    pub fn per_alpha(name: &str, family: RowFamily, curves: &[ErrorCurves]) -> Result<Self> {
        let rows = family.rows();
        let mut columns = Vec::new();
        for c in curves {
            for a in &c.alphas {
                columns.push(format!("{} a={a}", c.experiment.function));
            }
        }
        let values = rows
            .iter()
            .map(|&set| {
                let mut row = Vec::new();
                for c in curves {
                    let curve = c.curve(set).ok_or_else(|| {
                        Error::InvalidParameter(format!("{} not computed", set.label()))
                    })?;
                    row.extend_from_slice(curve);
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;
        let alphas = curves.first().map(|c| c.alphas.clone()).unwrap_or_default();
        Ok(Self { name: name.to_string(), columns, rows, values, alphas })
    }

    pub fn value(&self, row: LevelSet, column: &str) -> Option<f64> {
        let r = self.rows.iter().position(|s| *s == row)?;
        let c = self.columns.iter().position(|s| s == column)?;
        Some(self.values[r][c])
    }
}
