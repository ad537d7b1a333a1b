//! Time integration of `v_t + (v²)_x = ∂x𝒟^α v + τ v_xxx` in coefficient
//! space: SBDF2 with the dispersive term implicit, started by a
//! Richardson-extrapolated semi-implicit Euler step.

mod banded;

use std::sync::Arc;

use num_complex::Complex64;

pub use banded::BandLu;

use crate::error::{Error, Result};
use crate::fourier::{CleaningPolicy, DiffOperator, FourierField, FourierTransform};
use crate::fracderiv::FracOpMatrix;
use crate::grid::{to_x, SpectralGrid};

/// Substep counts of the Euler start; combined to fourth order.
pub const INIT_SUBSTEPS: [usize; 4] = [1, 2, 4, 8];

/// Factored `a·I − c·∂x³` acting on real fields.
///
/// `∂x³` only couples modes of equal parity, so the system splits into two
/// banded problems with three sub- and super-diagonals. The unpaired
/// `k = -N` mode is excluded and always returned as zero.
#[derive(Debug, Clone)]
pub struct ImplicitSolver {
    n: usize,
    a: f64,
    c: f64,
    // Index 0: even k, index 1: odd k; each ordered by increasing k.
    classes: [(Vec<i64>, BandLu); 2],
}

impl ImplicitSolver {
    pub fn new(a: f64, c: f64, d3: &DiffOperator) -> Result<Self> {
        if d3.order() != 3 {
            return Err(Error::InvalidParameter("implicit solver needs the third-order operator".into()));
        }
        if !(a > 0.0) || !(c >= 0.0) {
            return Err(Error::InvalidParameter(format!("need a > 0 and c >= 0, got a = {a}, c = {c}")));
        }
        let n = d3.n();
        let ni = n as i64;
        let build = |parity: i64| -> Result<(Vec<i64>, BandLu)> {
            let modes: Vec<i64> = (-ni + 1..ni).filter(|k| k.rem_euclid(2) == parity).collect();
            let first = modes[0];
            let pos = |k: i64| ((k - first) / 2) as usize;
            let size = modes.len();
            // Dense band assembled by scattering each input mode's couplings.
            let mut band = vec![Complex64::new(0.0, 0.0); size * 7];
            for &k in &modes {
                let col = pos(k);
                for &(target, w) in d3.couplings_of(k) {
                    if target <= -ni || target >= ni {
                        continue;
                    }
                    let row = pos(target);
                    band[row * 7 + (col + 3 - row)] -= w * c;
                }
                band[col * 7 + 3] += a;
            }
            let lu = BandLu::factor(size, 3, 3, |i, j| band[i * 7 + (j + 3 - i)])?;
            Ok((modes, lu))
        };
        let classes = [build(0)?, build(1)?];
        Ok(Self { n, a, c, classes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `(a, c)` of `a·I − c·∂x³`.
    pub fn coefficients(&self) -> (f64, f64) {
        (self.a, self.c)
    }

    pub fn solve(&self, rhs: &FourierField) -> Result<FourierField> {
        if rhs.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "solver N = {}, right-hand side N = {}",
                self.n,
                rhs.n()
            )));
        }
        let mut out = FourierField::zeros(self.n, rhs.is_real());
        for (modes, lu) in &self.classes {
            let mut b: Vec<Complex64> = modes.iter().map(|&k| rhs.mode(k)).collect();
            lu.solve(&mut b);
            for (&k, v) in modes.iter().zip(b) {
                out.set_mode(k, v);
            }
        }
        if rhs.is_real() {
            out.symmetrize();
        }
        Ok(out)
    }
}

/// Physical and numerical parameters of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionParams {
    pub alpha: f64,
    pub tau: f64,
    pub dt: f64,
    pub scale: f64,
    /// Truncate to two thirds of the modes around the quadratic product.
    pub dealias: bool,
    pub cleaning: CleaningPolicy,
}

impl EvolutionParams {
    pub fn new(alpha: f64, tau: f64, dt: f64, scale: f64) -> Self {
        Self { alpha, tau, dt, scale, dealias: false, cleaning: CleaningPolicy::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidParameter(format!("alpha must lie in [0, 1], got {}", self.alpha)));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidParameter(format!("tau must be positive, got {}", self.tau)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::InvalidParameter(format!("L must be positive, got {}", self.scale)));
        }
        Ok(())
    }
}

/// Two consecutive time levels plus the explicit terms of the older one.
#[derive(Debug, Clone)]
pub struct EvolutionState {
    pub current: FourierField,
    pub previous: FourierField,
    rhs_previous: FourierField,
    pub step: usize,
    pub dt: f64,
}

impl EvolutionState {
    pub fn t(&self) -> f64 {
        self.step as f64 * self.dt
    }
}

/// Everything that stays fixed over a run: operators, transform and the
/// factored implicit matrix.
#[derive(Debug, Clone)]
pub struct Evolver {
    params: EvolutionParams,
    op: Arc<FracOpMatrix>,
    grid: SpectralGrid,
    transform: FourierTransform,
    d1: DiffOperator,
    d3: DiffOperator,
    bdf: ImplicitSolver,
}

impl Evolver {
    pub fn new(params: EvolutionParams, op: Arc<FracOpMatrix>) -> Result<Self> {
        params.validate()?;
        if (op.alpha() - params.alpha).abs() > 0.0 {
            return Err(Error::InvalidParameter(format!(
                "operator built for alpha = {}, run uses {}",
                op.alpha(),
                params.alpha
            )));
        }
        let n = op.n();
        let grid = SpectralGrid::new(n, params.scale)?;
        let transform = FourierTransform::new(n)?.with_cleaning(params.cleaning);
        let d1 = DiffOperator::new(1, n, params.scale)?;
        let d3 = DiffOperator::new(3, n, params.scale)?;
        let bdf = ImplicitSolver::new(1.5, params.dt * params.tau, &d3)?;
        Ok(Self { params, op, grid, transform, d1, d3, bdf })
    }

    pub fn params(&self) -> &EvolutionParams {
        &self.params
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn n(&self) -> usize {
        self.op.n()
    }

    /// Evenly extended and transformed initial datum, Nyquist mode removed.
    pub fn initial_field<F: Fn(f64) -> f64>(&self, datum: F) -> Result<FourierField> {
        let samples = self.grid.sample_even_extension(datum)?;
        let mut field = self.transform.forward_real(&samples)?;
        field.symmetrize();
        Ok(field)
    }

    /// Values at the `N` physical nodes.
    pub fn physical_values(&self, field: &FourierField) -> Result<Vec<f64>> {
        let mut v = self.transform.inverse_real(field)?;
        v.truncate(self.n());
        Ok(v)
    }

    fn dealiased(&self, field: &FourierField) -> FourierField {
        let mut out = field.clone();
        let n = self.n() as i64;
        let cut = 2 * n / 3;
        for k in -n..n {
            if k.abs() > cut {
                out.set_mode(k, Complex64::new(0.0, 0.0));
            }
        }
        out
    }

    /// Coefficients of `∂x𝒟^α v − ∂x(v²)`.
    pub fn rhs_explicit(&self, field: &FourierField) -> Result<FourierField> {
        let frac_nodes = self.op.apply_real(field, self.params.scale)?;
        let mut frac = self.transform.forward_real(&frac_nodes)?;
        frac.symmetrize();

        let base = if self.params.dealias { self.dealiased(field) } else { field.clone() };
        let mut sq = self.transform.inverse_real(&base)?;
        for v in &mut sq {
            *v *= *v;
        }
        let mut sq_field = self.transform.forward_real(&sq)?;
        if self.params.dealias {
            sq_field = self.dealiased(&sq_field);
        }
        sq_field.symmetrize();
        let flux = self.d1.apply(&sq_field)?;
        frac.axpby(1.0, &flux, -1.0)
    }

    fn finish(&self, mut field: FourierField, step: usize, t: f64) -> Result<FourierField> {
        field.symmetrize();
        field.clean_in_place(self.params.cleaning);
        if field.coeffs().iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFiniteSolution { step, t });
        }
        Ok(field)
    }

    /// `substeps` semi-implicit Euler steps of size `dt/substeps`.
    pub fn euler_march(&self, v0: &FourierField, substeps: usize) -> Result<FourierField> {
        if substeps == 0 {
            return Err(Error::InvalidParameter("need at least one Euler substep".into()));
        }
        let h = self.params.dt / substeps as f64;
        let solver = ImplicitSolver::new(1.0, h * self.params.tau, &self.d3)?;
        let mut v = v0.clone();
        for i in 0..substeps {
            let rhs = v.axpby(1.0, &self.rhs_explicit(&v)?, h)?;
            v = self.finish(solver.solve(&rhs)?, 1, h * (i + 1) as f64)?;
        }
        Ok(v)
    }

    /// Builds the two starting levels from `v0`.
    pub fn init_first_step(&self, v0: FourierField) -> Result<EvolutionState> {
        if v0.n() != self.n() || !v0.is_real() {
            return Err(Error::InvalidParameter("initial field must be real with matching N".into()));
        }
        let mut v0 = v0;
        v0.symmetrize();
        let estimates = INIT_SUBSTEPS
            .iter()
            .map(|&s| self.euler_march(&v0, s))
            .collect::<Result<Vec<_>>>()?;
        let weights = richardson_weights(estimates.len());
        let mut v1 = FourierField::zeros(self.n(), true);
        for (w, e) in weights.iter().zip(&estimates) {
            v1 = v1.axpby(1.0, e, *w)?;
        }
        let v1 = self.finish(v1, 1, self.params.dt)?;
        let rhs_previous = self.rhs_explicit(&v0)?;
        Ok(EvolutionState { current: v1, previous: v0, rhs_previous, step: 1, dt: self.params.dt })
    }

    /// One SBDF2 step.
    pub fn step(&self, state: &mut EvolutionState) -> Result<()> {
        let dt = self.params.dt;
        let rhs_now = self.rhs_explicit(&state.current)?;
        let mut b = state.current.axpby(2.0, &state.previous, -0.5)?;
        b = b.axpby(1.0, &rhs_now, 2.0 * dt)?;
        b = b.axpby(1.0, &state.rhs_previous, -dt)?;
        let next = self.bdf.solve(&b)?;
        let step = state.step + 1;
        let next = self.finish(next, step, step as f64 * dt)?;
        state.previous = std::mem::replace(&mut state.current, next);
        state.rhs_previous = rhs_now;
        state.step = step;
        Ok(())
    }

    /// Number of steps of size `dt` that reach `t_end`; rejects end times
    /// that are not a whole number of steps.
    pub fn steps_to(&self, t_end: f64) -> Result<usize> {
        let steps = (t_end / self.params.dt).round();
        if !(steps >= 0.0) || (steps * self.params.dt - t_end).abs() > 1e-9 * t_end.abs().max(1.0) {
            return Err(Error::InvalidParameter(format!(
                "t_end = {t_end} is not a multiple of dt = {}",
                self.params.dt
            )));
        }
        Ok(steps as usize)
    }

    /// Runs from `v0` to `t_end`, calling `observe` after every step
    /// (including the start) with the current state.
    pub fn run<F>(&self, v0: FourierField, t_end: f64, mut observe: F) -> Result<FourierField>
    where
        F: FnMut(usize, &FourierField) -> Result<()>,
    {
        let total = self.steps_to(t_end)?;
        observe(0, &v0)?;
        if total == 0 {
            return Ok(v0);
        }
        let mut state = self.init_first_step(v0)?;
        observe(1, &state.current)?;
        while state.step < total {
            self.step(&mut state)?;
            observe(state.step, &state.current)?;
        }
        Ok(state.current)
    }
}

/// Weights `c_i` such that `Σ c_i E(dt/2^i)` is the last entry of the
/// Richardson table for a first-order method with step ratio 2.
pub fn richardson_weights(levels: usize) -> Vec<f64> {
    let mut column: Vec<Vec<f64>> = (0..levels)
        .map(|i| {
            let mut e = vec![0.0; levels];
            e[i] = 1.0;
            e
        })
        .collect();
    for j in 1..levels {
        let d = (1u64 << j) as f64 - 1.0;
        column = column
            .windows(2)
            .map(|p| p[1].iter().zip(&p[0]).map(|(f, c)| f + (f - c) / d).collect())
            .collect();
    }
    column.pop().unwrap_or_default()
}

/// Front position and oscillation measures of a profile going from 1 on the
/// left to 0 on the right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveDiagnostics {
    pub position: f64,
    /// `max v − 1` over the physical nodes.
    pub overshoot: f64,
    /// `−min v` over the physical nodes.
    pub undershoot: f64,
}

/// Locates the rightmost crossing of `level` by bisection on the spectral
/// interpolant.
pub fn wave_diagnostics(field: &FourierField, scale: f64, level: f64) -> Result<WaveDiagnostics> {
    let grid = SpectralGrid::new(field.n(), scale)?;
    let value = |s: f64| field.evaluate_at(s).re - level;
    let s_nodes = &grid.s_nodes()[..field.n()];
    let vals: Vec<f64> = s_nodes.iter().map(|&s| value(s)).collect();
    // Nodes run from large x to small x; the first sign change is the front.
    let j = vals
        .windows(2)
        .position(|w| (w[0] <= 0.0) != (w[1] <= 0.0))
        .ok_or(Error::NoCrossing(level))?;
    let (mut lo, mut hi) = (s_nodes[j], s_nodes[j + 1]);
    let mut f_lo = vals[j];
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = value(mid);
        if (f_mid <= 0.0) == (f_lo <= 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let physical: Vec<f64> = vals.iter().map(|v| v + level).collect();
    let max = physical.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = physical.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(WaveDiagnostics { position: to_x(0.5 * (lo + hi), scale), overshoot: max - 1.0, undershoot: -min })
}

/// Average front speed between two measurements.
pub fn front_speed(earlier: (f64, f64), later: (f64, f64)) -> f64 {
    (later.1 - earlier.1) / (later.0 - earlier.0)
}
