//! Discrete Fourier analysis on the shifted nodes and the sparse
//! differentiation operators in mode space.
//!
//! Coefficients are stored for `k = -N..N-1`, at index `k + N`. The node
//! offset of half a spacing is absorbed by an explicit per-mode phase
//! `e^{∓ikπ/(2N)}` around an unshifted FFT.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Fourier coefficients `û(k)`, `k = -N..N-1`, of a `2π`-periodic function.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierField {
    coeffs: Vec<Complex64>,
    n: usize,
    is_real: bool,
}

impl FourierField {
    /// Wraps coefficients laid out as `k = -N..N-1`.
    pub fn from_coeffs(coeffs: Vec<Complex64>, is_real: bool) -> Result<Self> {
        if coeffs.len() < 4 || coeffs.len() % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "coefficient vector must have even length >= 4, got {}",
                coeffs.len()
            )));
        }
        let n = coeffs.len() / 2;
        Ok(Self { coeffs, n, is_real })
    }

    pub fn zeros(n: usize, is_real: bool) -> Self {
        Self { coeffs: vec![Complex64::new(0.0, 0.0); 2 * n], n, is_real }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of mode `k`, zero outside `-N..N-1`.
    pub fn mode(&self, k: i64) -> Complex64 {
        let n = self.n as i64;
        if k < -n || k >= n {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[(k + n) as usize]
    }

    pub fn set_mode(&mut self, k: i64, value: Complex64) {
        let n = self.n as i64;
        assert!(k >= -n && k < n, "mode {k} outside -{n}..{n}");
        self.coeffs[(k + n) as usize] = value;
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Checks `û(-k) = conj(û(k))` for `1 <= k < N` and a real `û(0)`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n as i64;
        let mut worst = self.mode(0).im.abs();
        for k in 1..n {
            worst = worst.max((self.mode(-k) - self.mode(k).conj()).norm());
        }
        worst
    }

    /// Forces exact Hermitian symmetry from the `k >= 0` half and drops the
    /// unpaired `k = -N` mode.
    pub fn symmetrize(&mut self) {
        let n = self.n as i64;
        let c0 = self.mode(0);
        self.set_mode(0, Complex64::new(c0.re, 0.0));
        for k in 1..n {
            let c = self.mode(k);
            self.set_mode(-k, c.conj());
        }
        self.set_mode(-n, Complex64::new(0.0, 0.0));
    }

    /// `Σ û(k) e^{iks}` by direct summation.
    pub fn evaluate_at(&self, s: f64) -> Complex64 {
        let n = self.n as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in -n..n {
            let c = self.coeffs[(k + n) as usize];
            if c.re != 0.0 || c.im != 0.0 {
                acc += c * Complex64::cis(k as f64 * s);
            }
        }
        acc
    }

    /// `a·self + b·other`, keeping the reality flag only if both are real.
    pub fn axpby(&self, a: f64, other: &FourierField, b: f64) -> Result<FourierField> {
        check_same_n(self, other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x * a + y * b)
            .collect();
        Ok(FourierField { coeffs, n: self.n, is_real: self.is_real && other.is_real })
    }

    pub fn clean(&self, policy: CleaningPolicy) -> FourierField {
        let mut out = self.clone();
        out.clean_in_place(policy);
        out
    }

    /// Zeroes modes below the policy threshold.
    pub fn clean_in_place(&mut self, policy: CleaningPolicy) {
        let threshold = match policy {
            CleaningPolicy::Off => return,
            CleaningPolicy::Absolute(t) => t,
            CleaningPolicy::RelativeToMax(f) => f * self.max_abs(),
        };
        for c in &mut self.coeffs {
            if c.norm() < threshold {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }
}

fn check_same_n(a: &FourierField, b: &FourierField) -> Result<()> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch(format!("N = {} vs N = {}", a.n, b.n)));
    }
    Ok(())
}

/// How small coefficients are rounded to zero after a transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CleaningPolicy {
    Off,
    /// Zero modes with `|û(k)| < t`.
    Absolute(f64),
    /// Zero modes with `|û(k)| < f · max |û|`.
    RelativeToMax(f64),
}

impl Default for CleaningPolicy {
    fn default() -> Self {
        CleaningPolicy::RelativeToMax(f64::EPSILON)
    }
}

/// Planned forward/inverse transforms for one `N`.
#[derive(Clone)]
pub struct FourierTransform {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    // e^{ikπ/(2N)} for k = -N..N-1
    phase: Vec<Complex64>,
    cleaning: CleaningPolicy,
}

impl std::fmt::Debug for FourierTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FourierTransform")
            .field("n", &self.n)
            .field("cleaning", &self.cleaning)
            .finish()
    }
}

impl FourierTransform {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("N must be >= 2, got {n}")));
        }
        let mut planner = FftPlanner::new();
        let len = 2 * n;
        let ni = n as i64;
        let phase = (-ni..ni)
            .map(|k| Complex64::cis(std::f64::consts::PI * k as f64 / len as f64))
            .collect();
        Ok(Self {
            n,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
            phase,
            cleaning: CleaningPolicy::default(),
        })
    }

    pub fn with_cleaning(mut self, cleaning: CleaningPolicy) -> Self {
        self.cleaning = cleaning;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cleaning(&self) -> CleaningPolicy {
        self.cleaning
    }

    /// Coefficients of real nodal data. The result is exactly Hermitian on
    /// `1 <= |k| < N`; the Nyquist mode is kept (it is purely imaginary and
    /// vanishes for even-extended data).
    pub fn forward_real(&self, samples: &[f64]) -> Result<FourierField> {
        self.check_len(samples.len())?;
        let mut buf: Vec<Complex64> = samples.iter().map(|&u| Complex64::new(u, 0.0)).collect();
        self.forward.process(&mut buf);
        let n = self.n;
        let ni = n as i64;
        let scale = 1.0 / (2 * n) as f64;
        let mut field = FourierField::zeros(n, true);
        for k in 0..ni {
            let c = buf[k as usize] * self.phase[(k + ni) as usize].conj() * scale;
            field.set_mode(k, c);
            if k > 0 {
                field.set_mode(-k, c.conj());
            }
        }
        let c0 = field.mode(0);
        field.set_mode(0, Complex64::new(c0.re, 0.0));
        let nyq = buf[n] * self.phase[0].conj() * scale;
        field.set_mode(-ni, Complex64::new(0.0, nyq.im));
        field.clean_in_place(self.cleaning);
        Ok(field)
    }

    /// Coefficients of complex nodal data, no symmetry assumed.
    pub fn forward_complex(&self, samples: &[Complex64]) -> Result<FourierField> {
        self.check_len(samples.len())?;
        let mut buf = samples.to_vec();
        self.forward.process(&mut buf);
        let n = self.n;
        let ni = n as i64;
        let len = 2 * n;
        let scale = 1.0 / len as f64;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
        for k in -ni..ni {
            let p = k.rem_euclid(len as i64) as usize;
            coeffs[(k + ni) as usize] = buf[p] * self.phase[(k + ni) as usize].conj() * scale;
        }
        let mut field = FourierField { coeffs, n, is_real: false };
        field.clean_in_place(self.cleaning);
        Ok(field)
    }

    /// Nodal values `u(s_j)` of a field, all `2N` nodes.
    pub fn inverse_complex(&self, field: &FourierField) -> Result<Vec<Complex64>> {
        self.check_len(field.coeffs.len())?;
        let n = self.n;
        let ni = n as i64;
        let len = 2 * n;
        let mut buf = vec![Complex64::new(0.0, 0.0); len];
        for k in -ni..ni {
            let p = k.rem_euclid(len as i64) as usize;
            buf[p] = field.coeffs[(k + ni) as usize] * self.phase[(k + ni) as usize];
        }
        self.inverse.process(&mut buf);
        Ok(buf)
    }

    /// Nodal values of a real field; the imaginary rounding residue is dropped.
    pub fn inverse_real(&self, field: &FourierField) -> Result<Vec<f64>> {
        Ok(self.inverse_complex(field)?.into_iter().map(|c| c.re).collect())
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != 2 * self.n {
            return Err(Error::LengthMismatch { expected: 2 * self.n, got });
        }
        Ok(())
    }
}

/// One-shot forward transform of real samples.
pub fn forward_transform(samples: &[f64], n: usize) -> Result<FourierField> {
    if samples.len() != 2 * n {
        return Err(Error::LengthMismatch { expected: 2 * n, got: samples.len() });
    }
    FourierTransform::new(n)?.forward_real(samples)
}

/// One-shot inverse transform; real fields come back with zero imaginary part.
pub fn inverse_transform(field: &FourierField) -> Result<Vec<Complex64>> {
    let t = FourierTransform::new(field.n())?;
    let mut values = t.inverse_complex(field)?;
    if field.is_real() {
        for v in &mut values {
            v.im = 0.0;
        }
    }
    Ok(values)
}

/// Sparse mode-space operator for `∂x`, `∂x²` or `∂x³` under `x = L cot s`.
#[derive(Debug, Clone)]
pub struct DiffOperator {
    order: u8,
    scale: f64,
    n: usize,
    // For input index k + N: (output mode offset d, weight) pairs.
    table: Vec<Vec<(i64, Complex64)>>,
}

impl DiffOperator {
    pub fn new(order: u8, n: usize, scale: f64) -> Result<Self> {
        if !(1..=3).contains(&order) {
            return Err(Error::InvalidParameter(format!("derivative order must be 1, 2 or 3, got {order}")));
        }
        if !(scale > 0.0) {
            return Err(Error::InvalidParameter(format!("L must be positive, got {scale}")));
        }
        let ni = n as i64;
        let table = (-ni..ni).map(|k| couplings(order, k, scale)).collect();
        Ok(Self { order, scale, n, table })
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Nonzero `(output mode, weight)` pairs for input mode `k`, before projection.
    pub fn couplings_of(&self, k: i64) -> &[(i64, Complex64)] {
        &self.table[(k + self.n as i64) as usize]
    }

    /// Applies the operator with out-of-range outputs dropped. For real
    /// fields the unpaired `k = -N` mode is ignored and the output is
    /// symmetrized.
    pub fn apply(&self, field: &FourierField) -> Result<FourierField> {
        if field.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "operator N = {}, field N = {}",
                self.n,
                field.n()
            )));
        }
        let ni = self.n as i64;
        let mut out = FourierField::zeros(self.n, field.is_real());
        let lo = if field.is_real() { -ni + 1 } else { -ni };
        for k in lo..ni {
            let c = field.mode(k);
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            for &(target, w) in self.couplings_of(k) {
                if target >= -ni && target < ni {
                    out.coeffs[(target + ni) as usize] += w * c;
                }
            }
        }
        if field.is_real() {
            out.symmetrize();
        }
        Ok(out)
    }
}

/// Image of `e^{iks}` under the order-`order` x-derivative, as mode couplings.
fn couplings(order: u8, k: i64, scale: f64) -> Vec<(i64, Complex64)> {
    let kf = k as f64;
    let k2 = kf * kf;
    let k3 = k2 * kf;
    let re = |v: f64| Complex64::new(v, 0.0);
    let im = |v: f64| Complex64::new(0.0, v);
    let raw: Vec<(i64, Complex64)> = match order {
        1 => {
            let l = scale;
            vec![
                (k + 2, im(kf / (4.0 * l))),
                (k, im(-kf / (2.0 * l))),
                (k - 2, im(kf / (4.0 * l))),
            ]
        }
        2 => {
            let l2 = scale * scale;
            vec![
                (k + 4, re(-(k2 + 2.0 * kf) / (16.0 * l2))),
                (k + 2, re((k2 + kf) / (4.0 * l2))),
                (k, re(-3.0 * k2 / (8.0 * l2))),
                (k - 2, re((k2 - kf) / (4.0 * l2))),
                (k - 4, re(-(k2 - 2.0 * kf) / (16.0 * l2))),
            ]
        }
        3 => {
            let l3 = scale * scale * scale;
            vec![
                (k + 6, im(-(k3 + 6.0 * k2 + 8.0 * kf) / (64.0 * l3))),
                (k + 4, im((3.0 * k3 + 12.0 * k2 + 12.0 * kf) / (32.0 * l3))),
                (k + 2, im(-(15.0 * k3 + 30.0 * k2 + 24.0 * kf) / (64.0 * l3))),
                (k, im((5.0 * k3 + 4.0 * kf) / (16.0 * l3))),
                (k - 2, im(-(15.0 * k3 - 30.0 * k2 + 24.0 * kf) / (64.0 * l3))),
                (k - 4, im((3.0 * k3 - 12.0 * k2 + 12.0 * kf) / (32.0 * l3))),
                (k - 6, im(-(k3 - 6.0 * k2 + 8.0 * kf) / (64.0 * l3))),
            ]
        }
        _ => unreachable!(),
    };
    raw.into_iter().filter(|(_, w)| w.re != 0.0 || w.im != 0.0).collect()
}

/// Convenience wrapper building a [`DiffOperator`] per call.
pub fn apply_diff(field: &FourierField, order: u8, scale: f64) -> Result<FourierField> {
    DiffOperator::new(order, field.n(), scale)?.apply(field)
}
