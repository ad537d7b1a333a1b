//! Shifted node families on the periodic interval and the algebraic map
//! `x = L cot(s)` that takes `s ∈ (0, π)` onto the whole real line.
//!
//! The primary grid holds `2N` nodes `s_j = π(2j+1)/(2N)` covering `(0, 2π)`.
//! Only the first `N` of them carry physical coordinates; the second half is
//! the reflected copy used by the even extension.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Node layout and map scale for a `2N`-mode Fourier representation.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    n: usize,
    scale: f64,
    s_nodes: Vec<f64>,
    x_nodes: Vec<f64>,
}

impl SpectralGrid {
    pub fn new(n: usize, scale: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("N must be >= 2, got {n}")));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::InvalidParameter(format!("L must be positive, got {scale}")));
        }
        let s_nodes: Vec<f64> = (0..2 * n).map(|j| node_angle(j, n)).collect();
        let x_nodes = s_nodes[..n].iter().map(|&s| to_x(s, scale)).collect();
        Ok(Self { n, scale, s_nodes, x_nodes })
    }

    /// Half the number of Fourier modes.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// All `2N` angles in `(0, 2π)`.
    pub fn s_nodes(&self) -> &[f64] {
        &self.s_nodes
    }

    /// Physical coordinates of the first `N` nodes, strictly decreasing.
    pub fn x_nodes(&self) -> &[f64] {
        &self.x_nodes
    }

    pub fn to_x(&self, s: f64) -> f64 {
        to_x(s, self.scale)
    }

    pub fn to_s(&self, x: f64) -> f64 {
        to_s(x, self.scale)
    }

    /// Samples `f` at the physical nodes and reflects them about `s = π`.
    pub fn sample_even_extension<F>(&self, f: F) -> Result<Vec<f64>>
    where
        F: Fn(f64) -> f64,
    {
        let n = self.n;
        let mut out = vec![0.0; 2 * n];
        for (j, &x) in self.x_nodes.iter().enumerate() {
            let value = f(x);
            if !value.is_finite() {
                return Err(Error::NonFiniteSample { index: j, x, value });
            }
            out[j] = value;
            out[2 * n - 1 - j] = value;
        }
        Ok(out)
    }

    /// Largest `|u|` at the two extremal physical nodes, the quantity behind
    /// the usual rule of thumb for picking `L`. The caller owns the threshold.
    pub fn extremal_magnitude(&self, samples: &[f64]) -> f64 {
        let first = samples.first().copied().unwrap_or(0.0).abs();
        let last = samples.get(self.n - 1).copied().unwrap_or(0.0).abs();
        first.max(last)
    }
}

/// `s_j = π(2j+1)/(2N)`, computed per node from integers.
pub fn node_angle(j: usize, n: usize) -> f64 {
    PI * (2 * j + 1) as f64 / (2 * n) as f64
}

/// Algebraic map `x = L cot(s)`.
pub fn to_x(s: f64, scale: f64) -> f64 {
    scale * s.cos() / s.sin()
}

/// Inverse map onto `(0, π)`: `s = arccot(x / L)`.
pub fn to_s(x: f64, scale: f64) -> f64 {
    let t = x / scale;
    // atan2(1, t) is arccot on (0, π) without a branch at t = 0.
    1.0f64.atan2(t)
}

/// Principal branch of `arccot(x / L)` in `(-π/2, π/2]`. Congruent to
/// [`to_s`] modulo `π`, and keeps full relative precision for large negative
/// `x` where an angle close to `π` cannot.
pub fn principal_angle(x: f64, scale: f64) -> f64 {
    if x == 0.0 {
        return std::f64::consts::FRAC_PI_2;
    }
    (scale / x).atan()
}

/// Quadrature nodes `s_l^(m) = π(2l+1)/(2^{m+1}N)` inside `(0, π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinedNodes {
    level: u32,
    nodes: Vec<f64>,
}

impl RefinedNodes {
    pub fn new(n: usize, level: u32) -> Result<Self> {
        if level < 1 {
            return Err(Error::InvalidParameter("refinement level must be >= 1".into()));
        }
        if n == 0 {
            return Err(Error::InvalidParameter("N must be positive".into()));
        }
        let count = n << level;
        let denom = (2 * count) as f64;
        let nodes = (0..count).map(|l| PI * (2 * l + 1) as f64 / denom).collect();
        Ok(Self { level, nodes })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}
