//! Direct quadrature of `(1/Γ(1-α)) ∫_0^∞ v''(x - r) r^{-α} dr`.
//!
//! Deliberately shares nothing with the spectral machinery: it works in `x`,
//! and only needs `v''`.

use quadrature::double_exponential;

use crate::error::{Error, Result};
use crate::special::recip_gamma;

const MAX_DEPTH: u32 = 24;
// Beyond this distance the kernel-weighted integrand of every bundled test
// function is below 1e-140 and is treated as zero (it would overflow first).
const FAR_CUTOFF: f64 = 1e150;

/// Integrates `f` over `[a, b]` to absolute error `tol`, bisecting where the
/// double-exponential estimate is not good enough.
fn adaptive<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64> {
    let out = double_exponential::integrate(f, a, b, tol * 0.5);
    if out.error_estimate <= tol && out.integral.is_finite() {
        return Ok(out.integral);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::QuadratureNotConverged { tol, estimate: out.error_estimate });
    }
    let mid = 0.5 * (a + b);
    Ok(adaptive(f, a, mid, tol * 0.5, depth + 1)? + adaptive(f, mid, b, tol * 0.5, depth + 1)?)
}

fn breakpoints(x: f64) -> Vec<f64> {
    let reach = (4.0 * (x.abs() + 8.0)).max(64.0);
    let mut pts = vec![0.0];
    let mut r = 1.0;
    while r < reach {
        pts.push(r);
        r *= 2.0;
    }
    pts.push(r);
    // The origin of the test functions is where kinks live.
    if x > 0.0 && x < r && !pts.contains(&x) {
        pts.push(x);
        pts.sort_by(f64::total_cmp);
    }
    pts
}

/// `∂x𝒟^α v(x)` computed from `v''` alone, to absolute accuracy `tol`.
///
/// Near `r = 0` the substitution `r = t^{1/(1-α)}` removes the kernel
/// singularity; beyond the last breakpoint `R` the tail is mapped onto
/// `(0, 1]` by `r = R/t`, which requires `|v''(y)| = o(|y|^{α-1})` as
/// `y → -∞`.
pub fn brute_force_frac<F>(v2: F, x: f64, alpha: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!(
            "brute-force oracle needs alpha in [0, 1), got {alpha}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let v2 = &v2;
    let pts = breakpoints(x);
    let pieces = pts.len() as f64;
    let seg_tol = tol / pieces;

    let p = 1.0 / (1.0 - alpha);
    let near_end = pts[1].powf(1.0 / p);
    let near = move |t: f64| p * v2(x - t.powf(p));
    let mut total = adaptive(&near, 0.0, near_end, seg_tol, 0)?;

    for w in pts[1..].windows(2) {
        let body = move |r: f64| v2(x - r) * r.powf(-alpha);
        total += adaptive(&body, w[0], w[1], seg_tol, 0)?;
    }

    let reach = *pts.last().unwrap();
    let tail = move |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        let r = reach / t;
        if r > FAR_CUTOFF {
            return 0.0;
        }
        v2(x - r) * r.powf(-alpha) * r / t
    };
    total += adaptive(&tail, 0.0, 1.0, seg_tol, 0)?;

    Ok(total * recip_gamma(1.0 - alpha))
}
