//! Closed-form test functions, their classical derivatives and, where known,
//! their exact `∂x𝒟^α`.
//!
//! Every `frac_*` function dispatches `α = 0` to `v'` and `α = 1` to `v''`,
//! so callers can sweep the closed interval without special cases.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::{gamma, hyp1f1, recip_gamma};

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("alpha must lie in [0, 1], got {alpha}")))
    }
}

// v1 = 1/(1+x²)

pub fn v1(x: f64) -> f64 {
    1.0 / (1.0 + x * x)
}

pub fn v1_d1(x: f64) -> f64 {
    -2.0 * x / (1.0 + x * x).powi(2)
}

pub fn v1_d2(x: f64) -> f64 {
    (6.0 * x * x - 2.0) / (1.0 + x * x).powi(3)
}

pub fn frac_v1(x: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha == 0.0 {
        return Ok(v1_d1(x));
    }
    if alpha == 1.0 {
        return Ok(v1_d2(x));
    }
    let pre = -PI * alpha * (1.0 + alpha) / ((alpha * PI).sin()) * recip_gamma(1.0 - alpha);
    let phase = alpha * PI / 2.0 + (1.0 + alpha) * x.atan();
    let q = 1.0 + x * x;
    Ok(pre * q.powf(-(3.0 + alpha) / 2.0) * (phase.sin() + x * phase.cos()))
}

// v2 = 1/(1+x²)²

pub fn v2(x: f64) -> f64 {
    1.0 / (1.0 + x * x).powi(2)
}

pub fn v2_d1(x: f64) -> f64 {
    -4.0 * x / (1.0 + x * x).powi(3)
}

pub fn v2_d2(x: f64) -> f64 {
    (20.0 * x * x - 4.0) / (1.0 + x * x).powi(4)
}

pub fn frac_v2(x: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha == 0.0 {
        return Ok(v2_d1(x));
    }
    if alpha == 1.0 {
        return Ok(v2_d2(x));
    }
    let a = alpha;
    let q = 1.0 + x * x;
    let x2 = x * x;
    let at = x.atan();
    let pre = PI * a * (1.0 + a) / 4.0 * recip_gamma(1.0 - a) * q.powf(-3.0 - a / 2.0);
    let sec = 1.0 / (a * PI / 2.0).cos();
    let csc = 1.0 / (a * PI / 2.0).sin();
    let first = ((3.0 * a + 8.0) * x - a * x2 * x) * (a * at).sin()
        + (-3.0 - a + (6.0 + 3.0 * a) * x2 + x2 * x2) * (a * at).cos();
    let second = (-3.0 - a + (1.0 + a) * x2) * ((1.0 + a) * at).sin()
        - (5.0 * x + 2.0 * a * x + x2 * x) * ((1.0 + a) * at).cos();
    Ok(pre * (sec * first + csc * q.sqrt() * second))
}

// v3 = exp(-x²)

pub fn v3(x: f64) -> f64 {
    (-x * x).exp()
}

pub fn v3_d1(x: f64) -> f64 {
    -2.0 * x * (-x * x).exp()
}

pub fn v3_d2(x: f64) -> f64 {
    (4.0 * x * x - 2.0) * (-x * x).exp()
}

pub fn frac_v3(x: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha == 0.0 {
        return Ok(v3_d1(x));
    }
    if alpha == 1.0 {
        return Ok(v3_d2(x));
    }
    let a = alpha;
    let z = -x * x;
    let g_half = gamma((1.0 - a) / 2.0);
    let t1 = -6.0 * (1.0 + a) * gamma(1.0 - a / 2.0) * x * hyp1f1((3.0 + a) / 2.0, 1.5, z)?;
    let t2 = -3.0 * a * g_half * hyp1f1(1.0 + a / 2.0, 1.5, z)?;
    let t3 = (4.0 * a + 2.0 * a * a) * g_half * x * x * hyp1f1(2.0 + a / 2.0, 2.5, z)?;
    Ok((t1 + t2 + t3) * recip_gamma(1.0 - a) / 3.0)
}

// v4..v7: quadratic decay, growing regularity.

pub fn v4(x: f64) -> f64 {
    x * x.abs() / (1.0 + x.powi(4))
}

pub fn v4_d1(x: f64) -> f64 {
    let a = x.abs();
    -(2.0 * a.powi(5) - 2.0 * a) / (1.0 + x.powi(4)).powi(2)
}

pub fn v4_d2(x: f64) -> f64 {
    (6.0 * x.powi(8) - 24.0 * x.powi(4) + 2.0) / (1.0 + x.powi(4)).powi(3) * sign(x)
}

pub fn v5(x: f64) -> f64 {
    let a = x.abs();
    a.powi(3) / (1.0 + a.powi(5))
}

pub fn v5_d1(x: f64) -> f64 {
    let a = x.abs();
    -(2.0 * x.powi(7) - 3.0 * x * a) / (1.0 + a.powi(5)).powi(2)
}

pub fn v5_d2(x: f64) -> f64 {
    let a = x.abs();
    (6.0 * a.powi(11) - 38.0 * x.powi(6) + 6.0 * a) / (1.0 + a.powi(5)).powi(3)
}

pub fn v6(x: f64) -> f64 {
    x.powi(3) * x.abs() / (1.0 + x.powi(6))
}

pub fn v6_d1(x: f64) -> f64 {
    let a = x.abs();
    -(2.0 * a.powi(9) - 4.0 * a.powi(3)) / (1.0 + x.powi(6)).powi(2)
}

pub fn v6_d2(x: f64) -> f64 {
    (6.0 * x.powi(13) - 54.0 * x.powi(7) + 12.0 * x) / (1.0 + x.powi(6)).powi(3) * x.abs()
}

pub fn v7(x: f64) -> f64 {
    let a = x.abs();
    a.powi(5) / (1.0 + a.powi(7))
}

pub fn v7_d1(x: f64) -> f64 {
    let a = x.abs();
    -(2.0 * x.powi(11) - 5.0 * x.powi(3) * a) / (1.0 + a.powi(7)).powi(2)
}

pub fn v7_d2(x: f64) -> f64 {
    let a = x.abs();
    (6.0 * a.powi(17) - 72.0 * x.powi(10) + 20.0 * a.powi(3)) / (1.0 + a.powi(7)).powi(3)
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

// v8 = log(1+x²), unbounded with logarithmic growth.

pub fn v8(x: f64) -> f64 {
    (x * x).ln_1p()
}

pub fn v8_d1(x: f64) -> f64 {
    2.0 * x / (1.0 + x * x)
}

pub fn v8_d2(x: f64) -> f64 {
    (2.0 - 2.0 * x * x) / (1.0 + x * x).powi(2)
}

pub fn frac_v8(x: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha == 0.0 {
        return Ok(v8_d1(x));
    }
    if alpha == 1.0 {
        return Ok(v8_d2(x));
    }
    let pre = 2.0 * PI * alpha / (alpha * PI).sin() * recip_gamma(1.0 - alpha);
    let phase = alpha * PI / 2.0 + alpha * x.atan();
    Ok(pre * (1.0 + x * x).powf(-1.0 - alpha / 2.0) * (phase.sin() + x * phase.cos()))
}

// sech and the tanh front used as evolution datum.

pub fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

pub fn sech_d1(x: f64) -> f64 {
    -x.tanh() / x.cosh()
}

pub fn sech_d2(x: f64) -> f64 {
    let t = x.tanh();
    (2.0 * t * t - 1.0) / x.cosh()
}

/// `(1 - tanh x)/2`: equal to 1 at `-∞` and 0 at `+∞`.
pub fn tanh_step(x: f64) -> f64 {
    (1.0 - x.tanh()) / 2.0
}

pub fn tanh_step_d1(x: f64) -> f64 {
    let s = 1.0 / x.cosh();
    -0.5 * s * s
}

pub fn tanh_step_d2(x: f64) -> f64 {
    let s = 1.0 / x.cosh();
    s * s * x.tanh()
}
