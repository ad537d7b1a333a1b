//! Gamma function and the confluent hypergeometric function `₁F₁`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `Γ(x)` for real `x`, using reflection below `1/2`. Poles return ±∞.
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// `1/Γ(x)`, exactly zero at the poles.
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    1.0 / gamma(x)
}

const SERIES_CAP: usize = 100_000;
const SERIES_RTOL: f64 = 1e-17;
// Beyond this argument magnitude the large-|z| expansion is used for z < 0.
const ASYMPTOTIC_SWITCH: f64 = 50.0;

/// Kummer's function `₁F₁(a; b; z)` for real arguments and `b > 0`.
///
/// Negative `z` goes through Kummer's transformation so the power series has
/// terms of one sign; very negative `z` uses the algebraic asymptotic
/// expansion (the exponentially small companion is below double precision).
pub fn hyp1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    if z >= 0.0 {
        return series(a, b, z);
    }
    let y = -z;
    if y > ASYMPTOTIC_SWITCH {
        if let Some(v) = asymptotic_negative(a, b, y) {
            return Ok(v);
        }
    }
    Ok((-y).exp() * series(b - a, b, y)?)
}

fn series(a: f64, b: f64, z: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..SERIES_CAP {
        let nf = n as f64;
        term *= (a + nf) * z / ((b + nf) * (nf + 1.0));
        sum += term;
        if term == 0.0 || (term.abs() < SERIES_RTOL * sum.abs() && nf > z) {
            return Ok(sum);
        }
    }
    Err(Error::SeriesNotConverged(SERIES_CAP))
}

/// `₁F₁(a; b; -y) ≈ Γ(b)/Γ(b-a) · y^{-a} Σ (a)_s (a-b+1)_s / s! · y^{-s}`.
fn asymptotic_negative(a: f64, b: f64, y: f64) -> Option<f64> {
    let prefactor = gamma(b) * recip_gamma(b - a) * y.powf(-a);
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for s in 0..200 {
        let sf = s as f64;
        let next = term * (a + sf) * (a - b + 1.0 + sf) / ((sf + 1.0) * y);
        if next.abs() > term.abs() && s > 0 {
            // Smallest term reached: accept if it is already at rounding level.
            return (term.abs() <= 1e-15 * sum.abs()).then_some(prefactor * sum);
        }
        term = next;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            return Some(prefactor * sum);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_reference_values() {
        assert_relative_eq!(gamma(1.0), 1.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(5.0), 24.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(0.5), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(1.5), PI.sqrt() / 2.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(-0.5), -2.0 * PI.sqrt(), max_relative = 1e-14);
        // Γ(1/3) from tables.
        assert_relative_eq!(gamma(1.0 / 3.0), 2.678_938_534_707_747_6, max_relative = 1e-14);
        assert_relative_eq!(gamma(10.3), 716_430.689_062_376_4, max_relative = 1e-13);
        assert_eq!(recip_gamma(0.0), 0.0);
        assert_eq!(recip_gamma(-3.0), 0.0);
    }

    #[test]
    fn gamma_recurrence() {
        for i in 1..200 {
            let x = -4.95 + i as f64 * 0.0731;
            if (x - x.round()).abs() < 1e-6 {
                continue;
            }
            assert_relative_eq!(gamma(x + 1.0), x * gamma(x), max_relative = 2e-13);
        }
    }

    #[test]
    fn hyp1f1_closed_forms() {
        // 1F1(a; a; z) = e^z
        for z in [-50.0, -20.0, -3.0, 0.0, 2.0, 10.0] {
            assert_relative_eq!(hyp1f1(1.7, 1.7, z).unwrap(), f64::exp(z), max_relative = 1e-13);
        }
        // 1F1(1; 2; z) = (e^z - 1) / z
        for z in [-80.0, -51.0, -49.0, -5.0, -0.3, 0.4, 7.0] {
            let exact = (f64::exp(z) - 1.0) / z;
            assert_relative_eq!(hyp1f1(1.0, 2.0, z).unwrap(), exact, max_relative = 1e-13);
        }
        // 1F1(1/2; 3/2; -y) = sqrt(pi)/2 erf(sqrt y)/sqrt y; at large y erf -> 1.
        let y: f64 = 900.0;
        assert_relative_eq!(
            hyp1f1(0.5, 1.5, -y).unwrap(),
            PI.sqrt() / (2.0 * y.sqrt()),
            max_relative = 1e-13
        );
    }

    #[test]
    fn hyp1f1_continuous_across_switch() {
        let a = 1.85;
        let b = 1.5;
        let y = ASYMPTOTIC_SWITCH;
        let kummer = (-y).exp() * series(b - a, b, y).unwrap();
        let asymptotic = asymptotic_negative(a, b, y).unwrap();
        // mpmath: 1F1(1.85; 1.5; -50)
        let reference = -1.697_524_612_642_219_2e-4;
        assert_relative_eq!(kummer, reference, max_relative = 1e-12);
        assert_relative_eq!(asymptotic, reference, max_relative = 1e-13);
    }
}
