//! The integrand `w_k(s)` obtained by pushing `e^{iks}` through the
//! third-derivative form of `∂x𝒟^α` under `x = L cot s`, with `L = 1`.

use num_complex::Complex64;

/// Factored trigonometric form of `w_k(s)` (the `L^{-1-α}` factor is left to
/// the caller).
pub fn eval_w(k: i64, s: f64) -> Complex64 {
    if k == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let kf = k as f64;
    let k2 = kf * kf;
    let k3 = k2 * kf;
    let (s4, c4) = (4.0 * s).sin_cos();
    let (s2, c2) = (2.0 * s).sin_cos();
    let bracket = Complex64::new(
        -0.75 * k2 * s4 + 1.5 * k2 * s2,
        (k3 + 8.0 * kf) / 8.0 * c4 - (k3 + 2.0 * kf) / 2.0 * c2 + 3.0 * k3 / 8.0,
    );
    Complex64::cis(kf * s) * bracket
}

/// `w_k(s) = Σ_d c_d(k) e^{i(k+d)s}` for `d ∈ {4, 2, 0, -2, -4}`.
pub fn mode_expansion(k: i64) -> [(i64, Complex64); 5] {
    let kf = k as f64;
    let k2 = kf * kf;
    let k3 = k2 * kf;
    let im = |v: f64| Complex64::new(0.0, v);
    [
        (4, im((k3 + 6.0 * k2 + 8.0 * kf) / 16.0)),
        (2, im(-(k3 + 3.0 * k2 + 2.0 * kf) / 4.0)),
        (0, im(3.0 * k3 / 8.0)),
        (-2, im(-(k3 - 3.0 * k2 + 2.0 * kf) / 4.0)),
        (-4, im((k3 - 6.0 * k2 + 8.0 * kf) / 16.0)),
    ]
}

/// `Σ_d c_d(k) e^{i(k+d)s}`, the exponential form of the same kernel.
pub fn eval_w_expanded(k: i64, s: f64) -> Complex64 {
    mode_expansion(k)
        .iter()
        .map(|&(d, c)| c * Complex64::cis((k + d) as f64 * s))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_mode_vanishes() {
        for s in [0.1, 1.0, 2.5, 4.0] {
            assert_eq!(eval_w(0, s), Complex64::new(0.0, 0.0));
        }
        assert!(mode_expansion(0).iter().all(|(_, c)| c.norm() == 0.0));
    }

    #[test]
    fn unit_mode_expansion() {
        let e = mode_expansion(1);
        let expected = [(4, 15.0 / 16.0), (2, -1.5), (0, 3.0 / 8.0), (-2, 0.0), (-4, 3.0 / 16.0)];
        for ((d, c), (de, ve)) in e.iter().zip(expected) {
            assert_eq!(*d, de);
            assert!((c - Complex64::new(0.0, ve)).norm() < 1e-15, "d={d} c={c}");
        }
    }

    #[test]
    fn factored_and_expanded_forms_agree() {
        let v = eval_w(3, 0.7);
        let w = eval_w_expanded(3, 0.7);
        assert!((v - w).norm() <= 1e-14 * v.norm().max(1.0), "{v} vs {w}");
        for k in -9..=9 {
            for i in 0..20 {
                let s = 0.05 + i as f64 * 0.31;
                let v = eval_w(k, s);
                let w = eval_w_expanded(k, s);
                assert!((v - w).norm() <= 1e-12 * (k as f64).abs().powi(3).max(1.0));
            }
        }
    }

    #[test]
    fn symmetries() {
        for k in 1..8 {
            for i in 0..10 {
                let s = 0.13 + 0.29 * i as f64;
                let wk = eval_w(k, s);
                let wmk = eval_w(-k, s);
                assert!((wmk - wk.conj()).norm() < 1e-12);
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                assert!((eval_w(k, s + PI) - wk * sign).norm() < 1e-11);
            }
        }
    }
}
