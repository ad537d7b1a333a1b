//! Reference functions with known derivatives, used to validate the
//! fractional operators and to seed evolutions.

mod brute;
pub mod closed;

use std::fmt;
use std::str::FromStr;

pub use brute::brute_force_frac;
pub use closed::{frac_v1, frac_v2, frac_v3, frac_v8};

use crate::error::{Error, Result};

/// Identifier of a bundled test function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionId {
    V1,
    V2,
    V3,
    V4,
    V5,
    V6,
    V7,
    V8,
    Sech,
    TanhStep,
}

impl FunctionId {
    pub const ALL: [FunctionId; 10] = [
        FunctionId::V1,
        FunctionId::V2,
        FunctionId::V3,
        FunctionId::V4,
        FunctionId::V5,
        FunctionId::V6,
        FunctionId::V7,
        FunctionId::V8,
        FunctionId::Sech,
        FunctionId::TanhStep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FunctionId::V1 => "v1",
            FunctionId::V2 => "v2",
            FunctionId::V3 => "v3",
            FunctionId::V4 => "v4",
            FunctionId::V5 => "v5",
            FunctionId::V6 => "v6",
            FunctionId::V7 => "v7",
            FunctionId::V8 => "v8",
            FunctionId::Sech => "sech",
            FunctionId::TanhStep => "tanh-step",
        }
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FunctionId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown test function '{s}'")))
    }
}

type RealFn = fn(f64) -> f64;
type FracFn = fn(f64, f64) -> Result<f64>;

/// A named function together with its first two derivatives and, when one
/// is known, the closed form of `∂x𝒟^α v`.
#[derive(Clone, Copy)]
pub struct TestFunction {
    pub id: FunctionId,
    pub v: RealFn,
    pub d1: RealFn,
    pub d2: RealFn,
    frac: Option<FracFn>,
    /// Map scale that resolves the function well.
    pub recommended_l: f64,
    pub recommended_n: usize,
    /// Largest `k` with `v ∈ C^k`; `None` for smooth functions.
    pub regularity: Option<u32>,
    /// Points where `v''` is not smooth.
    pub kinks: &'static [f64],
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("id", &self.id)
            .field("recommended_l", &self.recommended_l)
            .field("recommended_n", &self.recommended_n)
            .field("regularity", &self.regularity)
            .finish_non_exhaustive()
    }
}

impl TestFunction {
    pub fn get(id: FunctionId) -> Self {
        use closed::*;
        let smooth = |v: RealFn, d1: RealFn, d2: RealFn, frac: Option<FracFn>, l: f64, n: usize| {
            TestFunction {
                id,
                v,
                d1,
                d2,
                frac,
                recommended_l: l,
                recommended_n: n,
                regularity: None,
                kinks: &[],
            }
        };
        let rough = |v: RealFn, d1: RealFn, d2: RealFn, l: f64, class: u32| TestFunction {
            id,
            v,
            d1,
            d2,
            frac: None,
            recommended_l: l,
            recommended_n: 256,
            regularity: Some(class),
            kinks: &[0.0],
        };
        match id {
            FunctionId::V1 => smooth(v1, v1_d1, v1_d2, Some(frac_v1), 1.6, 64),
            FunctionId::V2 => smooth(v2, v2_d1, v2_d2, Some(frac_v2), 1.1, 64),
            FunctionId::V3 => smooth(v3, v3_d1, v3_d2, Some(frac_v3), 4.0, 64),
            FunctionId::V4 => rough(v4, v4_d1, v4_d2, 0.1, 1),
            FunctionId::V5 => rough(v5, v5_d1, v5_d2, 0.14, 2),
            FunctionId::V6 => rough(v6, v6_d1, v6_d2, 0.2, 3),
            FunctionId::V7 => rough(v7, v7_d1, v7_d2, 0.28, 4),
            FunctionId::V8 => smooth(v8, v8_d1, v8_d2, Some(frac_v8), 30.4, 256),
            FunctionId::Sech => smooth(sech, sech_d1, sech_d2, None, 3.9, 128),
            FunctionId::TanhStep => smooth(tanh_step, tanh_step_d1, tanh_step_d2, None, 20.0, 128),
        }
    }

    pub fn has_closed_form(&self) -> bool {
        self.frac.is_some()
    }

    /// Exact `∂x𝒟^α v(x)`, or `None` when no closed form is known for this
    /// `α`. The endpoints `α = 0, 1` are always available.
    pub fn exact(&self, x: f64, alpha: f64) -> Option<Result<f64>> {
        if let Some(frac) = self.frac {
            return Some(frac(x, alpha));
        }
        if alpha == 0.0 {
            Some(Ok((self.d1)(x)))
        } else if alpha == 1.0 {
            Some(Ok((self.d2)(x)))
        } else {
            None
        }
    }

    /// Quadrature oracle for this function; `α` must be below 1.
    pub fn brute_force(&self, x: f64, alpha: f64, tol: f64) -> Result<f64> {
        brute_force_frac(self.d2, x, alpha, tol)
    }
}

/// The four functions of increasing smoothness, `C¹` through `C⁴`.
pub fn regularity_suite() -> Vec<TestFunction> {
    [FunctionId::V4, FunctionId::V5, FunctionId::V6, FunctionId::V7]
        .into_iter()
        .map(TestFunction::get)
        .collect()
}

/// The functions with closed-form fractional derivatives.
pub fn closed_form_suite() -> Vec<TestFunction> {
    [FunctionId::V1, FunctionId::V2, FunctionId::V3, FunctionId::V8]
        .into_iter()
        .map(TestFunction::get)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip_through_names() {
        for id in FunctionId::ALL {
            assert_eq!(id.name().parse::<FunctionId>().unwrap(), id);
        }
        assert!("v9".parse::<FunctionId>().is_err());
    }

    #[test]
    fn regularity_suite_layout() {
        let suite = regularity_suite();
        let ls: Vec<f64> = suite.iter().map(|f| f.recommended_l).collect();
        assert_eq!(ls, vec![0.1, 0.14, 0.2, 0.28]);
        let classes: Vec<Option<u32>> = suite.iter().map(|f| f.regularity).collect();
        assert_eq!(classes, vec![Some(1), Some(2), Some(3), Some(4)]);
    }

    #[test]
    fn exact_availability() {
        let sech = TestFunction::get(FunctionId::Sech);
        assert!(sech.exact(0.3, 0.5).is_none());
        assert!(sech.exact(0.3, 1.0).is_some());
        let v1 = TestFunction::get(FunctionId::V1);
        assert!(v1.exact(0.3, 0.5).is_some());
    }
}
