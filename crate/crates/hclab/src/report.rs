//! Check reports: every verification routine returns one of these instead of a
//! bare bool, so the CLI, the test suite and the fit studies all share a format.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::numeric::{rat_to_f64, Rat};

/// Pinned tolerances. Exact-rational comparisons use `EXACT` (0.0); float
/// pipelines over exactly-computed probabilities use `FLOAT_ON_EXACT`;
/// normalisation sanity checks use `NORMALIZATION`.
pub mod tol {
    /// Comparison performed in exact arithmetic; margin is informational only.
    pub const EXACT: f64 = 0.0;
    /// Float functional (log/entropy) of exactly-known rationals.
    pub const FLOAT_ON_EXACT: f64 = 1e-10;
    /// "This slice of f64s should sum to 1."
    pub const NORMALIZATION: f64 = 1e-12;
    /// Chessboard products may round to tiny negatives; clamp these to zero.
    pub const RP_CLAMP: f64 = -1e-12;
    /// ... but anything this negative is a real sign violation, i.e. a bug.
    pub const RP_BUG: f64 = -1e-9;
}

#[derive(Serialize, Clone, Debug)]
pub struct CheckReport {
    pub id: String,
    /// The two sides of the checked relation, as f64 for display; when the
    /// check ran in exact arithmetic these are projections of the rationals.
    pub lhs: f64,
    pub rhs: f64,
    /// rhs - lhs; nonnegative (up to tolerance) means the relation holds.
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// True when pass/fail was decided in exact rational arithmetic.
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    pub runtime_secs: f64,
}

impl CheckReport {
    /// lhs <= rhs up to additive tolerance, decided in f64.
    pub fn le(id: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        CheckReport {
            id: id.into(),
            lhs,
            rhs,
            margin: rhs - lhs,
            tolerance,
            pass: lhs <= rhs + tolerance,
            exact: false,
            witness: None,
            runtime_secs: 0.0,
        }
    }

    /// |lhs - rhs| <= tolerance, decided in f64.
    pub fn eq(id: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        CheckReport {
            id: id.into(),
            lhs,
            rhs,
            margin: rhs - lhs,
            tolerance,
            pass: (lhs - rhs).abs() <= tolerance,
            exact: false,
            witness: None,
            runtime_secs: 0.0,
        }
    }

    /// lhs <= rhs decided exactly on rationals.
    pub fn exact_le(id: impl Into<String>, lhs: &Rat, rhs: &Rat) -> Self {
        CheckReport {
            id: id.into(),
            lhs: rat_to_f64(lhs),
            rhs: rat_to_f64(rhs),
            margin: rat_to_f64(&(rhs - lhs)),
            tolerance: tol::EXACT,
            pass: lhs <= rhs,
            exact: true,
            witness: None,
            runtime_secs: 0.0,
        }
    }

    /// lhs == rhs decided exactly on rationals.
    pub fn exact_eq(id: impl Into<String>, lhs: &Rat, rhs: &Rat) -> Self {
        CheckReport {
            id: id.into(),
            lhs: rat_to_f64(lhs),
            rhs: rat_to_f64(rhs),
            margin: rat_to_f64(&(rhs - lhs)),
            tolerance: tol::EXACT,
            pass: lhs == rhs,
            exact: true,
            witness: None,
            runtime_secs: 0.0,
        }
    }

    /// A bare predicate with no numeric content.
    pub fn holds(id: impl Into<String>, pass: bool) -> Self {
        CheckReport {
            id: id.into(),
            lhs: if pass { 1.0 } else { 0.0 },
            rhs: 1.0,
            margin: 0.0,
            tolerance: tol::EXACT,
            pass,
            exact: true,
            witness: None,
            runtime_secs: 0.0,
        }
    }

    pub fn with_witness(mut self, w: serde_json::Value) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.runtime_secs = start.elapsed().as_secs_f64();
        self
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} (lhs={:.12e}, rhs={:.12e}, margin={:.3e}{})",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.lhs,
            self.rhs,
            self.margin,
            if self.exact { ", exact" } else { "" }
        )
    }
}

pub fn all_pass(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

/// One instance inside a constant-fitting study.
#[derive(Serialize, Clone, Debug)]
pub struct FitPoint {
    pub label: String,
    /// Smallest constant making the target inequality true on this instance.
    pub required: f64,
}

/// Result of fitting an absolute constant over a family of exactly-evaluated
/// instances. `fitted` is the max of the per-instance requirements; a claim is
/// `certified` only after a second pass re-evaluates every instance against
/// `fitted` and passes. This never asserts anything beyond the family tested.
#[derive(Serialize, Clone, Debug)]
pub struct ConstantFit {
    pub claim_id: String,
    pub constant: String,
    pub fitted: f64,
    pub points: Vec<FitPoint>,
    pub certified: bool,
}

impl ConstantFit {
    /// `required` per instance, then a caller-supplied re-check at the fitted
    /// value. `recheck` receives the fitted constant and an instance label and
    /// must recompute the inequality from scratch.
    pub fn fit(
        claim_id: impl Into<String>,
        constant: impl Into<String>,
        points: Vec<FitPoint>,
        mut recheck: impl FnMut(f64, &str) -> bool,
    ) -> Self {
        assert!(!points.is_empty(), "cannot fit a constant to zero instances");
        let fitted = points.iter().map(|p| p.required).fold(f64::NEG_INFINITY, f64::max);
        let certified = points.iter().all(|p| recheck(fitted, &p.label));
        ConstantFit { claim_id: claim_id.into(), constant: constant.into(), fitted, points, certified }
    }
}

impl fmt::Display for ConstantFit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "fit {}: {} = {:.6} over {} instances ({})",
            self.claim_id,
            self.constant,
            self.fitted,
            self.points.len(),
            if self.certified { "certified" } else { "NOT certified" }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn exact_le_decides_on_rationals() {
        // 1/3 <= 0.3333... would pass in f64 with tolerance but must fail exactly
        let r = CheckReport::exact_le("x", &rat(1, 3), &rat(3333, 10000));
        assert!(!r.pass);
        let r = CheckReport::exact_le("x", &rat(1, 3), &rat(3334, 10000));
        assert!(r.pass);
    }

    #[test]
    fn fit_certifies() {
        let pts = vec![
            FitPoint { label: "a".into(), required: 1.5 },
            FitPoint { label: "b".into(), required: 2.0 },
        ];
        let fit = ConstantFit::fit("claim", "C", pts, |c, _| c >= 2.0);
        assert_eq!(fit.fitted, 2.0);
        assert!(fit.certified);
    }
}
