//! Length-similarity feature built from generalized logistic (Richards) curves.
//!
//! `h(x, y)` has a trough of exactly 1 at `x == y`, rises towards `b1` as
//! `x → 0` and towards `b2` as `x → ∞`. With `x = |d|` and `y = |q|` it is
//! used in place of BM25's length normalizer, so documents of similar length
//! to the query are penalized least.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

/// Exponent magnitude beyond which a logistic branch is replaced by its limit.
pub const EXP_CLAMP: f64 = 700.0;

/// Points per side used by [`verify_feature_constraints`] for slope checks.
pub const VERIFY_GRID_POINTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CurveError {
    #[error("parameter {name} = {value} violates {requirement}")]
    InvalidParam {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("argument {name} = {value} violates {requirement}")]
    InvalidArgument {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("curve is not finite at x = {x}")]
    Domain { x: f64 },
    #[error("degenerate sample range [{min}, {max}]")]
    DegenerateRange { min: f64, max: f64 },
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
}

fn require(
    name: &'static str,
    value: f64,
    ok: bool,
    requirement: &'static str,
) -> Result<(), CurveError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(CurveError::InvalidParam {
            name,
            value,
            requirement,
        })
    }
}

/// Generalized logistic `l + (u - l) / (A + e^{-B(x - M)})^{1/ν}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RichardsParams {
    pub lower: f64,
    pub upper: f64,
    /// `A`
    pub offset: f64,
    /// `B`
    pub growth: f64,
    /// `M`, the location shift.
    pub location: f64,
    /// `ν`
    pub nu: f64,
}

impl RichardsParams {
    /// The standard logistic between `lower` and `upper`.
    pub fn logistic(lower: f64, upper: f64, growth: f64, location: f64) -> Self {
        Self {
            lower,
            upper,
            offset: 1.0,
            growth,
            location,
            nu: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), CurveError> {
        require("l", self.lower, true, "finite")?;
        require("u", self.upper, true, "finite")?;
        require("A", self.offset, true, "finite")?;
        require("B", self.growth, true, "finite")?;
        require("M", self.location, true, "finite")?;
        require("nu", self.nu, self.nu > 0.0, "nu > 0")
    }
}

pub fn richards(x: f64, p: &RichardsParams) -> Result<f64, CurveError> {
    p.validate()?;
    let exponent = (-p.growth * (x - p.location)).clamp(-EXP_CLAMP, EXP_CLAMP);
    let base = p.offset + exponent.exp();
    if !base.is_finite() || base <= 0.0 {
        return Err(CurveError::Domain { x });
    }
    let value = p.lower + (p.upper - p.lower) / base.powf(1.0 / p.nu);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(CurveError::Domain { x })
    }
}

/// Parameters of the length-similarity heuristic.
///
/// JSON field names follow the usual notation: `b1`, `b2`, `B1`, `B2`, `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LengthSimParams {
    /// Left bound `b1`: the limit as `x → 0`.
    #[serde(rename = "b1")]
    pub left_bound: f64,
    /// Right bound `b2`: the limit as `x → ∞`.
    #[serde(rename = "b2")]
    pub right_bound: f64,
    #[serde(rename = "B1")]
    pub left_growth: f64,
    #[serde(rename = "B2")]
    pub right_growth: f64,
    /// Trough curvature `c`, in (0, 1).
    #[serde(rename = "c")]
    pub curvature: f64,
}

impl Default for LengthSimParams {
    /// The tuned values reported for the penpal dataset.
    fn default() -> Self {
        Self {
            left_bound: 2.9,
            right_bound: 3.7,
            left_growth: 1.0,
            right_growth: 1.0,
            curvature: 0.5,
        }
    }
}

impl LengthSimParams {
    pub fn new(b1: f64, b2: f64, growth1: f64, growth2: f64, c: f64) -> Result<Self, CurveError> {
        let p = Self {
            left_bound: b1,
            right_bound: b2,
            left_growth: growth1,
            right_growth: growth2,
            curvature: c,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), CurveError> {
        require("b1", self.left_bound, self.left_bound > 1.0, "b1 > 1")?;
        require("b2", self.right_bound, self.right_bound > 1.0, "b2 > 1")?;
        require("B1", self.left_growth, self.left_growth > 0.0, "B1 > 0")?;
        require("B2", self.right_growth, self.right_growth > 0.0, "B2 > 0")?;
        require(
            "c",
            self.curvature,
            self.curvature > 0.0 && self.curvature < 1.0,
            "0 < c < 1",
        )
    }

    /// The decreasing branch used for `x < y`, evaluated at any `x`.
    pub fn left_branch(&self, x: f64, y: f64) -> f64 {
        let e = self.left_growth * (x - self.curvature * y);
        saturating_logistic(self.left_bound, e)
    }

    /// The increasing branch used for `x > y`, evaluated at any `x`.
    pub fn right_branch(&self, x: f64, y: f64) -> f64 {
        let e = -self.right_growth * (x - (1.0 + self.curvature) * y);
        saturating_logistic(self.right_bound, e)
    }

    /// `h(x, y)` without argument or parameter checks.
    pub fn value(&self, x: f64, y: f64) -> f64 {
        if x < y {
            self.left_branch(x, y)
        } else if x > y {
            self.right_branch(x, y)
        } else {
            1.0
        }
    }
}

/// `1 + (bound - 1) / (1 + e^exponent)`, pinned to its limits past the clamp.
fn saturating_logistic(bound: f64, exponent: f64) -> f64 {
    if exponent > EXP_CLAMP {
        1.0
    } else if exponent < -EXP_CLAMP {
        bound
    } else {
        1.0 + (bound - 1.0) / (1.0 + exponent.exp())
    }
}

fn check_length(name: &'static str, v: f64) -> Result<(), CurveError> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(CurveError::InvalidArgument {
            name,
            value: v,
            requirement: "finite and >= 0",
        })
    }
}

/// The length-similarity heuristic `h(x, y)`.
pub fn length_similarity(x: f64, y: f64, p: &LengthSimParams) -> Result<f64, CurveError> {
    p.validate()?;
    check_length("x", x)?;
    check_length("y", y)?;
    Ok(p.value(x, y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    /// Zero slope at the trough `x = y`.
    FlatTrough,
    /// Decreasing for `x < y`.
    DecreasingBelow,
    /// Increasing for `x > y`.
    IncreasingAbove,
    /// `h(0, y) → b1`.
    LeftLimit,
    /// `h(x, y) → b2` as `x → ∞`.
    RightLimit,
    /// `h(y, y) = 1`.
    TroughValue,
}

impl Constraint {
    pub const ALL: [Constraint; 6] = [
        Constraint::FlatTrough,
        Constraint::DecreasingBelow,
        Constraint::IncreasingAbove,
        Constraint::LeftLimit,
        Constraint::RightLimit,
        Constraint::TroughValue,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Constraint::FlatTrough => "flat-trough",
            Constraint::DecreasingBelow => "decreasing-below",
            Constraint::IncreasingAbove => "increasing-above",
            Constraint::LeftLimit => "left-limit",
            Constraint::RightLimit => "right-limit",
            Constraint::TroughValue => "trough-value",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintCheck {
    pub constraint: Constraint,
    pub passed: bool,
    /// Slope magnitude, extreme slope, or limit value depending on the check.
    pub measured: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintReport {
    pub checks: Vec<ConstraintCheck>,
}

impl ConstraintReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, constraint: Constraint) -> &ConstraintCheck {
        self.checks
            .iter()
            .find(|c| c.constraint == constraint)
            .expect("report covers every constraint")
    }
}

/// Numerically check the six design constraints of `h` at query length `y`.
///
/// Slopes are central finite differences with step `fd_step` (shrunk where
/// needed so a difference never straddles `x = 0` or `x = y`). The slope
/// checks run over [`VERIFY_GRID_POINTS`] interior points of `(0, y)` and
/// `(y, 10y)`; they require the slope never to have the wrong sign and to be
/// strictly signed somewhere, since the curve saturates to floating-point
/// flatness far from its midpoints.
pub fn verify_feature_constraints(
    p: &LengthSimParams,
    y: f64,
    fd_step: f64,
    tol: f64,
) -> Result<ConstraintReport, CurveError> {
    p.validate()?;
    let positive = |name, v: f64| {
        if v.is_finite() && v > 0.0 {
            Ok(())
        } else {
            Err(CurveError::InvalidArgument {
                name,
                value: v,
                requirement: "finite and > 0",
            })
        }
    };
    positive("y", y)?;
    positive("fd_step", fd_step)?;
    positive("tol", tol)?;

    let h = |x: f64| p.value(x, y);
    let slope = |x: f64, step: f64| (h(x + step) - h(x - step)) / (2.0 * step);
    let n = VERIFY_GRID_POINTS;

    let trough_slope = slope(y, fd_step).abs();

    let below_spacing = y / (n + 1) as f64;
    let below_step = fd_step.min(0.5 * below_spacing);
    let (below_min, below_max) = (1..=n)
        .map(|i| slope(below_spacing * i as f64, below_step))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
            (lo.min(s), hi.max(s))
        });

    let above_spacing = 9.0 * y / (n + 1) as f64;
    let above_step = fd_step.min(0.5 * above_spacing);
    let (above_min, above_max) = (1..=n)
        .map(|i| slope(y + above_spacing * i as f64, above_step))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
            (lo.min(s), hi.max(s))
        });

    let left = h(0.0);
    let right = h(1e6 * y);
    let trough = h(y);

    let checks = vec![
        ConstraintCheck {
            constraint: Constraint::FlatTrough,
            passed: trough_slope <= tol,
            measured: trough_slope,
            tolerance: tol,
        },
        ConstraintCheck {
            constraint: Constraint::DecreasingBelow,
            passed: below_max <= 0.0 && below_min < 0.0,
            measured: below_max,
            tolerance: 0.0,
        },
        ConstraintCheck {
            constraint: Constraint::IncreasingAbove,
            passed: above_min >= 0.0 && above_max > 0.0,
            measured: above_min,
            tolerance: 0.0,
        },
        ConstraintCheck {
            constraint: Constraint::LeftLimit,
            passed: (left - p.left_bound).abs() <= tol,
            measured: left,
            tolerance: tol,
        },
        ConstraintCheck {
            constraint: Constraint::RightLimit,
            passed: (right - p.right_bound).abs() <= tol,
            measured: right,
            tolerance: tol,
        },
        ConstraintCheck {
            constraint: Constraint::TroughValue,
            passed: trough == 1.0,
            measured: trough,
            tolerance: 0.0,
        },
    ];
    Ok(ConstraintReport { checks })
}

/// `n` evenly spaced samples `(x, h(x, y))` over `[x_min, x_max]`.
pub fn sample_curve(
    p: &LengthSimParams,
    y: f64,
    x_min: f64,
    x_max: f64,
    n: usize,
) -> Result<Vec<(f64, f64)>, CurveError> {
    p.validate()?;
    check_length("y", y)?;
    check_length("x_min", x_min)?;
    if !(x_max.is_finite() && x_min < x_max) {
        return Err(CurveError::DegenerateRange {
            min: x_min,
            max: x_max,
        });
    }
    if n < 2 {
        return Err(CurveError::TooFewSamples(n));
    }
    let span = x_max - x_min;
    let last = (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            let x = if i == n - 1 {
                x_max
            } else {
                x_min + span * i as f64 / last
            };
            (x, p.value(x, y))
        })
        .collect())
}

/// Write samples as CSV with header `x,h`.
pub fn write_curve_csv<W: Write>(samples: &[(f64, f64)], mut out: W) -> io::Result<()> {
    writeln!(out, "x,h")?;
    for (x, h) in samples {
        writeln!(out, "{x},{h}")?;
    }
    Ok(())
}
