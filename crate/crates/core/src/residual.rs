//! Grid evaluation of pointwise checks with a deterministic max/argmax
//! reduction.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Error;
use crate::grid::point_cmp;
use crate::jet::Point;
use crate::operators::magnitude;

/// What a check produced at one sample point.
#[derive(Clone, Debug, PartialEq)]
pub enum PointOutcome {
    /// Residual vector and the scale used for relative tolerances.
    Residual { values: Vec<Complex64>, scale: f64 },
    /// Excluded from the check, e.g. a point inside the pole guard.
    Skipped(String),
    /// The check fails at this point irrespective of the residual.
    Failed(String),
}

impl PointOutcome {
    pub fn residual(values: Vec<Complex64>) -> Self {
        Self::Residual { values, scale: 0.0 }
    }

    /// Singular values and pole-guard hits are skipped; anything else fails.
    pub fn from_error(e: &Error) -> Self {
        match e {
            Error::SingularValue { .. } | Error::NearPole { .. } => Self::Skipped(e.to_string()),
            other => Self::Failed(other.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointResidual {
    pub point: Point,
    pub values: Vec<Complex64>,
    /// Quantity compared against the tolerance.
    pub magnitude: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub name: String,
    pub tol: f64,
    pub relative: bool,
    pub samples: Vec<PointResidual>,
    pub skipped: Vec<(Point, String)>,
    pub failures: Vec<(Point, String)>,
    pub max_abs: f64,
    pub argmax: Option<Point>,
    pub pass: bool,
}

impl ResidualReport {
    /// Reduces per-point outcomes (in grid order) to a report.
    ///
    /// Ties on the maximum go to the lexicographically smallest point, so the
    /// result does not depend on evaluation order.
    pub fn from_outcomes(
        name: impl Into<String>,
        tol: f64,
        relative: bool,
        outcomes: Vec<(Point, PointOutcome)>,
    ) -> Self {
        let mut samples = Vec::new();
        let mut skipped = Vec::new();
        let mut failures = Vec::new();
        for (point, outcome) in outcomes {
            match outcome {
                PointOutcome::Residual { values, scale } => {
                    let raw = magnitude(&values);
                    let m = if relative { raw / (1.0 + scale) } else { raw };
                    let m = if m.is_nan() { f64::INFINITY } else { m };
                    samples.push(PointResidual {
                        point,
                        values,
                        magnitude: m,
                    });
                }
                PointOutcome::Skipped(why) => skipped.push((point, why)),
                PointOutcome::Failed(why) => failures.push((point, why)),
            }
        }
        let mut max_abs = 0.0;
        let mut argmax: Option<Point> = None;
        for s in &samples {
            let better = match argmax {
                None => true,
                Some(best) => {
                    s.magnitude > max_abs
                        || (s.magnitude == max_abs && point_cmp(&s.point, &best).is_lt())
                }
            };
            if better {
                max_abs = s.magnitude;
                argmax = Some(s.point);
            }
        }
        let pass = failures.is_empty() && max_abs <= tol;
        Self {
            name: name.into(),
            tol,
            relative,
            samples,
            skipped,
            failures,
            max_abs,
            argmax,
            pass,
        }
    }

    /// Runs `check` at every point, in parallel, and reduces.
    pub fn run<F>(
        name: impl Into<String>,
        points: &[Point],
        tol: f64,
        relative: bool,
        check: F,
    ) -> Self
    where
        F: Fn(Point) -> PointOutcome + Sync,
    {
        let outcomes: Vec<(Point, PointOutcome)> =
            points.par_iter().map(|p| (*p, check(*p))).collect();
        Self::from_outcomes(name, tol, relative, outcomes)
    }

    pub fn evaluated(&self) -> usize {
        self.samples.len()
    }

    /// Magnitude at `point`, if it was evaluated.
    pub fn magnitude_at(&self, point: Point) -> Option<f64> {
        self.samples
            .iter()
            .find(|s| s.point == point)
            .map(|s| s.magnitude)
    }
}
