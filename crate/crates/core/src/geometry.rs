//! The Hamilton hypersphere `HP`, atlases of quaternionic charts, embedded
//! complex curves and symmetric functions of quaternion-valued branches.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::QFunction;
use crate::grid::GridSpec;
use crate::jet::Point;
use crate::operators::{eq1_from_jets, magnitude, prop31_from_jets, DEFAULT_TOL};
use crate::quat::{Quaternion, DEFAULT_EPS_SING};
use crate::residual::{PointOutcome, ResidualReport};

/// Minimum `norm_sq` a sha transition may take on its overlap.
pub const DEFAULT_TOL_ZERO: f64 = 1e-6;

/// A quaternionic line through the origin of `H^2`, i.e. a homogeneous pair
/// `(q1, q2)` modulo right multiplication by a nonzero quaternion.
///
/// Always stored normalized: `(q1 q2^-1, 1)` when `q2 != 0`, else `(1, 0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HPPoint {
    q1: Quaternion,
    q2: Quaternion,
}

impl HPPoint {
    pub const INFINITY: HPPoint = HPPoint {
        q1: Quaternion::ONE,
        q2: Quaternion::ZERO,
    };

    pub fn new(q1: Quaternion, q2: Quaternion) -> Result<Self> {
        hp_normalize(q1, q2)
    }

    /// The point with `zeta = q`.
    pub fn from_affine(q: Quaternion) -> Self {
        Self {
            q1: q,
            q2: Quaternion::ONE,
        }
    }

    pub fn q1(&self) -> Quaternion {
        self.q1
    }

    pub fn q2(&self) -> Quaternion {
        self.q2
    }

    pub fn is_infinity(&self) -> bool {
        self.q2 == Quaternion::ZERO
    }

    pub fn zeta(&self) -> Result<Quaternion> {
        chart_zeta(self)
    }

    pub fn zeta_prime(&self) -> Result<Quaternion> {
        chart_zeta_prime(self)
    }
}

pub fn hp_normalize(q1: Quaternion, q2: Quaternion) -> Result<HPPoint> {
    if q1.norm_sq() + q2.norm_sq() <= DEFAULT_EPS_SING {
        return Err(Error::BothZero);
    }
    match q2.inverse_with(DEFAULT_EPS_SING) {
        Ok(inv) => Ok(HPPoint::from_affine(q1 * inv)),
        Err(_) => Ok(HPPoint::INFINITY),
    }
}

/// `zeta = q1 q2^-1`, defined away from infinity.
pub fn chart_zeta(p: &HPPoint) -> Result<Quaternion> {
    if p.is_infinity() {
        return Err(Error::OutsideChart);
    }
    Ok(p.q1 * p.q2.inverse()?)
}

/// `zeta' = q2 q1^-1`, defined where `q1 != 0`.
pub fn chart_zeta_prime(p: &HPPoint) -> Result<Quaternion> {
    match p.q1.inverse_with(DEFAULT_EPS_SING) {
        Ok(inv) => Ok(p.q2 * inv),
        Err(_) => Err(Error::OutsideChart),
    }
}

/// `a + (z, 0)`.
pub fn embed_complex_line(a: Quaternion, z: Complex64) -> Quaternion {
    a + Quaternion::from_complex(z)
}

/// The complex projective line inside `HP`.
pub fn embed_cp1(z1: Complex64, z2: Complex64) -> Result<HPPoint> {
    hp_normalize(Quaternion::from_complex(z1), Quaternion::from_complex(z2))
}

/// Checks that `t` is a sha function on the given samples: both
/// hyperholomorphy systems vanish within `tol` and `norm_sq(t) >= tol_zero`.
/// Evaluation singularities count as poles and fail the check.
pub fn verify_sha_transition(
    t: &QFunction,
    points: &[Point],
    tol: f64,
    tol_zero: f64,
) -> ResidualReport {
    ResidualReport::run("sha", points, tol, false, |p| {
        match t.eval_with(p, DEFAULT_EPS_SING) {
            Ok(e) => {
                let n = e.value.norm_sq();
                if !n.is_finite() {
                    return PointOutcome::Failed("pole".into());
                }
                if n < tol_zero {
                    return PointOutcome::Failed(format!("zero (norm_sq = {n:e})"));
                }
                let (a, b) = eq1_from_jets(&e.j1, &e.j2);
                let (c, d) = prop31_from_jets(&e.j1, &e.j2);
                PointOutcome::residual(vec![a, b, c, d])
            }
            Err(err) => PointOutcome::Failed(format!("pole: {err}")),
        }
    })
}

/// The `HP` transition `zeta -> zeta^-1`, as the inverse of the identity.
pub fn hp_transition() -> QFunction {
    QFunction::identity().inverse()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionSpec {
    pub from: String,
    pub to: String,
    /// Transition function in the definition language.
    pub def: String,
    /// Samples of the overlap, in the coordinates of `from`.
    pub grid: GridSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_zero: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atlas {
    pub charts: Vec<ChartSpec>,
    pub transitions: Vec<TransitionSpec>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransitionReport {
    pub from: String,
    pub to: String,
    pub sha: ResidualReport,
    /// `t_back(t(p)) - p`, when the reverse transition is declared.
    pub round_trip: Option<ResidualReport>,
}

impl TransitionReport {
    pub fn pass(&self) -> bool {
        self.sha.pass && self.round_trip.as_ref().is_none_or(|r| r.pass)
    }
}

impl Atlas {
    /// The two-chart atlas of `HP` with `zeta' = zeta^-1` in both
    /// directions, sampled on `grid`.
    pub fn hamilton_hypersphere(grid: GridSpec) -> Self {
        let def = hp_transition().to_string();
        let t = |from: &str, to: &str| TransitionSpec {
            from: from.into(),
            to: to.into(),
            def: def.clone(),
            grid: grid.clone(),
            tol: None,
            tol_zero: None,
        };
        Atlas {
            charts: vec![
                ChartSpec {
                    name: "zeta".into(),
                    description: Some("q1 q2^-1".into()),
                },
                ChartSpec {
                    name: "zeta_prime".into(),
                    description: Some("q2 q1^-1".into()),
                },
            ],
            transitions: vec![t("zeta", "zeta_prime"), t("zeta_prime", "zeta")],
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidAtlas(e.to_string()))
    }

    /// Parses every transition and grid, checking chart names.
    pub fn prepare(&self) -> Result<Vec<(QFunction, Vec<Point>)>> {
        let known = |n: &str| self.charts.iter().any(|c| c.name == n);
        self.transitions
            .iter()
            .map(|t| {
                for n in [&t.from, &t.to] {
                    if !known(n) {
                        return Err(Error::InvalidAtlas(format!("unknown chart `{n}`")));
                    }
                }
                Ok((QFunction::parse(&t.def)?, t.grid.points()?))
            })
            .collect()
    }

    pub fn verify(&self) -> Result<Vec<TransitionReport>> {
        let prepared = self.prepare()?;
        let mut out = Vec::with_capacity(prepared.len());
        for (k, (spec, (t, points))) in self.transitions.iter().zip(&prepared).enumerate() {
            let tol = spec.tol.unwrap_or(DEFAULT_TOL);
            let sha =
                verify_sha_transition(t, points, tol, spec.tol_zero.unwrap_or(DEFAULT_TOL_ZERO));
            let back = self
                .transitions
                .iter()
                .enumerate()
                .find(|(m, s)| *m != k && s.from == spec.to && s.to == spec.from)
                .map(|(m, _)| &prepared[m].0);
            let round_trip = back.map(|b| round_trip_check(t, b, points, tol));
            out.push(TransitionReport {
                from: spec.from.clone(),
                to: spec.to.clone(),
                sha,
                round_trip,
            });
        }
        Ok(out)
    }
}

pub fn verify_atlas(atlas: &Atlas) -> Result<Vec<TransitionReport>> {
    atlas.verify()
}

/// `|back(t(p)) - p|` with relative scaling by `|p|`.
pub fn round_trip_check(
    t: &QFunction,
    back: &QFunction,
    points: &[Point],
    tol: f64,
) -> ResidualReport {
    ResidualReport::run("round_trip", points, tol, true, |p| {
        let v = match t.value(p, DEFAULT_EPS_SING) {
            Ok(v) => v,
            Err(e) => return PointOutcome::Skipped(e.to_string()),
        };
        match back.value((v.z1, v.z2), DEFAULT_EPS_SING) {
            Ok(w) => PointOutcome::Residual {
                values: vec![w.z1 - p.0, w.z2 - p.1],
                scale: magnitude(&[p.0, p.1]),
            },
            Err(e) => PointOutcome::Failed(e.to_string()),
        }
    })
}

/// Pointwise membership of `f` in `A_{alpha,beta} = alpha A1 + beta A2`,
/// where `A1 = {a + b i}` and `A2 = {c + d j}` with real fields `a, b, c, d`.
///
/// Allowed values: `f2` real when `beta != 0` and zero otherwise; `f1` any
/// complex when `alpha != 0`, real when only `beta != 0`, zero when both
/// vanish. The residual is the distance to the allowed set.
pub fn a_alpha_beta_membership(
    f: &QFunction,
    alpha: f64,
    beta: f64,
    points: &[Point],
    tol: f64,
) -> ResidualReport {
    ResidualReport::run("a_alpha_beta", points, tol, false, |p| {
        match f.value(p, DEFAULT_EPS_SING) {
            Ok(v) => {
                let f1_dev = if alpha != 0.0 {
                    Complex64::new(0.0, 0.0)
                } else if beta != 0.0 {
                    Complex64::new(0.0, v.z1.im)
                } else {
                    v.z1
                };
                let f2_dev = if beta != 0.0 {
                    Complex64::new(0.0, v.z2.im)
                } else {
                    v.z2
                };
                PointOutcome::residual(vec![f1_dev, f2_dev])
            }
            Err(e) => PointOutcome::from_error(&e),
        }
    })
}

/// Coefficients `c_1..c_n` of `(T - f_1)(T - f_2)...(T - f_n)` with `T`
/// central and the factors multiplied in the given order.
///
/// For pairwise commuting values `c_j = (-1)^j s_j(f_1, ..., f_n)`; otherwise
/// the result depends on the order, e.g. `c_2 = f_1 f_2` for two values.
pub fn elementary_symmetric_coeffs(branch_values: &[Quaternion]) -> Vec<Quaternion> {
    let mut c = vec![Quaternion::ONE];
    for &f in branch_values {
        c.push(Quaternion::ZERO);
        for i in (1..c.len()).rev() {
            c[i] = c[i] - c[i - 1] * f;
        }
    }
    c.remove(0);
    c
}

/// `t^n + c_1 t^(n-1) + ... + c_n`, coefficients multiplied on the left.
pub fn eval_monic_poly(coeffs: &[Quaternion], t: Quaternion) -> Quaternion {
    let n = coeffs.len();
    let mut powers = vec![Quaternion::ONE];
    for _ in 0..n {
        let last = *powers.last().unwrap();
        powers.push(last * t);
    }
    coeffs
        .iter()
        .enumerate()
        .fold(powers[n], |acc, (j, c)| acc + *c * powers[n - j - 1])
}
