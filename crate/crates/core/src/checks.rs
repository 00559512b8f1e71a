//! Grid-level checks and the hyperholomorphy classification of a family.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::function::QFunction;
use crate::grid::GridSpec;
use crate::jet::Point;
use crate::operators::{
    eq1_from_jets, inverse_fueter_prepared, leibniz_from_evals, product_condition_from_evals,
    prop26_rhs_from_evals, prop31_from_jets, sum_condition_prepared, CheckConfig,
};
use crate::residual::{PointOutcome, ResidualReport};

fn scale_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(0.0, f64::max)
}

pub fn eq1_check(f: &QFunction, points: &[Point], cfg: &CheckConfig) -> ResidualReport {
    ResidualReport::run("eq1", points, cfg.tol, cfg.relative, |p| {
        match f.eval_with(p, cfg.eps_sing) {
            Ok(e) => {
                let (a, b) = eq1_from_jets(&e.j1, &e.j2);
                let scale = scale_of(&[
                    e.j1.d_z1bar.norm(),
                    e.j1.d_z2bar.norm(),
                    e.j2.d_z1bar.norm(),
                    e.j2.d_z2bar.norm(),
                ]);
                PointOutcome::Residual {
                    values: vec![a, b],
                    scale,
                }
            }
            Err(err) => PointOutcome::from_error(&err),
        }
    })
}

pub fn prop31_check(f: &QFunction, points: &[Point], cfg: &CheckConfig) -> ResidualReport {
    ResidualReport::run("prop31", points, cfg.tol, cfg.relative, |p| {
        match f.eval_with(p, cfg.eps_sing) {
            Ok(e) if e.value.norm_sq() <= cfg.eps_pole => {
                PointOutcome::Skipped("within pole guard".into())
            }
            Ok(e) => {
                let (a, b) = prop31_from_jets(&e.j1, &e.j2);
                let grad =
                    e.j1.partials()
                        .iter()
                        .chain(e.j2.partials().iter())
                        .map(|d| d.norm())
                        .fold(0.0, f64::max);
                PointOutcome::Residual {
                    values: vec![a, b],
                    scale: e.value.abs() * grad,
                }
            }
            Err(err) => PointOutcome::from_error(&err),
        }
    })
}

/// `D(f^-1)` on the grid, skipping points inside the pole guard.
pub fn inverse_fueter_check(f: &QFunction, points: &[Point], cfg: &CheckConfig) -> ResidualReport {
    let f_inv = f.inverse();
    ResidualReport::run("inverse_fueter", points, cfg.tol, cfg.relative, |p| {
        match inverse_fueter_prepared(f, &f_inv, p, cfg) {
            Ok(d) => PointOutcome::residual(vec![d.z1, d.z2]),
            Err(err) => PointOutcome::from_error(&err),
        }
    })
}

/// `|D(f * g) - (D f) * g - term2|` on the grid.
pub fn leibniz_check(
    f: &QFunction,
    g: &QFunction,
    points: &[Point],
    cfg: &CheckConfig,
) -> ResidualReport {
    let fg = f.mul(g);
    ResidualReport::run("leibniz", points, cfg.tol, cfg.relative, |p| {
        let evals = (|| {
            Ok::<_, Error>((
                f.eval_with(p, cfg.eps_sing)?,
                g.eval_with(p, cfg.eps_sing)?,
                fg.eval_with(p, cfg.eps_sing)?,
            ))
        })();
        match evals {
            Ok((fe, ge, fge)) => {
                let d = leibniz_from_evals(&fe, &ge, &fge);
                let r = d.residual();
                PointOutcome::Residual {
                    values: vec![r.z1, r.z2],
                    scale: d.lhs.abs().max(d.term1.abs()).max(d.term2.abs()),
                }
            }
            Err(err) => PointOutcome::from_error(&err),
        }
    })
}

/// Difference between the as-printed product formula and `D(f * g)`.
/// Informational: the report always passes.
pub fn prop26_rhs_check(
    f: &QFunction,
    g: &QFunction,
    points: &[Point],
    cfg: &CheckConfig,
) -> ResidualReport {
    let fg = f.mul(g);
    let mut rep = ResidualReport::run("prop26rhs", points, f64::INFINITY, cfg.relative, |p| {
        let evals = (|| {
            Ok::<_, Error>((
                f.eval_with(p, cfg.eps_sing)?,
                g.eval_with(p, cfg.eps_sing)?,
                fg.eval_with(p, cfg.eps_sing)?,
            ))
        })();
        match evals {
            Ok((fe, ge, fge)) => {
                let lhs = crate::operators::fueter_from_jets(&fge.j1, &fge.j2);
                let d = prop26_rhs_from_evals(&fe, &ge) - lhs;
                PointOutcome::Residual {
                    values: vec![d.z1, d.z2],
                    scale: lhs.abs(),
                }
            }
            Err(err) => PointOutcome::from_error(&err),
        }
    });
    rep.tol = cfg.tol;
    rep.pass = true;
    rep
}

/// Outcome of the sum condition on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SumCheck {
    /// Residual `norm_sq(h)^2 D(h^-1)`; this governs pass/fail.
    pub direct: ResidualReport,
    /// `|expanded - direct| / (1 + |direct|)` per point.
    pub discrepancy: ResidualReport,
}

pub fn sum_check(f: &QFunction, g: &QFunction, points: &[Point], cfg: &CheckConfig) -> SumCheck {
    let h = f.add(g);
    let h_inv = h.inverse();
    let outcomes: Vec<_> = {
        use rayon::prelude::*;
        points
            .par_iter()
            .map(|p| (*p, sum_condition_prepared(&h, &h_inv, *p, cfg)))
            .collect()
    };
    let direct = ResidualReport::from_outcomes(
        "sum",
        cfg.tol,
        cfg.relative,
        outcomes
            .iter()
            .map(|(p, r)| {
                let o = match r {
                    Ok(s) => PointOutcome::residual(vec![s.direct.z1, s.direct.z2]),
                    Err(e) => PointOutcome::from_error(e),
                };
                (*p, o)
            })
            .collect(),
    );
    let discrepancy = ResidualReport::from_outcomes(
        "sum_expanded_vs_direct",
        1e-8,
        true,
        outcomes
            .iter()
            .map(|(p, r)| {
                let o = match r {
                    Ok(s) => {
                        let d = s.expanded - s.direct;
                        PointOutcome::Residual {
                            values: vec![d.z1, d.z2],
                            scale: s.direct.abs(),
                        }
                    }
                    Err(e) => PointOutcome::from_error(e),
                };
                (*p, o)
            })
            .collect(),
    );
    SumCheck {
        direct,
        discrepancy,
    }
}

pub fn product_check(
    f: &QFunction,
    g: &QFunction,
    points: &[Point],
    cfg: &CheckConfig,
) -> ResidualReport {
    ResidualReport::run("product", points, cfg.tol, cfg.relative, |p| {
        match (f.eval_with(p, cfg.eps_sing), g.eval_with(p, cfg.eps_sing)) {
            (Ok(fe), Ok(ge)) => {
                let (a, b) = product_condition_from_evals(&fe, &ge);
                PointOutcome::Residual {
                    values: vec![a, b],
                    scale: fe.value.abs() * ge.value.abs(),
                }
            }
            (Err(e), _) | (_, Err(e)) => PointOutcome::from_error(&e),
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassLevel {
    Unclassified,
    Hyperholomorphic,
    WHypermeromorphic,
    HypermeromorphicInFamily,
}

impl ClassLevel {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClassLevel::Unclassified => "UNCLASSIFIED",
            ClassLevel::Hyperholomorphic => "HYPERHOLOMORPHIC",
            ClassLevel::WHypermeromorphic => "W_HYPERMEROMORPHIC",
            ClassLevel::HypermeromorphicInFamily => "HYPERMEROMORPHIC_IN_FAMILY",
        }
    }
}

impl fmt::Display for ClassLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Verdict for one member of a family.
#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub level: ClassLevel,
    /// First check that stopped the function from reaching the next level.
    pub failing_check: Option<String>,
    /// Residual summaries, keyed by check name (`eq1`, `prop31`,
    /// `sum[k]`, `product[k]`, `product_rev[k]`).
    pub max_residuals: Vec<(String, f64)>,
}

impl Classification {
    pub fn is(&self, level: ClassLevel) -> bool {
        self.level >= level
    }
}

/// Classifies each member of `fs` on `grid`:
///
/// 1. `HYPERHOLOMORPHIC` if the Cauchy-Fueter residual stays within `tol` at every
///    regular point;
/// 2. `W_HYPERMEROMORPHIC` if in addition the inverse system does;
/// 3. `HYPERMEROMORPHIC_IN_FAMILY` if in addition the sum and product
///    conditions hold with every other member (both product orders).
pub fn classify_on_grid(
    fs: &[QFunction],
    grid: &GridSpec,
    cfg: &CheckConfig,
) -> Result<Vec<Classification>> {
    let points = grid.points()?;
    classify_on_points(fs, &points, cfg)
}

pub fn classify_on_points(
    fs: &[QFunction],
    points: &[Point],
    cfg: &CheckConfig,
) -> Result<Vec<Classification>> {
    if points.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut out = Vec::with_capacity(fs.len());
    let mut pair_cache: HashMap<(usize, usize), (f64, bool)> = HashMap::new();
    for (i, f) in fs.iter().enumerate() {
        let mut residuals = Vec::new();
        let eq1 = eq1_check(f, points, cfg);
        residuals.push(("eq1".to_string(), eq1.max_abs));
        if !eq1.pass {
            out.push(Classification {
                level: ClassLevel::Unclassified,
                failing_check: Some("eq1".into()),
                max_residuals: residuals,
            });
            continue;
        }
        let p31 = prop31_check(f, points, cfg);
        residuals.push(("prop31".to_string(), p31.max_abs));
        if !p31.pass {
            out.push(Classification {
                level: ClassLevel::Hyperholomorphic,
                failing_check: Some("prop31".into()),
                max_residuals: residuals,
            });
            continue;
        }
        let mut failing = None;
        for (k, g) in fs.iter().enumerate() {
            if k == i {
                continue;
            }
            let key = (i.min(k), i.max(k));
            let (sum_max, sum_pass) = *pair_cache.entry(key).or_insert_with(|| {
                let s = sum_check(f, g, points, cfg);
                (s.direct.max_abs, s.direct.pass)
            });
            residuals.push((format!("sum[{k}]"), sum_max));
            let fwd = product_check(f, g, points, cfg);
            let rev = product_check(g, f, points, cfg);
            residuals.push((format!("product[{k}]"), fwd.max_abs));
            residuals.push((format!("product_rev[{k}]"), rev.max_abs));
            if failing.is_none() {
                if !sum_pass {
                    failing = Some(format!("sum[{k}]"));
                } else if !fwd.pass {
                    failing = Some(format!("product[{k}]"));
                } else if !rev.pass {
                    failing = Some(format!("product_rev[{k}]"));
                }
            }
        }
        let level = if failing.is_none() {
            ClassLevel::HypermeromorphicInFamily
        } else {
            ClassLevel::WHypermeromorphic
        };
        out.push(Classification {
            level,
            failing_check: failing,
            max_residuals: residuals,
        });
    }
    Ok(out)
}

/// Common zeros of the components found on a tensor grid.
#[derive(Clone, Debug, PartialEq)]
pub struct CommonZeroScan {
    pub zero_points: Vec<Point>,
    /// Zero points with a zero neighbour along some grid axis.
    pub non_isolated: Vec<Point>,
    /// Non-isolated common zeros for a function that is not syntactically
    /// holomorphic.
    pub violation: bool,
}

/// Samples `Z(f1) ∩ Z(f2)` on a tensor grid and flags clusters.
///
/// Only the generated tensor points are scanned; random and extra points are
/// ignored because they have no grid neighbours.
pub fn common_zero_scan(
    f: &QFunction,
    grid: &GridSpec,
    tol_zero: f64,
    eps_sing: f64,
) -> Result<CommonZeroScan> {
    grid.validate()?;
    let vals: Vec<Vec<f64>> = grid.axes.iter().map(|a| a.values()).collect();
    let dims: Vec<usize> = vals.iter().map(Vec::len).collect();
    let mut zero = HashMap::new();
    let mut zero_points = Vec::new();
    for a in 0..dims[0] {
        for b in 0..dims[1] {
            for c in 0..dims[2] {
                for d in 0..dims[3] {
                    let p = crate::grid::to_point([vals[0][a], vals[1][b], vals[2][c], vals[3][d]]);
                    let is_zero = matches!(f.value(p, eps_sing), Ok(v) if v.norm_sq() <= tol_zero);
                    if is_zero {
                        zero.insert([a, b, c, d], p);
                        zero_points.push(p);
                    }
                }
            }
        }
    }
    let mut non_isolated = Vec::new();
    for (idx, p) in &zero {
        let clustered = (0..4).any(|axis| {
            [-1i64, 1].iter().any(|step| {
                let n = idx[axis] as i64 + step;
                if n < 0 || n as usize >= dims[axis] {
                    return false;
                }
                let mut nb = *idx;
                nb[axis] = n as usize;
                zero.contains_key(&nb)
            })
        });
        if clustered {
            non_isolated.push(*p);
        }
    }
    non_isolated.sort_by(crate::grid::point_cmp);
    let violation = !f.is_syntactically_holomorphic() && !non_isolated.is_empty();
    Ok(CommonZeroScan {
        zero_points,
        non_isolated,
        violation,
    })
}

/// Checks the real-component implication on a grid: wherever `f` is
/// hyperholomorphic and both components are real, report the Cauchy-Riemann
/// residual of `f1 + i f2`.
pub fn real_component_collapse(
    f: &QFunction,
    points: &[Point],
    cfg: &CheckConfig,
) -> ResidualReport {
    ResidualReport::run(
        "real_component_collapse",
        points,
        cfg.tol,
        cfg.relative,
        |p| {
            let e = match f.eval_with(p, cfg.eps_sing) {
                Ok(e) => e,
                Err(err) => return PointOutcome::from_error(&err),
            };
            let (a, b) = eq1_from_jets(&e.j1, &e.j2);
            let imag = e.value.z1.im.abs() + e.value.z2.im.abs();
            if crate::operators::magnitude(&[a, b]) > cfg.tol || imag > cfg.tol {
                return PointOutcome::Skipped("premise does not hold".into());
            }
            match crate::operators::real_pair_cauchy_riemann(f, p) {
                Ok(((c1, c2), _)) => PointOutcome::residual(vec![c1, c2]),
                Err(err) => PointOutcome::from_error(&err),
            }
        },
    )
}
