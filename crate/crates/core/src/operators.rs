//! The modified Cauchy-Fueter operator `D = (d/dconj(z1) + j d/dconj(z2)) / 2`
//! and the residual systems built around it.
//!
//! Everything here is a pointwise computation on component jets. Partials of
//! conjugated components come from the jet conjugation rule, e.g.
//! `d conj(f)/dz = conj(df/dconj(z))`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function::{QEval, QFunction};
use crate::jet::{Point, WirtingerJet};
use crate::quat::{Quaternion, DEFAULT_EPS_SING};

/// Default absolute residual tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Default guard on `norm_sq(f)` for inverse-related checks.
pub const DEFAULT_EPS_POLE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckConfig {
    pub eps_sing: f64,
    pub eps_pole: f64,
    pub tol: f64,
    /// Compare `residual / (1 + scale)` against `tol` instead of the raw residual.
    pub relative: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            eps_sing: DEFAULT_EPS_SING,
            eps_pole: DEFAULT_EPS_POLE,
            tol: DEFAULT_TOL,
            relative: false,
        }
    }
}

impl CheckConfig {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

/// Componentwise quaternion-valued partial `(df1/dv, df2/dv)` for direction
/// index `k` in `[d_z1, d_z1bar, d_z2, d_z2bar]`.
pub fn partial_q(e: &QEval, k: usize) -> Quaternion {
    Quaternion::new(e.j1.partials()[k], e.j2.partials()[k])
}

const DZ1: usize = 0;
const DZ1BAR: usize = 1;
const DZ2: usize = 2;
const DZ2BAR: usize = 3;

/// `D f` assembled with quaternion products: `(df/dconj(z1) + j * df/dconj(z2)) / 2`.
pub fn fueter_from_jets(j1: &WirtingerJet, j2: &WirtingerJet) -> Quaternion {
    let e = QEval::from_jets(*j1, *j2);
    (partial_q(&e, DZ1BAR) + Quaternion::J * partial_q(&e, DZ2BAR)).scale(0.5)
}

/// The two complex equations characterising `D f = 0`:
/// `df1/dconj(z1) - dconj(f2)/dz2` and `df1/dconj(z2) + dconj(f2)/dz1`.
pub fn eq1_from_jets(j1: &WirtingerJet, j2: &WirtingerJet) -> (Complex64, Complex64) {
    let f2c = j2.conj();
    (j1.d_z1bar - f2c.d_z2, j1.d_z2bar + f2c.d_z1)
}

pub fn fueter(f: &QFunction, q: Point) -> Result<Quaternion> {
    let e = f.eval(q)?;
    Ok(fueter_from_jets(&e.j1, &e.j2))
}

pub fn eq1_residual(f: &QFunction, q: Point) -> Result<(Complex64, Complex64)> {
    let e = f.eval(q)?;
    Ok(eq1_from_jets(&e.j1, &e.j2))
}

/// Largest disagreement between the Cauchy-Fueter pair and `2 D f`, with the second
/// entry compared against the conjugate of the `j` component.
pub fn eq1_fueter_discrepancy(j1: &WirtingerJet, j2: &WirtingerJet) -> f64 {
    let d = fueter_from_jets(j1, j2).scale(2.0);
    let (a, b) = eq1_from_jets(j1, j2);
    (a - d.z1).norm().max((b - d.z2.conj()).norm())
}

/// Exact product rule for `D(f * g)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeibnizDecomposition {
    /// `D(f * g)`, by differentiating the product function.
    pub lhs: Quaternion,
    /// `(D f) * g`: derivatives falling on the first factor.
    pub term1: Quaternion,
    /// Derivatives falling on the second factor with `f` held fixed:
    /// `(1/2) sum_k e_k * (f1 dg/dconj(zk) + (f2 j) * dg/dzk)`, `e_1 = 1`, `e_2 = j`.
    pub term2: Quaternion,
    /// `(1/2)(f * dg/dconj(z1) + (j * f) * dg/dconj(z2))` with componentwise
    /// partials of `g`. Kept for comparison; it differs from `term2` whenever
    /// `f2 != 0` or `g` is not holomorphic.
    pub term2_componentwise: Quaternion,
}

impl LeibnizDecomposition {
    pub fn residual(&self) -> Quaternion {
        self.lhs - self.term1 - self.term2
    }
}

pub fn leibniz_from_evals(fe: &QEval, ge: &QEval, fg: &QEval) -> LeibnizDecomposition {
    let lhs = fueter_from_jets(&fg.j1, &fg.j2);
    let term1 = fueter_from_jets(&fe.j1, &fe.j2) * ge.value;
    let f1 = Quaternion::from_complex(fe.value.z1);
    let f2j = Quaternion::new(Complex64::default(), fe.value.z2);
    let second = |dbar: usize, d: usize| f1 * partial_q(ge, dbar) + f2j * partial_q(ge, d);
    let term2 = (second(DZ1BAR, DZ1) + Quaternion::J * second(DZ2BAR, DZ2)).scale(0.5);
    let term2_componentwise = (fe.value * partial_q(ge, DZ1BAR)
        + (Quaternion::J * fe.value) * partial_q(ge, DZ2BAR))
    .scale(0.5);
    LeibnizDecomposition {
        lhs,
        term1,
        term2,
        term2_componentwise,
    }
}

pub fn leibniz_decomposition(
    f: &QFunction,
    g: &QFunction,
    q: Point,
) -> Result<LeibnizDecomposition> {
    let fe = f.eval(q)?;
    let ge = g.eval(q)?;
    let fg = f.mul(g).eval(q)?;
    Ok(leibniz_from_evals(&fe, &ge, &fg))
}

/// The product formula evaluated exactly as printed:
/// `(D f) * (j * g) + f * dg/dconj(z1) + (conj(f) * j) * dg/dconj(z2)`.
pub fn prop26_rhs_from_evals(fe: &QEval, ge: &QEval) -> Quaternion {
    fueter_from_jets(&fe.j1, &fe.j2) * (Quaternion::J * ge.value)
        + fe.value * partial_q(ge, DZ1BAR)
        + (fe.value.conj() * Quaternion::J) * partial_q(ge, DZ2BAR)
}

pub fn prop26_rhs_as_written(f: &QFunction, g: &QFunction, q: Point) -> Result<Quaternion> {
    Ok(prop26_rhs_from_evals(&f.eval(q)?, &g.eval(q)?))
}

/// Left-hand sides of the inverse-hyperholomorphy system:
///
/// ```text
/// (conj f1 - f1) dconj(f1)/dz1 - conj(f2) df2/dz1 - f2 dconj(f1)/dconj(z2)
/// conj(f2) df1/dz1 + dconj(f2)/dz1 (conj f1 - f1) - f2 dconj(f2)/dconj(z2)
/// ```
pub fn prop31_from_jets(j1: &WirtingerJet, j2: &WirtingerJet) -> (Complex64, Complex64) {
    let (c1, c2) = (j1.conj(), j2.conj());
    let (f1, f2) = (j1.value, j2.value);
    let (f1c, f2c) = (c1.value, c2.value);
    let r1 = (f1c - f1) * c1.d_z1 - f2c * j2.d_z1 - f2 * c1.d_z2bar;
    let r2 = f2c * j1.d_z1 + c2.d_z1 * (f1c - f1) - f2 * c2.d_z2bar;
    (r1, r2)
}

pub fn prop31_residuals(f: &QFunction, q: Point) -> Result<(Complex64, Complex64)> {
    let e = f.eval(q)?;
    Ok(prop31_from_jets(&e.j1, &e.j2))
}

fn pole_guard(value: Quaternion, eps_pole: f64) -> Result<()> {
    let n = value.norm_sq();
    if n.is_nan() || n <= eps_pole {
        return Err(Error::NearPole { norm_sq: n });
    }
    Ok(())
}

/// `D(f^-1)` obtained by differentiating the constructed inverse function.
pub fn inverse_fueter_direct(f: &QFunction, q: Point, cfg: &CheckConfig) -> Result<Quaternion> {
    inverse_fueter_prepared(f, &f.inverse(), q, cfg)
}

/// As [`inverse_fueter_direct`] with `f_inv = f.inverse()` built by the caller.
pub fn inverse_fueter_prepared(
    f: &QFunction,
    f_inv: &QFunction,
    q: Point,
    cfg: &CheckConfig,
) -> Result<Quaternion> {
    pole_guard(f.value(q, cfg.eps_sing)?, cfg.eps_pole)?;
    let e = f_inv.eval_with(q, cfg.eps_sing)?;
    Ok(fueter_from_jets(&e.j1, &e.j2))
}

/// Both sides of the sum condition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SumCondition {
    /// `-(D|h|) * conj(h) + |h| D(conj h)` with `|h| = h1 conj(h1) + h2 conj(h2)`.
    pub expanded: Quaternion,
    /// `norm_sq(h)^2 D(h^-1)`.
    pub direct: Quaternion,
}

impl SumCondition {
    pub fn discrepancy(&self) -> f64 {
        (self.expanded - self.direct).abs()
    }

    /// Whether the two routes agree within `tol * (1 + |direct|)`.
    pub fn consistent(&self, tol: f64) -> bool {
        self.discrepancy() <= tol * (1.0 + self.direct.abs())
    }
}

pub fn sum_condition_from_evals(he: &QEval, h_inv: &QEval) -> SumCondition {
    let (j1, j2) = (he.j1, he.j2);
    let modulus = j1 * j1.conj() + j2 * j2.conj();
    let d_modulus = fueter_from_jets(&modulus, &WirtingerJet::default());
    let d_conj = fueter_from_jets(&j1.conj(), &(-j2));
    let expanded = -(d_modulus * he.value.conj()) + d_conj.scale(modulus.value.re);
    let n = he.value.norm_sq();
    let direct = fueter_from_jets(&h_inv.j1, &h_inv.j2).scale(n * n);
    SumCondition { expanded, direct }
}

pub fn sum_condition_residual(h: &QFunction, q: Point, cfg: &CheckConfig) -> Result<SumCondition> {
    sum_condition_prepared(h, &h.inverse(), q, cfg)
}

pub fn sum_condition_prepared(
    h: &QFunction,
    h_inv: &QFunction,
    q: Point,
    cfg: &CheckConfig,
) -> Result<SumCondition> {
    let he = h.eval_with(q, cfg.eps_sing)?;
    pole_guard(he.value, cfg.eps_pole)?;
    let hi = h_inv.eval_with(q, cfg.eps_sing)?;
    Ok(sum_condition_from_evals(&he, &hi))
}

/// Left-hand sides of the product system, as printed:
///
/// ```text
/// g1 (df1/dconj(z1) + dconj(f2)/dz2) + (f1 - conj f1) dg1/dconj(z1)
///     + conj(f2) dg1/dz2 - f2 dconj(g2)/dconj(z1)
/// g1 (df1/dconj(z2) - dconj(f2)/dz1) + (f1 - conj f1) dg1/dconj(z2)
///     - conj(f2) dg1/dz1 - f2 dconj(g2)/dconj(z2)
/// ```
pub fn product_condition_from_evals(fe: &QEval, ge: &QEval) -> (Complex64, Complex64) {
    let (f1j, f2j, g1j, g2j) = (fe.j1, fe.j2, ge.j1, ge.j2);
    let f2c = f2j.conj();
    let g2c = g2j.conj();
    let (f1, f2, g1) = (f1j.value, f2j.value, g1j.value);
    let im_part = f1 - f1.conj();
    let p1 = g1 * (f1j.d_z1bar + f2c.d_z2) + im_part * g1j.d_z1bar + f2c.value * g1j.d_z2
        - f2 * g2c.d_z1bar;
    let p2 = g1 * (f1j.d_z2bar - f2c.d_z1) + im_part * g1j.d_z2bar
        - f2c.value * g1j.d_z1
        - f2 * g2c.d_z2bar;
    (p1, p2)
}

pub fn product_condition_residuals(
    f: &QFunction,
    g: &QFunction,
    q: Point,
) -> Result<(Complex64, Complex64)> {
    Ok(product_condition_from_evals(&f.eval(q)?, &g.eval(q)?))
}

/// Cauchy-Riemann residuals `(dF/dconj(z1), dF/dconj(z2))` of `F = f1 + i f2`
/// together with `|Im f1| + |Im f2|` at the point.
pub fn real_pair_cauchy_riemann(f: &QFunction, q: Point) -> Result<((Complex64, Complex64), f64)> {
    let e = f.eval(q)?;
    let i = Complex64::i();
    let big_f = e.j1 + e.j2.scale(i);
    let imag = e.value.z1.im.abs() + e.value.z2.im.abs();
    Ok(((big_f.d_z1bar, big_f.d_z2bar), imag))
}

pub fn magnitude(values: &[Complex64]) -> f64 {
    values.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}
