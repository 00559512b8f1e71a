//! Polynomials in the four independent Wirtinger variables
//! `z1, conj(z1), z2, conj(z2)` and the vanishing orders built on them.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg};

use num_complex::Complex64;

use super::expr::ComponentExpr;
use crate::error::{Error, Result};
use crate::jet::Point;

/// Exponents of `z1^a conj(z1)^b z2^c conj(z2)^d`.
pub type Exponents = [u32; 4];

/// Relative threshold under which a Taylor coefficient counts as zero.
pub const DEFAULT_COEFF_TOL: f64 = 1e-10;

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PolyCanonical {
    terms: BTreeMap<Exponents, Complex64>,
}

impl PolyCanonical {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial([0; 4], c)
    }

    pub fn monomial(exps: Exponents, c: Complex64) -> Self {
        let mut p = Self::zero();
        p.add_term(exps, c);
        p
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, Complex64> {
        &self.terms
    }

    pub fn coeff(&self, exps: Exponents) -> Complex64 {
        self.terms.get(&exps).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, exps: Exponents, c: Complex64) {
        if c == Complex64::default() {
            return;
        }
        let entry = self.terms.entry(exps).or_default();
        *entry += c;
        if *entry == Complex64::default() {
            self.terms.remove(&exps);
        }
    }

    /// Conjugation swaps `z` with `conj(z)` in each variable pair.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term([e[1], e[0], e[3], e[2]], c.conj());
        }
        out
    }

    pub fn powu(&self, n: u32) -> Self {
        let mut result = Self::constant(Complex64::new(1.0, 0.0));
        for _ in 0..n {
            result = &result * self;
        }
        result
    }

    pub fn eval(&self, point: Point) -> Complex64 {
        let vars = [point.0, point.0.conj(), point.1, point.1.conj()];
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut m = *c;
                for k in 0..4 {
                    m *= vars[k].powu(e[k]);
                }
                m
            })
            .sum()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Re-expands the polynomial in the displacements
    /// `(z1 - p1, conj(z1 - p1), z2 - p2, conj(z2 - p2))`.
    pub fn taylor_shift(&self, point: Point) -> Self {
        let centre = [point.0, point.0.conj(), point.1, point.1.conj()];
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            // (p + u)^n = sum_k C(n, k) p^(n - k) u^k, for each of the four variables
            let expansions: Vec<Vec<(u32, Complex64)>> = (0..4)
                .map(|v| {
                    let n = e[v];
                    (0..=n)
                        .map(|k| (k, binomial(n, k) * centre[v].powu(n - k)))
                        .collect()
                })
                .collect();
            for (k0, c0) in &expansions[0] {
                for (k1, c1) in &expansions[1] {
                    for (k2, c2) in &expansions[2] {
                        for (k3, c3) in &expansions[3] {
                            out.add_term([*k0, *k1, *k2, *k3], c * c0 * c1 * c2 * c3);
                        }
                    }
                }
            }
        }
        out
    }

    /// Lowest total degree carrying a coefficient above `rel_tol` times the
    /// largest coefficient; `None` for the zero polynomial.
    pub fn lowest_degree(&self, rel_tol: f64) -> Option<u32> {
        let scale = self.max_abs_coeff();
        if scale == 0.0 {
            return None;
        }
        self.terms
            .iter()
            .filter(|(_, c)| c.norm() > rel_tol * scale)
            .map(|(e, _)| e.iter().sum())
            .min()
    }

    /// Order of vanishing at `point`; `None` when identically zero.
    pub fn vanishing_order(&self, point: Point, rel_tol: f64) -> Option<u32> {
        self.taylor_shift(point).lowest_degree(rel_tol)
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

impl Add for &PolyCanonical {
    type Output = PolyCanonical;
    fn add(self, rhs: Self) -> PolyCanonical {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, *c);
        }
        out
    }
}

impl Mul for &PolyCanonical {
    type Output = PolyCanonical;
    fn mul(self, rhs: Self) -> PolyCanonical {
        let mut out = PolyCanonical::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &PolyCanonical {
    type Output = PolyCanonical;
    fn neg(self) -> PolyCanonical {
        let mut out = PolyCanonical::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

/// Converts a recip-free expression to canonical form.
pub fn to_poly(expr: &ComponentExpr) -> Result<PolyCanonical> {
    use ComponentExpr::*;
    Ok(match expr {
        Z1 => PolyCanonical::monomial([1, 0, 0, 0], Complex64::new(1.0, 0.0)),
        Z2 => PolyCanonical::monomial([0, 0, 1, 0], Complex64::new(1.0, 0.0)),
        Lit(c) => PolyCanonical::constant(*c),
        Conj(e) => to_poly(e)?.conj(),
        Neg(e) => -&to_poly(e)?,
        Recip(_) => return Err(Error::NotPolynomial),
        Add(a, b) => &to_poly(a)? + &to_poly(b)?,
        Mul(a, b) => &to_poly(a)? * &to_poly(b)?,
        Pow(e, n) => to_poly(e)?.powu(*n),
    })
}

/// Numerator / denominator pair.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalPoly {
    pub num: PolyCanonical,
    pub den: PolyCanonical,
}

impl RationalPoly {
    fn from_poly(p: PolyCanonical) -> Self {
        Self {
            num: p,
            den: PolyCanonical::constant(Complex64::new(1.0, 0.0)),
        }
    }
}

/// Converts any expression of the grammar to a numerator/denominator pair.
pub fn to_rational(expr: &ComponentExpr) -> Result<RationalPoly> {
    use ComponentExpr::*;
    Ok(match expr {
        Z1 | Z2 | Lit(_) => RationalPoly::from_poly(to_poly(expr)?),
        Conj(e) => {
            let r = to_rational(e)?;
            RationalPoly {
                num: r.num.conj(),
                den: r.den.conj(),
            }
        }
        Neg(e) => {
            let r = to_rational(e)?;
            RationalPoly {
                num: -&r.num,
                den: r.den,
            }
        }
        Recip(e) => {
            let r = to_rational(e)?;
            if r.num.is_zero() {
                return Err(Error::NotRational(
                    "reciprocal of the zero polynomial".into(),
                ));
            }
            RationalPoly {
                num: r.den,
                den: r.num,
            }
        }
        Add(a, b) => {
            let (x, y) = (to_rational(a)?, to_rational(b)?);
            if x.den == y.den {
                RationalPoly {
                    num: &x.num + &y.num,
                    den: x.den,
                }
            } else {
                RationalPoly {
                    num: &(&x.num * &y.den) + &(&y.num * &x.den),
                    den: &x.den * &y.den,
                }
            }
        }
        Mul(a, b) => {
            let (x, y) = (to_rational(a)?, to_rational(b)?);
            RationalPoly {
                num: &x.num * &y.num,
                den: &x.den * &y.den,
            }
        }
        Pow(e, n) => {
            let r = to_rational(e)?;
            RationalPoly {
                num: r.num.powu(*n),
                den: r.den.powu(*n),
            }
        }
    })
}

/// Zero order per component and overall; `None` means infinite
/// (identically zero component).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZeroOrder {
    pub per_component: [Option<u32>; 2],
    pub order: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PoleOrder {
    pub per_component: [u32; 2],
    pub order: u32,
}

/// Zero order of `(f1, f2)` at `point`: the minimum over components of the
/// lowest nonvanishing Taylor degree.
pub fn zero_order(
    f1: &ComponentExpr,
    f2: &ComponentExpr,
    point: Point,
    zero_tol: f64,
) -> Result<ZeroOrder> {
    let polys = [to_poly(f1)?, to_poly(f2)?];
    let norm_sq: f64 = polys.iter().map(|p| p.eval(point).norm_sqr()).sum();
    if norm_sq > zero_tol * zero_tol {
        return Err(Error::NotAZero { norm_sq });
    }
    let per_component = [
        polys[0].vanishing_order(point, DEFAULT_COEFF_TOL),
        polys[1].vanishing_order(point, DEFAULT_COEFF_TOL),
    ];
    let order = per_component.iter().flatten().copied().min();
    Ok(ZeroOrder {
        per_component,
        order,
    })
}

/// Pole order: per component, denominator order minus numerator order,
/// clamped at zero; overall the maximum.
pub fn pole_order(f1: &ComponentExpr, f2: &ComponentExpr, point: Point) -> Result<PoleOrder> {
    let component = |e: &ComponentExpr| -> Result<u32> {
        let r = to_rational(e)?;
        let Some(num_order) = r.num.vanishing_order(point, DEFAULT_COEFF_TOL) else {
            return Ok(0);
        };
        let den_order = r
            .den
            .vanishing_order(point, DEFAULT_COEFF_TOL)
            .ok_or_else(|| Error::NotRational("denominator vanishes identically".into()))?;
        Ok(den_order.saturating_sub(num_order))
    };
    let per_component = [component(f1)?, component(f2)?];
    Ok(PoleOrder {
        per_component,
        order: per_component[0].max(per_component[1]),
    })
}
