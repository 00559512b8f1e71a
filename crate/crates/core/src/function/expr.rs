use std::fmt;

use num_complex::Complex64;

use crate::error::Result;
use crate::jet::{seed_z1, seed_z2, Point, WirtingerJet};

/// Expression tree for one complex-valued component.
///
/// Subtraction is represented as `Add(a, Neg(b))`; there is no quotient node,
/// division is spelled `a * recip(b)`.
#[derive(Clone, Debug, PartialEq)]
pub enum ComponentExpr {
    Z1,
    Z2,
    Lit(Complex64),
    Conj(Box<ComponentExpr>),
    Neg(Box<ComponentExpr>),
    Recip(Box<ComponentExpr>),
    Add(Box<ComponentExpr>, Box<ComponentExpr>),
    Mul(Box<ComponentExpr>, Box<ComponentExpr>),
    Pow(Box<ComponentExpr>, u32),
}

use ComponentExpr::*;

impl ComponentExpr {
    pub fn lit(re: f64, im: f64) -> Self {
        Lit(Complex64::new(re, im))
    }

    pub fn zero() -> Self {
        Self::lit(0.0, 0.0)
    }

    pub fn conj(self) -> Self {
        Conj(Box::new(self))
    }

    pub fn recip(self) -> Self {
        Recip(Box::new(self))
    }

    pub fn pow(self, n: u32) -> Self {
        Pow(Box::new(self), n)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, rhs: Self) -> Self {
        Add(Box::new(self), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, rhs: Self) -> Self {
        Add(Box::new(self), Box::new(Neg(Box::new(rhs))))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: Self) -> Self {
        Mul(Box::new(self), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Self {
        Neg(Box::new(self))
    }

    pub fn contains_recip(&self) -> bool {
        match self {
            Z1 | Z2 | Lit(_) => false,
            Recip(_) => true,
            Conj(e) | Neg(e) | Pow(e, _) => e.contains_recip(),
            Add(a, b) | Mul(a, b) => a.contains_recip() || b.contains_recip(),
        }
    }

    pub fn contains_conj(&self) -> bool {
        match self {
            Z1 | Z2 | Lit(_) => false,
            Conj(_) => true,
            Recip(e) | Neg(e) | Pow(e, _) => e.contains_conj(),
            Add(a, b) | Mul(a, b) => a.contains_conj() || b.contains_conj(),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Z1 | Z2 | Lit(_) => 1,
            Conj(e) | Neg(e) | Recip(e) | Pow(e, _) => 1 + e.size(),
            Add(a, b) | Mul(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Value and Wirtinger partials at `point`.
    pub fn jet(&self, point: Point, eps_sing: f64) -> Result<WirtingerJet> {
        Ok(match self {
            Z1 => seed_z1(point),
            Z2 => seed_z2(point),
            Lit(c) => WirtingerJet::constant(*c),
            Conj(e) => e.jet(point, eps_sing)?.conj(),
            Neg(e) => -e.jet(point, eps_sing)?,
            Recip(e) => e.jet(point, eps_sing)?.recip(eps_sing)?,
            Add(a, b) => a.jet(point, eps_sing)? + b.jet(point, eps_sing)?,
            Mul(a, b) => a.jet(point, eps_sing)? * b.jet(point, eps_sing)?,
            Pow(e, n) => e.jet(point, eps_sing)?.powi(*n),
        })
    }

    /// Plain value at `point`, without derivatives.
    pub fn eval(&self, point: Point, eps_sing: f64) -> Result<Complex64> {
        Ok(match self {
            Z1 => point.0,
            Z2 => point.1,
            Lit(c) => *c,
            Conj(e) => e.eval(point, eps_sing)?.conj(),
            Neg(e) => -e.eval(point, eps_sing)?,
            Recip(e) => {
                let v = e.eval(point, eps_sing)?;
                if v.norm().is_nan() || v.norm() <= eps_sing {
                    return Err(crate::Error::SingularValue {
                        norm_sq: v.norm_sqr(),
                    });
                }
                v.inv()
            }
            Add(a, b) => a.eval(point, eps_sing)? + b.eval(point, eps_sing)?,
            Mul(a, b) => a.eval(point, eps_sing)? * b.eval(point, eps_sing)?,
            Pow(e, n) => e.eval(point, eps_sing)?.powu(*n),
        })
    }

    fn fmt_expr(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Add(a, b) => {
                a.fmt_expr(f)?;
                match b.as_ref() {
                    Neg(inner) => {
                        f.write_str(" - ")?;
                        inner.fmt_term(f)
                    }
                    other => {
                        f.write_str(" + ")?;
                        other.fmt_term(f)
                    }
                }
            }
            other => other.fmt_term(f),
        }
    }

    fn fmt_term(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mul(a, b) => {
                a.fmt_term(f)?;
                f.write_str("*")?;
                b.fmt_factor(f)
            }
            other => other.fmt_factor(f),
        }
    }

    fn fmt_factor(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pow(base, n) => {
                base.fmt_atom(f)?;
                write!(f, "^{n}")
            }
            other => other.fmt_atom(f),
        }
    }

    fn fmt_atom(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Z1 => f.write_str("z1"),
            Z2 => f.write_str("z2"),
            Lit(c) => fmt_literal(*c, f),
            Conj(e) => {
                f.write_str("conj(")?;
                e.fmt_expr(f)?;
                f.write_str(")")
            }
            Recip(e) => {
                f.write_str("recip(")?;
                e.fmt_expr(f)?;
                f.write_str(")")
            }
            Neg(e) => {
                f.write_str("-")?;
                e.fmt_atom(f)
            }
            other => {
                f.write_str("(")?;
                other.fmt_expr(f)?;
                f.write_str(")")
            }
        }
    }
}

fn fmt_literal(c: Complex64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.im == 0.0 && c.re.is_sign_positive() {
        write!(f, "{:?}", c.re)
    } else {
        write!(f, "({:?}, {:?})", c.re, c.im)
    }
}

impl fmt::Display for ComponentExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_expr(f)
    }
}
