//! Quaternionic functions `f = f1 + f2 j` given by two component expressions.

pub mod expr;
pub mod parse;
pub mod poly;

use std::fmt;

use crate::error::Result;
use crate::jet::{Point, WirtingerJet};
use crate::quat::{Quaternion, DEFAULT_EPS_SING};

pub use expr::ComponentExpr;
pub use poly::{PoleOrder, PolyCanonical, RationalPoly, ZeroOrder};

#[derive(Clone, Debug, PartialEq)]
pub struct QFunction {
    pub f1: ComponentExpr,
    pub f2: ComponentExpr,
}

/// Value and component jets of a [`QFunction`] at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QEval {
    pub value: Quaternion,
    pub j1: WirtingerJet,
    pub j2: WirtingerJet,
}

impl QEval {
    pub fn from_jets(j1: WirtingerJet, j2: WirtingerJet) -> Self {
        Self {
            value: Quaternion::new(j1.value, j2.value),
            j1,
            j2,
        }
    }
}

impl QFunction {
    pub fn new(f1: ComponentExpr, f2: ComponentExpr) -> Self {
        Self { f1, f2 }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (f1, f2) = parse::parse_program(text)?;
        Ok(Self { f1, f2 })
    }

    pub fn identity() -> Self {
        Self::new(ComponentExpr::Z1, ComponentExpr::Z2)
    }

    pub fn constant(q: Quaternion) -> Self {
        Self::new(ComponentExpr::Lit(q.z1), ComponentExpr::Lit(q.z2))
    }

    pub fn eval(&self, point: Point) -> Result<QEval> {
        self.eval_with(point, DEFAULT_EPS_SING)
    }

    pub fn eval_with(&self, point: Point, eps_sing: f64) -> Result<QEval> {
        Ok(QEval::from_jets(
            self.f1.jet(point, eps_sing)?,
            self.f2.jet(point, eps_sing)?,
        ))
    }

    /// Value only, skipping derivative propagation.
    pub fn value(&self, point: Point, eps_sing: f64) -> Result<Quaternion> {
        Ok(Quaternion::new(
            self.f1.eval(point, eps_sing)?,
            self.f2.eval(point, eps_sing)?,
        ))
    }

    pub fn add(&self, g: &QFunction) -> QFunction {
        QFunction::new(
            self.f1.clone().add(g.f1.clone()),
            self.f2.clone().add(g.f2.clone()),
        )
    }

    /// Right product `(f1 g1 - f2 conj(g2)) + (f1 g2 + f2 conj(g1)) j`.
    pub fn mul(&self, g: &QFunction) -> QFunction {
        let (f1, f2, g1, g2) = (&self.f1, &self.f2, &g.f1, &g.f2);
        QFunction::new(
            f1.clone()
                .mul(g1.clone())
                .sub(f2.clone().mul(g2.clone().conj())),
            f1.clone()
                .mul(g2.clone())
                .add(f2.clone().mul(g1.clone().conj())),
        )
    }

    /// `conj(f1) - f2 j`.
    pub fn conj(&self) -> QFunction {
        QFunction::new(self.f1.clone().conj(), self.f2.clone().neg())
    }

    /// The real scalar field `f1 conj(f1) + f2 conj(f2)`.
    pub fn modulus_sq_expr(&self) -> ComponentExpr {
        self.f1
            .clone()
            .mul(self.f1.clone().conj())
            .add(self.f2.clone().mul(self.f2.clone().conj()))
    }

    /// `|f|^-1 (conj(f1) - f2 j)` with `|f| = f1 conj(f1) + f2 conj(f2)`.
    pub fn inverse(&self) -> QFunction {
        let r = self.modulus_sq_expr().recip();
        QFunction::new(
            self.f1.clone().conj().mul(r.clone()),
            self.f2.clone().neg().mul(r),
        )
    }

    pub fn zero_order(&self, point: Point, zero_tol: f64) -> Result<ZeroOrder> {
        poly::zero_order(&self.f1, &self.f2, point, zero_tol)
    }

    pub fn pole_order(&self, point: Point) -> Result<PoleOrder> {
        poly::pole_order(&self.f1, &self.f2, point)
    }

    /// True when neither component contains a `conj` node.
    pub fn is_syntactically_holomorphic(&self) -> bool {
        !self.f1.contains_conj() && !self.f2.contains_conj()
    }
}

impl fmt::Display for QFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f1 = {}; f2 = {}", self.f1, self.f2)
    }
}

pub fn parse(text: &str) -> Result<QFunction> {
    QFunction::parse(text)
}

pub fn eval_q(f: &QFunction, point: Point) -> Result<(Quaternion, WirtingerJet, WirtingerJet)> {
    let e = f.eval(point)?;
    Ok((e.value, e.j1, e.j2))
}

pub fn q_fun_add(f: &QFunction, g: &QFunction) -> QFunction {
    f.add(g)
}

pub fn q_fun_mul(f: &QFunction, g: &QFunction) -> QFunction {
    f.mul(g)
}

pub fn q_fun_conj(f: &QFunction) -> QFunction {
    f.conj()
}

pub fn q_fun_inverse(f: &QFunction) -> QFunction {
    f.inverse()
}

pub fn to_poly(expr: &ComponentExpr) -> Result<PolyCanonical> {
    poly::to_poly(expr)
}
