//! First-order Wirtinger jets.
//!
//! A jet carries a complex value together with its four partials with respect
//! to `z1, conj(z1), z2, conj(z2)`, which are treated as independent
//! directions. Conjugation swaps each holomorphic partial with the conjugate of
//! its antiholomorphic partner.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A point of C^2 as `(z1, z2)`.
pub type Point = (Complex64, Complex64);

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct WirtingerJet {
    pub value: Complex64,
    pub d_z1: Complex64,
    pub d_z1bar: Complex64,
    pub d_z2: Complex64,
    pub d_z2bar: Complex64,
}

/// Partials in the fixed order `[d_z1, d_z1bar, d_z2, d_z2bar]`.
pub type Partials = [Complex64; 4];

impl WirtingerJet {
    pub fn constant(value: Complex64) -> Self {
        Self {
            value,
            ..Self::default()
        }
    }

    pub fn from_parts(value: Complex64, p: Partials) -> Self {
        Self {
            value,
            d_z1: p[0],
            d_z1bar: p[1],
            d_z2: p[2],
            d_z2bar: p[3],
        }
    }

    pub fn partials(&self) -> Partials {
        [self.d_z1, self.d_z1bar, self.d_z2, self.d_z2bar]
    }

    fn map_partials(&self, value: Complex64, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            value,
            d_z1: f(self.d_z1),
            d_z1bar: f(self.d_z1bar),
            d_z2: f(self.d_z2),
            d_z2bar: f(self.d_z2bar),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            value: self.value.conj(),
            d_z1: self.d_z1bar.conj(),
            d_z1bar: self.d_z1.conj(),
            d_z2: self.d_z2bar.conj(),
            d_z2bar: self.d_z2.conj(),
        }
    }

    /// `1 / f`, failing when `|f| <= eps_sing`.
    pub fn recip(&self, eps_sing: f64) -> Result<Self> {
        let n = self.value.norm();
        if n.is_nan() || n <= eps_sing {
            return Err(Error::SingularValue {
                norm_sq: self.value.norm_sqr(),
            });
        }
        let inv = ONE / self.value;
        let k = -(inv * inv);
        Ok(self.map_partials(inv, |d| k * d))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map_partials(self.value * c, |d| d * c)
    }

    /// Integer power by repeated squaring; `n = 0` gives the constant 1.
    pub fn powi(&self, n: u32) -> Self {
        let mut result = Self::constant(ONE);
        let mut base = *self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        result
    }
}

impl Add for WirtingerJet {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            value: self.value + rhs.value,
            d_z1: self.d_z1 + rhs.d_z1,
            d_z1bar: self.d_z1bar + rhs.d_z1bar,
            d_z2: self.d_z2 + rhs.d_z2,
            d_z2bar: self.d_z2bar + rhs.d_z2bar,
        }
    }
}

impl Sub for WirtingerJet {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for WirtingerJet {
    type Output = Self;
    fn neg(self) -> Self {
        self.map_partials(-self.value, |d| -d)
    }
}

impl Mul for WirtingerJet {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (self.value, rhs.value);
        Self {
            value: a * b,
            d_z1: a * rhs.d_z1 + b * self.d_z1,
            d_z1bar: a * rhs.d_z1bar + b * self.d_z1bar,
            d_z2: a * rhs.d_z2 + b * self.d_z2,
            d_z2bar: a * rhs.d_z2bar + b * self.d_z2bar,
        }
    }
}

pub fn seed_z1(point: Point) -> WirtingerJet {
    WirtingerJet {
        value: point.0,
        d_z1: ONE,
        ..WirtingerJet::default()
    }
}

pub fn seed_z2(point: Point) -> WirtingerJet {
    WirtingerJet {
        value: point.1,
        d_z2: ONE,
        ..WirtingerJet::default()
    }
}

pub fn seed_const(value: Complex64) -> WirtingerJet {
    WirtingerJet::constant(value)
}

pub fn jet_add(a: WirtingerJet, b: WirtingerJet) -> WirtingerJet {
    a + b
}

pub fn jet_mul(a: WirtingerJet, b: WirtingerJet) -> WirtingerJet {
    a * b
}

pub fn jet_conj(a: WirtingerJet) -> WirtingerJet {
    a.conj()
}

pub fn jet_recip(a: WirtingerJet, eps_sing: f64) -> Result<WirtingerJet> {
    a.recip(eps_sing)
}

/// Central-difference estimates of the four Wirtinger partials of `f` at
/// `point`, from the eight real-coordinate stencil points.
///
/// `d/dz = (d/dx - i d/dy) / 2` and `d/dzbar = (d/dx + i d/dy) / 2`.
pub fn fd_partials<F>(f: F, point: Point, step: f64) -> Result<Partials>
where
    F: Fn(Point) -> Result<Complex64>,
{
    if step.is_nan() || step <= 0.0 {
        return Err(Error::Evaluation(format!(
            "finite-difference step must be positive, got {step}"
        )));
    }
    let (a, b) = point;
    let dx = Complex64::new(step, 0.0);
    let dy = Complex64::new(0.0, step);
    let central = |plus: Point, minus: Point| -> Result<Complex64> {
        Ok((f(plus)? - f(minus)?) / (2.0 * step))
    };
    let dx1 = central((a + dx, b), (a - dx, b))?;
    let dy1 = central((a + dy, b), (a - dy, b))?;
    let dx2 = central((a, b + dx), (a, b - dx))?;
    let dy2 = central((a, b + dy), (a, b - dy))?;
    let i = Complex64::i();
    Ok([
        0.5 * (dx1 - i * dy1),
        0.5 * (dx1 + i * dy1),
        0.5 * (dx2 - i * dy2),
        0.5 * (dx2 + i * dy2),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    const ZERO: Complex64 = Complex64::new(0.0, 0.0);

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn seeds() {
        let j = seed_z1((c(2.0, 1.0), c(0.0, 0.0)));
        assert_eq!(j.value, c(2.0, 1.0));
        assert_eq!(j.partials(), [ONE, ZERO, ZERO, ZERO]);
        let k = seed_const(c(5.0, 0.0));
        assert_eq!(k.partials(), [ZERO; 4]);
        assert_eq!(k.value, c(5.0, 0.0));
        let m = seed_z2((c(0.0, 0.0), c(0.0, 1.0)));
        assert_eq!(m.value, c(0.0, 1.0));
        assert_eq!(m.partials(), [ZERO, ZERO, ONE, ZERO]);
    }

    #[test]
    fn modulus_squared_jet() {
        let p = (c(2.0, 0.0), c(0.0, 0.0));
        let z = seed_z1(p);
        let j = z * z.conj();
        assert_eq!(j.value, c(4.0, 0.0));
        assert_eq!(j.partials(), [c(2.0, 0.0), c(2.0, 0.0), ZERO, ZERO]);
        let fd = fd_partials(|(a, _)| Ok(a * a.conj()), p, DEFAULT_FD_STEP).unwrap();
        for (x, y) in fd.iter().zip(j.partials()) {
            assert!(close(*x, y, 1e-8));
        }
    }

    #[test]
    fn conj_of_seed() {
        let j = seed_z1((c(0.3, -0.2), c(1.0, 1.0))).conj();
        assert_eq!(j.partials(), [ZERO, ONE, ZERO, ZERO]);
        assert_eq!(j.value, c(0.3, 0.2));
    }

    #[test]
    fn recip_of_seed() {
        let p = (c(2.0, 0.0), c(0.0, 0.0));
        let r = seed_z1(p).recip(1e-12).unwrap();
        assert_eq!(r.value, c(0.5, 0.0));
        assert_eq!(r.d_z1, c(-0.25, 0.0));
        let fd = fd_partials(|(a, _)| Ok(1.0 / a), p, DEFAULT_FD_STEP).unwrap();
        assert!(close(fd[0], c(-0.25, 0.0), 1e-9));
        assert!(matches!(
            seed_z1((ZERO, ZERO)).recip(1e-12),
            Err(Error::SingularValue { .. })
        ));
    }

    #[test]
    fn fd_simple_variables() {
        let fd = fd_partials(|(a, _)| Ok(a), (c(0.4, 0.1), c(-1.0, 2.0)), 1e-5).unwrap();
        assert!(close(fd[0], ONE, 1e-9));
        assert!(fd[1..].iter().all(|d| d.norm() <= 1e-9));

        let fd = fd_partials(|(_, b)| Ok(b.conj()), (ZERO, c(1.0, 1.0)), 1e-5).unwrap();
        assert!(close(fd[3], ONE, 1e-9));
        assert!(fd[..3].iter().all(|d| d.norm() <= 1e-9));
    }

    #[test]
    fn fd_mixed_monomial() {
        // d/dz1 of z1^2 conj(z2) is 2 z1 conj(z2) = -2i at (1, i).
        let p = (c(1.0, 0.0), c(0.0, 1.0));
        let fd = fd_partials(|(a, b)| Ok(a * a * b.conj()), p, 1e-5).unwrap();
        let z1 = seed_z1(p);
        let jet = z1 * z1 * seed_z2(p).conj();
        assert_eq!(jet.d_z1, c(0.0, -2.0));
        for (x, y) in fd.iter().zip(jet.partials()) {
            assert!(close(*x, y, 1e-6));
        }
    }

    #[test]
    fn fd_rejects_bad_step() {
        assert!(fd_partials(|(a, _)| Ok(a), (ZERO, ZERO), 0.0).is_err());
    }

    #[test]
    fn powi_matches_repeated_product() {
        let p = (c(0.7, -0.4), c(0.2, 0.9));
        let x = seed_z1(p) * seed_z2(p).conj() + seed_const(c(0.5, 0.5));
        let mut want = seed_const(ONE);
        for _ in 0..5 {
            want = want * x;
        }
        let got = x.powi(5);
        assert!(close(got.value, want.value, 1e-13));
        for (a, b) in got.partials().iter().zip(want.partials()) {
            assert!(close(*a, b, 1e-12));
        }
        assert_eq!(x.powi(0), seed_const(ONE));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn cplx() -> impl Strategy<Value = Complex64> {
            (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| Complex64::new(a, b))
        }

        fn jet() -> impl Strategy<Value = WirtingerJet> {
            (cplx(), cplx(), cplx(), cplx(), cplx())
                .prop_map(|(v, a, b, c, d)| WirtingerJet::from_parts(v, [a, b, c, d]))
        }

        proptest! {
            #[test]
            fn conj_involution(j in jet()) {
                prop_assert_eq!(j.conj().conj(), j);
            }

            #[test]
            fn product_rule_per_direction(f in jet(), g in jet()) {
                let p = f * g;
                for (k, d) in p.partials().iter().enumerate() {
                    let want = f.value * g.partials()[k] + g.value * f.partials()[k];
                    prop_assert!((d - want).norm() <= 1e-12);
                }
            }

            #[test]
            fn holomorphic_expressions_have_no_conjugate_partials(a in cplx(), b in cplx(), k in cplx()) {
                let p = (a, b);
                let e = seed_z1(p) * seed_z2(p) + seed_const(k) * seed_z1(p).powi(3);
                prop_assert_eq!(e.d_z1bar, ZERO);
                prop_assert_eq!(e.d_z2bar, ZERO);
            }
        }
    }
}
