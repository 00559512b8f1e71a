//! Quaternions as pairs of complex numbers.
//!
//! A quaternion `q = z1 + z2 j` is stored as the pair `(z1, z2)`. The only
//! rule needed to multiply is `j c = conj(c) j` for complex `c`, together with
//! `j^2 = -1`. This gives the right product
//!
//! ```text
//! (a1 + a2 j)(b1 + b2 j) = (a1 b1 - a2 conj(b2)) + (a1 b2 + a2 conj(b1)) j
//! ```
//!
//! Only this (right) multiplication is exposed.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default guard on `norm_sq` below which a value is treated as singular.
pub const DEFAULT_EPS_SING: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Quaternion {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl Quaternion {
    pub const ZERO: Quaternion =
        Quaternion::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    pub const ONE: Quaternion = Quaternion::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    pub const I: Quaternion = Quaternion::new(Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0));
    pub const J: Quaternion = Quaternion::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    pub const K: Quaternion = Quaternion::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0));

    pub const fn new(z1: Complex64, z2: Complex64) -> Self {
        Self { z1, z2 }
    }

    /// Embeds a complex scalar as `(c, 0)`.
    pub const fn from_complex(c: Complex64) -> Self {
        Self::new(c, Complex64::new(0.0, 0.0))
    }

    pub const fn from_real(r: f64) -> Self {
        Self::from_complex(Complex64::new(r, 0.0))
    }

    /// Quaternion conjugate `conj(z1) - z2 j`.
    pub fn conj(self) -> Self {
        Self::new(self.z1.conj(), -self.z2)
    }

    /// `|z1|^2 + |z2|^2`, which equals `q * conj(q)`.
    pub fn norm_sq(self) -> f64 {
        self.z1.norm_sqr() + self.z2.norm_sqr()
    }

    /// Euclidean norm `sqrt(norm_sq)`.
    pub fn abs(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.z1 * s, self.z2 * s)
    }

    /// `norm_sq(q)^-1 * conj(q)`, guarded by [`DEFAULT_EPS_SING`].
    pub fn inverse(self) -> Result<Self> {
        self.inverse_with(DEFAULT_EPS_SING)
    }

    pub fn inverse_with(self, eps_sing: f64) -> Result<Self> {
        let n = self.norm_sq();
        if n.is_nan() || n <= eps_sing {
            return Err(Error::SingularValue { norm_sq: n });
        }
        Ok(self.conj().scale(1.0 / n))
    }

    /// Coordinates in the classical basis `1, i, j, k`.
    pub fn to_real4(self) -> [f64; 4] {
        [self.z1.re, self.z1.im, self.z2.re, self.z2.im]
    }

    pub fn from_real4(r: [f64; 4]) -> Self {
        Self::new(Complex64::new(r[0], r[1]), Complex64::new(r[2], r[3]))
    }

    pub fn is_finite(self) -> bool {
        self.z1.is_finite() && self.z2.is_finite()
    }
}

impl From<Complex64> for Quaternion {
    fn from(c: Complex64) -> Self {
        Self::from_complex(c)
    }
}

impl From<f64> for Quaternion {
    fn from(r: f64) -> Self {
        Self::from_real(r)
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.z1 + rhs.z1, self.z2 + rhs.z2)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.z1 - rhs.z1, self.z2 - rhs.z2)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.z1, -self.z2)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.z1 * rhs.z1 - self.z2 * rhs.z2.conj(),
            self.z1 * rhs.z2 + self.z2 * rhs.z1.conj(),
        )
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})j", self.z1, self.z2)
    }
}

pub fn q_mul(a: Quaternion, b: Quaternion) -> Quaternion {
    a * b
}

pub fn q_conj(q: Quaternion) -> Quaternion {
    q.conj()
}

pub fn norm_sq(q: Quaternion) -> f64 {
    q.norm_sq()
}

pub fn q_inverse(q: Quaternion, eps_sing: f64) -> Result<Quaternion> {
    q.inverse_with(eps_sing)
}
