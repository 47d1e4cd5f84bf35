//! The Heisenberg Lie algebra and the group `Heis` of affine maps
//!
//! ```text
//!   ( sx  a  c )
//!   (  0 sy  b )      sx, sy ∈ {±1}
//!   (  0  0  1 )
//! ```
//!
//! acting on the affine patch `[x : y : 1]` of the projective plane. The
//! identity component `Heis₀` (both signs positive) is the real Heisenberg
//! group; `Heis₊` (equal signs) is the orientation-preserving subgroup and
//! the translations `Tr` are the elements of `Heis₀` with no shear.
//!
//! Algebra elements are written `(u, v | w)` for the strictly upper
//! triangular matrix with rows `(0, u, w), (0, 0, v), (0, 0, 0)`. The
//! algebra is 2-step nilpotent, so `exp` and `log` are polynomial and the
//! Baker–Campbell–Hausdorff series stops after the first bracket.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::projective::ProjMat;

/// Element `(u, v | w)` of the Heisenberg Lie algebra.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HeisAlgVec {
    /// Shear rate, the top-middle entry.
    pub u: f64,
    /// Vertical rate, the middle-right entry.
    pub v: f64,
    /// Horizontal rate, the top-right (central) entry.
    pub w: f64,
}

impl HeisAlgVec {
    pub const ZERO: HeisAlgVec = HeisAlgVec { u: 0.0, v: 0.0, w: 0.0 };

    pub const fn new(u: f64, v: f64, w: f64) -> Self {
        HeisAlgVec { u, v, w }
    }

    /// Central element `(0, 0 | w)`.
    pub const fn central(w: f64) -> Self {
        HeisAlgVec { u: 0.0, v: 0.0, w }
    }

    pub fn scale(self, s: f64) -> Self {
        HeisAlgVec::new(s * self.u, s * self.v, s * self.w)
    }

    /// Lie bracket. Always central: `[X, Y] = (0, 0 | X.u·Y.v − X.v·Y.u)`.
    pub fn bracket(&self, other: &HeisAlgVec) -> HeisAlgVec {
        HeisAlgVec::central(self.u * other.v - self.v * other.u)
    }

    /// Exponential into `Heis₀`. The series is `I + X + X²/2`.
    pub fn exp(&self) -> HeisElem {
        HeisElem {
            sx: Sign::Plus,
            sy: Sign::Plus,
            a: self.u,
            b: self.v,
            c: self.w + 0.5 * self.u * self.v,
        }
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::new(0.0, self.u, self.w, 0.0, 0.0, self.v, 0.0, 0.0, 0.0)
    }

    /// Reads the shorthand off a strictly upper triangular matrix; the
    /// remaining entries are ignored.
    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        HeisAlgVec::new(m[(0, 1)], m[(1, 2)], m[(0, 2)])
    }

    pub fn max_abs_diff(&self, other: &HeisAlgVec) -> f64 {
        (self.u - other.u)
            .abs()
            .max((self.v - other.v).abs())
            .max((self.w - other.w).abs())
    }

    pub fn norm(&self) -> f64 {
        (self.u * self.u + self.v * self.v + self.w * self.w).sqrt()
    }
}

impl Add for HeisAlgVec {
    type Output = HeisAlgVec;
    fn add(self, o: HeisAlgVec) -> HeisAlgVec {
        HeisAlgVec::new(self.u + o.u, self.v + o.v, self.w + o.w)
    }
}

impl Sub for HeisAlgVec {
    type Output = HeisAlgVec;
    fn sub(self, o: HeisAlgVec) -> HeisAlgVec {
        HeisAlgVec::new(self.u - o.u, self.v - o.v, self.w - o.w)
    }
}

impl Neg for HeisAlgVec {
    type Output = HeisAlgVec;
    fn neg(self) -> HeisAlgVec {
        HeisAlgVec::new(-self.u, -self.v, -self.w)
    }
}

impl fmt::Display for HeisAlgVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {} | {})", self.u, self.v, self.w)
    }
}

/// A diagonal sign of a `Heis` element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    fn from_entry(x: f64, tol: f64) -> Option<Sign> {
        if (x - 1.0).abs() <= tol {
            Some(Sign::Plus)
        } else if (x + 1.0).abs() <= tol {
            Some(Sign::Minus)
        } else {
            None
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, o: Sign) -> Sign {
        if self == o {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Group element of `Heis`, stored by its entries rather than as a matrix so
/// that membership is true by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeisElem {
    /// Sign of the `x` diagonal entry.
    pub sx: Sign,
    /// Sign of the `y` diagonal entry.
    pub sy: Sign,
    /// Shear, top-middle entry.
    pub a: f64,
    /// Vertical translation, middle-right entry.
    pub b: f64,
    /// Horizontal translation, top-right entry.
    pub c: f64,
}

impl HeisElem {
    pub const IDENTITY: HeisElem = HeisElem {
        sx: Sign::Plus,
        sy: Sign::Plus,
        a: 0.0,
        b: 0.0,
        c: 0.0,
    };

    /// Element of `Heis₀` with the given entries.
    pub const fn unipotent(a: f64, b: f64, c: f64) -> Self {
        HeisElem { sx: Sign::Plus, sy: Sign::Plus, a, b, c }
    }

    /// Translation by the affine vector `(dx, dy)`.
    pub const fn translation(dx: f64, dy: f64) -> Self {
        HeisElem::unipotent(0.0, dy, dx)
    }

    /// `diag(sx, sy, 1)`.
    pub const fn diagonal(sx: Sign, sy: Sign) -> Self {
        HeisElem { sx, sy, a: 0.0, b: 0.0, c: 0.0 }
    }

    /// The π-rotation `diag(−1, −1, 1)` generating `Heis₊ / Heis₀`.
    pub const fn half_turn() -> Self {
        HeisElem::diagonal(Sign::Minus, Sign::Minus)
    }

    pub fn is_identity_component(&self) -> bool {
        self.sx == Sign::Plus && self.sy == Sign::Plus
    }

    pub fn is_orientation_preserving(&self) -> bool {
        self.sx == self.sy
    }

    pub fn is_translation(&self, tol: f64) -> bool {
        self.is_identity_component() && self.a.abs() <= tol
    }

    /// Affine displacement `(c, b)` of a translation.
    pub fn translation_vector(&self) -> [f64; 2] {
        [self.c, self.b]
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::new(
            self.sx.value(),
            self.a,
            self.c,
            0.0,
            self.sy.value(),
            self.b,
            0.0,
            0.0,
            1.0,
        )
    }

    pub fn to_projmat(&self) -> ProjMat {
        ProjMat::new(self.matrix())
    }

    /// Recognizes a matrix of `Heis` up to `tol` in the structural entries.
    pub fn try_from_matrix(m: &Matrix3<f64>, tol: f64) -> Option<Self> {
        let zeros = [m[(1, 0)], m[(2, 0)], m[(2, 1)]];
        if zeros.iter().any(|z| z.abs() > tol) || (m[(2, 2)] - 1.0).abs() > tol {
            return None;
        }
        Some(HeisElem {
            sx: Sign::from_entry(m[(0, 0)], tol)?,
            sy: Sign::from_entry(m[(1, 1)], tol)?,
            a: m[(0, 1)],
            b: m[(1, 2)],
            c: m[(0, 2)],
        })
    }

    pub fn inverse(&self) -> HeisElem {
        let (sx, sy) = (self.sx.value(), self.sy.value());
        let b = -sy * self.b;
        HeisElem {
            sx: self.sx,
            sy: self.sy,
            a: -sx * sy * self.a,
            b,
            c: -sx * (self.c + self.a * b),
        }
    }

    /// Logarithm on `Heis₀`: `(a, b | c − ab/2)`.
    pub fn log(&self) -> Result<HeisAlgVec> {
        if !self.is_identity_component() {
            return Err(Error::Orientation {
                sx: self.sx.as_i8(),
                sy: self.sy.as_i8(),
            });
        }
        Ok(HeisAlgVec::new(self.a, self.b, self.c - 0.5 * self.a * self.b))
    }

    /// Adjoint action `g X g⁻¹`.
    pub fn adjoint(&self, x: &HeisAlgVec) -> HeisAlgVec {
        let (sx, sy) = (self.sx.value(), self.sy.value());
        HeisAlgVec::new(
            sx * sy * x.u,
            sy * x.v,
            sx * x.w + self.a * x.v - sx * sy * self.b * x.u,
        )
    }

    /// Conjugate `self · h · self⁻¹`.
    pub fn conjugate(&self, h: &HeisElem) -> HeisElem {
        *self * *h * self.inverse()
    }

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        [
            self.sx.value() * p[0] + self.a * p[1] + self.c,
            self.sy.value() * p[1] + self.b,
        ]
    }

    pub fn max_abs_diff(&self, other: &HeisElem) -> f64 {
        (self.matrix() - other.matrix()).amax()
    }
}

impl Mul for HeisElem {
    type Output = HeisElem;
    fn mul(self, o: HeisElem) -> HeisElem {
        let sx = self.sx.value();
        let sy = self.sy.value();
        HeisElem {
            sx: self.sx * o.sx,
            sy: self.sy * o.sy,
            a: sx * o.a + self.a * o.sy.value(),
            b: sy * o.b + self.b,
            c: sx * o.c + self.a * o.b + self.c,
        }
    }
}

impl fmt::Display for HeisElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}, {}], [0, {}, {}], [0, 0, 1]]",
            self.sx.as_i8(),
            self.a,
            self.c,
            self.sy.as_i8(),
            self.b
        )
    }
}
