//! Exact 2x2 matrices and 2-vectors over the rationals.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{rint, sgn, Rat};

/// Column 2-vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vec2 {
    pub x: Rat,
    pub y: Rat,
}

impl Vec2 {
    pub fn new(x: Rat, y: Rat) -> Self {
        Vec2 { x, y }
    }

    pub fn zero() -> Self {
        Vec2::new(Rat::zero(), Rat::zero())
    }

    pub fn add(&self, o: &Vec2) -> Vec2 {
        Vec2::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Vec2) -> Vec2 {
        Vec2::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn neg(&self) -> Vec2 {
        Vec2::new(-self.x.clone(), -self.y.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

/// Row-major 2x2 matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

impl Mat2 {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2::new(Rat::one(), Rat::zero(), Rat::zero(), Rat::one())
    }

    pub fn zero() -> Self {
        Mat2::new(Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero())
    }

    /// The standard symplectic rotation `[[0, 1], [-1, 0]]`.
    pub fn j() -> Self {
        Mat2::new(Rat::zero(), Rat::one(), -Rat::one(), Rat::zero())
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(rint(a), rint(b), rint(c), rint(d))
    }

    pub fn det(&self) -> Rat {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> Rat {
        &self.a + &self.d
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }

    pub fn mul_vec(&self, v: &Vec2) -> Vec2 {
        Vec2::new(&self.a * &v.x + &self.b * &v.y, &self.c * &v.x + &self.d * &v.y)
    }

    pub fn add(&self, o: &Mat2) -> Mat2 {
        Mat2::new(&self.a + &o.a, &self.b + &o.b, &self.c + &o.c, &self.d + &o.d)
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        Mat2::new(&self.a - &o.a, &self.b - &o.b, &self.c - &o.c, &self.d - &o.d)
    }

    pub fn scale(&self, s: &Rat) -> Mat2 {
        Mat2::new(s * &self.a, s * &self.b, s * &self.c, s * &self.d)
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a.clone(), self.c.clone(), self.b.clone(), self.d.clone())
    }

    pub fn inverse(&self) -> Result<Mat2> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::SingularSystem("matrix not invertible".into()));
        }
        Ok(Mat2::new(
            &self.d / &det,
            -&self.b / &det,
            -&self.c / &det,
            &self.a / &det,
        ))
    }

    pub fn is_symmetric(&self) -> bool {
        self.b == self.c
    }

    pub fn is_symplectic(&self) -> bool {
        self.det().is_one()
    }

    /// Solves `M z = rhs` exactly.
    pub fn solve(&self, rhs: &Vec2) -> Result<Vec2> {
        Ok(self.inverse()?.mul_vec(rhs))
    }

    /// Signature `n_+ - n_-` of a symmetric matrix, computed on its
    /// nonsingular part. The second return value flags degeneracy.
    pub fn signature(&self) -> Result<(i64, bool)> {
        if !self.is_symmetric() {
            return Err(Error::InvariantViolation("signature of non-symmetric matrix".into()));
        }
        let det = self.det();
        let tr = self.trace();
        let d = sgn(&det);
        if d > 0 {
            // Two eigenvalues of equal sign.
            Ok((2 * sgn(&tr), false))
        } else if d < 0 {
            Ok((0, false))
        } else if self.a.is_zero() && self.b.is_zero() && self.d.is_zero() {
            Ok((0, true))
        } else {
            // Rank one: the nonzero eigenvalue equals the trace.
            Ok((sgn(&tr), true))
        }
    }
}

/// Evaluates the quadratic form `v^T S v` for symmetric `S`.
pub fn quad_form(s: &Mat2, v: &Vec2) -> Rat {
    let sv = s.mul_vec(v);
    &v.x * &sv.x + &v.y * &sv.y
}
