//! Small fixed-size linear algebra: everything here is closed-form, no
//! decompositions.

use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Real;

/// Point or vector in the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec2<S> {
    pub x: S,
    pub y: S,
}

impl<S: Real> Vec2<S> {
    #[inline]
    pub fn new(x: S, y: S) -> Self {
        Vec2 { x, y }
    }

    #[inline]
    pub fn zero() -> Self {
        Vec2 { x: S::zero(), y: S::zero() }
    }

    #[inline]
    pub fn dot(self, other: Self) -> S {
        self.x * other.x + self.y * other.y
    }

    /// Scalar cross product `self.x * other.y - self.y * other.x`.
    #[inline]
    pub fn cross(self, other: Self) -> S {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm_sq(self) -> S {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> S {
        self.norm_sq().sqrt()
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl<S: Real> Add for Vec2<S> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<S: Real> Sub for Vec2<S> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<S: Real> Neg for Vec2<S> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Vec2::new(-self.x, -self.y)
    }
}

impl<S: Real> Mul<S> for Vec2<S> {
    type Output = Self;
    #[inline]
    fn mul(self, s: S) -> Self {
        Vec2::new(self.x * s, self.y * s)
    }
}

/// `J v` with `J = [[0, 1], [-1, 0]]`, i.e. a clockwise quarter turn.
#[inline]
pub fn j<S: Real>(v: Vec2<S>) -> Vec2<S> {
    Vec2::new(v.y, -v.x)
}

/// `R_theta v`, counterclockwise rotation by `theta`.
#[inline]
pub fn rot<S: Real>(theta: S, v: Vec2<S>) -> Vec2<S> {
    let (s, c) = theta.sin_cos();
    Vec2::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

/// 2x2 matrix in row-major order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2<S> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
}

impl<S: Real> Mat2<S> {
    #[inline]
    pub fn new(a: S, b: S, c: S, d: S) -> Self {
        Mat2 { a, b, c, d }
    }

    #[inline]
    pub fn identity() -> Self {
        Mat2::new(S::one(), S::zero(), S::zero(), S::one())
    }

    /// Rotation matrix `R_theta`.
    #[inline]
    pub fn rotation(theta: S) -> Self {
        let (s, c) = theta.sin_cos();
        Mat2::new(c, -s, s, c)
    }

    #[inline]
    pub fn transpose(self) -> Self {
        Mat2::new(self.a, self.c, self.b, self.d)
    }

    #[inline]
    pub fn mul_vec(self, v: Vec2<S>) -> Vec2<S> {
        Vec2::new(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)
    }

    #[inline]
    pub fn mul_mat(self, o: Self) -> Self {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn max_abs_diff(self, o: Self) -> S {
        let mut m = (self.a - o.a).abs();
        for d in [(self.b - o.b).abs(), (self.c - o.c).abs(), (self.d - o.d).abs()] {
            m = m.max(d);
        }
        m
    }
}

/// 3x3 matrix in row-major order; used for homogeneous SE(2) forms and the
/// trivialized-differential matrices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat3<S> {
    pub m: [[S; 3]; 3],
}

impl<S: Real> Mat3<S> {
    #[inline]
    pub fn new(m: [[S; 3]; 3]) -> Self {
        Mat3 { m }
    }

    pub fn identity() -> Self {
        let mut m = [[S::zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = S::one();
        }
        Mat3 { m }
    }

    pub fn transpose(self) -> Self {
        let mut t = [[S::zero(); 3]; 3];
        for i in 0..3 {
            for (jj, row) in self.m.iter().enumerate() {
                t[i][jj] = row[i];
            }
        }
        Mat3 { m: t }
    }

    pub fn mul_vec(self, v: [S; 3]) -> [S; 3] {
        let mut out = [S::zero(); 3];
        for (i, row) in self.m.iter().enumerate() {
            out[i] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
        }
        out
    }

    pub fn mul_mat(self, o: Self) -> Self {
        let mut out = [[S::zero(); 3]; 3];
        for i in 0..3 {
            for k in 0..3 {
                for jj in 0..3 {
                    out[i][jj] = out[i][jj] + self.m[i][k] * o.m[k][jj];
                }
            }
        }
        Mat3 { m: out }
    }

    pub fn max_abs_diff(self, o: Self) -> S {
        let mut m = S::zero();
        for i in 0..3 {
            for jj in 0..3 {
                m = m.max((self.m[i][jj] - o.m[i][jj]).abs());
            }
        }
        m
    }
}
