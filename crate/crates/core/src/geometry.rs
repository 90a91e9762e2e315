//! Real 3-vectors and 3x3 rotation matrices.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    pub const fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn unit_x() -> Self {
        Self::new(T::one(), T::zero(), T::zero())
    }

    pub fn unit_y() -> Self {
        Self::new(T::zero(), T::one(), T::zero())
    }

    pub fn unit_z() -> Self {
        Self::new(T::zero(), T::zero(), T::one())
    }

    /// Direction with polar angle `theta` from +z and azimuth `phi` from +x.
    pub fn from_spherical(theta: T, phi: T) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::new(st * cp, st * sp, ct)
    }

    /// Unit vector in the xy plane at angle `phi` from +x.
    pub fn in_xy_plane(phi: T) -> Self {
        let (s, c) = phi.sin_cos();
        Self::new(c, s, T::zero())
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Self) -> Self {
        Self::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm_sqr(self) -> T {
        self.dot(self)
    }

    pub fn norm(self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Unit vector along `self`; fails on a zero or non-finite vector.
    pub fn normalized(self) -> Result<Self> {
        if !self.is_finite() {
            return Err(Error::NonFinite("vector"));
        }
        let n = self.norm();
        if n <= T::min_positive_value() {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(T::one() / n))
    }

    pub fn max_abs_diff(self, other: Self) -> T {
        let d = self - other;
        d.x.abs().max(d.y.abs()).max(d.z.abs())
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

/// 3x3 real matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3<T> {
    pub m: [[T; 3]; 3],
}

impl<T: Real> Mat3<T> {
    pub fn identity() -> Self {
        let (o, z) = (T::one(), T::zero());
        Self {
            m: [[o, z, z], [z, o, z], [z, z, o]],
        }
    }

    /// Active right-handed rotation by `angle` about the unit vector `axis`.
    pub fn rotation(axis: Vec3<T>, angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        let t = T::one() - c;
        let Vec3 { x, y, z } = axis;
        Self {
            m: [
                [c + t * x * x, t * x * y - s * z, t * x * z + s * y],
                [t * x * y + s * z, c + t * y * y, t * y * z - s * x],
                [t * x * z - s * y, t * y * z + s * x, c + t * z * z],
            ],
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                out.m[i][j] = self.m[j][i];
            }
        }
        out
    }

    pub fn trace(&self) -> T {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut d = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                d = d.max((self.m[i][j] - other.m[i][j]).abs());
            }
        }
        d
    }

    /// Angle in `[0, pi]` and unit axis of a proper rotation matrix.
    ///
    /// Returns `None` for the axis when the angle is below `tol`.
    pub fn axis_angle(&self, tol: T) -> (T, Option<Vec3<T>>) {
        let m = &self.m;
        let two = T::lit(2.0);
        let anti = Vec3::new(m[2][1] - m[1][2], m[0][2] - m[2][0], m[1][0] - m[0][1]);
        let sin = anti.norm() / two;
        let cos = (self.trace() - T::one()) / two;
        let angle = sin.atan2(cos);
        if angle <= tol {
            return (angle, None);
        }
        if cos > T::lit(-0.5) {
            return (angle, Some(anti.scale(T::one() / (two * sin))));
        }
        // Near pi the antisymmetric part vanishes; read the axis off the
        // symmetric part (R + R^T)/2 - cos I = (1 - cos) u u^T instead.
        let k = T::one() - cos;
        let diag = [
            ((m[0][0] - cos) / k).max(T::zero()).sqrt(),
            ((m[1][1] - cos) / k).max(T::zero()).sqrt(),
            ((m[2][2] - cos) / k).max(T::zero()).sqrt(),
        ];
        let pivot = (0..3)
            .max_by(|&a, &b| diag[a].partial_cmp(&diag[b]).unwrap())
            .unwrap();
        let mut u = [T::zero(); 3];
        u[pivot] = diag[pivot];
        for j in 0..3 {
            if j != pivot {
                u[j] = (m[pivot][j] + m[j][pivot]) / (two * k * diag[pivot]);
            }
        }
        let mut axis = Vec3::from_array(u);
        // Orient with the antisymmetric part when it carries a usable sign.
        if axis.dot(anti) < T::zero() {
            axis = -axis;
        }
        (angle, axis.normalized().ok())
    }
}

impl<T: Real> Mul<Vec3<T>> for Mat3<T> {
    type Output = Vec3<T>;
    fn mul(self, v: Vec3<T>) -> Vec3<T> {
        let m = &self.m;
        Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }
}

impl<T: Real> Mul for Mat3<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out = [[T::zero(); 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).fold(T::zero(), |acc, k| acc + self.m[i][k] * o.m[k][j]);
            }
        }
        Self { m: out }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cross_product_is_right_handed() {
        let z = Vec3::<f64>::unit_x().cross(Vec3::unit_y());
        assert_eq!(z, Vec3::unit_z());
        let minus_y = Vec3::<f64>::unit_x().cross(Vec3::unit_z());
        assert_eq!(minus_y, -Vec3::unit_y());
    }

    #[test]
    fn rotation_axis_angle_round_trip() {
        let axis = Vec3::new(1.0, -2.0, 0.5).normalized().unwrap();
        for &angle in &[1e-3, 0.4, 1.5, 2.9, 3.1, std::f64::consts::PI - 1e-9] {
            let r = Mat3::rotation(axis, angle);
            let (a, u) = r.axis_angle(1e-14);
            assert_abs_diff_eq!(a, angle, epsilon = 1e-9);
            assert!(u.unwrap().dot(axis) > 1.0 - 1e-9);
        }
    }

    #[test]
    fn identity_has_no_axis() {
        let (a, u) = Mat3::<f64>::identity().axis_angle(1e-14);
        assert_eq!(a, 0.0);
        assert!(u.is_none());
    }

    #[test]
    fn zero_vector_cannot_be_normalized() {
        assert_eq!(Vec3::<f64>::zero().normalized(), Err(Error::ZeroVector));
    }
}
