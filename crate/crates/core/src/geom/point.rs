use core::ops::{Add, Mul, Neg, Sub};

use crate::math;

/// A point (or free vector) in model space. Canonical unit is the meter.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3::new(0.0, 0.0, 0.0);
    pub const X: Point3 = Point3::new(1.0, 0.0, 0.0);
    pub const Y: Point3 = Point3::new(0.0, 1.0, 0.0);
    pub const Z: Point3 = Point3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(self, other: Point3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Point3) -> Point3 {
        Point3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        math::sqrt(self.dot(self))
    }

    pub fn distance(self, other: Point3) -> f64 {
        (self - other).norm()
    }

    /// Unit vector in the same direction, or `None` for a (near) zero vector.
    pub fn normalized(self) -> Option<Point3> {
        let n = self.norm();
        if n > f64::MIN_POSITIVE && n.is_finite() {
            Some(self * (1.0 / n))
        } else {
            None
        }
    }

    pub fn lerp(self, other: Point3, t: f64) -> Point3 {
        self + (other - self) * t
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, rhs: Point3) -> Point3 {
        Point3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, rhs: Point3) -> Point3 {
        Point3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, k: f64) -> Point3 {
        Point3::new(self.x * k, self.y * k, self.z * k)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

/// An oriented plane: origin plus an orthonormal in-plane frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub origin: Point3,
    pub x_axis: Point3,
    pub y_axis: Point3,
}

impl Plane {
    /// World XY plane through `origin`.
    pub const fn world_xy(origin: Point3) -> Self {
        Plane {
            origin,
            x_axis: Point3::X,
            y_axis: Point3::Y,
        }
    }

    pub fn normal(&self) -> Point3 {
        self.x_axis.cross(self.y_axis)
    }

    /// In-plane coordinates of `p` (its projection onto the frame).
    pub fn to_local(&self, p: Point3) -> (f64, f64) {
        let d = p - self.origin;
        (d.dot(self.x_axis), d.dot(self.y_axis))
    }

    pub fn to_world(&self, u: f64, v: f64) -> Point3 {
        self.origin + self.x_axis * u + self.y_axis * v
    }

    /// Signed distance of `p` from the plane along its normal.
    pub fn offset_of(&self, p: Point3) -> f64 {
        (p - self.origin).dot(self.normal())
    }

    /// Whether the frame is orthonormal within `tol`.
    pub fn is_orthonormal(&self, tol: f64) -> bool {
        (self.x_axis.norm() - 1.0).abs() <= tol
            && (self.y_axis.norm() - 1.0).abs() <= tol
            && self.x_axis.dot(self.y_axis).abs() <= tol
    }
}
