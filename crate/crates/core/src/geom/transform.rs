use super::Point3;
use crate::math;

/// Proper rigid motion `p -> R p + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidMotion {
    /// Row-major rotation matrix.
    pub rotation: [[f64; 3]; 3],
    pub translation: Point3,
}

impl RigidMotion {
    pub const IDENTITY: RigidMotion = RigidMotion {
        rotation: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        translation: Point3::ORIGIN,
    };

    pub fn translation(offset: Point3) -> Self {
        RigidMotion {
            translation: offset,
            ..Self::IDENTITY
        }
    }

    /// Rotation by `angle` about the unit `axis` (Rodrigues), then translation.
    pub fn from_axis_angle(axis: Point3, angle: f64, translation: Point3) -> Self {
        let a = axis.normalized().unwrap_or(Point3::Z);
        let (s, c) = (math::sin(angle), math::cos(angle));
        let k = 1.0 - c;
        let rotation = [
            [
                c + a.x * a.x * k,
                a.x * a.y * k - a.z * s,
                a.x * a.z * k + a.y * s,
            ],
            [
                a.y * a.x * k + a.z * s,
                c + a.y * a.y * k,
                a.y * a.z * k - a.x * s,
            ],
            [
                a.z * a.x * k - a.y * s,
                a.z * a.y * k + a.x * s,
                c + a.z * a.z * k,
            ],
        ];
        RigidMotion {
            rotation,
            translation,
        }
    }

    pub fn apply_vector(&self, v: Point3) -> Point3 {
        let r = &self.rotation;
        Point3::new(
            r[0][0] * v.x + r[0][1] * v.y + r[0][2] * v.z,
            r[1][0] * v.x + r[1][1] * v.y + r[1][2] * v.z,
            r[2][0] * v.x + r[2][1] * v.y + r[2][2] * v.z,
        )
    }

    pub fn apply_point(&self, p: Point3) -> Point3 {
        self.apply_vector(p) + self.translation
    }
}
