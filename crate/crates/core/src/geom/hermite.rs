use alloc::vec::Vec;

use super::{all_finite, GeomError, Point3};
use crate::math;

/// Piecewise cubic Hermite spline through its control points.
///
/// `tangents`, when present, holds either one tangent per control point or,
/// for an open spline, just the two end tangents (interior ones then fall
/// back to Catmull-Rom).
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteSpline {
    pub control_points: Vec<Point3>,
    pub periodic: bool,
    pub tangents: Option<Vec<Point3>>,
}

impl HermiteSpline {
    pub fn validate(&self) -> Result<(), GeomError> {
        let invalid = |rule| Err(GeomError::Invalid { rule });
        let n = self.control_points.len();
        if n < 2 {
            return invalid("hermite.at_least_two_points");
        }
        if !all_finite(&self.control_points) {
            return invalid("hermite.points_finite");
        }
        if let Some(t) = &self.tangents {
            let ok = t.len() == n || (!self.periodic && t.len() == 2);
            if !ok {
                return invalid("hermite.tangent_count");
            }
            if !all_finite(t) {
                return invalid("hermite.tangents_finite");
            }
        }
        Ok(())
    }

    pub fn segment_count(&self) -> usize {
        let n = self.control_points.len();
        if self.periodic {
            n
        } else {
            n - 1
        }
    }

    fn point(&self, i: usize) -> Point3 {
        self.control_points[i % self.control_points.len()]
    }

    /// Tangent at control point `i`, explicit or Catmull-Rom.
    pub fn tangent(&self, i: usize) -> Point3 {
        let n = self.control_points.len();
        let i = i % n;
        match &self.tangents {
            Some(t) if t.len() == n => t[i],
            Some(t) if i == 0 => t[0],
            Some(t) if i == n - 1 => t[1],
            _ => catmull_rom(&self.control_points, self.periodic, i),
        }
    }

    /// Segment index and local parameter for normalized `t`.
    fn locate(&self, t: f64) -> (usize, f64) {
        let segments = self.segment_count();
        let x = t * segments as f64;
        let i = (math::floor(x).max(0.0) as usize).min(segments - 1);
        (i, x - i as f64)
    }

    pub(crate) fn point_at(&self, t: f64) -> Point3 {
        let (i, s) = self.locate(t);
        let (p0, p1) = (self.point(i), self.point(i + 1));
        let (m0, m1) = (self.tangent(i), self.tangent(i + 1));
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        p0 * h00 + m0 * h10 + p1 * h01 + m1 * h11
    }

    /// Derivative with respect to normalized `t`.
    pub(crate) fn derivative_at(&self, t: f64) -> Point3 {
        let (i, s) = self.locate(t);
        let (p0, p1) = (self.point(i), self.point(i + 1));
        let (m0, m1) = (self.tangent(i), self.tangent(i + 1));
        let s2 = s * s;
        let d00 = 6.0 * s2 - 6.0 * s;
        let d10 = 3.0 * s2 - 4.0 * s + 1.0;
        let d01 = -6.0 * s2 + 6.0 * s;
        let d11 = 3.0 * s2 - 2.0 * s;
        (p0 * d00 + m0 * d10 + p1 * d01 + m1 * d11) * self.segment_count() as f64
    }

    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        let segments = self.segment_count();
        (0..=segments).map(|i| i as f64 / segments as f64).collect()
    }

    pub(crate) fn map(
        &self,
        point: impl Fn(Point3) -> Point3,
        dir: impl Fn(Point3) -> Point3,
    ) -> Self {
        HermiteSpline {
            control_points: self.control_points.iter().map(|&p| point(p)).collect(),
            periodic: self.periodic,
            tangents: self
                .tangents
                .as_ref()
                .map(|t| t.iter().map(|&v| dir(v)).collect()),
        }
    }
}

fn catmull_rom(points: &[Point3], periodic: bool, i: usize) -> Point3 {
    let n = points.len();
    if periodic {
        (points[(i + 1) % n] - points[(i + n - 1) % n]) * 0.5
    } else if i == 0 {
        points[1] - points[0]
    } else if i == n - 1 {
        points[n - 1] - points[n - 2]
    } else {
        (points[i + 1] - points[i - 1]) * 0.5
    }
}

/// Catmull-Rom tangents: central differences inside, one-sided at open
/// ends, wrapped indices for periodic splines.
pub fn default_hermite_tangents(
    points: &[Point3],
    periodic: bool,
) -> Result<Vec<Point3>, GeomError> {
    if points.len() < 2 {
        return Err(GeomError::Degenerate(
            "hermite spline needs at least two points",
        ));
    }
    Ok((0..points.len())
        .map(|i| catmull_rom(points, periodic, i))
        .collect())
}
