use alloc::vec;
use alloc::vec::Vec;

use super::quad::integrate_pieces;
use super::{
    check_param, is_unit, GeomError, HermiteSpline, NurbsSpline, Plane, Point3, RigidMotion,
    AXIS_TOL, QUADRATURE_REL_TOL,
};
use crate::math;

const TAU: f64 = core::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub end1: Point3,
    pub end2: Point3,
}

/// Circular arc. `plane.origin` is the center; angles are measured from
/// `plane.x_axis` towards `plane.y_axis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub plane: Plane,
    pub radius: f64,
    pub start_angle: f64,
    pub end_angle: f64,
}

impl Arc {
    /// Arc in the world XY plane through `center`.
    pub fn new(center: Point3, radius: f64, start_angle: f64, end_angle: f64) -> Self {
        Arc {
            plane: Plane::world_xy(center),
            radius,
            start_angle,
            end_angle,
        }
    }

    pub fn center(&self) -> Point3 {
        self.plane.origin
    }

    fn at_angle(&self, theta: f64) -> Point3 {
        let (s, c) = (math::sin(theta), math::cos(theta));
        self.plane.origin + (self.plane.x_axis * c + self.plane.y_axis * s) * self.radius
    }
}

/// Helix wound around `z_vector` through `base`. The height above the base
/// plane at angle `theta` is `pitch * theta / 2pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylindricalHelix {
    pub base: Point3,
    pub radius: f64,
    pub x_vector: Point3,
    pub z_vector: Point3,
    pub pitch: f64,
    pub start_angle: f64,
    pub end_angle: f64,
}

impl CylindricalHelix {
    fn y_vector(&self) -> Point3 {
        self.z_vector.cross(self.x_vector)
    }

    fn at_angle(&self, theta: f64) -> Point3 {
        let (s, c) = (math::sin(theta), math::cos(theta));
        self.base
            + (self.x_vector * c + self.y_vector() * s) * self.radius
            + self.z_vector * (self.pitch * theta / TAU)
    }
}

/// Elliptical arc; the parameters are radians of the parametric angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipse {
    pub center: Point3,
    pub x_radius: f64,
    pub y_radius: f64,
    pub x_axis: Point3,
    pub y_axis: Point3,
    pub start_param: f64,
    pub end_param: f64,
}

/// A location curve.
#[derive(Debug, Clone, PartialEq)]
pub enum Curve {
    Line(Line),
    Arc(Arc),
    Helix(CylindricalHelix),
    Ellipse(Ellipse),
    Nurbs(NurbsSpline),
    Hermite(HermiteSpline),
}

fn invalid(rule: &'static str) -> Result<(), GeomError> {
    Err(GeomError::Invalid { rule })
}

impl Curve {
    pub fn line(a: Point3, b: Point3) -> Curve {
        Curve::Line(Line { end1: a, end2: b })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Curve::Line(_) => "Line",
            Curve::Arc(_) => "Arc",
            Curve::Helix(_) => "CylindricalHelix",
            Curve::Ellipse(_) => "Ellipse",
            Curve::Nurbs(_) => "NurbsSpline",
            Curve::Hermite(_) => "HermiteSpline",
        }
    }

    pub fn validate(&self) -> Result<(), GeomError> {
        match self {
            Curve::Line(l) => {
                if !(l.end1.is_finite() && l.end2.is_finite()) {
                    return invalid("line.finite");
                }
                if l.end1 == l.end2 {
                    return invalid("line.distinct_ends");
                }
                Ok(())
            }
            Curve::Arc(a) => {
                if !(a.plane.origin.is_finite()
                    && a.start_angle.is_finite()
                    && a.end_angle.is_finite())
                {
                    return invalid("arc.finite");
                }
                if !(a.radius.is_finite() && a.radius > 0.0) {
                    return invalid("arc.radius_positive");
                }
                if !a.plane.is_orthonormal(AXIS_TOL) {
                    return invalid("arc.plane_orthonormal");
                }
                if a.start_angle == a.end_angle {
                    return invalid("arc.nonzero_sweep");
                }
                Ok(())
            }
            Curve::Helix(h) => {
                if !(h.base.is_finite()
                    && h.pitch.is_finite()
                    && h.start_angle.is_finite()
                    && h.end_angle.is_finite())
                {
                    return invalid("helix.finite");
                }
                if !(h.radius.is_finite() && h.radius > 0.0) {
                    return invalid("helix.radius_positive");
                }
                if !(is_unit(h.x_vector)
                    && is_unit(h.z_vector)
                    && h.x_vector.dot(h.z_vector).abs() <= AXIS_TOL)
                {
                    return invalid("helix.axes_orthonormal");
                }
                if h.start_angle == h.end_angle {
                    return invalid("helix.nonzero_sweep");
                }
                Ok(())
            }
            Curve::Ellipse(e) => {
                if !(e.center.is_finite() && e.start_param.is_finite() && e.end_param.is_finite()) {
                    return invalid("ellipse.finite");
                }
                if !(e.x_radius.is_finite()
                    && e.x_radius > 0.0
                    && e.y_radius.is_finite()
                    && e.y_radius > 0.0)
                {
                    return invalid("ellipse.radii_positive");
                }
                if !(is_unit(e.x_axis)
                    && is_unit(e.y_axis)
                    && e.x_axis.dot(e.y_axis).abs() <= AXIS_TOL)
                {
                    return invalid("ellipse.axes_orthonormal");
                }
                if e.start_param == e.end_param {
                    return invalid("ellipse.nonzero_sweep");
                }
                Ok(())
            }
            Curve::Nurbs(n) => n.validate(),
            Curve::Hermite(h) => h.validate(),
        }
    }

    /// Point at normalized parameter `t` in `[0, 1]`.
    pub fn evaluate(&self, t: f64) -> Result<Point3, GeomError> {
        check_param(t)?;
        Ok(self.point_at(t))
    }

    /// First derivative with respect to the normalized parameter.
    pub fn derivative(&self, t: f64) -> Result<Point3, GeomError> {
        check_param(t)?;
        Ok(self.derivative_at(t))
    }

    pub fn start_point(&self) -> Point3 {
        self.point_at(0.0)
    }

    pub fn end_point(&self) -> Point3 {
        self.point_at(1.0)
    }

    pub(crate) fn point_at(&self, t: f64) -> Point3 {
        match self {
            Curve::Line(l) => l.end1.lerp(l.end2, t),
            Curve::Arc(a) => a.at_angle(a.start_angle + t * (a.end_angle - a.start_angle)),
            Curve::Helix(h) => h.at_angle(h.start_angle + t * (h.end_angle - h.start_angle)),
            Curve::Ellipse(e) => {
                let theta = e.start_param + t * (e.end_param - e.start_param);
                let (s, c) = (math::sin(theta), math::cos(theta));
                e.center + e.x_axis * (e.x_radius * c) + e.y_axis * (e.y_radius * s)
            }
            Curve::Nurbs(n) => n.point_at(n.native_param(t)),
            Curve::Hermite(h) => h.point_at(t),
        }
    }

    pub(crate) fn derivative_at(&self, t: f64) -> Point3 {
        match self {
            Curve::Line(l) => l.end2 - l.end1,
            Curve::Arc(a) => {
                let sweep = a.end_angle - a.start_angle;
                let theta = a.start_angle + t * sweep;
                let (s, c) = (math::sin(theta), math::cos(theta));
                (a.plane.y_axis * c - a.plane.x_axis * s) * (a.radius * sweep)
            }
            Curve::Helix(h) => {
                let sweep = h.end_angle - h.start_angle;
                let theta = h.start_angle + t * sweep;
                let (s, c) = (math::sin(theta), math::cos(theta));
                ((h.y_vector() * c - h.x_vector * s) * h.radius + h.z_vector * (h.pitch / TAU))
                    * sweep
            }
            Curve::Ellipse(e) => {
                let sweep = e.end_param - e.start_param;
                let theta = e.start_param + t * sweep;
                let (s, c) = (math::sin(theta), math::cos(theta));
                (e.y_axis * (e.y_radius * c) - e.x_axis * (e.x_radius * s)) * sweep
            }
            Curve::Nurbs(n) => {
                let (lo, hi) = n.domain();
                n.point_and_tangent_at(n.native_param(t)).1 * (hi - lo)
            }
            Curve::Hermite(h) => h.derivative_at(t),
        }
    }

    /// Normalized parameters bracketing the smooth pieces of the curve.
    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        match self {
            Curve::Nurbs(n) => n.breakpoints(),
            Curve::Hermite(h) => h.breakpoints(),
            _ => vec![0.0, 1.0],
        }
    }

    /// Breakpoints restricted to `[t0, t1]`.
    pub(crate) fn breakpoints_between(&self, t0: f64, t1: f64) -> Vec<f64> {
        let mut out = vec![t0];
        out.extend(self.breakpoints().into_iter().filter(|&b| b > t0 && b < t1));
        out.push(t1);
        out
    }

    pub fn length(&self) -> f64 {
        self.arc_length(0.0, 1.0)
    }

    /// Length of the piece between normalized parameters `t0 <= t1`.
    pub fn arc_length(&self, t0: f64, t1: f64) -> f64 {
        let (t0, t1) = (t0.clamp(0.0, 1.0), t1.clamp(0.0, 1.0));
        if t1 <= t0 {
            return 0.0;
        }
        let span = t1 - t0;
        match self {
            Curve::Line(l) => l.end1.distance(l.end2) * span,
            Curve::Arc(a) => a.radius * (a.end_angle - a.start_angle).abs() * span,
            Curve::Helix(h) => {
                let rise = h.pitch / TAU;
                (h.end_angle - h.start_angle).abs() * math::hypot(h.radius, rise) * span
            }
            _ => {
                let breaks = self.breakpoints_between(t0, t1);
                integrate_pieces(
                    &|t| self.derivative_at(t).norm(),
                    &breaks,
                    QUADRATURE_REL_TOL,
                )
            }
        }
    }

    pub fn scaled(&self, k: f64) -> Curve {
        match self {
            Curve::Line(l) => Curve::Line(Line {
                end1: l.end1 * k,
                end2: l.end2 * k,
            }),
            Curve::Arc(a) => Curve::Arc(Arc {
                plane: Plane {
                    origin: a.plane.origin * k,
                    ..a.plane
                },
                radius: a.radius * k,
                ..*a
            }),
            Curve::Helix(h) => Curve::Helix(CylindricalHelix {
                base: h.base * k,
                radius: h.radius * k,
                pitch: h.pitch * k,
                ..*h
            }),
            Curve::Ellipse(e) => Curve::Ellipse(Ellipse {
                center: e.center * k,
                x_radius: e.x_radius * k,
                y_radius: e.y_radius * k,
                ..*e
            }),
            Curve::Nurbs(n) => Curve::Nurbs(n.map_points(|p| p * k)),
            Curve::Hermite(h) => Curve::Hermite(h.map(|p| p * k, |v| v * k)),
        }
    }

    pub fn transformed(&self, m: &RigidMotion) -> Curve {
        match self {
            Curve::Line(l) => Curve::Line(Line {
                end1: m.apply_point(l.end1),
                end2: m.apply_point(l.end2),
            }),
            Curve::Arc(a) => Curve::Arc(Arc {
                plane: Plane {
                    origin: m.apply_point(a.plane.origin),
                    x_axis: m.apply_vector(a.plane.x_axis),
                    y_axis: m.apply_vector(a.plane.y_axis),
                },
                ..*a
            }),
            Curve::Helix(h) => Curve::Helix(CylindricalHelix {
                base: m.apply_point(h.base),
                x_vector: m.apply_vector(h.x_vector),
                z_vector: m.apply_vector(h.z_vector),
                ..*h
            }),
            Curve::Ellipse(e) => Curve::Ellipse(Ellipse {
                center: m.apply_point(e.center),
                x_axis: m.apply_vector(e.x_axis),
                y_axis: m.apply_vector(e.y_axis),
                ..*e
            }),
            Curve::Nurbs(n) => Curve::Nurbs(n.map_points(|p| m.apply_point(p))),
            Curve::Hermite(h) => Curve::Hermite(h.map(|p| m.apply_point(p), |v| m.apply_vector(v))),
        }
    }
}
