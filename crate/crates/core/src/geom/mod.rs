//! Geometric bases carried by every log event: location points, the six
//! location-curve kinds, curve loops and profiles, plus the evaluation,
//! length, closure and area math the rest of the crate builds on.
//!
//! Every curve is evaluated through a normalized parameter `t` in `[0, 1]`
//! that maps linearly onto its native range (angles, knot span, segment
//! chain).

mod curve;
mod hermite;
mod nurbs;
mod planar;
mod point;
mod quad;
mod transform;

pub use curve::{Arc, Curve, CylindricalHelix, Ellipse, Line};
pub use hermite::{default_hermite_tangents, HermiteSpline};
pub use nurbs::{nurbs_basis, NurbsSpline};
pub use planar::{point_in_polygon, CurveLoop, Profile};
pub use point::{Plane, Point3};
pub use transform::RigidMotion;

/// Maximum end-to-start gap between consecutive curves of a closed loop.
pub const CLOSURE_TOL: f64 = 1e-6;
/// Maximum distance of a loop's sampled boundary from its fitted plane.
pub const PLANARITY_TOL: f64 = 1e-6;
/// Tolerance on unit length and orthogonality of direction vectors.
pub const AXIS_TOL: f64 = 1e-8;
/// Relative tolerance of the adaptive quadrature used for lengths and areas.
pub const QUADRATURE_REL_TOL: f64 = 1e-9;

/// Widens `base` for values of size `magnitude` to four units in the ninth
/// significant digit, the resolution of the log's text form. At building
/// scale in meters the base tolerance is the larger one.
pub fn text_tolerance(base: f64, magnitude: f64) -> f64 {
    if !(magnitude.is_finite() && magnitude > 0.0) {
        return base;
    }
    use crate::math;
    let unit = math::pow(10.0, math::floor(math::log10(magnitude)) - 8.0);
    base.max(4.0 * unit)
}

/// Meters per international foot.
pub const METERS_PER_FOOT: f64 = 0.3048;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeomError {
    #[error("expected {expected}, found {found}")]
    Kind {
        expected: &'static str,
        found: &'static str,
    },
    #[error("{what} = {value} is outside its domain")]
    Domain { what: &'static str, value: f64 },
    #[error("degenerate geometry: {0}")]
    Degenerate(&'static str),
    #[error("loop is not planar (residual {residual:e})")]
    NonPlanar { residual: f64 },
    #[error("curve loop is not closed")]
    OpenLoop,
    #[error("invalid geometry: violates rule `{rule}`")]
    Invalid { rule: &'static str },
}

/// The geometry payload of an element.
#[derive(Debug, Clone, PartialEq)]
pub enum GeometricBase {
    Point(Point3),
    Curve(Curve),
    Loop(CurveLoop),
    Profile(Profile),
}

impl GeometricBase {
    pub fn kind_name(&self) -> &'static str {
        match self {
            GeometricBase::Point(_) => "LocationPoint",
            GeometricBase::Curve(c) => c.kind_name(),
            GeometricBase::Loop(_) => "CurveLoop",
            GeometricBase::Profile(_) => "Profile",
        }
    }

    pub fn as_curve(&self) -> Result<&Curve, GeomError> {
        match self {
            GeometricBase::Curve(c) => Ok(c),
            other => Err(GeomError::Kind {
                expected: "curve",
                found: other.kind_name(),
            }),
        }
    }

    /// Point at normalized parameter `t`; only defined for curves.
    pub fn evaluate(&self, t: f64) -> Result<Point3, GeomError> {
        self.as_curve()?.evaluate(t)
    }

    pub fn curve_length(&self) -> Result<f64, GeomError> {
        Ok(self.as_curve()?.length())
    }

    pub fn validate(&self) -> Result<(), GeomError> {
        match self {
            GeometricBase::Point(p) => {
                if p.is_finite() {
                    Ok(())
                } else {
                    Err(GeomError::Invalid {
                        rule: "point.finite",
                    })
                }
            }
            GeometricBase::Curve(c) => c.validate(),
            GeometricBase::Loop(l) => l.validate(),
            GeometricBase::Profile(p) => p.validate(),
        }
    }

    /// Uniformly scales every length (coordinates, radii, pitch, tangents)
    /// about the world origin. Angles, parameters, knots, weights and flags
    /// are untouched.
    pub fn scaled(&self, factor: f64) -> Result<GeometricBase, GeomError> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(GeomError::Domain {
                what: "scale factor",
                value: factor,
            });
        }
        Ok(match self {
            GeometricBase::Point(p) => GeometricBase::Point(*p * factor),
            GeometricBase::Curve(c) => GeometricBase::Curve(c.scaled(factor)),
            GeometricBase::Loop(l) => GeometricBase::Loop(l.scaled(factor)),
            GeometricBase::Profile(p) => GeometricBase::Profile(p.scaled(factor)),
        })
    }

    pub fn transformed(&self, motion: &RigidMotion) -> GeometricBase {
        match self {
            GeometricBase::Point(p) => GeometricBase::Point(motion.apply_point(*p)),
            GeometricBase::Curve(c) => GeometricBase::Curve(c.transformed(motion)),
            GeometricBase::Loop(l) => GeometricBase::Loop(l.transformed(motion)),
            GeometricBase::Profile(p) => GeometricBase::Profile(p.transformed(motion)),
        }
    }

    pub fn translated(&self, offset: Point3) -> GeometricBase {
        self.transformed(&RigidMotion::translation(offset))
    }
}

impl From<Point3> for GeometricBase {
    fn from(p: Point3) -> Self {
        GeometricBase::Point(p)
    }
}

impl From<Curve> for GeometricBase {
    fn from(c: Curve) -> Self {
        GeometricBase::Curve(c)
    }
}

impl From<CurveLoop> for GeometricBase {
    fn from(l: CurveLoop) -> Self {
        GeometricBase::Loop(l)
    }
}

impl From<Profile> for GeometricBase {
    fn from(p: Profile) -> Self {
        GeometricBase::Profile(p)
    }
}

/// Free-function form of [`Curve::evaluate`] over any geometric base.
pub fn evaluate_curve(base: &GeometricBase, t: f64) -> Result<Point3, GeomError> {
    base.evaluate(t)
}

pub fn curve_length(base: &GeometricBase) -> Result<f64, GeomError> {
    base.curve_length()
}

pub fn scale_geometry(base: &GeometricBase, factor: f64) -> Result<GeometricBase, GeomError> {
    base.scaled(factor)
}

pub(crate) fn check_param(t: f64) -> Result<(), GeomError> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(GeomError::Domain {
            what: "curve parameter",
            value: t,
        })
    }
}

pub(crate) fn all_finite(points: &[Point3]) -> bool {
    points.iter().all(Point3::is_finite)
}

pub(crate) fn is_unit(v: Point3) -> bool {
    v.is_finite() && (v.norm() - 1.0).abs() <= AXIS_TOL
}
