use alloc::vec::Vec;

use super::quad::integrate_pieces;
use super::{
    text_tolerance, Curve, GeomError, Plane, Point3, RigidMotion, CLOSURE_TOL, PLANARITY_TOL,
    QUADRATURE_REL_TOL,
};

/// Boundary samples taken along each non-linear curve when fitting a plane.
const SAMPLES_PER_CURVE: usize = 32;

/// Ordered chain of curves meant to form a closed boundary.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CurveLoop {
    pub curves: Vec<Curve>,
}

impl CurveLoop {
    pub fn new(curves: Vec<Curve>) -> Self {
        CurveLoop { curves }
    }

    /// Closed polyline through `corners` (last joins back to first).
    pub fn polygon(corners: &[Point3]) -> Self {
        let n = corners.len();
        CurveLoop {
            curves: (0..n)
                .map(|i| Curve::line(corners[i], corners[(i + 1) % n]))
                .collect(),
        }
    }

    /// Every curve ends where the next one starts, last back to first.
    pub fn is_closed(&self, tol: f64) -> bool {
        if self.curves.is_empty() {
            return false;
        }
        let n = self.curves.len();
        (0..n).all(|i| {
            self.curves[i]
                .end_point()
                .distance(self.curves[(i + 1) % n].start_point())
                <= tol
        })
    }

    /// Largest coordinate magnitude among the curve ends.
    fn magnitude(&self) -> f64 {
        self.curves
            .iter()
            .flat_map(|c| [c.start_point().max_abs(), c.end_point().max_abs()])
            .fold(0.0, f64::max)
    }

    /// [`CLOSURE_TOL`], widened where the coordinates are too large for
    /// nine significant digits to resolve it.
    pub fn closure_tolerance(&self) -> f64 {
        text_tolerance(CLOSURE_TOL, self.magnitude())
    }

    /// [`PLANARITY_TOL`], widened like [`CurveLoop::closure_tolerance`].
    pub fn planarity_tolerance(&self) -> f64 {
        text_tolerance(PLANARITY_TOL, self.magnitude())
    }

    pub fn validate(&self) -> Result<(), GeomError> {
        if self.curves.is_empty() {
            return Err(GeomError::Invalid {
                rule: "loop.nonempty",
            });
        }
        for c in &self.curves {
            c.validate()?;
        }
        if !self.is_closed(self.closure_tolerance()) {
            return Err(GeomError::Invalid {
                rule: "loop.closed",
            });
        }
        Ok(())
    }

    /// Boundary samples in traversal order; each curve contributes its start
    /// and (if curved) interior points, never its end.
    pub fn samples(&self) -> Vec<Point3> {
        let mut out = Vec::new();
        for c in &self.curves {
            match c {
                Curve::Line(l) => out.push(l.end1),
                _ => out.extend(
                    (0..SAMPLES_PER_CURVE).map(|j| c.point_at(j as f64 / SAMPLES_PER_CURVE as f64)),
                ),
            }
        }
        out
    }

    /// Carrier plane fitted with Newell's method. The origin is the sample
    /// centroid and the normal follows the loop's winding.
    pub fn plane(&self) -> Result<Plane, GeomError> {
        if !self.is_closed(self.closure_tolerance()) {
            return Err(GeomError::OpenLoop);
        }
        let pts = self.samples();
        if pts.len() < 3 {
            return Err(GeomError::Degenerate(
                "loop needs at least three distinct points",
            ));
        }
        let count = pts.len() as f64;
        let centroid = pts.iter().fold(Point3::ORIGIN, |acc, &p| acc + p) * (1.0 / count);
        let mut normal = Point3::ORIGIN;
        let mut extent: f64 = 0.0;
        for (i, &a) in pts.iter().enumerate() {
            let b = pts[(i + 1) % pts.len()];
            let (a, b) = (a - centroid, b - centroid);
            normal = normal
                + Point3::new(
                    (a.y - b.y) * (a.z + b.z),
                    (a.z - b.z) * (a.x + b.x),
                    (a.x - b.x) * (a.y + b.y),
                );
            extent = extent.max(a.norm());
        }
        if extent == 0.0 || normal.norm() <= 1e-12 * extent * extent {
            return Err(GeomError::Degenerate("collinear loop"));
        }
        let normal = normal
            .normalized()
            .ok_or(GeomError::Degenerate("collinear loop"))?;
        let residual = pts
            .iter()
            .map(|&p| (p - centroid).dot(normal).abs())
            .fold(0.0, f64::max);
        if residual > self.planarity_tolerance() {
            return Err(GeomError::NonPlanar { residual });
        }
        let reference = least_aligned_axis(normal);
        let x_axis = (reference - normal * reference.dot(normal))
            .normalized()
            .ok_or(GeomError::Degenerate("collinear loop"))?;
        Ok(Plane {
            origin: centroid,
            x_axis,
            y_axis: normal.cross(x_axis),
        })
    }

    /// Signed area in `plane` coordinates (Green's theorem over the exact
    /// boundary).
    fn signed_area_in(&self, plane: &Plane) -> f64 {
        self.boundary_integral(plane, |u, v, du, dv| 0.5 * (u * dv - v * du))
    }

    fn boundary_integral(&self, plane: &Plane, f: impl Fn(f64, f64, f64, f64) -> f64) -> f64 {
        self.curves
            .iter()
            .map(|c| {
                let integrand = |t: f64| {
                    let (u, v) = plane.to_local(c.point_at(t));
                    let d = c.derivative_at(t);
                    f(u, v, d.dot(plane.x_axis), d.dot(plane.y_axis))
                };
                integrate_pieces(&integrand, &c.breakpoints(), QUADRATURE_REL_TOL)
            })
            .sum()
    }

    /// Absolute enclosed area.
    pub fn area(&self) -> Result<f64, GeomError> {
        let plane = self.plane()?;
        Ok(self.signed_area_in(&plane).abs())
    }

    /// Area centroid of the enclosed region.
    pub fn centroid(&self) -> Result<Point3, GeomError> {
        let plane = self.plane()?;
        let area = self.signed_area_in(&plane);
        if area == 0.0 {
            return Err(GeomError::Degenerate("zero-area loop"));
        }
        let mu = self.boundary_integral(&plane, |u, _, _, dv| 0.5 * u * u * dv);
        let mv = self.boundary_integral(&plane, |_, v, du, _| -0.5 * v * v * du);
        Ok(plane.to_world(mu / area, mv / area))
    }

    pub fn scaled(&self, k: f64) -> CurveLoop {
        CurveLoop {
            curves: self.curves.iter().map(|c| c.scaled(k)).collect(),
        }
    }

    pub fn transformed(&self, m: &RigidMotion) -> CurveLoop {
        CurveLoop {
            curves: self.curves.iter().map(|c| c.transformed(m)).collect(),
        }
    }
}

fn least_aligned_axis(n: Point3) -> Point3 {
    let (ax, ay, az) = (n.x.abs(), n.y.abs(), n.z.abs());
    if ax <= ay && ax <= az {
        Point3::X
    } else if ay <= az {
        Point3::Y
    } else {
        Point3::Z
    }
}

/// Even-odd containment of `(u, v)` in a closed 2-D polygon.
pub fn point_in_polygon(u: f64, v: f64, polygon: &[(f64, f64)]) -> bool {
    let n = polygon.len();
    let mut inside = false;
    for i in 0..n {
        let (ui, vi) = polygon[i];
        let (uj, vj) = polygon[(i + n - 1) % n];
        if (vi > v) != (vj > v) && u < (uj - ui) * (v - vi) / (vj - vi) + ui {
            inside = !inside;
        }
    }
    inside
}

/// Planar region: the first loop is the outer boundary, the rest are holes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Profile {
    pub loops: Vec<CurveLoop>,
}

impl Profile {
    pub fn new(loops: Vec<CurveLoop>) -> Self {
        Profile { loops }
    }

    pub fn outer(&self) -> Option<&CurveLoop> {
        self.loops.first()
    }

    pub fn validate(&self) -> Result<(), GeomError> {
        let invalid = |rule| Err(GeomError::Invalid { rule });
        let Some(outer) = self.outer() else {
            return invalid("profile.nonempty");
        };
        for l in &self.loops {
            l.validate()?;
        }
        if self.loops.len() == 1 {
            return Ok(());
        }
        let plane = outer.plane().map_err(|_| GeomError::Invalid {
            rule: "profile.outer_planar",
        })?;
        let boundary: Vec<(f64, f64)> = outer
            .samples()
            .into_iter()
            .map(|p| plane.to_local(p))
            .collect();
        for hole in &self.loops[1..] {
            for p in hole.samples() {
                if plane.offset_of(p).abs()
                    > outer.planarity_tolerance().max(hole.planarity_tolerance())
                {
                    return invalid("profile.coplanar_loops");
                }
                let (u, v) = plane.to_local(p);
                if !point_in_polygon(u, v, &boundary) {
                    return invalid("profile.holes_inside_outer");
                }
            }
        }
        Ok(())
    }

    /// Outer area minus hole areas.
    pub fn area(&self) -> Result<f64, GeomError> {
        let mut loops = self.loops.iter();
        let outer = loops
            .next()
            .ok_or(GeomError::Degenerate("empty profile"))?
            .area()?;
        let holes: f64 = loops.map(CurveLoop::area).sum::<Result<f64, _>>()?;
        Ok(outer - holes)
    }

    pub fn scaled(&self, k: f64) -> Profile {
        Profile {
            loops: self.loops.iter().map(|l| l.scaled(k)).collect(),
        }
    }

    pub fn transformed(&self, m: &RigidMotion) -> Profile {
        Profile {
            loops: self.loops.iter().map(|l| l.transformed(m)).collect(),
        }
    }
}
