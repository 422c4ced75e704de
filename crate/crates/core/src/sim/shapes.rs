//! Random geometry at building scale, inside the square site.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{
    Arc, Curve, CurveLoop, CylindricalHelix, Ellipse, GeometricBase, HermiteSpline, NurbsSpline,
    Plane, Point3, Profile,
};
use crate::math;

use super::SITE_SIZE;

/// The shapes [`GeometrySampler::sample`] can draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseKind {
    Point,
    Line,
    Arc,
    Helix,
    Ellipse,
    Nurbs,
    Hermite,
    CurveLoop,
    Profile,
}

impl BaseKind {
    pub const ALL: [BaseKind; 9] = [
        BaseKind::Point,
        BaseKind::Line,
        BaseKind::Arc,
        BaseKind::Helix,
        BaseKind::Ellipse,
        BaseKind::Nurbs,
        BaseKind::Hermite,
        BaseKind::CurveLoop,
        BaseKind::Profile,
    ];
}

/// Seeded source of valid random geometry. Positions stay 10 m clear of
/// the site edges; sizes fall between 0.1 and 10 m.
#[derive(Debug, Clone)]
pub struct GeometrySampler {
    pub(crate) rng: ChaCha8Rng,
}

impl GeometrySampler {
    pub fn new(seed: u64) -> Self {
        GeometrySampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn sample(&mut self, kind: BaseKind) -> GeometricBase {
        match kind {
            BaseKind::Point => self.site_point().into(),
            BaseKind::Line => self.line().into(),
            BaseKind::Arc => self.arc().into(),
            BaseKind::Helix => self.helix().into(),
            BaseKind::Ellipse => self.ellipse().into(),
            BaseKind::Nurbs => Curve::Nurbs(self.nurbs()).into(),
            BaseKind::Hermite => Curve::Hermite(self.hermite()).into(),
            BaseKind::CurveLoop => self.floor_loop().into(),
            BaseKind::Profile => self.wall_profile().into(),
        }
    }

    pub(crate) fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    fn level(&mut self) -> f64 {
        3.0 * self.rng.random_range(0..3) as f64
    }

    pub fn site_point(&mut self) -> Point3 {
        let z = self.level();
        let margin = 10.0;
        Point3::new(
            self.uniform(margin, SITE_SIZE - margin),
            self.uniform(margin, SITE_SIZE - margin),
            z,
        )
    }

    fn direction(&mut self) -> (f64, Point3, Point3) {
        let phi = self.uniform(0.0, TAU);
        let u = Point3::new(math::cos(phi), math::sin(phi), 0.0);
        let v = Point3::new(-math::sin(phi), math::cos(phi), 0.0);
        (phi, u, v)
    }

    /// Points in a horizontal square of half-side `size` around a site point.
    fn local_points(&mut self, n: usize, size: f64) -> Vec<Point3> {
        let c = self.site_point();
        (0..n)
            .map(|_| c + Point3::new(self.uniform(-size, size), self.uniform(-size, size), 0.0))
            .collect()
    }

    pub fn line(&mut self) -> Curve {
        let a = self.site_point();
        let (_, u, _) = self.direction();
        let len = self.uniform(0.5, 10.0);
        Curve::line(a, a + u * len)
    }

    pub fn arc(&mut self) -> Curve {
        let c = self.site_point();
        let start = self.uniform(0.0, TAU);
        let sweep = self.uniform(0.3, 1.8 * PI);
        Curve::Arc(Arc::new(c, self.uniform(1.0, 10.0), start, start + sweep))
    }

    pub fn ellipse(&mut self) -> Curve {
        let (_, u, v) = self.direction();
        let x_radius = self.uniform(1.0, 8.0);
        let start = self.uniform(0.0, TAU);
        Curve::Ellipse(Ellipse {
            center: self.site_point(),
            x_radius,
            y_radius: self.uniform(0.5, x_radius),
            x_axis: u,
            y_axis: v,
            start_param: start,
            end_param: start + self.uniform(0.5, TAU - 0.5),
        })
    }

    pub fn helix(&mut self) -> Curve {
        let (_, u, _) = self.direction();
        let start = self.uniform(0.0, TAU);
        Curve::Helix(CylindricalHelix {
            base: self.site_point(),
            radius: self.uniform(0.5, 3.0),
            x_vector: u,
            z_vector: Point3::Z,
            pitch: self.uniform(0.5, 3.0),
            start_angle: start,
            end_angle: start + self.uniform(0.5 * PI, 3.0 * PI),
        })
    }

    /// Wall location line: mostly lines, with every other curve kind mixed in.
    pub fn location_curve(&mut self) -> Curve {
        match self.rng.random_range(0..20) {
            0..=9 => self.line(),
            10..=12 => self.arc(),
            13..=14 => self.ellipse(),
            15..=16 => Curve::Nurbs(self.nurbs()),
            17..=18 => Curve::Hermite(self.hermite()),
            _ => self.helix(),
        }
    }

    /// Clamped spline of degree 1 to 3 with random weights and knot spacing.
    pub fn nurbs(&mut self) -> NurbsSpline {
        let degree = self.rng.random_range(1..=3);
        let n = degree + 1 + self.rng.random_range(0..4);
        let control_points = self.local_points(n, 5.0);
        let weights = (0..n).map(|_| self.uniform(0.5, 2.0)).collect();
        let scale = self.uniform(1.0, 10.0);
        let mut interior: Vec<f64> = (0..n - degree - 1)
            .map(|_| self.uniform(0.0, scale))
            .collect();
        interior.sort_by(f64::total_cmp);
        let mut knots = vec![0.0; degree + 1];
        knots.extend(interior);
        knots.extend(core::iter::repeat_n(scale, degree + 1));
        NurbsSpline {
            degree,
            knots,
            control_points,
            weights,
        }
    }

    pub fn hermite(&mut self) -> HermiteSpline {
        let n = self.rng.random_range(2..=5);
        let control_points = self.local_points(n, 5.0);
        let periodic = n > 2 && self.rng.random_bool(0.1);
        let tangents = match self.rng.random_range(0..10) {
            0..=5 => None,
            6..=8 => Some(n),
            _ if !periodic => Some(2),
            _ => None,
        }
        .map(|k| {
            (0..k)
                .map(|_| Point3::new(self.uniform(-5.0, 5.0), self.uniform(-5.0, 5.0), 0.0))
                .collect()
        });
        HermiteSpline {
            control_points,
            periodic,
            tangents,
        }
    }

    /// Column axis leaning at most 1 m off vertical.
    pub fn slanted_axis(&mut self) -> Curve {
        let a = self.site_point();
        let top = a + Point3::new(
            self.uniform(-1.0, 1.0),
            self.uniform(-1.0, 1.0),
            self.uniform(2.5, 4.0),
        );
        Curve::line(a, top)
    }

    /// Horizontal outline: a rectangle, a rectangle capped by a half circle,
    /// or a circle made of two arcs.
    pub fn floor_loop(&mut self) -> CurveLoop {
        let origin = self.site_point();
        let (phi, u, v) = self.direction();
        let w = self.uniform(2.0, 10.0);
        let h = self.uniform(2.0, 10.0);
        match self.rng.random_range(0..3) {
            0 => CurveLoop::polygon(&[
                origin,
                origin + u * w,
                origin + u * w + v * h,
                origin + v * h,
            ]),
            1 => {
                let arc = Curve::Arc(Arc::new(
                    origin + v * h + u * (w / 2.0),
                    w / 2.0,
                    phi,
                    phi + PI,
                ));
                let (c, d) = (arc.start_point(), arc.end_point());
                let b = origin + u * w;
                CurveLoop::new(vec![
                    arc,
                    Curve::line(d, origin),
                    Curve::line(origin, b),
                    Curve::line(b, c),
                ])
            }
            _ => {
                let r = w / 2.0;
                let upper = Curve::Arc(Arc::new(origin, r, phi, phi + PI));
                let lower = Curve::Arc(Arc::new(origin, r, phi + PI, phi + TAU));
                CurveLoop::new(vec![upper, lower])
            }
        }
    }

    /// Vertical wall face, sometimes with a rectangular opening.
    pub fn wall_profile(&mut self) -> Profile {
        let base = self.site_point();
        let (_, u, _) = self.direction();
        let len = self.uniform(2.0, 10.0);
        let height = self.uniform(2.5, 4.5);
        let plane = Plane {
            origin: base,
            x_axis: u,
            y_axis: Point3::Z,
        };
        let at = |s: f64, t: f64| plane.to_world(s, t);
        let outer =
            CurveLoop::polygon(&[at(0.0, 0.0), at(len, 0.0), at(len, height), at(0.0, height)]);
        let mut loops = vec![outer];
        if self.rng.random_bool(0.5) {
            let s0 = self.uniform(0.2, 0.4) * len;
            let s1 = self.uniform(0.6, 0.8) * len;
            let t0 = self.uniform(0.2, 0.4) * height;
            let t1 = self.uniform(0.6, 0.8) * height;
            loops.push(CurveLoop::polygon(&[
                at(s0, t0),
                at(s1, t0),
                at(s1, t1),
                at(s0, t1),
            ]));
        }
        Profile::new(loops)
    }
}
