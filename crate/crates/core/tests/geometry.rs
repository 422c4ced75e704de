use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use bimlog_core::geom::{
    nurbs_basis, Arc, Curve, CurveLoop, CylindricalHelix, GeometricBase, HermiteSpline,
    NurbsSpline, Point3, RigidMotion,
};
use bimlog_core::sim::{BaseKind, GeometrySampler};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// De Boor's point recursion on homogeneous coordinates, with a linear
/// span search.
fn de_boor(degree: usize, knots: &[f64], pts: &[Point3], w: &[f64], u: f64) -> Point3 {
    let n = pts.len();
    let mut k = degree;
    while k + 1 < n && knots[k + 1] <= u {
        k += 1;
    }
    let mut d: Vec<[f64; 4]> = (0..=degree)
        .map(|j| {
            let i = j + k - degree;
            [pts[i].x * w[i], pts[i].y * w[i], pts[i].z * w[i], w[i]]
        })
        .collect();
    for r in 1..=degree {
        for j in (r..=degree).rev() {
            let i = j + k - degree;
            let den = knots[i + degree + 1 - r] - knots[i];
            let a = if den == 0.0 {
                0.0
            } else {
                (u - knots[i]) / den
            };
            for c in 0..4 {
                d[j][c] = (1.0 - a) * d[j - 1][c] + a * d[j][c];
            }
        }
    }
    let h = d[degree];
    Point3::new(h[0] / h[3], h[1] / h[3], h[2] / h[3])
}

fn random_spline(rng: &mut ChaCha8Rng) -> NurbsSpline {
    let degree = rng.random_range(1..=5);
    let n = degree + 1 + rng.random_range(0..6);
    let mut interior: Vec<f64> = (0..n - degree - 1)
        .map(|_| rng.random_range(0.0..1.0))
        .collect();
    interior.sort_by(f64::total_cmp);
    let mut knots = vec![0.0; degree + 1];
    knots.extend(interior);
    knots.extend(std::iter::repeat_n(1.0, degree + 1));
    NurbsSpline {
        degree,
        knots,
        control_points: (0..n)
            .map(|_| {
                Point3::new(
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                )
            })
            .collect(),
        weights: (0..n).map(|_| rng.random_range(0.2..3.0)).collect(),
    }
}

#[test]
fn nurbs_matches_de_boor_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let s = random_spline(&mut rng);
        let c = Curve::Nurbs(s.clone());
        for j in 0..=50 {
            let t = j as f64 / 50.0;
            let got = c.evaluate(t).unwrap();
            let want = de_boor(s.degree, &s.knots, &s.control_points, &s.weights, t);
            assert!(got.distance(want) <= 1e-12, "t={t}: {got:?} vs {want:?}");
        }
    }
}

#[test]
fn rational_quarter_circle() {
    let c = Curve::Nurbs(NurbsSpline {
        degree: 2,
        knots: vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0],
        control_points: vec![
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
        ],
        weights: vec![1.0, FRAC_1_SQRT_2, 1.0],
    });
    let mid = c.evaluate(0.5).unwrap();
    assert!(mid.distance(Point3::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0)) <= 1e-12);
    for j in 0..=100 {
        let p = c.evaluate(j as f64 / 100.0).unwrap();
        assert!((p.norm() - 1.0).abs() <= 1e-12);
    }
    assert!((c.length() - PI / 2.0).abs() <= 1e-9 * PI / 2.0);
}

#[test]
fn arc_and_helix_lengths_match_closed_forms() {
    let arc = Curve::Arc(Arc::new(Point3::ORIGIN, 2.5, 0.3, 2.1));
    assert!((arc.length() - 2.5 * 1.8).abs() <= 1e-9 * 4.5);
    let helix = Curve::Helix(CylindricalHelix {
        base: Point3::ORIGIN,
        radius: 1.0,
        x_vector: Point3::X,
        z_vector: Point3::Z,
        pitch: TAU,
        start_angle: 0.0,
        end_angle: TAU,
    });
    let want = TAU * 2f64.sqrt();
    assert!((helix.length() - want).abs() <= 1e-9 * want);
    assert!(
        helix
            .evaluate(1.0)
            .unwrap()
            .distance(Point3::new(1.0, 0.0, TAU))
            <= 1e-12
    );
}

/// Chord-length sum over `n` pieces of each smooth span, extrapolated; the
/// chord error is O(1/n^2) away from corners.
fn polyline_length(c: &Curve, n: usize) -> f64 {
    let mut breaks: Vec<f64> = match c {
        Curve::Nurbs(s) => {
            let (lo, hi) = (s.knots[s.degree], s.knots[s.control_points.len()]);
            s.knots
                .iter()
                .map(|k| (k - lo) / (hi - lo))
                .filter(|t| (0.0..=1.0).contains(t))
                .collect()
        }
        Curve::Hermite(h) => (0..=h.segment_count())
            .map(|i| i as f64 / h.segment_count() as f64)
            .collect(),
        _ => vec![0.0, 1.0],
    };
    breaks.dedup();
    let chords = |t0: f64, t1: f64, m: usize| -> f64 {
        (0..m)
            .map(|i| {
                let a = c.evaluate(t0 + (t1 - t0) * i as f64 / m as f64).unwrap();
                let b = c
                    .evaluate(t0 + (t1 - t0) * (i + 1) as f64 / m as f64)
                    .unwrap();
                a.distance(b)
            })
            .sum()
    };
    breaks
        .windows(2)
        .map(|w| {
            let (coarse, fine) = (chords(w[0], w[1], n), chords(w[0], w[1], 2 * n));
            fine + (fine - coarse) / 3.0
        })
        .sum()
}

#[test]
fn quadrature_lengths_match_polyline_oracle() {
    let mut g = GeometrySampler::new(5);
    for kind in [BaseKind::Ellipse, BaseKind::Nurbs, BaseKind::Hermite] {
        for _ in 0..10 {
            let GeometricBase::Curve(c) = g.sample(kind) else {
                unreachable!()
            };
            let want = polyline_length(&c, 4_000);
            assert!(
                (c.length() - want).abs() <= 1e-7 * want,
                "{kind:?}: {} vs {want}",
                c.length()
            );
        }
    }
}

#[test]
fn two_arc_circle_area() {
    let l = CurveLoop::new(vec![
        Curve::Arc(Arc::new(Point3::ORIGIN, 1.0, 0.0, PI)),
        Curve::Arc(Arc::new(Point3::ORIGIN, 1.0, PI, TAU)),
    ]);
    assert!((l.area().unwrap() - PI).abs() <= 1e-6);
}

/// Catmull-Rom written out as the usual cubic matrix form.
#[test]
fn catmull_rom_oracle() {
    let p = [
        Point3::new(0.0, 0.0, 0.0),
        Point3::new(1.0, 2.0, 0.0),
        Point3::new(3.0, 3.0, 1.0),
        Point3::new(4.0, 0.0, 1.0),
    ];
    let c = Curve::Hermite(HermiteSpline {
        control_points: p.to_vec(),
        periodic: false,
        tangents: None,
    });
    // Middle segment, local parameter s.
    for j in 0..=10 {
        let s = j as f64 / 10.0;
        let (s2, s3) = (s * s, s * s * s);
        let want = (p[1] * 2.0
            + (p[2] - p[0]) * s
            + (p[0] * 2.0 - p[1] * 5.0 + p[2] * 4.0 - p[3]) * s2
            + (p[1] * 3.0 - p[0] - p[2] * 3.0 + p[3]) * s3)
            * 0.5;
        let got = c.evaluate((1.0 + s) / 3.0).unwrap();
        assert!(got.distance(want) <= 1e-12, "s={s}");
    }
}

fn curve_of(kind: BaseKind, seed: u64) -> Curve {
    match GeometrySampler::new(seed).sample(kind) {
        GeometricBase::Curve(c) => c,
        _ => unreachable!(),
    }
}

const CURVE_KINDS: [BaseKind; 6] = [
    BaseKind::Line,
    BaseKind::Arc,
    BaseKind::Helix,
    BaseKind::Ellipse,
    BaseKind::Nurbs,
    BaseKind::Hermite,
];

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn endpoints_follow_defining_data(seed in any::<u64>(), k in 0usize..6) {
        let c = curve_of(CURVE_KINDS[k], seed);
        let (a, b) = (c.evaluate(0.0).unwrap(), c.evaluate(1.0).unwrap());
        let (ea, eb) = match &c {
            Curve::Line(l) => (l.end1, l.end2),
            Curve::Arc(arc) => {
                let at = |t: f64| arc.center() + Point3::new(t.cos(), t.sin(), 0.0) * arc.radius;
                (at(arc.start_angle), at(arc.end_angle))
            }
            Curve::Helix(h) => {
                let y = h.z_vector.cross(h.x_vector);
                let at = |t: f64| h.base + (h.x_vector * t.cos() + y * t.sin()) * h.radius + h.z_vector * (h.pitch * t / TAU);
                (at(h.start_angle), at(h.end_angle))
            }
            Curve::Ellipse(e) => {
                let at = |t: f64| e.center + e.x_axis * (e.x_radius * t.cos()) + e.y_axis * (e.y_radius * t.sin());
                (at(e.start_param), at(e.end_param))
            }
            Curve::Nurbs(n) => (n.control_points[0], *n.control_points.last().unwrap()),
            Curve::Hermite(h) if h.periodic => (h.control_points[0], h.control_points[0]),
            Curve::Hermite(h) => (h.control_points[0], *h.control_points.last().unwrap()),
        };
        prop_assert!(a.distance(ea) <= 1e-9 && b.distance(eb) <= 1e-9);
    }

    #[test]
    fn nurbs_partition_of_unity(seed in any::<u64>(), u in 0.0f64..=1.0) {
        let s = random_spline(&mut ChaCha8Rng::seed_from_u64(seed));
        let sum: f64 = (0..s.control_points.len())
            .map(|i| nurbs_basis(s.degree, &s.knots, i, u).unwrap())
            .sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
        let c = Curve::Nurbs(s.clone());
        prop_assert!(c.evaluate(0.0).unwrap().distance(s.control_points[0]) <= 1e-12);
        prop_assert!(c.evaluate(1.0).unwrap().distance(*s.control_points.last().unwrap()) <= 1e-12);
    }

    #[test]
    fn hermite_passes_through_control_points(seed in any::<u64>()) {
        let GeometricBase::Curve(Curve::Hermite(h)) = GeometrySampler::new(seed).sample(BaseKind::Hermite) else {
            unreachable!()
        };
        let segs = h.segment_count();
        let c = Curve::Hermite(h.clone());
        for (i, p) in h.control_points.iter().enumerate() {
            prop_assert!(c.evaluate(i as f64 / segs as f64).unwrap().distance(*p) <= 1e-12);
        }
    }

    #[test]
    fn helix_pitch_law(seed in any::<u64>(), t0 in 0.0f64..1.0, t1 in 0.0f64..1.0) {
        let Curve::Helix(h) = curve_of(BaseKind::Helix, seed) else { unreachable!() };
        let c = Curve::Helix(h);
        let dz = (c.evaluate(t1).unwrap() - c.evaluate(t0).unwrap()).dot(h.z_vector);
        let dtheta = (t1 - t0) * (h.end_angle - h.start_angle);
        prop_assert!((dz - h.pitch * dtheta / TAU).abs() <= 1e-12);
    }

    #[test]
    fn loop_area_rigid_motion_invariance(
        seed in any::<u64>(),
        axis in (-1.0f64..1.0, -1.0f64..1.0, 0.1f64..1.0),
        angle in 0.0f64..TAU,
        shift in (-50.0f64..50.0, -50.0f64..50.0, -50.0f64..50.0),
    ) {
        let GeometricBase::Loop(l) = GeometrySampler::new(seed).sample(BaseKind::CurveLoop) else { unreachable!() };
        let m = RigidMotion::from_axis_angle(
            Point3::new(axis.0, axis.1, axis.2),
            angle,
            Point3::new(shift.0, shift.1, shift.2),
        );
        let moved = l.transformed(&m);
        prop_assert!(close(l.area().unwrap(), moved.area().unwrap(), 1e-9));
    }

    #[test]
    fn length_additivity(seed in any::<u64>(), k in 0usize..6) {
        let c = curve_of(CURVE_KINDS[k], seed);
        let whole = c.length();
        prop_assert!(close(c.arc_length(0.0, 0.5) + c.arc_length(0.5, 1.0), whole, 1e-9));
    }

    #[test]
    fn scaling_laws(seed in any::<u64>(), k in 0usize..6, factor in 0.1f64..10.0) {
        let c = curve_of(CURVE_KINDS[k], seed);
        prop_assert!(close(c.scaled(factor).length(), factor * c.length(), 1e-9));
        let GeometricBase::Loop(l) = GeometrySampler::new(seed).sample(BaseKind::CurveLoop) else { unreachable!() };
        prop_assert!(close(l.scaled(factor).area().unwrap(), factor * factor * l.area().unwrap(), 1e-9));
    }
}
