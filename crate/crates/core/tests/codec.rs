use bimlog_core::codec::{
    canonicalize_geometry, canonicalize_params, format_event, format_params, format_real,
    half_unit_in_last_digit, parse_event, parse_geometry, parse_params, parse_real, quantize,
    serialize_geometry, Command, LogEvent,
};
use bimlog_core::geom::{Curve, GeometricBase, Point3};
use bimlog_core::model::{Category, Subtype};
use bimlog_core::params::{ParamSet, ParamValue};
use bimlog_core::sim::{BaseKind, GeometrySampler};
use proptest::prelude::*;

fn push_pt(out: &mut Vec<f64>, p: Point3) {
    out.extend([p.x, p.y, p.z]);
}

fn curve_reals(c: &Curve, out: &mut Vec<f64>) {
    match c {
        Curve::Line(l) => {
            push_pt(out, l.end1);
            push_pt(out, l.end2);
        }
        Curve::Arc(a) => {
            push_pt(out, a.center());
            out.extend([a.radius, a.start_angle, a.end_angle]);
        }
        Curve::Helix(h) => {
            push_pt(out, h.base);
            push_pt(out, h.x_vector);
            push_pt(out, h.z_vector);
            out.extend([h.radius, h.pitch, h.start_angle, h.end_angle]);
        }
        Curve::Ellipse(e) => {
            push_pt(out, e.center);
            push_pt(out, e.x_axis);
            push_pt(out, e.y_axis);
            out.extend([e.x_radius, e.y_radius, e.start_param, e.end_param]);
        }
        Curve::Nurbs(n) => {
            out.push(n.degree as f64);
            out.extend(&n.knots);
            n.control_points.iter().for_each(|&p| push_pt(out, p));
            out.extend(&n.weights);
        }
        Curve::Hermite(h) => {
            out.push(h.periodic as u8 as f64);
            h.control_points.iter().for_each(|&p| push_pt(out, p));
            for t in h.tangents.iter().flatten() {
                push_pt(out, *t);
            }
        }
    }
}

/// Every real that defines `g`, in a fixed order.
fn reals(g: &GeometricBase) -> Vec<f64> {
    let mut out = Vec::new();
    match g {
        GeometricBase::Point(p) => push_pt(&mut out, *p),
        GeometricBase::Curve(c) => curve_reals(c, &mut out),
        GeometricBase::Loop(l) => l.curves.iter().for_each(|c| curve_reals(c, &mut out)),
        GeometricBase::Profile(p) => {
            for l in &p.loops {
                out.push(l.curves.len() as f64);
                l.curves.iter().for_each(|c| curve_reals(c, &mut out));
            }
        }
    }
    out
}

/// Within half a unit in the ninth digit, plus the final binary rounding.
fn within_half_unit(original: f64, parsed: f64) -> bool {
    (parsed - original).abs() <= half_unit_in_last_digit(original) + f64::EPSILON * original.abs()
}

#[test]
fn golden_geometry_corpus_is_byte_stable() {
    let corpus = include_str!("data/geometry_golden.txt");
    let mut n = 0;
    for line in corpus.lines().filter(|l| !l.is_empty()) {
        let g = parse_geometry(line).unwrap_or_else(|e| panic!("{line}: {e}"));
        assert_eq!(serialize_geometry(&g), line);
        n += 1;
    }
    assert!(n >= 20);
}

#[test]
fn kind_tag_comes_first_and_is_distinct() {
    let mut g = GeometrySampler::new(1);
    let tags: Vec<String> = BaseKind::ALL
        .iter()
        .map(|&k| {
            let text = serialize_geometry(&g.sample(k));
            match text.chars().next().unwrap() {
                '(' => "Point".into(),
                '[' | '{' => text[1..].split(',').next().unwrap().to_string(),
                _ => text.split(',').next().unwrap().to_string(),
            }
        })
        .collect();
    let mut unique = tags.clone();
    unique.sort();
    unique.dedup();
    assert_eq!(unique.len(), tags.len(), "{tags:?}");
}

fn param_value() -> impl Strategy<Value = ParamValue> {
    prop_oneof![
        (-1e9f64..1e9).prop_map(ParamValue::Real),
        any::<i64>().prop_map(ParamValue::Integer),
        ".{0,12}".prop_map(ParamValue::Text),
        any::<bool>().prop_map(ParamValue::Flag),
        (1u64..u64::MAX).prop_map(ParamValue::Element),
    ]
}

fn param_set() -> impl Strategy<Value = ParamSet> {
    proptest::collection::btree_map("[A-Za-z_][A-Za-z0-9_]{0,8}", param_value(), 0..6)
        .prop_map(|m| m.into_iter().collect())
}

fn valid_event() -> impl Strategy<Value = LogEvent> {
    (
        1u64..10_000,
        0usize..3,
        1u64..1_000_000,
        0usize..7,
        any::<u64>(),
        param_set(),
        any::<bool>(),
        1u64..1_000_000,
    )
        .prop_map(|(seq, cmd, id, sub, seed, params, with_geom, host)| {
            let subtype = Subtype::ALL[sub];
            let category = *Category::ALL
                .iter()
                .find(|c| subtype.belongs_to(**c))
                .unwrap();
            let mut g = GeometrySampler::new(seed);
            let geometry = match subtype {
                Subtype::RectWall => g.location_curve().into(),
                Subtype::ProfileWall => g.wall_profile().into(),
                Subtype::FlatFloor | Subtype::SlopedFloor => g.floor_loop().into(),
                Subtype::HostedInstance | Subtype::FreeColumn => g.site_point().into(),
                Subtype::SlantedColumn => g.slanted_axis().into(),
            };
            let command = [Command::Added, Command::Modified, Command::Deleted][cmd];
            let mut e = LogEvent {
                seq,
                command,
                element_id: id,
                category,
                subtype,
                geometry: None,
                params: ParamSet::new(),
                host_ref: None,
            };
            match command {
                Command::Added => {
                    e.geometry = Some(geometry);
                    e.params = params;
                    e.host_ref = category.is_hosted().then_some(host);
                }
                Command::Modified => {
                    if with_geom || params.is_empty() {
                        e.geometry = Some(geometry);
                    }
                    e.params = params;
                }
                Command::Deleted => {}
            }
            e
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn geometry_value_roundtrip(seed in any::<u64>(), k in 0usize..9, scale in -3i32..4) {
        let g = GeometrySampler::new(seed).sample(BaseKind::ALL[k]);
        let g = g.scaled(10f64.powi(scale)).unwrap();
        let text = serialize_geometry(&g);
        let back = parse_geometry(&text).unwrap();
        let (a, b) = (reals(&g), reals(&back));
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!(within_half_unit(*x, *y), "{} -> {}", x, y);
        }
        prop_assert_eq!(serialize_geometry(&back), text);
    }

    #[test]
    fn real_format_roundtrip(x in prop_oneof![any::<f64>().prop_filter("finite", |x| x.is_finite()), -1e6f64..1e6]) {
        let text = format_real(x);
        let back = parse_real(&text).unwrap();
        prop_assert_eq!(back, quantize(x));
        prop_assert!(within_half_unit(x, back));
        prop_assert_eq!(format_real(back), text.clone());
        let digits = text.trim_start_matches('-').replace('.', "");
        prop_assert!(digits.trim_start_matches('0').trim_end_matches('0').len() <= 9 || text.contains('e'));
    }

    #[test]
    fn params_roundtrip(p in param_set()) {
        let text = format_params(&p).unwrap();
        prop_assert_eq!(parse_params(&text).unwrap(), canonicalize_params(&p));
    }

    #[test]
    fn event_roundtrip(e in valid_event()) {
        let row = format_event(&e).unwrap();
        let back = parse_event(&row, e.seq).unwrap();
        let want = LogEvent {
            geometry: e.geometry.as_ref().map(|g| canonicalize_geometry(g).unwrap()),
            params: canonicalize_params(&e.params),
            ..e.clone()
        };
        prop_assert_eq!(&back, &want);
        prop_assert_eq!(format_event(&back).unwrap(), row);
    }

    #[test]
    fn distinct_variants_serialize_differently(s1 in any::<u64>(), s2 in any::<u64>(), k1 in 0usize..9, k2 in 0usize..9) {
        prop_assume!(k1 != k2);
        let a = serialize_geometry(&GeometrySampler::new(s1).sample(BaseKind::ALL[k1]));
        let b = serialize_geometry(&GeometrySampler::new(s2).sample(BaseKind::ALL[k2]));
        prop_assert_ne!(a, b);
    }
}
