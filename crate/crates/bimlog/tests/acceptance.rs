//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p bimlog --test acceptance`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bimlog::cli::{run_from, ExitStatus};
use bimlog::dump::{dump_model, load_model};
use bimlog::logio::{log_to_string, read_log};
use bimlog_core::codec::{half_unit_in_last_digit, parse_geometry, serialize_geometry};
use bimlog_core::diff::{diff_models, DiffReport};
use bimlog_core::geom::{
    Arc, Curve, CurveLoop, CylindricalHelix, GeometricBase, NurbsSpline, Point3,
};
use bimlog_core::model::{Category, ModelState, Subtype};
use bimlog_core::params::ParamSet;
use bimlog_core::replay::{replay_log, ReplayMode};
use bimlog_core::sim::{
    churn_for, random_scenario, run_scenario, BaseKind, GeometrySampler, BENCHMARK_COUNTS,
    BENCHMARK_EVENTS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cli(args: &[&str]) -> (ExitStatus, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut full = vec!["bimlog"];
    full.extend_from_slice(args);
    let status = run_from(full, &mut out, &mut err);
    (
        status,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn all_zero(r: &DiffReport) -> bool {
    r.fully_matched()
        && r.categories.iter().chain([&r.total]).all(|s| {
            s.avg_distance == 0.0 && s.avg_volume_diff_pct == 0.0 && s.volume_excluded == 0
        })
}

// 1 -------------------------------------------------------------------------

/// Numeric fields in declaration order, read off the shortest round-trip
/// `Debug` form. Integer fields and type-name digits show up on both sides
/// identically.
fn reals(g: &GeometricBase) -> Vec<f64> {
    format!("{g:?}")
        .split(|c: char| !(c.is_ascii_digit() || matches!(c, '.' | '-' | 'e' | 'E' | '+')))
        .filter(|t| t.chars().any(|c| c.is_ascii_digit()))
        .map(|t| t.parse::<f64>().unwrap())
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut sampler = GeometrySampler::new(1);
    let mut checked = 0usize;
    for kind in BaseKind::ALL {
        for _ in 0..1000 {
            let g = sampler.sample(kind);
            let back =
                parse_geometry(&serialize_geometry(&g)).map_err(|e| format!("{kind:?}: {e}"))?;
            let (a, b) = (reals(&g), reals(&back));
            check(a.len() == b.len(), format!("{kind:?}: field count changed"))?;
            for (x, y) in a.iter().zip(&b) {
                let bound = half_unit_in_last_digit(*x) + f64::EPSILON * x.abs();
                check(
                    (x - y).abs() <= bound,
                    format!("{kind:?}: {x} came back as {y}"),
                )?;
                checked += 1;
            }
        }
    }
    let geometry = include_str!("../../core/tests/data/geometry_golden.txt");
    let mut golden = 0;
    for line in geometry.lines().filter(|l| !l.is_empty()) {
        let g = parse_geometry(line).map_err(|e| format!("golden `{line}`: {e}"))?;
        check(
            serialize_geometry(&g) == line,
            format!("golden `{line}` changed"),
        )?;
        golden += 1;
    }
    let log = include_str!("data/golden.csv");
    let events = read_log(log.as_bytes(), true)
        .map_err(|e| e.to_string())?
        .events;
    check(
        log_to_string(&events).unwrap() == log,
        "golden log changed on rewrite",
    )?;
    let elapsed = start.elapsed();
    check(
        elapsed < Duration::from_secs(5),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "9x1000 bases, {checked} reals within half a unit in the 9th digit; {golden} golden geometries and {} golden rows byte-stable; {elapsed:.2?}",
        events.len()
    ))
}

// 2 -------------------------------------------------------------------------

fn de_boor(s: &NurbsSpline, u: f64) -> Point3 {
    let (p, n) = (s.degree, s.control_points.len());
    let mut k = p;
    while k + 1 < n && s.knots[k + 1] <= u {
        k += 1;
    }
    let mut d: Vec<[f64; 4]> = (0..=p)
        .map(|j| {
            let i = j + k - p;
            let (c, w) = (s.control_points[i], s.weights[i]);
            [c.x * w, c.y * w, c.z * w, w]
        })
        .collect();
    for r in 1..=p {
        for j in (r..=p).rev() {
            let i = j + k - p;
            let den = s.knots[i + p + 1 - r] - s.knots[i];
            let a = if den == 0.0 {
                0.0
            } else {
                (u - s.knots[i]) / den
            };
            for c in 0..4 {
                d[j][c] = (1.0 - a) * d[j - 1][c] + a * d[j][c];
            }
        }
    }
    let h = d[p];
    Point3::new(h[0] / h[3], h[1] / h[3], h[2] / h[3])
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let degree = rng.random_range(1..=4);
        let n = degree + 1 + rng.random_range(0..5);
        let mut inner: Vec<f64> = (0..n - degree - 1)
            .map(|_| rng.random_range(0.0..1.0))
            .collect();
        inner.sort_by(f64::total_cmp);
        let mut knots = vec![0.0; degree + 1];
        knots.extend(inner);
        knots.extend(std::iter::repeat_n(1.0, degree + 1));
        let s = NurbsSpline {
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
        };
        let c = Curve::Nurbs(s.clone());
        for j in 0..=20 {
            let t = j as f64 / 20.0;
            worst = worst.max(c.evaluate(t).unwrap().distance(de_boor(&s, t)));
        }
    }
    check(worst <= 1e-12, format!("NURBS vs de Boor off by {worst:e}"))?;

    let quarter = Curve::Nurbs(NurbsSpline {
        degree: 2,
        knots: vec![0.0, 0.0, 0.0, 1.0, 1.0, 1.0],
        control_points: vec![Point3::X, Point3::new(1.0, 1.0, 0.0), Point3::Y],
        weights: vec![1.0, FRAC_1_SQRT_2, 1.0],
    });
    let radial = (0..=100)
        .map(|j| (quarter.evaluate(j as f64 / 100.0).unwrap().norm() - 1.0).abs())
        .fold(0.0, f64::max);
    check(
        radial <= 1e-12,
        format!("quarter circle leaves the unit circle by {radial:e}"),
    )?;

    let arc = Curve::Arc(Arc::new(Point3::ORIGIN, 3.0, 0.25, 2.0));
    let arc_err = (arc.length() - 3.0 * 1.75).abs() / (3.0 * 1.75);
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
    let helix_err = (helix.length() - want).abs() / want;
    check(
        arc_err <= 1e-9 && helix_err <= 1e-9,
        format!("lengths off: arc {arc_err:e}, helix {helix_err:e}"),
    )?;

    let circle = CurveLoop::new(vec![
        Curve::Arc(Arc::new(Point3::ORIGIN, 1.0, 0.0, PI)),
        Curve::Arc(Arc::new(Point3::ORIGIN, 1.0, PI, TAU)),
    ]);
    let area_err = (circle.area().unwrap() - PI).abs();
    check(area_err <= 1e-6, format!("circle area off by {area_err:e}"))?;
    Ok(format!(
        "de Boor max {worst:.1e}; quarter circle {radial:.1e}; arc {arc_err:.1e}, helix {helix_err:.1e} rel; circle area {area_err:.1e}"
    ))
}

// 3 -------------------------------------------------------------------------

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let counts = [12, 3, 4, 4, 6];
    let mut events_total = 0;
    for seed in 1..=50 {
        let steps = random_scenario(seed, counts, 0.5).map_err(|e| e.to_string())?;
        let (events, truth) = run_scenario(&steps).map_err(|e| e.to_string())?;
        let (replayed, _) =
            replay_log(&events, ReplayMode::Strict).map_err(|e| format!("seed {seed}: {e}"))?;
        check(
            all_zero(&diff_models(&truth, &replayed)),
            format!("seed {seed}: nonzero diff"),
        )?;
        events_total += events.len();
    }
    let elapsed = start.elapsed();
    check(
        elapsed < Duration::from_secs(30),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "50 sessions, {events_total} events, all-zero reports with full matching; {elapsed:.2?}"
    ))
}

// 4 -------------------------------------------------------------------------

fn criterion_4() -> Outcome {
    let churn = churn_for(BENCHMARK_COUNTS, BENCHMARK_EVENTS);
    let (events, truth) =
        run_scenario(&random_scenario(1, BENCHMARK_COUNTS, churn).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    let n = events.len();
    let off = (n as f64 - BENCHMARK_EVENTS as f64).abs() / BENCHMARK_EVENTS as f64;
    check(off <= 0.10, format!("{n} events"))?;
    let text = log_to_string(&events).unwrap();

    // Best of three: parse the CSV and replay it.
    let mut best = Duration::MAX;
    let mut result = None;
    for _ in 0..3 {
        let t = Instant::now();
        let read = read_log(text.as_bytes(), true).map_err(|e| e.to_string())?;
        let replayed = replay_log(&read.events, ReplayMode::Strict).map_err(|e| e.to_string())?;
        best = best.min(t.elapsed());
        result = Some(replayed);
    }
    let (replayed, report) = result.unwrap();
    check(report.warnings.is_empty(), "diagnostics during replay")?;
    let counts = Category::ALL.map(|c| replayed.count(c));
    check(
        counts == BENCHMARK_COUNTS,
        format!("final counts {counts:?}"),
    )?;
    check(all_zero(&diff_models(&truth, &replayed)), "nonzero diff")?;
    let rate = n as f64 / best.as_secs_f64();
    check(rate >= 10_000.0, format!("{rate:.0} events/s"))?;
    Ok(format!(
        "{n} events, counts {counts:?}, zero diagnostics, zero diff, {rate:.0} events/s"
    ))
}

// 5 -------------------------------------------------------------------------

fn criterion_5() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("session.csv");
    let truth = dir.path().join("truth.json");
    let converted = dir.path().join("converted.json");
    let (s, _, e) = cli(&["synth", "--seed", "5", "-o", p(&log), "--truth", p(&truth)]);
    check(s == ExitStatus::Success, format!("synth: {e}"))?;
    let (s, _, e) = cli(&[
        "replay",
        p(&log),
        "--unit-roundtrip",
        "--strict",
        "-o",
        p(&converted),
    ]);
    check(s == ExitStatus::Success, format!("replay: {e}"))?;
    let original = load_model(&fs::read_to_string(&truth).unwrap()).map_err(|e| e.to_string())?;
    let reproduced =
        load_model(&fs::read_to_string(&converted).unwrap()).map_err(|e| e.to_string())?;
    let r = diff_models(&original, &reproduced);
    check(r.fully_matched(), "unmatched elements")?;
    let mut parts = Vec::new();
    for s in &r.categories {
        let name = s.category.unwrap().name();
        check(
            s.avg_distance <= 1e-6,
            format!("{name} avg_distance {:e}", s.avg_distance),
        )?;
        check(
            s.avg_volume_diff_pct <= 0.19,
            format!("{name} avg_volume_diff_pct {}", s.avg_volume_diff_pct),
        )?;
        parts.push(format!(
            "{name} {:.2e}/{:.1e}%",
            s.avg_distance, s.avg_volume_diff_pct
        ));
    }
    Ok(format!(
        "distance/volume per category: {}",
        parts.join(", ")
    ))
}

// 6 -------------------------------------------------------------------------

fn criterion_6() -> Outcome {
    let wall = |width: f64| -> ModelState {
        let mut m = ModelState::with_first_id(1001);
        m.add_element(
            Category::Wall,
            Subtype::RectWall,
            Curve::line(Point3::new(10.0, 10.0, 0.0), Point3::new(17.5, 10.0, 0.0)).into(),
            &ParamSet::new().with("Height", 3.0).with("Width", width),
            None,
        )
        .unwrap();
        m
    };
    let original = wall(0.2);
    // Same element, replayed under a matching Comments value.
    let mut reproduced = wall(0.2 * 1.001876);
    reproduced
        .patch_element(1001, None, &ParamSet::new().with("Comments", "1001"))
        .unwrap();
    let r = diff_models(&original, &reproduced);
    let pct = r.category(Category::Wall).avg_volume_diff_pct;
    check(
        (pct - 0.1876).abs() <= 1e-9,
        format!("wall avg_volume_diff_pct {pct}"),
    )?;
    Ok(format!("wall avg_volume_diff_pct = {pct:.12}%"))
}

// 7 -------------------------------------------------------------------------

fn criterion_7() -> Outcome {
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/robustness.csv");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.json");
    let (s, _, err) = cli(&["replay", fixture, "--lenient", "-o", p(&out)]);
    check(
        s == ExitStatus::Diagnostics,
        format!("lenient status {s:?}"),
    )?;
    for needle in [
        "row 2 (seq 2, MODIFIED 9999): dangling",
        "row 3 (seq 3, ADDED 2001): duplicate original ID",
        "row 4 (seq 4, DELETED 8888): dangling",
        "row 5, column `subtype`",
        "row 7, column `command`",
    ] {
        check(
            err.contains(needle),
            format!("missing diagnostic `{needle}`"),
        )?;
    }
    check(out.exists(), "lenient replay wrote no model")?;

    let strict_out = dir.path().join("strict.json");
    let (s, _, err) = cli(&["replay", fixture, "--strict", "-o", p(&strict_out)]);
    check(s == ExitStatus::InputError, format!("strict status {s:?}"))?;
    check(
        err.lines().count() == 1 && err.contains("row 2 "),
        format!("strict output: {err}"),
    )?;
    check(!strict_out.exists(), "strict abort still wrote a model")?;
    let (s, _, _) = cli(&["validate", fixture]);
    check(
        s == ExitStatus::Diagnostics,
        format!("validate status {s:?}"),
    )?;
    Ok(
        "5 row-numbered diagnostics and status 1 when lenient; strict stops at row 2 with status 2"
            .into(),
    )
}

// 8 -------------------------------------------------------------------------

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let read = |name: &str| fs::read(d.join(name)).unwrap();
    for (log, truth) in [("a.csv", "a.json"), ("b.csv", "b.json")] {
        let (s, _, e) = cli(&[
            "synth",
            "--seed",
            "8",
            "-o",
            p(&d.join(log)),
            "--truth",
            p(&d.join(truth)),
        ]);
        check(s == ExitStatus::Success, e)?;
    }
    check(
        read("a.csv") == read("b.csv") && read("a.json") == read("b.json"),
        "synth output differs",
    )?;
    for out in ["r1.json", "r2.json"] {
        let (s, _, e) = cli(&["replay", p(&d.join("a.csv")), "-o", p(&d.join(out))]);
        check(s == ExitStatus::Success, e)?;
    }
    check(read("r1.json") == read("r2.json"), "replay dumps differ")?;
    let model =
        load_model(&String::from_utf8(read("r1.json")).unwrap()).map_err(|e| e.to_string())?;
    check(
        dump_model(&model).unwrap().into_bytes() == read("r1.json"),
        "dump does not reload to itself",
    )?;
    Ok(format!(
        "synth log {} bytes and dumps byte-identical across runs",
        read("a.csv").len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("codec round trip", criterion_1),
        ("geometry oracles", criterion_2),
        ("zero-diff pipeline", criterion_3),
        ("benchmark-scale session", criterion_4),
        ("unit conversion", criterion_5),
        ("constructed volume", criterion_6),
        ("robustness", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
