//! Length-unit conversion of logged values, and the metric/imperial round
//! trip through the log's text precision.

use alloc::vec::Vec;

use crate::codec::{canonicalize_geometry, quantize, CodecError, LogEvent};
use crate::geom::{GeometricBase, METERS_PER_FOOT};
use crate::model::is_length_param;
use crate::params::{ParamSet, ParamValue};

/// Scales geometry by `factor` and passes it through its text form.
pub fn convert_geometry(g: &GeometricBase, factor: f64) -> Result<GeometricBase, CodecError> {
    canonicalize_geometry(&g.scaled(factor)?)
}

/// Scales the real-valued length parameters by `factor`; every real is
/// rounded to logged precision.
pub fn convert_params(p: &ParamSet, factor: f64) -> ParamSet {
    let mut out = p.clone();
    for (name, v) in out.iter_mut() {
        if let ParamValue::Real(x) = v {
            let k = if is_length_param(name) { factor } else { 1.0 };
            *x = quantize(*x * k);
        }
    }
    out
}

/// One event with every length it carries multiplied by `factor`.
pub fn convert_event(e: &LogEvent, factor: f64) -> Result<LogEvent, CodecError> {
    Ok(LogEvent {
        geometry: e
            .geometry
            .as_ref()
            .map(|g| convert_geometry(g, factor))
            .transpose()?,
        params: convert_params(&e.params, factor),
        ..e.clone()
    })
}

pub fn convert_log(events: &[LogEvent], factor: f64) -> Result<Vec<LogEvent>, CodecError> {
    events.iter().map(|e| convert_event(e, factor)).collect()
}

/// Meters to feet and back, each leg written at logged precision.
pub fn unit_roundtrip(events: &[LogEvent]) -> Result<Vec<LogEvent>, CodecError> {
    events
        .iter()
        .map(|e| convert_event(&convert_event(e, 1.0 / METERS_PER_FOOT)?, METERS_PER_FOOT))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::Command;
    use crate::geom::{Curve, Point3};
    use crate::model::{Category, Subtype};

    #[test]
    fn feet_roundtrip_stays_close() {
        let e = LogEvent {
            seq: 1,
            command: Command::Added,
            element_id: 1001,
            category: Category::Wall,
            subtype: Subtype::RectWall,
            geometry: Some(
                Curve::line(Point3::new(12.3, 45.6, 0.0), Point3::new(17.9, 45.6, 3.0)).into(),
            ),
            params: ParamSet::new().with("Width", 0.25).with("SlopeAngle", 0.1),
            host_ref: None,
        };
        let back = &unit_roundtrip(core::slice::from_ref(&e)).unwrap()[0];
        let GeometricBase::Curve(Curve::Line(l)) = back.geometry.as_ref().unwrap() else {
            panic!()
        };
        assert!(l.end1.distance(Point3::new(12.3, 45.6, 0.0)) < 1e-6);
        let w = back.params.get("Width").unwrap().as_f64().unwrap();
        assert!((w - 0.25).abs() < 1e-9);
        assert_eq!(back.params.get("SlopeAngle"), e.params.get("SlopeAngle"));
        let feet = convert_event(&e, 1.0 / METERS_PER_FOOT).unwrap();
        let w = feet.params.get("Width").unwrap().as_f64().unwrap();
        assert_eq!(w, 0.820209974);
    }
}
