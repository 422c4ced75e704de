//! Reader and writer for the enhanced BIM log: geometry strings, parameter
//! patches and the CSV event rows that carry them.

mod event;
mod geometry;
mod number;
mod params;

use alloc::string::String;

use crate::geom::GeomError;

pub use event::{
    format_event, parse_event, parse_event_fields, split_record, Command, EventError,
    EventErrorKind, LogEvent, COLUMNS, HEADER,
};
pub use geometry::{parse_geometry, serialize_geometry};
pub use number::{format_real, half_unit_in_last_digit, parse_real, quantize, SIGNIFICANT_DIGITS};
pub use params::{format_params, format_value, parse_params, ParamError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CodecError {
    #[error("byte {offset}: unknown geometry kind `{tag}`")]
    UnknownKind { offset: usize, tag: String },
    #[error("byte {offset}: {kind} takes {expected} fields, found {found}")]
    Arity {
        offset: usize,
        kind: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("byte {offset}: expected {expected}")]
    Syntax {
        offset: usize,
        expected: &'static str,
    },
    #[error("byte {offset}: invalid number `{text}`")]
    Number { offset: usize, text: String },
    #[error(transparent)]
    Invalid(#[from] GeomError),
}

/// Passes geometry through its text form, so the result holds exactly the
/// values a log reader would see.
pub fn canonicalize_geometry(
    g: &crate::geom::GeometricBase,
) -> Result<crate::geom::GeometricBase, CodecError> {
    parse_geometry(&serialize_geometry(g))
}

/// Rounds every real parameter to its logged precision.
pub fn canonicalize_params(p: &crate::params::ParamSet) -> crate::params::ParamSet {
    let mut out = p.clone();
    for (_, v) in out.iter_mut() {
        if let crate::params::ParamValue::Real(x) = v {
            *x = quantize(*x);
        }
    }
    out
}
