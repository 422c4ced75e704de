use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::geometry::{parse_geometry, serialize_geometry};
use super::params::{format_params, parse_params, ParamError};
use super::CodecError;
use crate::geom::GeometricBase;
use crate::model::{Category, ElementId, Subtype};
use crate::params::ParamSet;

/// Column order of every log row.
pub const COLUMNS: [&str; 8] = [
    "seq",
    "command",
    "element_id",
    "category",
    "subtype",
    "geometry",
    "params",
    "host_ref",
];

pub const HEADER: &str = "seq,command,element_id,category,subtype,geometry,params,host_ref";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Command {
    Added,
    Modified,
    Deleted,
}

impl Command {
    pub const ALL: [Command; 3] = [Command::Added, Command::Modified, Command::Deleted];

    pub fn token(self) -> &'static str {
        match self {
            Command::Added => "ADDED",
            Command::Modified => "MODIFIED",
            Command::Deleted => "DELETED",
        }
    }

    /// Case-sensitive.
    pub fn parse(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.token() == s)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// One row of the log.
#[derive(Debug, Clone, PartialEq)]
pub struct LogEvent {
    pub seq: u64,
    pub command: Command,
    /// Element id in the session that produced the log.
    pub element_id: ElementId,
    pub category: Category,
    pub subtype: Subtype,
    pub geometry: Option<GeometricBase>,
    pub params: ParamSet,
    pub host_ref: Option<ElementId>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EventErrorKind {
    #[error("expected 8 columns, found {found}")]
    ColumnCount { found: usize },
    #[error("malformed CSV quoting")]
    Quoting,
    #[error("`{0}` is not a positive integer")]
    Integer(String),
    #[error("seq {found} does not match row order {expected}")]
    SeqMismatch { found: u64, expected: u64 },
    #[error("unknown command `{0}` (expected ADDED, MODIFIED or DELETED)")]
    Command(String),
    #[error("unknown category `{0}`")]
    Category(String),
    #[error("unknown subtype `{0}`")]
    Subtype(String),
    #[error("{0}")]
    Geometry(CodecError),
    #[error("{0}")]
    Params(ParamError),
    #[error("invariant violated: {0}")]
    Invariant(&'static str),
}

/// A row that could not be read or written, with the offending column.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct EventError {
    pub row: u64,
    pub column: Option<&'static str>,
    pub kind: EventErrorKind,
}

impl fmt::Display for EventError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.column {
            Some(c) => write!(f, "row {}, column `{}`: {}", self.row, c, self.kind),
            None => write!(f, "row {}: {}", self.row, self.kind),
        }
    }
}

impl LogEvent {
    fn invariant(&self, column: &'static str, rule: &'static str) -> Result<(), EventError> {
        Err(EventError {
            row: self.seq,
            column: Some(column),
            kind: EventErrorKind::Invariant(rule),
        })
    }

    /// Per-command payload rules.
    pub fn validate(&self) -> Result<(), EventError> {
        if self.seq == 0 {
            return self.invariant("seq", "seq starts at 1");
        }
        if self.element_id == 0 {
            return self.invariant("element_id", "element ids are positive");
        }
        if !self.subtype.belongs_to(self.category) {
            return self.invariant("subtype", "subtype must belong to the category");
        }
        match self.command {
            Command::Added => {
                if self.geometry.is_none() {
                    return self.invariant("geometry", "ADDED carries geometry");
                }
                if self.category.is_hosted() && self.host_ref.is_none() {
                    return self.invariant("host_ref", "windows and doors need a host");
                }
                if !self.category.is_hosted() && self.host_ref.is_some() {
                    return self.invariant("host_ref", "only windows and doors have a host");
                }
            }
            Command::Modified => {
                if self.geometry.is_none() && self.params.is_empty() {
                    return self.invariant("params", "MODIFIED changes geometry or params");
                }
                if self.host_ref.is_some() {
                    return self.invariant("host_ref", "MODIFIED cannot change the host");
                }
            }
            Command::Deleted => {
                if self.geometry.is_some() {
                    return self.invariant("geometry", "DELETED has no geometry");
                }
                if !self.params.is_empty() {
                    return self.invariant("params", "DELETED has no params");
                }
                if self.host_ref.is_some() {
                    return self.invariant("host_ref", "DELETED has no host");
                }
            }
        }
        Ok(())
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        if ch == '"' {
            out.push('"');
        }
        out.push(ch);
    }
    out.push('"');
    out
}

/// One CSV record (no line terminator). Geometry and params are quoted
/// whenever they are non-empty.
pub fn format_event(e: &LogEvent) -> Result<String, EventError> {
    e.validate()?;
    let geometry = e
        .geometry
        .as_ref()
        .map(|g| quote(&serialize_geometry(g)))
        .unwrap_or_default();
    let params = format_params(&e.params).map_err(|err| EventError {
        row: e.seq,
        column: Some("params"),
        kind: EventErrorKind::Params(err),
    })?;
    let params = if params.is_empty() {
        params
    } else {
        quote(&params)
    };
    let host = e.host_ref.map(|h| h.to_string()).unwrap_or_default();
    Ok(alloc::format!(
        "{},{},{},{},{},{},{},{}",
        e.seq,
        e.command,
        e.element_id,
        e.category,
        e.subtype,
        geometry,
        params,
        host
    ))
}

/// Splits one RFC 4180 record into unquoted field values.
pub fn split_record(record: &str) -> Result<Vec<String>, EventErrorKind> {
    let record = record.strip_suffix('\n').unwrap_or(record);
    let record = record.strip_suffix('\r').unwrap_or(record);
    let mut fields = Vec::new();
    let mut chars = record.chars().peekable();
    loop {
        let mut field = String::new();
        if chars.peek() == Some(&'"') {
            chars.next();
            loop {
                match chars.next() {
                    Some('"') if chars.peek() == Some(&'"') => {
                        chars.next();
                        field.push('"');
                    }
                    Some('"') => break,
                    Some(c) => field.push(c),
                    None => return Err(EventErrorKind::Quoting),
                }
            }
            match chars.next() {
                None => {
                    fields.push(field);
                    return Ok(fields);
                }
                Some(',') => fields.push(field),
                Some(_) => return Err(EventErrorKind::Quoting),
            }
        } else {
            loop {
                match chars.next() {
                    None => {
                        fields.push(field);
                        return Ok(fields);
                    }
                    Some(',') => break,
                    Some('"') => return Err(EventErrorKind::Quoting),
                    Some(c) => field.push(c),
                }
            }
            fields.push(field);
        }
    }
}

/// Parses one record; `seq` is the row's position among data rows.
pub fn parse_event(record: &str, seq: u64) -> Result<LogEvent, EventError> {
    let fields = split_record(record).map_err(|kind| EventError {
        row: seq,
        column: None,
        kind,
    })?;
    let refs: Vec<&str> = fields.iter().map(String::as_str).collect();
    parse_event_fields(&refs, seq)
}

fn positive(s: &str) -> Result<u64, EventErrorKind> {
    match s.trim().parse::<u64>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(EventErrorKind::Integer(s.to_string())),
    }
}

/// Builds an event from already-split fields.
pub fn parse_event_fields(fields: &[&str], seq: u64) -> Result<LogEvent, EventError> {
    let err = |column: Option<&'static str>, kind| EventError {
        row: seq,
        column,
        kind,
    };
    if fields.len() != COLUMNS.len() {
        return Err(err(
            COLUMNS.get(fields.len()).copied(),
            EventErrorKind::ColumnCount {
                found: fields.len(),
            },
        ));
    }
    let col = |i: usize| Some(COLUMNS[i]);

    let written = positive(fields[0]).map_err(|k| err(col(0), k))?;
    if written != seq {
        return Err(err(
            col(0),
            EventErrorKind::SeqMismatch {
                found: written,
                expected: seq,
            },
        ));
    }
    let command = Command::parse(fields[1].trim())
        .ok_or_else(|| err(col(1), EventErrorKind::Command(fields[1].into())))?;
    let element_id = positive(fields[2]).map_err(|k| err(col(2), k))?;
    let category = Category::parse(fields[3].trim())
        .ok_or_else(|| err(col(3), EventErrorKind::Category(fields[3].into())))?;
    let subtype = Subtype::parse(fields[4].trim())
        .ok_or_else(|| err(col(4), EventErrorKind::Subtype(fields[4].into())))?;
    let geometry = if fields[5].trim().is_empty() {
        None
    } else {
        Some(parse_geometry(fields[5]).map_err(|e| err(col(5), EventErrorKind::Geometry(e)))?)
    };
    let params = parse_params(fields[6]).map_err(|e| err(col(6), EventErrorKind::Params(e)))?;
    let host_ref = if fields[7].trim().is_empty() {
        None
    } else {
        Some(positive(fields[7]).map_err(|k| err(col(7), k))?)
    };

    let event = LogEvent {
        seq,
        command,
        element_id,
        category,
        subtype,
        geometry,
        params,
        host_ref,
    };
    event.validate()?;
    Ok(event)
}
