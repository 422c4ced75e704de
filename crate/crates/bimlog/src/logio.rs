//! Reading and writing enhanced BIM log CSV files.

use std::fmt;
use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::Path;

use bimlog_core::codec::{format_event, parse_event_fields, EventError, LogEvent, COLUMNS, HEADER};

/// A row that could not be read, located by row number (data rows counted
/// from 1) and physical line.
#[derive(Debug, Clone, PartialEq)]
pub struct RowDiagnostic {
    pub line: u64,
    pub error: EventError,
}

impl fmt::Display for RowDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.error)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReadError {
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    /// First bad row, in strict mode.
    #[error("{0}")]
    Row(RowDiagnostic),
}

/// Parsed rows plus the rows that were skipped.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReadLog {
    pub events: Vec<LogEvent>,
    pub diagnostics: Vec<RowDiagnostic>,
}

/// Reads a log. The header line is optional. With `strict`, the first bad
/// row is returned as an error; otherwise bad rows are skipped and
/// reported.
pub fn read_log<R: Read>(reader: R, strict: bool) -> Result<ReadLog, ReadError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut out = ReadLog::default();
    let mut row = 0u64;
    let mut record = csv::StringRecord::new();
    let mut first = true;
    while rdr.read_record(&mut record)? {
        let line = record.position().map_or(0, |p| p.line());
        if std::mem::take(&mut first) && record.iter().eq(COLUMNS.iter().copied()) {
            continue;
        }
        row += 1;
        let fields: Vec<&str> = record.iter().collect();
        match parse_event_fields(&fields, row) {
            Ok(e) => out.events.push(e),
            Err(error) => {
                let d = RowDiagnostic { line, error };
                if strict {
                    return Err(ReadError::Row(d));
                }
                out.diagnostics.push(d);
            }
        }
    }
    Ok(out)
}

pub fn read_log_file(path: &Path, strict: bool) -> Result<ReadLog, ReadError> {
    read_log(BufReader::new(File::open(path)?), strict)
}

/// Writes the header and one LF-terminated row per event.
pub fn write_log<W: Write>(mut w: W, events: &[LogEvent]) -> io::Result<()> {
    writeln!(w, "{HEADER}")?;
    for e in events {
        let row = format_event(e)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))?;
        writeln!(w, "{row}")?;
    }
    w.flush()
}

pub fn log_to_string(events: &[LogEvent]) -> io::Result<String> {
    let mut buf = Vec::new();
    write_log(&mut buf, events)?;
    Ok(String::from_utf8(buf).expect("rows are UTF-8"))
}
