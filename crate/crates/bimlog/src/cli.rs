//! Command-line interface.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use bimlog_core::codec::LogEvent;
use bimlog_core::diff::diff_models;
use bimlog_core::geom::METERS_PER_FOOT;
use bimlog_core::model::{Category, ModelState};
use bimlog_core::replay::{replay_log, ReplayMode, ReplayReport};
use bimlog_core::sim::{
    churn_for, random_scenario, run_scenario, BENCHMARK_COUNTS, BENCHMARK_EVENTS,
};
use bimlog_core::units::{convert_log, unit_roundtrip};

use crate::dump::{dump_model, load_model};
use crate::logio::{read_log_file, write_log, ReadError, ReadLog};
use crate::{report, scenario};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    /// Finished, but some rows or events were skipped.
    Diagnostics = 1,
    /// Unreadable or malformed input, or a strict-mode abort.
    InputError = 2,
    /// A consistency check on the library's own output failed.
    Internal = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "bimlog",
    version,
    about = "Replay, compare and synthesize enhanced BIM authoring logs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rebuild a model from a log and write its canonical JSON dump.
    Replay(ReplayArgs),
    /// Compare two model dumps.
    Diff(DiffArgs),
    /// Record a scripted or random session: writes the log and the ground-truth dump.
    Synth(SynthArgs),
    /// Check every row and dry-run the replay.
    Validate(ValidateArgs),
    /// Convert the lengths in a log between meters and feet.
    Convert(ConvertArgs),
}

#[derive(Debug, Args)]
pub struct ModeArgs {
    /// Stop at the first bad row or event.
    #[arg(long, conflicts_with = "lenient")]
    pub strict: bool,
    /// Skip bad rows and events, reporting each (default).
    #[arg(long)]
    pub lenient: bool,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub log: PathBuf,
    /// Model dump to write.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub mode: ModeArgs,
    /// Convert to feet and back through the log text before replaying.
    #[arg(long)]
    pub unit_roundtrip: bool,
}

#[derive(Debug, Args)]
pub struct DiffArgs {
    pub original: PathBuf,
    pub reproduced: PathBuf,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Net counts: walls,floors,windows,doors,columns.
    #[arg(long, value_parser = parse_counts, default_value = "97,8,8,19,27")]
    pub counts: [usize; 5],
    /// Share of the events spent on modifications and transient elements,
    /// in [0, 1). Defaults to the value that gives about 2836 events for
    /// the default counts.
    #[arg(long, allow_hyphen_values = true)]
    pub churn: Option<f64>,
    /// Log file to write.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Ground-truth dump; defaults to the log path with `.truth.json`.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Run this scenario file instead of a random session.
    #[arg(long, conflicts_with_all = ["seed", "counts", "churn"])]
    pub scenario: Option<PathBuf>,
    /// Also write the steps as a scenario file.
    #[arg(long)]
    pub emit_scenario: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub log: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Unit {
    Meters,
    Feet,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    pub log: PathBuf,
    #[arg(long, value_enum, default_value = "meters")]
    pub from: Unit,
    #[arg(long, value_enum)]
    pub to: Unit,
    #[arg(short, long)]
    pub output: PathBuf,
}

fn parse_counts(s: &str) -> Result<[usize; 5], String> {
    let v: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    v.try_into()
        .map_err(|v: Vec<usize>| format!("expected 5 counts, got {}", v.len()))
}

/// Parses `args` (program name first) and runs the command.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitStatus::Success
                }
                _ => ExitStatus::InputError,
            }
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus {
    let result = match cli.command {
        Command::Replay(a) => cmd_replay(&a, out, err),
        Command::Diff(a) => cmd_diff(&a, out),
        Command::Synth(a) => cmd_synth(&a, out),
        Command::Validate(a) => cmd_validate(&a, out, err),
        Command::Convert(a) => cmd_convert(&a, err),
    };
    match result {
        Ok(s) => s,
        Err(Failure(status, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            status
        }
    }
}

struct Failure(ExitStatus, String);

type CmdResult = Result<ExitStatus, Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure(ExitStatus::InputError, e.to_string())
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn read_events(path: &Path, strict: bool) -> Result<ReadLog, Failure> {
    read_log_file(path, strict).map_err(|e| match e {
        ReadError::Io(e) => input(format!("{}: {e}", path.display())),
        e => input(e),
    })
}

fn print_summary(out: &mut dyn Write, r: &ReplayReport) {
    let _ = writeln!(
        out,
        "applied {} events ({} added, {} modified, {} deleted, {} cascaded); {} skipped",
        r.events_applied,
        r.added,
        r.modified,
        r.deleted,
        r.cascaded,
        r.warnings.len()
    );
    let counts: Vec<String> = Category::ALL
        .iter()
        .map(|&c| format!("{}={}", c.name(), r.final_count(c)))
        .collect();
    let _ = writeln!(out, "final counts: {}", counts.join(" "));
}

fn replay_events(
    events: &[LogEvent],
    mode: ReplayMode,
) -> Result<(ModelState, ReplayReport), Failure> {
    let (model, report) = replay_log(events, mode).map_err(input)?;
    if !model.is_consistent() {
        return Err(Failure(
            ExitStatus::Internal,
            "replayed model failed its consistency check".into(),
        ));
    }
    Ok((model, report))
}

fn cmd_replay(a: &ReplayArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let strict = a.mode.strict;
    let mode = if strict {
        ReplayMode::Strict
    } else {
        ReplayMode::Lenient
    };
    let mut read = read_events(&a.log, false)?;
    if strict {
        // Only rows before the first unreadable one are replayed, so the
        // abort names whichever problem comes first in the file.
        if let Some(first) = read.diagnostics.first() {
            read.events.retain(|e| e.seq < first.error.row);
        }
    }
    if !strict {
        for d in &read.diagnostics {
            let _ = writeln!(err, "warning: {d}");
        }
    }
    let events = if a.unit_roundtrip {
        unit_roundtrip(&read.events).map_err(input)?
    } else {
        read.events
    };
    let (model, report) = replay_events(&events, mode)?;
    if let Some(first) = read.diagnostics.first().filter(|_| strict) {
        return Err(input(first));
    }
    for w in &report.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    print_summary(out, &report);
    if let Some(path) = &a.output {
        let json = dump_model(&model).map_err(|e| Failure(ExitStatus::Internal, e.to_string()))?;
        write_file(path, json.as_bytes())?;
    }
    Ok(
        if read.diagnostics.is_empty() && report.warnings.is_empty() {
            ExitStatus::Success
        } else {
            ExitStatus::Diagnostics
        },
    )
}

fn cmd_diff(a: &DiffArgs, out: &mut dyn Write) -> CmdResult {
    let load =
        |p: &Path| load_model(&read_file(p)?).map_err(|e| input(format!("{}: {e}", p.display())));
    let original = load(&a.original)?;
    let reproduced = load(&a.reproduced)?;
    let r = diff_models(&original, &reproduced);
    let text = if a.json {
        report::render_json(&r)
    } else {
        report::render_table(&r)
    };
    let _ = out.write_all(text.as_bytes());
    Ok(ExitStatus::Success)
}

pub fn truth_path(log: &Path) -> PathBuf {
    log.with_extension("truth.json")
}

fn cmd_synth(a: &SynthArgs, out: &mut dyn Write) -> CmdResult {
    let steps = match &a.scenario {
        Some(p) => scenario::from_json(&read_file(p)?).map_err(input)?,
        None => {
            let churn = a
                .churn
                .unwrap_or_else(|| churn_for(BENCHMARK_COUNTS, BENCHMARK_EVENTS));
            random_scenario(a.seed, a.counts, churn).map_err(input)?
        }
    };
    let (events, truth) = run_scenario(&steps).map_err(input)?;
    let mut log = Vec::new();
    write_log(&mut log, &events).map_err(|e| Failure(ExitStatus::Internal, e.to_string()))?;
    let json = dump_model(&truth).map_err(|e| Failure(ExitStatus::Internal, e.to_string()))?;
    let truth_file = a.truth.clone().unwrap_or_else(|| truth_path(&a.output));
    write_file(&a.output, &log)?;
    write_file(&truth_file, json.as_bytes())?;
    if let Some(p) = &a.emit_scenario {
        let s = scenario::to_json(&steps).map_err(input)?;
        write_file(p, s.as_bytes())?;
    }
    let _ = writeln!(
        out,
        "wrote {} events to {} and {} elements to {}",
        events.len(),
        a.output.display(),
        truth.len(),
        truth_file.display()
    );
    Ok(ExitStatus::Success)
}

fn cmd_validate(a: &ValidateArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let read = read_events(&a.log, false)?;
    let (_, report) = replay_events(&read.events, ReplayMode::Lenient)?;
    let mut lines: Vec<(u64, String)> = read
        .diagnostics
        .iter()
        .map(|d| (d.error.row, d.to_string()))
        .chain(report.warnings.iter().map(|w| (w.seq, w.to_string())))
        .collect();
    lines.sort_by_key(|(row, _)| *row);
    for (_, line) in &lines {
        let _ = writeln!(err, "{line}");
    }
    let problems = read.diagnostics.len() + report.warnings.len();
    let _ = writeln!(
        out,
        "{} rows read, {} problem{}",
        read.events.len() + read.diagnostics.len(),
        problems,
        if problems == 1 { "" } else { "s" }
    );
    Ok(if problems == 0 {
        ExitStatus::Success
    } else {
        ExitStatus::Diagnostics
    })
}

fn cmd_convert(a: &ConvertArgs, err: &mut dyn Write) -> CmdResult {
    let read = read_events(&a.log, false)?;
    for d in &read.diagnostics {
        let _ = writeln!(err, "warning: {d}");
    }
    let factor = match (a.from, a.to) {
        (Unit::Meters, Unit::Feet) => 1.0 / METERS_PER_FOOT,
        (Unit::Feet, Unit::Meters) => METERS_PER_FOOT,
        _ => 1.0,
    };
    let events = convert_log(&read.events, factor).map_err(input)?;
    let mut buf = Vec::new();
    write_log(&mut buf, &events).map_err(|e| Failure(ExitStatus::Internal, e.to_string()))?;
    write_file(&a.output, &buf)?;
    Ok(if read.diagnostics.is_empty() {
        ExitStatus::Success
    } else {
        ExitStatus::Diagnostics
    })
}
