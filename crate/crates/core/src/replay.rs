//! Rebuilds a model from a log: each event is dispatched on its command and
//! elements are tied back to their original ids through `Comments`.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use crate::codec::{Command, LogEvent};
use crate::model::{Category, ElementId, ModelError, ModelState, COMMENTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReplayMode {
    Strict,
    #[default]
    Lenient,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DiagnosticKind {
    /// No live element carries the referenced original id.
    DanglingReference { original_id: ElementId },
    /// ADDED for an original id that is already live.
    DuplicateOriginalId,
    /// MODIFIED tried to rewrite `Comments`, which holds the id mapping.
    CommentsInPatch,
    /// MODIFIED/DELETED names a category or subtype the live element lacks.
    CategoryMismatch,
    /// The model refused the change.
    Rejected(ModelError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub seq: u64,
    pub command: Command,
    pub element_id: ElementId,
    pub kind: DiagnosticKind,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "row {} (seq {}, {} {}): ",
            self.seq, self.seq, self.command, self.element_id
        )?;
        match &self.kind {
            DiagnosticKind::DanglingReference { original_id } => {
                write!(
                    f,
                    "dangling reference: no live element with Comments = {original_id}"
                )
            }
            DiagnosticKind::DuplicateOriginalId => f.write_str("duplicate original ID"),
            DiagnosticKind::CommentsInPatch => f.write_str("MODIFIED may not change Comments"),
            DiagnosticKind::CategoryMismatch => {
                f.write_str("category/subtype differs from the live element")
            }
            DiagnosticKind::Rejected(e) => write!(f, "rejected: {e}"),
        }
    }
}

/// Strict replay stopped at `diagnostic`.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("replay aborted: {diagnostic}")]
pub struct ReplayError {
    pub diagnostic: Diagnostic,
}

/// What a successfully applied event did.
#[derive(Debug, Clone, PartialEq)]
pub enum Applied {
    Added(ElementId),
    Modified(ElementId),
    /// Removed ids, the targeted element first, cascaded instances after.
    Deleted(Vec<ElementId>),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReplayReport {
    pub events_applied: usize,
    pub added: usize,
    pub modified: usize,
    pub deleted: usize,
    /// Hosted instances removed along with their wall.
    pub cascaded: usize,
    pub warnings: Vec<Diagnostic>,
    /// Live elements per category, in [`Category::ALL`] order.
    pub final_counts: [usize; 5],
}

impl ReplayReport {
    pub fn count_for(&self, command: Command) -> usize {
        match command {
            Command::Added => self.added,
            Command::Modified => self.modified,
            Command::Deleted => self.deleted,
        }
    }

    pub fn final_count(&self, category: Category) -> usize {
        self.final_counts[category.index()]
    }
}

/// Applies one event to `model`.
pub fn apply_event(model: &mut ModelState, e: &LogEvent) -> Result<Applied, Diagnostic> {
    let diag = |kind| Diagnostic {
        seq: e.seq,
        command: e.command,
        element_id: e.element_id,
        kind,
    };
    let original = e.element_id.to_string();
    match e.command {
        Command::Added => {
            if model.lookup_by_comment(&original).is_some() {
                return Err(diag(DiagnosticKind::DuplicateOriginalId));
            }
            let host =
                match e.host_ref {
                    Some(h) => Some(model.lookup_by_comment(&h.to_string()).ok_or_else(|| {
                        diag(DiagnosticKind::DanglingReference { original_id: h })
                    })?),
                    None => None,
                };
            let geometry = e.geometry.clone().ok_or_else(|| {
                diag(DiagnosticKind::Rejected(ModelError::GeometryMismatch {
                    subtype: e.subtype,
                    expected: e.subtype.expected_geometry(),
                    found: "nothing",
                }))
            })?;
            let mut params = e.params.clone();
            params.set(COMMENTS, original.as_str());
            model
                .add_element(e.category, e.subtype, geometry, &params, host)
                .map(Applied::Added)
                .map_err(|err| diag(DiagnosticKind::Rejected(err)))
        }
        Command::Modified => {
            if e.params.contains(COMMENTS) {
                return Err(diag(DiagnosticKind::CommentsInPatch));
            }
            let id = live_target(model, e, &original).map_err(diag)?;
            model
                .patch_element(id, e.geometry.clone(), &e.params)
                .map(|()| Applied::Modified(id))
                .map_err(|err| diag(DiagnosticKind::Rejected(err)))
        }
        Command::Deleted => {
            let id = live_target(model, e, &original).map_err(diag)?;
            model
                .remove_element(id)
                .map(Applied::Deleted)
                .map_err(|err| diag(DiagnosticKind::Rejected(err)))
        }
    }
}

fn live_target(
    model: &ModelState,
    e: &LogEvent,
    original: &str,
) -> Result<ElementId, DiagnosticKind> {
    let id = model
        .lookup_by_comment(original)
        .ok_or(DiagnosticKind::DanglingReference {
            original_id: e.element_id,
        })?;
    let live = model.get(id).expect("comment index only holds live ids");
    if live.category != e.category || live.subtype != e.subtype {
        return Err(DiagnosticKind::CategoryMismatch);
    }
    Ok(id)
}

/// Incremental replay; exposes the model between events.
#[derive(Debug, Clone)]
pub struct Replayer {
    model: ModelState,
    report: ReplayReport,
    mode: ReplayMode,
}

impl Replayer {
    pub fn new(mode: ReplayMode) -> Self {
        Replayer {
            model: ModelState::new(),
            report: ReplayReport::default(),
            mode,
        }
    }

    pub fn model(&self) -> &ModelState {
        &self.model
    }

    pub fn report(&self) -> &ReplayReport {
        &self.report
    }

    /// Applies `e`. Lenient mode records a failing event as a warning and
    /// moves on; strict mode returns the diagnostic.
    pub fn apply(&mut self, e: &LogEvent) -> Result<(), ReplayError> {
        match apply_event(&mut self.model, e) {
            Ok(applied) => {
                self.report.events_applied += 1;
                match applied {
                    Applied::Added(_) => self.report.added += 1,
                    Applied::Modified(_) => self.report.modified += 1,
                    Applied::Deleted(removed) => {
                        self.report.deleted += 1;
                        self.report.cascaded += removed.len() - 1;
                    }
                }
                Ok(())
            }
            Err(diagnostic) => match self.mode {
                ReplayMode::Strict => Err(ReplayError { diagnostic }),
                ReplayMode::Lenient => {
                    self.report.warnings.push(diagnostic);
                    Ok(())
                }
            },
        }
    }

    pub fn finish(mut self) -> (ModelState, ReplayReport) {
        for c in Category::ALL {
            self.report.final_counts[c.index()] = self.model.count(c);
        }
        (self.model, self.report)
    }
}

/// Replays `events` in order into a fresh model.
pub fn replay_log(
    events: &[LogEvent],
    mode: ReplayMode,
) -> Result<(ModelState, ReplayReport), ReplayError> {
    let mut r = Replayer::new(mode);
    for e in events {
        r.apply(e)?;
    }
    Ok(r.finish())
}
