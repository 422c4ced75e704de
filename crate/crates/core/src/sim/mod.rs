//! Scripted and randomized authoring sessions that record an event log
//! against a ground-truth model.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::codec::{canonicalize_geometry, canonicalize_params, CodecError, Command, LogEvent};
use crate::geom::{GeometricBase, Point3};
use crate::model::{
    representative_point, Category, ElementId, ModelError, ModelState, Subtype, COMMENTS,
};
use crate::params::ParamSet;

mod shapes;
pub use shapes::{BaseKind, GeometrySampler};

/// Id given to the first element of a ground-truth model.
pub const FIRST_TRUTH_ID: ElementId = 1001;

/// Net element counts of the benchmark session (walls, floors, windows,
/// doors, columns).
pub const BENCHMARK_COUNTS: [usize; 5] = [97, 8, 8, 19, 27];

/// Number of events recorded in the benchmark session.
pub const BENCHMARK_EVENTS: usize = 2836;

/// Side of the square site random geometry is placed in, in meters.
pub const SITE_SIZE: f64 = 100.0;

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioStep {
    Add {
        tag: String,
        category: Category,
        subtype: Subtype,
        geometry: GeometricBase,
        params: ParamSet,
        host_tag: Option<String>,
    },
    Modify {
        tag: String,
        geometry: Option<GeometricBase>,
        params: ParamSet,
    },
    Delete {
        tag: String,
    },
}

impl ScenarioStep {
    pub fn tag(&self) -> &str {
        match self {
            ScenarioStep::Add { tag, .. }
            | ScenarioStep::Modify { tag, .. }
            | ScenarioStep::Delete { tag } => tag,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioErrorKind {
    TagInUse(String),
    UnknownTag(String),
    ReservedParam,
    Geometry(CodecError),
    Model(ModelError),
    Infeasible(&'static str),
}

/// `step` is the 0-based step index, or the number of steps generated so
/// far for random scenarios.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct ScenarioError {
    pub step: usize,
    pub kind: ScenarioErrorKind,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: ", self.step)?;
        match &self.kind {
            ScenarioErrorKind::TagInUse(t) => write!(f, "tag `{t}` is already bound"),
            ScenarioErrorKind::UnknownTag(t) => {
                write!(f, "tag `{t}` is not bound to a live element")
            }
            ScenarioErrorKind::ReservedParam => write!(f, "{COMMENTS} is reserved for replay"),
            ScenarioErrorKind::Geometry(e) => write!(f, "{e}"),
            ScenarioErrorKind::Model(e) => write!(f, "{e}"),
            ScenarioErrorKind::Infeasible(why) => write!(f, "infeasible scenario: {why}"),
        }
    }
}

struct Session {
    model: ModelState,
    tags: BTreeMap<String, ElementId>,
    events: Vec<LogEvent>,
}

impl Session {
    fn resolve(&self, tag: &str) -> Result<ElementId, ScenarioErrorKind> {
        self.tags
            .get(tag)
            .copied()
            .ok_or_else(|| ScenarioErrorKind::UnknownTag(tag.into()))
    }

    fn step(&mut self, seq: u64, step: &ScenarioStep) -> Result<(), ScenarioErrorKind> {
        let canonical =
            |g: &GeometricBase| canonicalize_geometry(g).map_err(ScenarioErrorKind::Geometry);
        match step {
            ScenarioStep::Add {
                tag,
                category,
                subtype,
                geometry,
                params,
                host_tag,
            } => {
                if self.tags.contains_key(tag) {
                    return Err(ScenarioErrorKind::TagInUse(tag.clone()));
                }
                if params.contains(COMMENTS) {
                    return Err(ScenarioErrorKind::ReservedParam);
                }
                let host = host_tag.as_deref().map(|h| self.resolve(h)).transpose()?;
                let geometry = canonical(geometry)?;
                let params = canonicalize_params(params);
                let id = self
                    .model
                    .add_element(*category, *subtype, geometry.clone(), &params, host)
                    .map_err(ScenarioErrorKind::Model)?;
                self.tags.insert(tag.clone(), id);
                self.events.push(LogEvent {
                    seq,
                    command: Command::Added,
                    element_id: id,
                    category: *category,
                    subtype: *subtype,
                    geometry: Some(geometry),
                    params,
                    host_ref: host,
                });
            }
            ScenarioStep::Modify {
                tag,
                geometry,
                params,
            } => {
                if params.contains(COMMENTS) {
                    return Err(ScenarioErrorKind::ReservedParam);
                }
                let id = self.resolve(tag)?;
                let geometry = geometry.as_ref().map(canonical).transpose()?;
                let params = canonicalize_params(params);
                self.model
                    .patch_element(id, geometry.clone(), &params)
                    .map_err(ScenarioErrorKind::Model)?;
                let e = self.model.get(id).expect("live");
                self.events.push(LogEvent {
                    seq,
                    command: Command::Modified,
                    element_id: id,
                    category: e.category,
                    subtype: e.subtype,
                    geometry,
                    params,
                    host_ref: None,
                });
            }
            ScenarioStep::Delete { tag } => {
                let id = self.resolve(tag)?;
                let e = self.model.get(id).expect("live");
                let (category, subtype) = (e.category, e.subtype);
                let removed = self
                    .model
                    .remove_element(id)
                    .map_err(ScenarioErrorKind::Model)?;
                self.tags.retain(|_, v| !removed.contains(v));
                self.events.push(LogEvent {
                    seq,
                    command: Command::Deleted,
                    element_id: id,
                    category,
                    subtype,
                    geometry: None,
                    params: ParamSet::new(),
                    host_ref: None,
                });
            }
        }
        Ok(())
    }
}

/// Executes `steps` against a fresh ground-truth model, emitting one event
/// per step. Every value is passed through its logged text form first, so
/// the ground truth holds exactly what a reader of the log sees.
pub fn run_scenario(steps: &[ScenarioStep]) -> Result<(Vec<LogEvent>, ModelState), ScenarioError> {
    let mut s = Session {
        model: ModelState::with_first_id(FIRST_TRUTH_ID),
        tags: BTreeMap::new(),
        events: Vec::with_capacity(steps.len()),
    };
    for (i, step) in steps.iter().enumerate() {
        s.step(i as u64 + 1, step)
            .map_err(|kind| ScenarioError { step: i, kind })?;
    }
    Ok((s.events, s.model))
}

/// Total number of steps `random_scenario` produces.
pub fn scenario_length(net_counts: [usize; 5], churn: f64) -> usize {
    let net: usize = net_counts.iter().sum();
    if net == 0 {
        return 0;
    }
    let total = libm::round(net as f64 / (1.0 - churn)) as usize;
    total.max(net)
}

/// Churn that makes `random_scenario` produce about `events` steps.
pub fn churn_for(net_counts: [usize; 5], events: usize) -> f64 {
    let net: usize = net_counts.iter().sum();
    if events <= net {
        0.0
    } else {
        1.0 - net as f64 / events as f64
    }
}

/// Randomized session. `net_counts` (in [`Category::ALL`] order) is the
/// number of elements left alive at the end; `churn` is the fraction of the
/// steps spent on noise: modifications plus elements added and later
/// deleted. Noise is split so that one step in ten belongs to a transient
/// add/delete pair and the rest are modifications.
pub fn random_scenario(
    seed: u64,
    net_counts: [usize; 5],
    churn: f64,
) -> Result<Vec<ScenarioStep>, ScenarioError> {
    let infeasible = |why| ScenarioError {
        step: 0,
        kind: ScenarioErrorKind::Infeasible(why),
    };
    if !(churn.is_finite() && (0.0..1.0).contains(&churn)) {
        return Err(infeasible("churn must lie in [0, 1)"));
    }
    let hosted = net_counts[Category::Window.index()] + net_counts[Category::Door.index()];
    if hosted > 0 && net_counts[Category::Wall.index()] == 0 {
        return Err(infeasible("windows and doors need at least one wall"));
    }
    let net: usize = net_counts.iter().sum();
    let noise = scenario_length(net_counts, churn) - net;
    let pairs = noise / 20;
    Generator {
        geo: GeometrySampler::new(seed),
        steps: Vec::new(),
        shadow: ModelState::with_first_id(FIRST_TRUTH_ID),
        live: BTreeMap::new(),
        counter: 0,
    }
    .run(net_counts, pairs, noise - 2 * pairs)
}

struct LiveInfo {
    id: ElementId,
    transient: bool,
}

struct Generator {
    geo: GeometrySampler,
    steps: Vec<ScenarioStep>,
    /// Model mirroring the steps, used to place hosted instances and to
    /// pick valid modifications.
    shadow: ModelState,
    live: BTreeMap<String, LiveInfo>,
    counter: usize,
}

impl Generator {
    fn run(
        mut self,
        mut remaining: [usize; 5],
        mut pairs: usize,
        mut modifications: usize,
    ) -> Result<Vec<ScenarioStep>, ScenarioError> {
        loop {
            let permanent: usize = remaining.iter().sum();
            let transients = self.live.values().filter(|l| l.transient).count();
            let can_modify = if self.live.is_empty() {
                0
            } else {
                modifications
            };
            let weights = [permanent, pairs, transients, can_modify];
            let total: usize = weights.iter().sum();
            if total == 0 {
                break;
            }
            let mut pick = self.geo.rng.random_range(0..total);
            let mut choice = 0;
            while pick >= weights[choice] {
                pick -= weights[choice];
                choice += 1;
            }
            match choice {
                0 => {
                    let category = self.pick_permanent(&remaining);
                    remaining[category.index()] -= 1;
                    self.add(category, false)?;
                }
                1 => {
                    pairs -= 1;
                    let category = self.pick_transient();
                    self.add(category, true)?;
                }
                2 => {
                    let tags: Vec<String> = self
                        .live
                        .iter()
                        .filter(|(_, l)| l.transient)
                        .map(|(t, _)| t.clone())
                        .collect();
                    let tag = tags[self.geo.rng.random_range(0..tags.len())].clone();
                    self.push(ScenarioStep::Delete { tag })?;
                }
                _ => {
                    modifications -= 1;
                    self.modify()?;
                }
            }
        }
        Ok(self.steps)
    }

    fn has_permanent_wall(&self) -> bool {
        self.live
            .values()
            .any(|l| !l.transient && self.shadow.get(l.id).unwrap().category == Category::Wall)
    }

    fn pick_permanent(&mut self, remaining: &[usize; 5]) -> Category {
        let walls_ready = self.has_permanent_wall();
        let weight = |c: Category| {
            if c.is_hosted() && !walls_ready {
                0
            } else {
                remaining[c.index()]
            }
        };
        let total: usize = Category::ALL.iter().map(|&c| weight(c)).sum();
        let mut pick = self.geo.rng.random_range(0..total);
        for c in Category::ALL {
            if pick < weight(c) {
                return c;
            }
            pick -= weight(c);
        }
        unreachable!("weights cover the pick")
    }

    fn pick_transient(&mut self) -> Category {
        let options: &[Category] = if self.has_permanent_wall() {
            &Category::ALL
        } else {
            &[Category::Wall, Category::Floor, Category::Column]
        };
        options[self.geo.rng.random_range(0..options.len())]
    }

    fn push(&mut self, step: ScenarioStep) -> Result<(), ScenarioError> {
        let err = |kind| ScenarioError {
            step: self.steps.len(),
            kind,
        };
        match &step {
            ScenarioStep::Add {
                category,
                subtype,
                geometry,
                params,
                host_tag,
                ..
            } => {
                let host = host_tag.as_ref().map(|h| self.live[h].id);
                let g = canonicalize_geometry(geometry)
                    .map_err(|e| err(ScenarioErrorKind::Geometry(e)))?;
                self.shadow
                    .add_element(*category, *subtype, g, &canonicalize_params(params), host)
                    .map_err(|e| err(ScenarioErrorKind::Model(e)))?;
            }
            ScenarioStep::Modify {
                tag,
                geometry,
                params,
            } => {
                let g = geometry
                    .as_ref()
                    .map(canonicalize_geometry)
                    .transpose()
                    .map_err(|e| err(ScenarioErrorKind::Geometry(e)))?;
                self.shadow
                    .patch_element(self.live[tag].id, g, &canonicalize_params(params))
                    .map_err(|e| err(ScenarioErrorKind::Model(e)))?;
            }
            ScenarioStep::Delete { tag } => {
                let info = self
                    .live
                    .remove(tag)
                    .expect("generator only deletes live tags");
                self.shadow
                    .remove_element(info.id)
                    .map_err(|e| err(ScenarioErrorKind::Model(e)))?;
            }
        }
        self.steps.push(step);
        Ok(())
    }

    fn add(&mut self, category: Category, transient: bool) -> Result<(), ScenarioError> {
        self.counter += 1;
        let tag = format!("{}{}", category.name().to_ascii_lowercase(), self.counter);
        let (subtype, geometry, host_tag) = match category {
            Category::Wall => {
                if self.geo.rng.random_bool(0.15) {
                    (Subtype::ProfileWall, self.geo.wall_profile().into(), None)
                } else {
                    (Subtype::RectWall, self.geo.location_curve().into(), None)
                }
            }
            Category::Floor => {
                let sub = if self.geo.rng.random_bool(0.25) {
                    Subtype::SlopedFloor
                } else {
                    Subtype::FlatFloor
                };
                (sub, self.geo.floor_loop().into(), None)
            }
            Category::Window | Category::Door => {
                let host = self.pick_host_wall();
                let at = self.hosted_point(&host);
                (Subtype::HostedInstance, at.into(), Some(host))
            }
            Category::Column => {
                if self.geo.rng.random_bool(0.3) {
                    (Subtype::SlantedColumn, self.geo.slanted_axis().into(), None)
                } else {
                    let p = self.geo.site_point();
                    (Subtype::FreeColumn, p.into(), None)
                }
            }
        };
        let params = self.params_for(category, subtype, true);
        let id = self.shadow.next_id();
        self.push(ScenarioStep::Add {
            tag: tag.clone(),
            category,
            subtype,
            geometry,
            params,
            host_tag,
        })?;
        self.live.insert(tag, LiveInfo { id, transient });
        Ok(())
    }

    fn pick_host_wall(&mut self) -> String {
        let walls: Vec<&String> = self
            .live
            .iter()
            .filter(|(_, l)| {
                !l.transient && self.shadow.get(l.id).unwrap().category == Category::Wall
            })
            .map(|(t, _)| t)
            .collect();
        walls[self.geo.rng.random_range(0..walls.len())].clone()
    }

    fn hosted_point(&mut self, host_tag: &str) -> Point3 {
        let wall = self.shadow.get(self.live[host_tag].id).unwrap();
        let base = representative_point(wall);
        let (dx, dy) = (
            self.geo.rng.random_range(-1.0..1.0),
            self.geo.rng.random_range(-1.0..1.0),
        );
        let sill = self.geo.rng.random_range(0.0..1.2);
        base + Point3::new(dx, dy, sill)
    }

    fn modify(&mut self) -> Result<(), ScenarioError> {
        let tags: Vec<&String> = self.live.keys().collect();
        let tag = tags[self.geo.rng.random_range(0..tags.len())].clone();
        let e = self.shadow.get(self.live[&tag].id).unwrap();
        let (category, subtype, host) = (e.category, e.subtype, e.host);
        let roll: f64 = self.geo.rng.random();
        let geometry = if roll < 0.5 {
            None
        } else {
            Some(match subtype {
                Subtype::RectWall => self.geo.location_curve().into(),
                Subtype::ProfileWall => self.geo.wall_profile().into(),
                Subtype::FlatFloor | Subtype::SlopedFloor => self.geo.floor_loop().into(),
                Subtype::HostedInstance => {
                    let host_tag = self
                        .live
                        .iter()
                        .find(|(_, l)| Some(l.id) == host)
                        .map(|(t, _)| t.clone())
                        .expect("host is live");
                    self.hosted_point(&host_tag).into()
                }
                Subtype::FreeColumn => self.geo.site_point().into(),
                Subtype::SlantedColumn => self.geo.slanted_axis().into(),
            })
        };
        let params = if geometry.is_none() || roll > 0.8 {
            self.params_for(category, subtype, false)
        } else {
            ParamSet::new()
        };
        self.push(ScenarioStep::Modify {
            tag,
            geometry,
            params,
        })
    }

    /// Parameters for a new element (`full`) or a patch of one or two of them.
    fn params_for(&mut self, category: Category, subtype: Subtype, full: bool) -> ParamSet {
        let mut ranges: Vec<(&'static str, f64, f64)> = match category {
            Category::Wall => vec![
                ("Height", 2.5, 4.5),
                ("Width", 0.1, 0.5),
                ("BaseOffset", 0.0, 0.5),
            ],
            Category::Floor => vec![("Thickness", 0.15, 0.4)],
            Category::Window => vec![
                ("Width", 0.6, 2.0),
                ("Height", 0.8, 1.8),
                ("SillHeight", 0.6, 1.1),
            ],
            Category::Door => vec![("Width", 0.8, 1.2), ("Height", 2.0, 2.4)],
            Category::Column => vec![("b", 0.2, 0.6), ("h", 0.2, 0.6), ("Height", 2.5, 4.0)],
        };
        if subtype == Subtype::SlopedFloor {
            ranges.push(("SlopeAngle", 0.05, 0.4));
        }
        let mut out = ParamSet::new();
        if full {
            for (name, lo, hi) in ranges {
                let v = self.geo.uniform(lo, hi);
                out.set(name, v);
            }
        } else {
            let n = self.geo.rng.random_range(1..=ranges.len().min(2));
            for _ in 0..n {
                let (name, lo, hi) = ranges[self.geo.rng.random_range(0..ranges.len())];
                let v = self.geo.uniform(lo, hi);
                out.set(name, v);
            }
        }
        out
    }
}

/// Live elements per category, in [`Category::ALL`] order.
pub fn category_counts(model: &ModelState) -> [usize; 5] {
    Category::ALL.map(|c| model.count(c))
}
