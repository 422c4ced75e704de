//! In-memory parametric building model.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::geom::{GeomError, GeometricBase, Point3};
use crate::math;
use crate::params::{ParamSet, ParamValue};

pub type ElementId = u64;

/// Name of the free-text parameter that carries an element's original id
/// after replay.
pub const COMMENTS: &str = "Comments";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Wall,
    Floor,
    Window,
    Door,
    Column,
}

impl Category {
    pub const ALL: [Category; 5] = [
        Category::Wall,
        Category::Floor,
        Category::Window,
        Category::Door,
        Category::Column,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Category::Wall => "Wall",
            Category::Floor => "Floor",
            Category::Window => "Window",
            Category::Door => "Door",
            Category::Column => "Column",
        }
    }

    /// Case-sensitive inverse of [`Category::name`].
    pub fn parse(s: &str) -> Option<Category> {
        Category::ALL.into_iter().find(|c| c.name() == s)
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_hosted(self) -> bool {
        matches!(self, Category::Window | Category::Door)
    }

    /// Canonical parameters and their defaults (meters, radians).
    pub fn canonical_params(self) -> &'static [(&'static str, f64)] {
        match self {
            Category::Wall => &[("Height", 3.0), ("Width", 0.2), ("BaseOffset", 0.0)],
            Category::Floor => &[("Thickness", 0.3), ("SlopeAngle", 0.0)],
            Category::Window => &[("Width", 1.2), ("Height", 1.5), ("SillHeight", 0.9)],
            Category::Door => &[("Width", 0.9), ("Height", 2.1), ("SillHeight", 0.0)],
            Category::Column => &[("b", 0.4), ("h", 0.4), ("Height", 3.0)],
        }
    }

    /// Fresh parameter set holding the canonical defaults and an empty
    /// `Comments`.
    pub fn default_params(self) -> ParamSet {
        let mut set: ParamSet = self
            .canonical_params()
            .iter()
            .map(|&(n, v)| (n, v))
            .collect();
        set.set(COMMENTS, "");
        set
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Whether a parameter holds a length (and so follows unit conversion).
pub fn is_length_param(name: &str) -> bool {
    matches!(
        name,
        "Height" | "Width" | "BaseOffset" | "Thickness" | "SillHeight" | "b" | "h"
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subtype {
    RectWall,
    ProfileWall,
    FlatFloor,
    SlopedFloor,
    HostedInstance,
    FreeColumn,
    SlantedColumn,
}

impl Subtype {
    pub const ALL: [Subtype; 7] = [
        Subtype::RectWall,
        Subtype::ProfileWall,
        Subtype::FlatFloor,
        Subtype::SlopedFloor,
        Subtype::HostedInstance,
        Subtype::FreeColumn,
        Subtype::SlantedColumn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Subtype::RectWall => "RectWall",
            Subtype::ProfileWall => "ProfileWall",
            Subtype::FlatFloor => "FlatFloor",
            Subtype::SlopedFloor => "SlopedFloor",
            Subtype::HostedInstance => "HostedInstance",
            Subtype::FreeColumn => "FreeColumn",
            Subtype::SlantedColumn => "SlantedColumn",
        }
    }

    pub fn parse(s: &str) -> Option<Subtype> {
        Subtype::ALL.into_iter().find(|t| t.name() == s)
    }

    pub fn belongs_to(self, category: Category) -> bool {
        use Category::*;
        use Subtype::*;
        matches!(
            (self, category),
            (RectWall | ProfileWall, Wall)
                | (FlatFloor | SlopedFloor, Floor)
                | (HostedInstance, Window | Door)
                | (FreeColumn | SlantedColumn, Column)
        )
    }

    /// Whether `geometry` has the shape this subtype is built from.
    pub fn accepts(self, geometry: &GeometricBase) -> bool {
        use GeometricBase as G;
        match self {
            Subtype::RectWall => matches!(geometry, G::Curve(_)),
            Subtype::ProfileWall => matches!(geometry, G::Profile(_)),
            Subtype::FlatFloor | Subtype::SlopedFloor => matches!(geometry, G::Loop(_)),
            Subtype::HostedInstance | Subtype::FreeColumn => matches!(geometry, G::Point(_)),
            Subtype::SlantedColumn => matches!(geometry, G::Curve(crate::geom::Curve::Line(_))),
        }
    }

    pub fn expected_geometry(self) -> &'static str {
        match self {
            Subtype::RectWall => "a location curve",
            Subtype::ProfileWall => "a Profile",
            Subtype::FlatFloor | Subtype::SlopedFloor => "a CurveLoop",
            Subtype::HostedInstance | Subtype::FreeColumn => "a LocationPoint",
            Subtype::SlantedColumn => "a Line",
        }
    }
}

impl fmt::Display for Subtype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("subtype {subtype} does not belong to category {category}")]
    CategoryMismatch {
        category: Category,
        subtype: Subtype,
    },
    #[error("{subtype} needs {expected}, got {found}")]
    GeometryMismatch {
        subtype: Subtype,
        expected: &'static str,
        found: &'static str,
    },
    #[error("invalid geometry: {0}")]
    Geometry(#[from] GeomError),
    #[error("no live element with id {0}")]
    UnknownElement(ElementId),
    #[error("id {0} is already taken")]
    IdInUse(ElementId),
    #[error("{category} elements need a host wall")]
    MissingHost { category: Category },
    #[error("{category} elements cannot have a host")]
    UnexpectedHost { category: Category },
    #[error("host {0} is not a wall")]
    HostNotWall(ElementId),
    #[error("Comments value `{0}` already identifies another element")]
    DuplicateComment(String),
    #[error("element {id}: parameter `{name}` {problem}")]
    Param {
        id: ElementId,
        name: &'static str,
        problem: &'static str,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementRecord {
    pub id: ElementId,
    pub category: Category,
    pub subtype: Subtype,
    pub geometry: GeometricBase,
    pub params: ParamSet,
    pub host: Option<ElementId>,
}

impl ElementRecord {
    pub fn comment(&self) -> &str {
        self.params
            .get(COMMENTS)
            .and_then(ParamValue::as_text)
            .unwrap_or("")
    }

    fn length_param(&self, name: &'static str) -> Result<f64, ModelError> {
        let v = self
            .params
            .get(name)
            .ok_or(ModelError::Param {
                id: self.id,
                name,
                problem: "is missing",
            })?
            .as_f64()
            .ok_or(ModelError::Param {
                id: self.id,
                name,
                problem: "is not numeric",
            })?;
        if v.is_finite() && v > 0.0 {
            Ok(v)
        } else {
            Err(ModelError::Param {
                id: self.id,
                name,
                problem: "must be positive",
            })
        }
    }
}

fn mismatch(subtype: Subtype, geometry: &GeometricBase) -> ModelError {
    ModelError::GeometryMismatch {
        subtype,
        expected: subtype.expected_geometry(),
        found: geometry.kind_name(),
    }
}

/// Decimal-integer texts are the only Comments values that link elements.
pub fn is_id_text(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn comment_key(params: &ParamSet) -> Option<&str> {
    params
        .get(COMMENTS)
        .and_then(ParamValue::as_text)
        .filter(|s| is_id_text(s))
}

/// The building model: live elements, the id allocator and the index from
/// Comments text to element id.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelState {
    elements: BTreeMap<ElementId, ElementRecord>,
    next_id: ElementId,
    comment_index: BTreeMap<String, ElementId>,
}

impl Default for ModelState {
    fn default() -> Self {
        ModelState::new()
    }
}

impl ModelState {
    pub fn new() -> Self {
        ModelState::with_first_id(1)
    }

    /// Empty model whose first allocated id is `first`.
    pub fn with_first_id(first: ElementId) -> Self {
        ModelState {
            elements: BTreeMap::new(),
            next_id: first.max(1),
            comment_index: BTreeMap::new(),
        }
    }

    /// Rebuilds a model from stored records, keeping their ids. `next_id`
    /// is raised above the largest id if needed.
    pub fn restore(
        records: impl IntoIterator<Item = ElementRecord>,
        next_id: ElementId,
    ) -> Result<ModelState, ModelError> {
        let mut m = ModelState::with_first_id(next_id);
        for r in records {
            if !r.subtype.belongs_to(r.category) {
                return Err(ModelError::CategoryMismatch {
                    category: r.category,
                    subtype: r.subtype,
                });
            }
            Self::check_geometry(r.subtype, &r.geometry)?;
            if m.elements.contains_key(&r.id) || r.id == 0 {
                return Err(ModelError::IdInUse(r.id));
            }
            if let Some(k) = comment_key(&r.params) {
                if m.comment_index.insert(k.to_string(), r.id).is_some() {
                    return Err(ModelError::DuplicateComment(k.to_string()));
                }
            }
            m.next_id = m.next_id.max(r.id + 1);
            m.elements.insert(r.id, r);
        }
        for e in m.elements.values() {
            m.check_host(e.category, e.host)?;
        }
        Ok(m)
    }

    pub fn next_id(&self) -> ElementId {
        self.next_id
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, id: ElementId) -> Option<&ElementRecord> {
        self.elements.get(&id)
    }

    /// Elements in ascending id order.
    pub fn elements(&self) -> impl Iterator<Item = &ElementRecord> {
        self.elements.values()
    }

    pub fn comment_index(&self) -> &BTreeMap<String, ElementId> {
        &self.comment_index
    }

    pub fn count(&self, category: Category) -> usize {
        self.elements
            .values()
            .filter(|e| e.category == category)
            .count()
    }

    fn check_host(&self, category: Category, host: Option<ElementId>) -> Result<(), ModelError> {
        match (category.is_hosted(), host) {
            (true, None) => Err(ModelError::MissingHost { category }),
            (false, Some(_)) => Err(ModelError::UnexpectedHost { category }),
            (true, Some(h)) => match self.elements.get(&h) {
                None => Err(ModelError::UnknownElement(h)),
                Some(w) if w.category != Category::Wall => Err(ModelError::HostNotWall(h)),
                Some(_) => Ok(()),
            },
            (false, None) => Ok(()),
        }
    }

    fn check_geometry(subtype: Subtype, geometry: &GeometricBase) -> Result<(), ModelError> {
        if !subtype.accepts(geometry) {
            return Err(mismatch(subtype, geometry));
        }
        geometry.validate()?;
        Ok(())
    }

    /// Adds an element under a fresh id. Missing canonical parameters are
    /// filled with the category defaults.
    pub fn add_element(
        &mut self,
        category: Category,
        subtype: Subtype,
        geometry: GeometricBase,
        params: &ParamSet,
        host: Option<ElementId>,
    ) -> Result<ElementId, ModelError> {
        if !subtype.belongs_to(category) {
            return Err(ModelError::CategoryMismatch { category, subtype });
        }
        Self::check_geometry(subtype, &geometry)?;
        self.check_host(category, host)?;
        let mut full = category.default_params();
        full.merge(params);
        let key = comment_key(&full).map(str::to_string);
        if let Some(k) = &key {
            if self.comment_index.contains_key(k) {
                return Err(ModelError::DuplicateComment(k.clone()));
            }
        }
        let id = self.next_id;
        self.next_id += 1;
        if let Some(k) = key {
            self.comment_index.insert(k, id);
        }
        self.elements.insert(
            id,
            ElementRecord {
                id,
                category,
                subtype,
                geometry,
                params: full,
                host,
            },
        );
        Ok(id)
    }

    /// Replaces geometry (if given) and upserts `params`; everything else is
    /// left alone.
    pub fn patch_element(
        &mut self,
        id: ElementId,
        geometry: Option<GeometricBase>,
        params: &ParamSet,
    ) -> Result<(), ModelError> {
        let record = self
            .elements
            .get(&id)
            .ok_or(ModelError::UnknownElement(id))?;
        if let Some(g) = &geometry {
            Self::check_geometry(record.subtype, g)?;
        }
        let old_key = comment_key(&record.params).map(str::to_string);
        let new_key = if params.contains(COMMENTS) {
            comment_key(params).map(str::to_string)
        } else {
            old_key.clone()
        };
        if new_key != old_key {
            if let Some(k) = &new_key {
                if self.comment_index.get(k).is_some_and(|&other| other != id) {
                    return Err(ModelError::DuplicateComment(k.clone()));
                }
            }
            if let Some(k) = &old_key {
                self.comment_index.remove(k);
            }
            if let Some(k) = new_key {
                self.comment_index.insert(k, id);
            }
        }
        let record = self.elements.get_mut(&id).expect("checked above");
        if let Some(g) = geometry {
            record.geometry = g;
        }
        record.params.merge(params);
        Ok(())
    }

    /// Removes an element and, for walls, every instance it hosts. Returns
    /// the removed ids, the requested one first.
    pub fn remove_element(&mut self, id: ElementId) -> Result<Vec<ElementId>, ModelError> {
        if !self.elements.contains_key(&id) {
            return Err(ModelError::UnknownElement(id));
        }
        let mut removed = Vec::from([id]);
        removed.extend(
            self.elements
                .values()
                .filter(|e| e.host == Some(id))
                .map(|e| e.id),
        );
        for &r in &removed {
            if let Some(e) = self.elements.remove(&r) {
                if let Some(k) = comment_key(&e.params) {
                    self.comment_index.remove(k);
                }
            }
        }
        Ok(removed)
    }

    pub fn lookup_by_comment(&self, original_id: &str) -> Option<ElementId> {
        self.comment_index.get(original_id).copied()
    }

    /// Index rebuilt from scratch; equals [`ModelState::comment_index`] when
    /// the model is consistent.
    pub fn rebuild_comment_index(&self) -> BTreeMap<String, ElementId> {
        self.elements
            .values()
            .filter_map(|e| comment_key(&e.params).map(|k| (k.to_string(), e.id)))
            .collect()
    }

    /// Referential integrity: hosts are live walls, index entries are live.
    pub fn is_consistent(&self) -> bool {
        let hosts_ok = self.elements.values().all(|e| match e.host {
            Some(h) => self
                .elements
                .get(&h)
                .is_some_and(|w| w.category == Category::Wall),
            None => !e.category.is_hosted(),
        });
        hosts_ok && self.rebuild_comment_index() == self.comment_index
    }

    pub fn element_volume(&self, id: ElementId) -> Result<f64, ModelError> {
        let e = self
            .elements
            .get(&id)
            .ok_or(ModelError::UnknownElement(id))?;
        self.volume_of(e)
    }

    /// Extrusion volume of `e`; hosted instances read their host's width.
    pub fn volume_of(&self, e: &ElementRecord) -> Result<f64, ModelError> {
        let g = &e.geometry;
        let v = match e.subtype {
            Subtype::RectWall => {
                g.curve_length()? * e.length_param("Height")? * e.length_param("Width")?
            }
            Subtype::ProfileWall => match g {
                GeometricBase::Profile(p) => p.area()? * e.length_param("Width")?,
                _ => return Err(mismatch(e.subtype, g)),
            },
            Subtype::FlatFloor | Subtype::SlopedFloor => {
                let area = match g {
                    GeometricBase::Loop(l) => l.area()?,
                    _ => return Err(mismatch(e.subtype, g)),
                };
                let mut v = area * e.length_param("Thickness")?;
                if e.subtype == Subtype::SlopedFloor {
                    let slope = e
                        .params
                        .get("SlopeAngle")
                        .and_then(ParamValue::as_f64)
                        .unwrap_or(0.0);
                    if !(slope.is_finite() && slope.abs() < core::f64::consts::FRAC_PI_2) {
                        return Err(ModelError::Param {
                            id: e.id,
                            name: "SlopeAngle",
                            problem: "must lie in (-pi/2, pi/2)",
                        });
                    }
                    v /= math::cos(slope);
                }
                v
            }
            Subtype::HostedInstance => {
                let host_id = e.host.ok_or(ModelError::MissingHost {
                    category: e.category,
                })?;
                let host = self
                    .elements
                    .get(&host_id)
                    .ok_or(ModelError::UnknownElement(host_id))?;
                e.length_param("Width")? * e.length_param("Height")? * host.length_param("Width")?
            }
            Subtype::FreeColumn => {
                e.length_param("b")? * e.length_param("h")? * e.length_param("Height")?
            }
            Subtype::SlantedColumn => {
                e.length_param("b")? * e.length_param("h")? * g.curve_length()?
            }
        };
        Ok(v)
    }
}

/// The point the distance metric compares: the location point itself, the
/// midpoint of a location curve, or the area centroid of an outer loop.
pub fn representative_point(e: &ElementRecord) -> Point3 {
    let centroid = |l: &crate::geom::CurveLoop| {
        l.centroid().unwrap_or_else(|_| {
            let s = l.samples();
            let n = s.len().max(1) as f64;
            s.iter().fold(Point3::ORIGIN, |a, &p| a + p) * (1.0 / n)
        })
    };
    match &e.geometry {
        GeometricBase::Point(p) => *p,
        GeometricBase::Curve(c) => c.point_at(0.5),
        GeometricBase::Loop(l) => centroid(l),
        GeometricBase::Profile(p) => p.outer().map(centroid).unwrap_or(Point3::ORIGIN),
    }
}
