//! Reproducibility metrics between an original and a reproduced model.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::model::{
    is_id_text, representative_point, Category, ElementId, ElementRecord, ModelState,
};

/// Matching rule recorded in every report.
pub const MATCH_METHOD: &str = "comments";

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Matching {
    /// `(original id, reproduced id)` in ascending original id order.
    pub pairs: Vec<(ElementId, ElementId)>,
    pub unmatched_original: Vec<ElementId>,
    pub unmatched_reproduced: Vec<ElementId>,
}

/// The original id an element stands for: its `Comments` when that holds an
/// id, otherwise its own id.
pub fn origin_key(e: &ElementRecord) -> String {
    let c = e.comment();
    if is_id_text(c) {
        c.to_string()
    } else {
        e.id.to_string()
    }
}

/// First element per origin key, in ascending id order.
fn key_map(m: &ModelState) -> BTreeMap<String, ElementId> {
    let mut map = BTreeMap::new();
    for e in m.elements() {
        map.entry(origin_key(e)).or_insert(e.id);
    }
    map
}

/// Pairs elements that stand for the same original id. A replayed element
/// carries the original id in `Comments`, so it meets the original element
/// whose own id is that number; each element joins at most one pair.
pub fn match_by_comment(original: &ModelState, reproduced: &ModelState) -> Matching {
    let orig_keys = key_map(original);
    let repro_keys = key_map(reproduced);
    let mut out = Matching::default();
    let mut used = alloc::collections::BTreeSet::new();
    for o in original.elements() {
        let key = origin_key(o);
        let mine = orig_keys.get(&key) == Some(&o.id);
        match repro_keys.get(&key) {
            Some(&r) if mine => {
                out.pairs.push((o.id, r));
                used.insert(r);
            }
            _ => out.unmatched_original.push(o.id),
        }
    }
    out.unmatched_reproduced = reproduced
        .elements()
        .map(|e| e.id)
        .filter(|id| !used.contains(id))
        .collect();
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct CategoryStats {
    /// `None` for the all-category totals.
    pub category: Option<Category>,
    pub matched: usize,
    pub unmatched_original: usize,
    pub unmatched_reproduced: usize,
    /// Mean distance between representative points over matched pairs.
    pub avg_distance: f64,
    /// Mean of `100 |V_r - V_o| / V_o` over pairs with a usable volume.
    pub avg_volume_diff_pct: f64,
    /// Pairs left out of the volume mean (zero or undefined volume).
    pub volume_excluded: usize,
    /// No matched pairs; both averages are reported as zero.
    pub empty: bool,
}

#[derive(Default)]
struct Accum {
    matched: usize,
    unmatched_original: usize,
    unmatched_reproduced: usize,
    distance_sum: f64,
    volume_sum: f64,
    volume_count: usize,
    volume_excluded: usize,
}

impl Accum {
    fn finish(&self, category: Option<Category>) -> CategoryStats {
        let avg = |sum: f64, n: usize| if n == 0 { 0.0 } else { sum / n as f64 };
        CategoryStats {
            category,
            matched: self.matched,
            unmatched_original: self.unmatched_original,
            unmatched_reproduced: self.unmatched_reproduced,
            avg_distance: avg(self.distance_sum, self.matched),
            avg_volume_diff_pct: avg(self.volume_sum, self.volume_count),
            volume_excluded: self.volume_excluded,
            empty: self.matched == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffReport {
    /// One entry per category, in [`Category::ALL`] order.
    pub categories: Vec<CategoryStats>,
    pub total: CategoryStats,
    pub method: &'static str,
}

impl DiffReport {
    pub fn category(&self, c: Category) -> &CategoryStats {
        &self.categories[c.index()]
    }

    /// Every original element found a partner and vice versa.
    pub fn fully_matched(&self) -> bool {
        self.total.unmatched_original == 0 && self.total.unmatched_reproduced == 0
    }
}

pub fn diff_models(original: &ModelState, reproduced: &ModelState) -> DiffReport {
    let matching = match_by_comment(original, reproduced);
    let mut per: [Accum; 5] = Default::default();
    let mut total = Accum::default();

    for &id in &matching.unmatched_original {
        let c = original.get(id).expect("live").category;
        per[c.index()].unmatched_original += 1;
        total.unmatched_original += 1;
    }
    for &id in &matching.unmatched_reproduced {
        let c = reproduced.get(id).expect("live").category;
        per[c.index()].unmatched_reproduced += 1;
        total.unmatched_reproduced += 1;
    }
    for &(oid, rid) in &matching.pairs {
        let o = original.get(oid).expect("live");
        let r = reproduced.get(rid).expect("live");
        let d = representative_point(o).distance(representative_point(r));
        let volume = match (original.volume_of(o), reproduced.volume_of(r)) {
            (Ok(vo), Ok(vr)) if vo > 0.0 => Some(100.0 * (vr - vo).abs() / vo),
            _ => None,
        };
        for acc in [&mut per[o.category.index()], &mut total] {
            acc.matched += 1;
            acc.distance_sum += d;
            match volume {
                Some(v) => {
                    acc.volume_sum += v;
                    acc.volume_count += 1;
                }
                None => acc.volume_excluded += 1,
            }
        }
    }

    DiffReport {
        categories: Category::ALL
            .iter()
            .map(|&c| per[c.index()].finish(Some(c)))
            .collect(),
        total: total.finish(None),
        method: MATCH_METHOD,
    }
}
