//! Diff report rendering: JSON and an aligned text table.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use bimlog_core::diff::{CategoryStats, DiffReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct StatsJson {
    pub category: String,
    pub matched: usize,
    pub unmatched_original: usize,
    pub unmatched_reproduced: usize,
    pub avg_distance: f64,
    pub avg_volume_diff_pct: f64,
    pub volume_excluded: usize,
    pub empty: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DiffReportJson {
    pub method: String,
    pub categories: Vec<StatsJson>,
    pub total: StatsJson,
}

fn stats_json(s: &CategoryStats) -> StatsJson {
    StatsJson {
        category: s.category.map_or("Total", |c| c.name()).into(),
        matched: s.matched,
        unmatched_original: s.unmatched_original,
        unmatched_reproduced: s.unmatched_reproduced,
        avg_distance: s.avg_distance,
        avg_volume_diff_pct: s.avg_volume_diff_pct,
        volume_excluded: s.volume_excluded,
        empty: s.empty,
    }
}

pub fn to_json(r: &DiffReport) -> DiffReportJson {
    DiffReportJson {
        method: r.method.into(),
        categories: r.categories.iter().map(stats_json).collect(),
        total: stats_json(&r.total),
    }
}

pub fn render_json(r: &DiffReport) -> String {
    let mut s = serde_json::to_string_pretty(&to_json(r)).expect("report is serializable");
    s.push('\n');
    s
}

pub fn render_table(r: &DiffReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<8} {:>7} {:>8} {:>8} {:>14} {:>14}",
        "category", "matched", "orig-only", "repr-only", "avg_distance", "avg_vol_diff%"
    );
    for s in r.categories.iter().chain([&r.total]) {
        let name = s.category.map_or("Total", |c| c.name());
        let (d, v) = if s.empty {
            ("-".to_string(), "-".to_string())
        } else {
            (
                format!("{:.4E}", s.avg_distance),
                format!("{:.4}%", s.avg_volume_diff_pct),
            )
        };
        let _ = writeln!(
            out,
            "{:<8} {:>7} {:>9} {:>9} {:>14} {:>14}",
            name, s.matched, s.unmatched_original, s.unmatched_reproduced, d, v
        );
    }
    out
}
