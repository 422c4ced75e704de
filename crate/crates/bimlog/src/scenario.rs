//! Scenario script files: a JSON list of steps.

use serde::{Deserialize, Serialize};

use bimlog_core::codec::{
    format_params, parse_geometry, parse_params, serialize_geometry, CodecError, ParamError,
};
use bimlog_core::model::{Category, Subtype};
use bimlog_core::params::ParamSet;
use bimlog_core::sim::ScenarioStep;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Add,
    Modify,
    Delete,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct StepJson {
    pub kind: StepKind,
    pub tag: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subtype: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub params: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub host_tag: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum ScenarioFileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("step {step}: {message}")]
    Step { step: usize, message: String },
}

pub fn to_json(steps: &[ScenarioStep]) -> Result<String, ParamError> {
    let list = steps
        .iter()
        .map(|s| {
            Ok(match s {
                ScenarioStep::Add {
                    tag,
                    category,
                    subtype,
                    geometry,
                    params,
                    host_tag,
                } => StepJson {
                    kind: StepKind::Add,
                    tag: tag.clone(),
                    category: Some(category.name().into()),
                    subtype: Some(subtype.name().into()),
                    geometry: Some(serialize_geometry(geometry)),
                    params: format_params(params)?,
                    host_tag: host_tag.clone(),
                },
                ScenarioStep::Modify {
                    tag,
                    geometry,
                    params,
                } => StepJson {
                    kind: StepKind::Modify,
                    tag: tag.clone(),
                    category: None,
                    subtype: None,
                    geometry: geometry.as_ref().map(serialize_geometry),
                    params: format_params(params)?,
                    host_tag: None,
                },
                ScenarioStep::Delete { tag } => StepJson {
                    kind: StepKind::Delete,
                    tag: tag.clone(),
                    category: None,
                    subtype: None,
                    geometry: None,
                    params: String::new(),
                    host_tag: None,
                },
            })
        })
        .collect::<Result<Vec<_>, ParamError>>()?;
    let mut s = serde_json::to_string_pretty(&list).expect("steps are serializable");
    s.push('\n');
    Ok(s)
}

pub fn from_json(json: &str) -> Result<Vec<ScenarioStep>, ScenarioFileError> {
    let list: Vec<StepJson> = serde_json::from_str(json)?;
    list.into_iter()
        .enumerate()
        .map(|(i, s)| {
            let err = |message: String| ScenarioFileError::Step { step: i, message };
            let geometry =
                |g: &str| parse_geometry(g).map_err(|e: CodecError| err(format!("geometry: {e}")));
            let params = if s.params.is_empty() {
                ParamSet::new()
            } else {
                parse_params(&s.params).map_err(|e| err(format!("params: {e}")))?
            };
            Ok(match s.kind {
                StepKind::Add => {
                    let category = s.category.as_deref().unwrap_or_default();
                    let subtype = s.subtype.as_deref().unwrap_or_default();
                    ScenarioStep::Add {
                        category: Category::parse(category)
                            .ok_or_else(|| err(format!("unknown category `{category}`")))?,
                        subtype: Subtype::parse(subtype)
                            .ok_or_else(|| err(format!("unknown subtype `{subtype}`")))?,
                        geometry: geometry(
                            s.geometry
                                .as_deref()
                                .ok_or_else(|| err("add needs geometry".into()))?,
                        )?,
                        params,
                        host_tag: s.host_tag,
                        tag: s.tag,
                    }
                }
                StepKind::Modify => ScenarioStep::Modify {
                    geometry: s.geometry.as_deref().map(geometry).transpose()?,
                    params,
                    tag: s.tag,
                },
                StepKind::Delete => ScenarioStep::Delete { tag: s.tag },
            })
        })
        .collect()
}
