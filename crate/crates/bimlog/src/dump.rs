//! Canonical JSON dump of a model.

use serde::{Deserialize, Serialize};

use bimlog_core::codec::{
    format_params, parse_geometry, parse_params, serialize_geometry, CodecError, ParamError,
};
use bimlog_core::model::{Category, ElementId, ElementRecord, ModelError, ModelState, Subtype};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ModelDump {
    pub schema_version: u32,
    pub next_id: ElementId,
    pub elements: Vec<ElementDump>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ElementDump {
    pub id: ElementId,
    pub category: String,
    pub subtype: String,
    /// Geometry in its log text form.
    pub geometry: String,
    /// Parameters in the log's `name=value;...` form.
    pub params: String,
    pub host: Option<ElementId>,
}

#[derive(Debug, thiserror::Error)]
pub enum DumpError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema version {found} (expected {SCHEMA_VERSION})")]
    Schema { found: u32 },
    #[error("element {id}: unknown {what} `{value}`")]
    Name {
        id: ElementId,
        what: &'static str,
        value: String,
    },
    #[error("element {id}: geometry: {source}")]
    Geometry { id: ElementId, source: CodecError },
    #[error("element {id}: params: {source}")]
    Params { id: ElementId, source: ParamError },
    #[error("{0}")]
    Model(#[from] ModelError),
}

pub fn to_dump(model: &ModelState) -> Result<ModelDump, DumpError> {
    Ok(ModelDump {
        schema_version: SCHEMA_VERSION,
        next_id: model.next_id(),
        elements: model
            .elements()
            .map(|e| {
                Ok(ElementDump {
                    id: e.id,
                    category: e.category.name().into(),
                    subtype: e.subtype.name().into(),
                    geometry: serialize_geometry(&e.geometry),
                    params: format_params(&e.params)
                        .map_err(|source| DumpError::Params { id: e.id, source })?,
                    host: e.host,
                })
            })
            .collect::<Result<_, DumpError>>()?,
    })
}

/// Pretty-printed JSON with a trailing newline; elements sorted by id.
pub fn dump_model(model: &ModelState) -> Result<String, DumpError> {
    let mut s = serde_json::to_string_pretty(&to_dump(model)?)?;
    s.push('\n');
    Ok(s)
}

pub fn from_dump(dump: ModelDump) -> Result<ModelState, DumpError> {
    if dump.schema_version != SCHEMA_VERSION {
        return Err(DumpError::Schema {
            found: dump.schema_version,
        });
    }
    let records = dump
        .elements
        .into_iter()
        .map(|e| {
            let id = e.id;
            let name_err = |what, value: &str| DumpError::Name {
                id,
                what,
                value: value.into(),
            };
            Ok(ElementRecord {
                id,
                category: Category::parse(&e.category)
                    .ok_or_else(|| name_err("category", &e.category))?,
                subtype: Subtype::parse(&e.subtype)
                    .ok_or_else(|| name_err("subtype", &e.subtype))?,
                geometry: parse_geometry(&e.geometry)
                    .map_err(|source| DumpError::Geometry { id, source })?,
                params: parse_params(&e.params)
                    .map_err(|source| DumpError::Params { id, source })?,
                host: e.host,
            })
        })
        .collect::<Result<Vec<_>, DumpError>>()?;
    Ok(ModelState::restore(records, dump.next_id)?)
}

pub fn load_model(json: &str) -> Result<ModelState, DumpError> {
    from_dump(serde_json::from_str(json)?)
}
