//! `name=value;name=value` parameter patches.
//!
//! Value literals: reals as plain decimals (`3`, `0.3`), integers with a
//! `#` prefix (`#12`), element references with `@` (`@1001`), flags as
//! `true`/`false`, and text in double quotes with `\` escaping `\`, `"`,
//! `;` and `=`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::number::{format_real, parse_real};
use crate::params::{is_valid_param_name, ParamSet, ParamValue};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParamError {
    #[error("invalid parameter name `{0}`")]
    Name(String),
    #[error("duplicate parameter `{0}`")]
    Duplicate(String),
    #[error("parameter `{name}`: invalid value `{text}`")]
    Value { name: String, text: String },
    #[error("missing `=` in `{0}`")]
    MissingEquals(String),
    #[error("non-finite value for `{0}`")]
    NonFinite(String),
}

pub fn format_value(v: &ParamValue) -> String {
    match v {
        ParamValue::Real(x) => format_real(*x),
        ParamValue::Integer(i) => alloc::format!("#{i}"),
        ParamValue::Element(id) => alloc::format!("@{id}"),
        ParamValue::Flag(b) => b.to_string(),
        ParamValue::Text(s) => {
            let mut out = String::with_capacity(s.len() + 2);
            out.push('"');
            for ch in s.chars() {
                if matches!(ch, '\\' | '"' | ';' | '=') {
                    out.push('\\');
                }
                out.push(ch);
            }
            out.push('"');
            out
        }
    }
}

pub fn format_params(params: &ParamSet) -> Result<String, ParamError> {
    let mut out = String::new();
    for (i, (name, value)) in params.iter().enumerate() {
        if !is_valid_param_name(name) {
            return Err(ParamError::Name(name.to_string()));
        }
        if !value.is_finite() {
            return Err(ParamError::NonFinite(name.to_string()));
        }
        if i > 0 {
            out.push(';');
        }
        out.push_str(name);
        out.push('=');
        out.push_str(&format_value(value));
    }
    Ok(out)
}

fn parse_value(name: &str, text: &str) -> Result<ParamValue, ParamError> {
    let bad = || ParamError::Value {
        name: name.to_string(),
        text: text.to_string(),
    };
    let t = text.trim();
    if let Some(body) = t.strip_prefix('"') {
        let body = body.strip_suffix('"').ok_or_else(bad)?;
        let mut out = String::with_capacity(body.len());
        let mut chars = body.chars();
        while let Some(ch) = chars.next() {
            match ch {
                '\\' => out.push(chars.next().ok_or_else(bad)?),
                '"' => return Err(bad()),
                c => out.push(c),
            }
        }
        return Ok(ParamValue::Text(out));
    }
    match t {
        "true" => return Ok(ParamValue::Flag(true)),
        "false" => return Ok(ParamValue::Flag(false)),
        _ => {}
    }
    if let Some(i) = t.strip_prefix('#') {
        return i.parse().map(ParamValue::Integer).map_err(|_| bad());
    }
    if let Some(id) = t.strip_prefix('@') {
        return id.parse().map(ParamValue::Element).map_err(|_| bad());
    }
    parse_real(t).map(ParamValue::Real).ok_or_else(bad)
}

/// Splits on `;` that is neither escaped nor inside a quoted text value.
fn split_items(s: &str) -> Vec<&str> {
    let mut items = Vec::new();
    let mut start = 0;
    let mut in_text = false;
    let mut escaped = false;
    for (i, b) in s.bytes().enumerate() {
        if escaped {
            escaped = false;
            continue;
        }
        match b {
            b'\\' => escaped = true,
            b'"' => in_text = !in_text,
            b';' if !in_text => {
                items.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    items.push(&s[start..]);
    items
}

pub fn parse_params(s: &str) -> Result<ParamSet, ParamError> {
    let mut set = ParamSet::new();
    if s.trim().is_empty() {
        return Ok(set);
    }
    for item in split_items(s) {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| ParamError::MissingEquals(item.to_string()))?;
        let name = name.trim();
        if !is_valid_param_name(name) {
            return Err(ParamError::Name(name.to_string()));
        }
        if set.contains(name) {
            return Err(ParamError::Duplicate(name.to_string()));
        }
        let v = parse_value(name, value)?;
        set.set(name, v);
    }
    Ok(set)
}
