//! Reading and writing systems and sequences.
//!
//! Text systems (`.psts`):
//!
//! ```text
//! # comment
//! order 7
//! points 0 1 2 3 4 5 6      (optional, fixes the label order)
//! 0 1 3
//! 1 2 4
//! ```
//!
//! The JSON mirror is `{"order": N, "points": [...], "blocks": [[l1, l2, l3], ...]}`
//! with `points` optional. Labels may be JSON strings or numbers.
//!
//! Sequences are one whitespace (or comma) separated line of labels, or a
//! JSON array.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::sequence::{Sequence, SequenceError};
use crate::system::{SystemError, TripleSystem};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing `order` line")]
    MissingOrder,
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

/// Serialized form of a system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemDoc {
    pub order: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<String>,
    pub blocks: Vec<[String; 3]>,
}

impl SystemDoc {
    pub fn from_system(system: &TripleSystem) -> Self {
        SystemDoc {
            order: system.order(),
            points: system.labels().to_vec(),
            blocks: system
                .blocks()
                .iter()
                .map(|b| b.points().map(|p| system.label(p).to_string()))
                .collect(),
        }
    }

    pub fn into_system(self) -> Result<TripleSystem, SystemError> {
        TripleSystem::from_labelled(self.order, &self.points, &self.blocks)
    }
}

#[derive(Deserialize)]
struct LooseDoc {
    order: usize,
    #[serde(default)]
    points: Vec<Value>,
    blocks: Vec<[Value; 3]>,
}

fn label_of(v: &Value) -> Result<String, FormatError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(FormatError::Parse {
            line: 0,
            message: format!("label must be a string or number, got {other}"),
        }),
    }
}

/// Parses a system from either format, sniffing JSON by a leading `{`.
pub fn parse_system(input: &str) -> Result<TripleSystem, FormatError> {
    if input.trim_start().starts_with('{') {
        parse_system_json(input)
    } else {
        parse_system_text(input)
    }
}

pub fn parse_system_json(input: &str) -> Result<TripleSystem, FormatError> {
    let doc: LooseDoc = serde_json::from_str(input)?;
    let points = doc
        .points
        .iter()
        .map(label_of)
        .collect::<Result<Vec<_>, _>>()?;
    let blocks = doc
        .blocks
        .iter()
        .map(|b| Ok([label_of(&b[0])?, label_of(&b[1])?, label_of(&b[2])?]))
        .collect::<Result<Vec<_>, FormatError>>()?;
    Ok(TripleSystem::from_labelled(doc.order, &points, &blocks)?)
}

pub fn parse_system_text(input: &str) -> Result<TripleSystem, FormatError> {
    let mut order = None;
    let mut points = Vec::new();
    let mut blocks = Vec::new();
    for (i, raw) in input.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let err = |message: String| FormatError::Parse { line, message };
        match tokens.as_slice() {
            [] => {}
            ["order", rest @ ..] => {
                if order.is_some() {
                    return Err(err("duplicate `order` line".into()));
                }
                let [n] = rest else {
                    return Err(err("expected `order N`".into()));
                };
                order = Some(
                    n.parse::<usize>()
                        .map_err(|e| err(format!("bad order `{n}`: {e}")))?,
                );
            }
            ["points", rest @ ..] => {
                if order.is_none() {
                    return Err(err("`points` before `order`".into()));
                }
                points.extend(rest.iter().map(|s| s.to_string()));
            }
            [a, b, c] => {
                if order.is_none() {
                    return Err(err("block before `order`".into()));
                }
                blocks.push([a.to_string(), b.to_string(), c.to_string()]);
            }
            other => {
                return Err(err(format!(
                    "expected a block of 3 labels, found {} tokens",
                    other.len()
                )))
            }
        }
    }
    let order = order.ok_or(FormatError::MissingOrder)?;
    Ok(TripleSystem::from_labelled(order, &points, &blocks)?)
}

/// Text form. The `points` line records every label so a re-read gives the
/// same indices.
pub fn write_system_text(system: &TripleSystem) -> String {
    let mut out = format!("order {}\n", system.order());
    if system.order() > 0 {
        out.push_str("points ");
        out.push_str(&system.labels().join(" "));
        out.push('\n');
    }
    for b in system.blocks() {
        let [x, y, z] = b.points();
        out.push_str(&format!(
            "{} {} {}\n",
            system.label(x),
            system.label(y),
            system.label(z)
        ));
    }
    out
}

pub fn write_system_json(system: &TripleSystem) -> String {
    serde_json::to_string_pretty(&SystemDoc::from_system(system)).expect("system serializes")
}

/// Parses a sequence of labels against `system`.
pub fn parse_sequence(input: &str, system: &TripleSystem) -> Result<Sequence, FormatError> {
    let labels: Vec<String> = if input.trim_start().starts_with('[') {
        let values: Vec<Value> = serde_json::from_str(input)?;
        values.iter().map(label_of).collect::<Result<_, _>>()?
    } else {
        input
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(|l| l.split(|c: char| c.is_whitespace() || c == ','))
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect()
    };
    let entries = system.resolve(&labels)?;
    Ok(Sequence::new(entries, system.order())?)
}

pub fn write_sequence(seq: &Sequence, system: &TripleSystem) -> String {
    seq.labels(system).join(" ")
}
