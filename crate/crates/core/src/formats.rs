//! File formats read and written by the CLI.
//!
//! * assignment: `{"sign": "paper"|"consistent", "entries": [{"in": <expr>, "out": <expr>}, ...]}`
//! * table: `{"window": N, "sign": ..., "images": [{"basis": "L[2]", "image": <expr>}, ...]}`
//! * samples: one element expression per line; blank lines and `#` comments are ignored.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Basis, CocycleSign};
use crate::derivation::DerivationError;
use crate::expr::{parse_basis, parse_element, ParseError};
use crate::two_local::{Provenance, TwoLocalAssignment};
use crate::{Coefficient, DerivationTable, Element};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{context}: {source}")]
    Parse {
        context: String,
        #[source]
        source: ParseError,
    },
    #[error("unknown sign convention `{0}` (expected `paper` or `consistent`)")]
    UnknownSign(String),
    #[error("duplicate entry for `{0}`")]
    Duplicate(String),
    #[error(transparent)]
    Table(#[from] DerivationError),
}

#[derive(Debug, Serialize, Deserialize)]
struct AssignmentFile {
    sign: String,
    entries: Vec<AssignmentEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct AssignmentEntry {
    #[serde(rename = "in")]
    input: String,
    out: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct TableFile {
    window: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sign: Option<String>,
    images: Vec<TableImage>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TableImage {
    basis: String,
    image: String,
}

fn sign_from(s: &str) -> Result<CocycleSign, FormatError> {
    CocycleSign::from_name(s).ok_or_else(|| FormatError::UnknownSign(s.to_string()))
}

fn parse_in(context: impl FnOnce() -> String, text: &str) -> Result<Element, FormatError> {
    parse_element(text).map_err(|source| FormatError::Parse {
        context: context(),
        source,
    })
}

pub fn read_assignment(
    text: &str,
) -> Result<(CocycleSign, TwoLocalAssignment<Coefficient>), FormatError> {
    let file: AssignmentFile = serde_json::from_str(text)?;
    let sign = sign_from(&file.sign)?;
    let mut out = TwoLocalAssignment::new(Provenance::FromTable);
    for (i, e) in file.entries.iter().enumerate() {
        let x = parse_in(|| format!("entries[{i}].in"), &e.input)?;
        let y = parse_in(|| format!("entries[{i}].out"), &e.out)?;
        if out.contains(&x) {
            return Err(FormatError::Duplicate(x.to_string()));
        }
        out.insert(x, y);
    }
    Ok((sign, out))
}

pub fn write_assignment(sign: CocycleSign, assignment: &TwoLocalAssignment<Coefficient>) -> String {
    let file = AssignmentFile {
        sign: sign.name().to_string(),
        entries: assignment
            .iter()
            .map(|(x, y)| AssignmentEntry {
                input: x.to_string(),
                out: y.to_string(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

/// Reads a table; the sign field is optional.
pub fn read_table(text: &str) -> Result<(Option<CocycleSign>, DerivationTable), FormatError> {
    let file: TableFile = serde_json::from_str(text)?;
    let sign = file.sign.as_deref().map(sign_from).transpose()?;
    let mut images: BTreeMap<Basis, Element> = BTreeMap::new();
    for (i, img) in file.images.iter().enumerate() {
        let b = parse_basis(&img.basis).map_err(|source| FormatError::Parse {
            context: format!("images[{i}].basis"),
            source,
        })?;
        let e = parse_in(|| format!("images[{i}].image"), &img.image)?;
        if images.insert(b, e).is_some() {
            return Err(FormatError::Duplicate(b.to_string()));
        }
    }
    Ok((sign, DerivationTable::from_images(file.window, images)?))
}

pub fn write_table(table: &DerivationTable, sign: Option<CocycleSign>) -> String {
    let file = TableFile {
        window: table.window(),
        sign: sign.map(|s| s.name().to_string()),
        images: table
            .images()
            .iter()
            .map(|(b, e)| TableImage {
                basis: b.to_string(),
                image: e.to_string(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

pub fn read_samples(text: &str) -> Result<Vec<Element>, FormatError> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i, line.split('#').next().unwrap_or("").trim()))
        .filter(|(_, line)| !line.is_empty())
        .map(|(i, line)| parse_in(|| format!("line {}", i + 1), line))
        .collect()
}

pub fn write_samples(samples: &[Element]) -> String {
    samples.iter().map(|s| format!("{s}\n")).collect()
}
