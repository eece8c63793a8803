//! Result records, one per executed statement.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::diag::{line_col, Diagnostic, Span};

/// The JSON schema every record list validates against.
pub const SCHEMA: &str = include_str!("../schema/records.schema.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordKind {
    Definition,
    Command,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Location {
    pub line: usize,
    pub column: usize,
    pub start: usize,
    pub end: usize,
}

impl Location {
    pub fn of(src: &str, span: Span) -> Location {
        let (line, column) = line_col(src, span.start);
        Location {
            line,
            column,
            start: span.start,
            end: span.end,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub order: String,
    /// Truncation bounds and attempt counts that shaped the result.
    pub bounds: BTreeMap<String, u64>,
    /// Certificates and caveats, in words.
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRecord {
    pub index: usize,
    /// The statement as printed back from the syntax tree.
    pub command: String,
    pub kind: RecordKind,
    pub status: Status,
    /// One-line human summary of the payload.
    pub summary: String,
    pub payload: Value,
    pub provenance: Provenance,
    pub wall_time_ms: f64,
    pub location: Location,
    pub error: Option<String>,
}

/// A syntax or binding diagnostic in JSON form, used when a session does
/// not get as far as execution.
#[derive(Clone, Debug, Serialize)]
pub struct DiagnosticRecord {
    pub message: String,
    pub expected: Vec<String>,
    pub location: Location,
}

impl DiagnosticRecord {
    pub fn of(src: &str, d: &Diagnostic) -> DiagnosticRecord {
        DiagnosticRecord {
            message: d.message.clone(),
            expected: d.expected.clone(),
            location: Location::of(src, d.span),
        }
    }
}

/// The document written by `--json`.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub source: String,
    pub diagnostics: Vec<DiagnosticRecord>,
    pub records: Vec<ResultRecord>,
}
