//! The workload file: a versioned TOML document holding workload
//! declarations, non-scheduled records, observations and the server pool.
//! Field-by-field reference in `docs/format.md`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{validate_spec, NonScheduledRecord, ObservationSet, ServerState, WorkloadSpec};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkloadFile {
    pub version: u32,
    #[serde(default)]
    pub workloads: Vec<WorkloadSpec>,
    #[serde(default)]
    pub records: Vec<NonScheduledRecord>,
    #[serde(default)]
    pub observations: BTreeMap<String, ObservationSet>,
    #[serde(default)]
    pub servers: Vec<ServerState>,
}

impl WorkloadFile {
    pub fn new() -> Self {
        WorkloadFile { version: FORMAT_VERSION, ..Default::default() }
    }

    pub fn workload(&self, id: &str) -> Option<&WorkloadSpec> {
        self.workloads.iter().find(|w| w.workload_id == id)
    }

    pub fn specs_by_id(&self) -> BTreeMap<String, WorkloadSpec> {
        self.workloads.iter().map(|w| (w.workload_id.clone(), w.clone())).collect()
    }
}

/// Where in the input a problem was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    /// 1-based line and column.
    Position { line: usize, column: usize },
    /// Dotted path to the offending field, e.g. `records[2].workload_id`.
    Field(String),
    Document,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Position { line, column } => write!(f, "line {line}, column {column}"),
            Location::Field(path) => f.write_str(path),
            Location::Document => f.write_str("document"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileError {
    pub location: Location,
    pub message: String,
}

impl FileError {
    fn field(path: impl Into<String>, message: impl Into<String>) -> Self {
        FileError { location: Location::Field(path.into()), message: message.into() }
    }
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// All problems found in one document.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub errors: Vec<FileError>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.errors.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

fn position(text: &str, offset: usize) -> Location {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Location::Position { line, column }
}

fn from_toml(text: &str, err: toml::de::Error) -> FileError {
    let location = err.span().map_or(Location::Document, |span| position(text, span.start));
    FileError { location, message: err.message().trim().to_string() }
}

#[derive(Deserialize)]
struct VersionProbe {
    version: Option<toml::Value>,
}

/// Parses and validates a workload file. Unknown fields, bad enum variants,
/// broken invariants and dangling ids are all reported with a location.
pub fn parse_workload_file(text: &str) -> Result<WorkloadFile, ParseError> {
    let fail = |e: FileError| ParseError { errors: vec![e] };

    let probe: VersionProbe = toml::from_str(text).map_err(|e| fail(from_toml(text, e)))?;
    match probe.version {
        None => return Err(fail(FileError::field("version", "missing format version"))),
        Some(toml::Value::Integer(v)) if v == i64::from(FORMAT_VERSION) => {}
        Some(other) => {
            return Err(fail(FileError::field(
                "version",
                format!("unsupported format version {other}, expected {FORMAT_VERSION}"),
            )))
        }
    }

    let file: WorkloadFile = toml::from_str(text).map_err(|e| fail(from_toml(text, e)))?;
    let errors = check_references(&file);
    if errors.is_empty() {
        Ok(file)
    } else {
        Err(ParseError { errors })
    }
}

/// Cross-field checks on an already-deserialized file.
pub fn check_references(file: &WorkloadFile) -> Vec<FileError> {
    let mut errors = Vec::new();

    let mut workload_ids = BTreeSet::new();
    for (i, w) in file.workloads.iter().enumerate() {
        if !workload_ids.insert(w.workload_id.as_str()) {
            errors.push(FileError::field(
                format!("workloads[{i}].workload_id"),
                format!("duplicate workload id `{}`", w.workload_id),
            ));
        }
        for v in validate_spec(w) {
            errors.push(FileError::field(format!("workloads[{i}]"), v.to_string()));
        }
    }

    let mut server_ids = BTreeSet::new();
    for (i, s) in file.servers.iter().enumerate() {
        if !server_ids.insert(s.resource_id.as_str()) {
            errors.push(FileError::field(
                format!("servers[{i}].resource_id"),
                format!("duplicate resource id `{}`", s.resource_id),
            ));
        }
        for p in s.problems() {
            errors.push(FileError::field(format!("servers[{i}]"), p));
        }
    }

    let mut record_keys = BTreeSet::new();
    for (i, r) in file.records.iter().enumerate() {
        if !workload_ids.contains(r.workload_id.as_str()) {
            errors.push(FileError::field(
                format!("records[{i}].workload_id"),
                format!("dangling reference: no workload `{}`", r.workload_id),
            ));
        }
        if !record_keys.insert((r.workload_id.as_str(), r.process_id.as_str())) {
            errors.push(FileError::field(
                format!("records[{i}].process_id"),
                format!("duplicate record {}/{}", r.workload_id, r.process_id),
            ));
        }
        for p in r.problems() {
            errors.push(FileError::field(format!("records[{i}]"), p));
        }
        for (j, res) in r.resource_list.iter().enumerate() {
            if !server_ids.contains(res.as_str()) {
                errors.push(FileError::field(
                    format!("records[{i}].resource_list[{j}]"),
                    format!("dangling reference: no server `{res}`"),
                ));
            }
        }
    }

    for (id, obs) in &file.observations {
        if !workload_ids.contains(id.as_str()) {
            errors.push(FileError::field(
                format!("observations.{id}"),
                format!("dangling reference: no workload `{id}`"),
            ));
        }
        for p in obs.problems() {
            errors.push(FileError::field(format!("observations.{id}.{}", p.path), p.message));
        }
    }

    if file.version != FORMAT_VERSION {
        errors.push(FileError::field("version", format!("expected {FORMAT_VERSION}")));
    }
    errors
}

/// Canonical text of a workload file; parses back to an equal value.
pub fn emit_workload_file(file: &WorkloadFile) -> String {
    toml::to_string(file).expect("workload files contain only TOML-representable values")
}
