use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Units a report entry may carry. The string forms are part of the output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Unit {
    #[serde(rename = "bps")]
    BitsPerSecond,
    #[serde(rename = "%")]
    Percent,
    #[serde(rename = "ratio")]
    Ratio,
    #[serde(rename = "ms")]
    Millis,
    #[serde(rename = "GB")]
    Gigabytes,
    #[serde(rename = "actions/min")]
    ActionsPerMinute,
    #[serde(rename = "orders/s")]
    OrdersPerSecond,
    #[serde(rename = "accesses/s")]
    AccessesPerSecond,
    #[serde(rename = "commits/s")]
    CommitsPerSecond,
    #[serde(rename = "MB/s")]
    MegabytesPerSecond,
}

impl Unit {
    pub const ALL: [Unit; 10] = [
        Unit::BitsPerSecond,
        Unit::Percent,
        Unit::Ratio,
        Unit::Millis,
        Unit::Gigabytes,
        Unit::ActionsPerMinute,
        Unit::OrdersPerSecond,
        Unit::AccessesPerSecond,
        Unit::CommitsPerSecond,
        Unit::MegabytesPerSecond,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Unit::BitsPerSecond => "bps",
            Unit::Percent => "%",
            Unit::Ratio => "ratio",
            Unit::Millis => "ms",
            Unit::Gigabytes => "GB",
            Unit::ActionsPerMinute => "actions/min",
            Unit::OrdersPerSecond => "orders/s",
            Unit::AccessesPerSecond => "accesses/s",
            Unit::CommitsPerSecond => "commits/s",
            Unit::MegabytesPerSecond => "MB/s",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Value outside the range the formula is meant to produce.
    Anomalous,
    OverUtilized,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Anomalous => "anomalous",
            Verdict::OverUtilized => "over-utilized",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub metric_name: String,
    pub value: f64,
    pub unit: Unit,
    pub verdict: Option<Verdict>,
    /// Short hash of the inputs the value was computed from.
    pub inputs_digest: String,
}

/// Hex prefix of the SHA-256 of an input description.
pub fn digest_inputs(description: &str) -> String {
    let hash = Sha256::digest(description.as_bytes());
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("metric `{0}` is already present in the report")]
pub struct DuplicateMetric(pub String);

/// Named metric values. Names are unique within a report.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct QoSReport {
    entries: Vec<ReportEntry>,
}

impl QoSReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, entry: ReportEntry) -> Result<(), DuplicateMetric> {
        if self.get(&entry.metric_name).is_some() {
            return Err(DuplicateMetric(entry.metric_name));
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.metric_name == name)
    }

    pub fn entries(&self) -> &[ReportEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Merges another report under a name prefix (`prefix.metric`).
    pub fn extend_prefixed(&mut self, prefix: &str, other: QoSReport) -> Result<(), DuplicateMetric> {
        for mut e in other.entries {
            e.metric_name = format!("{prefix}.{}", e.metric_name);
            self.push(e)?;
        }
        Ok(())
    }
}
