//! Raw measurements from which the QoS metrics are computed.
//!
//! Durations here are milliseconds unless a field name says otherwise
//! (`seconds`). Every group is optional; a metric is only reported when
//! its inputs are present.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::time::Ticks;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandwidthSample {
    pub bits: u64,
    pub seconds: f64,
}

/// Probability of an attack occurring and of it being repelled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThreatPair {
    pub threat: f64,
    pub security: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UsabilitySample {
    pub learn_time: f64,
    pub successful_ops: u64,
    pub total_ops: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FailureSample {
    pub mttf: f64,
    pub mttr: f64,
}

/// Time spent on each phase of one change request.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChangeRequest {
    pub analyze: f64,
    pub modify: f64,
    pub test: f64,
    pub distribute: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatencySample {
    pub input_time: Ticks,
    pub output_time: Ticks,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FulfillmentLevel {
    VerySatisfied,
    Satisfied,
    Neutral,
    Dissatisfied,
    CompletelyDissatisfied,
}

impl FulfillmentLevel {
    pub const ALL: [FulfillmentLevel; 5] = [
        FulfillmentLevel::VerySatisfied,
        FulfillmentLevel::Satisfied,
        FulfillmentLevel::Neutral,
        FulfillmentLevel::Dissatisfied,
        FulfillmentLevel::CompletelyDissatisfied,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChangeCounts {
    pub dynamic_changes: u64,
    pub static_changes: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestingSample {
    pub prep: f64,
    pub exec: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadSnapshot {
    pub actual: f64,
    pub expected: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportCounts {
    pub inquiries: u64,
    pub visits: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrectnessSample {
    pub expected_cs: f64,
    pub observed_cs: f64,
    pub existing_cs: u64,
    pub requested_cs: u64,
    pub defect_count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UptimeSample {
    pub uptime: f64,
    pub downtime: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UsageSample {
    pub actual_usage: f64,
    pub expected_usage: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeoutCounts {
    pub timeout_count: u64,
    pub request_count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlatformCounts {
    pub compatible_platforms: u64,
    pub total_platforms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UncertaintySeries {
    pub amounts: Vec<f64>,
    pub proportion: f64,
}

/// Server families with a dedicated throughput unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ServerKind {
    Mail,
    Java,
    Web,
    Database,
    File,
}

impl ServerKind {
    pub const ALL: [ServerKind; 5] =
        [ServerKind::Mail, ServerKind::Java, ServerKind::Web, ServerKind::Database, ServerKind::File];

    pub fn name(self) -> &'static str {
        match self {
            ServerKind::Mail => "mail",
            ServerKind::Java => "java",
            ServerKind::Web => "web",
            ServerKind::Database => "database",
            ServerKind::File => "file",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServerEvents {
    pub server_kind: ServerKind,
    /// Actions, orders, accesses, commits, or megabytes depending on the kind.
    pub quantity: f64,
    pub seconds: f64,
}

/// A location in a service through which an external force can drive change.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlexiblePoint {
    pub point_id: String,
    /// Minimum external force that causes a change here.
    pub flexible_force: f64,
    /// Largest change that force can cause.
    pub flexible_distance: f64,
    pub applied_external_force: f64,
}

impl FlexiblePoint {
    pub fn new(point_id: impl Into<String>, force: f64, distance: f64, applied: f64) -> Self {
        FlexiblePoint {
            point_id: point_id.into(),
            flexible_force: force,
            flexible_distance: distance,
            applied_external_force: applied,
        }
    }
}

/// Answers to the four reliable-storage questions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StorageChecklist {
    pub location_documented: bool,
    pub retention_documented: bool,
    pub volume_documented: bool,
    pub mining_protected: bool,
}

impl StorageChecklist {
    pub fn answers(&self) -> [bool; 4] {
        [
            self.location_documented,
            self.retention_documented,
            self.volume_documented,
            self.mining_protected,
        ]
    }
}

pub const SECURITY_DRIVERS: [&str; 7] = ["CM", "RM", "RV", "LR", "PR", "LS", "II"];

/// Which business drivers each security measure bears on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SecurityMatrix {
    pub measures: Vec<String>,
    pub drivers: Vec<String>,
    pub cells: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixShapeError {
    #[error("security matrix has {rows} cell rows for {measures} measures")]
    RowCount { rows: usize, measures: usize },
    #[error("security matrix row {row} has {len} cells, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
    #[error("security matrix drivers must be exactly CM, RM, RV, LR, PR, LS, II")]
    Drivers,
}

impl SecurityMatrix {
    /// The reference matrix: five measures against the seven business drivers.
    pub fn standard() -> Self {
        const X: bool = true;
        const O: bool = false;
        SecurityMatrix {
            measures: vec![
                "The number of Fake alarms monitored by Corporate Security".into(),
                "Security cost = % of total company revenue".into(),
                "Number of safety hazards proactively identified".into(),
                "% of dangerous data resources residing on systems".into(),
                "The number of ineffectual service responses to the issues identified by the Security as control weaknesses".into(),
            ],
            drivers: SECURITY_DRIVERS.iter().map(|d| d.to_string()).collect(),
            //          CM RM RV LR PR LS II
            cells: vec![
                vec![X, X, X, O, X, O, O],
                vec![X, X, O, O, O, O, X],
                vec![X, X, X, X, O, O, O],
                vec![X, X, X, O, X, O, O],
                vec![X, X, O, X, O, O, X],
            ],
        }
    }

    pub fn empty() -> Self {
        let standard = Self::standard();
        let width = standard.drivers.len();
        SecurityMatrix {
            cells: vec![vec![false; width]; standard.measures.len()],
            ..standard
        }
    }

    pub fn check_shape(&self) -> Result<(), MatrixShapeError> {
        let mut drivers: Vec<&str> = self.drivers.iter().map(String::as_str).collect();
        drivers.sort_unstable();
        let mut expected = SECURITY_DRIVERS.to_vec();
        expected.sort_unstable();
        if drivers != expected {
            return Err(MatrixShapeError::Drivers);
        }
        if self.cells.len() != self.measures.len() {
            return Err(MatrixShapeError::RowCount {
                rows: self.cells.len(),
                measures: self.measures.len(),
            });
        }
        for (row, cells) in self.cells.iter().enumerate() {
            if cells.len() != self.drivers.len() {
                return Err(MatrixShapeError::Ragged {
                    row,
                    len: cells.len(),
                    expected: self.drivers.len(),
                });
            }
        }
        Ok(())
    }
}

/// Every raw input the metrics engine consumes, grouped by metric.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservationSet {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bandwidth: Option<BandwidthSample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrity: Option<Vec<ThreatPair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub usability: Option<UsabilitySample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failures: Option<FailureSample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub changes: Option<Vec<ChangeRequest>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latency: Option<LatencySample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fulfillment: Option<FulfillmentLevel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub customization: Option<ChangeCounts>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub testing: Option<TestingSample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub load: Option<LoadSnapshot>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<SupportCounts>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correctness: Option<CorrectnessSample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uptime: Option<UptimeSample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub usage: Option<UsageSample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timeouts: Option<TimeoutCounts>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub platforms: Option<PlatformCounts>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uncertainty: Option<UncertaintySeries>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub security: Option<SecurityMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub server_events: Option<Vec<ServerEvents>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flexible_points: Option<Vec<FlexiblePoint>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backup_gb: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub visibility_score: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub storage_checklist: Option<StorageChecklist>,
}

/// One broken observation invariant, with the field path it was found at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationProblem {
    pub path: String,
    pub message: &'static str,
}

impl fmt::Display for ObservationProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

struct Checker {
    problems: Vec<ObservationProblem>,
}

impl Checker {
    fn non_negative(&mut self, path: impl Into<String>, v: f64) {
        if !(v.is_finite() && v >= 0.0) {
            self.push(path, "must be finite and non-negative");
        }
    }

    fn probability(&mut self, path: impl Into<String>, v: f64) {
        if !(0.0..=1.0).contains(&v) {
            self.push(path, "must be a probability in [0, 1]");
        }
    }

    fn push(&mut self, path: impl Into<String>, message: &'static str) {
        self.problems.push(ObservationProblem { path: path.into(), message });
    }
}

impl ObservationSet {
    /// Domain checks on the raw values. Metric-specific preconditions
    /// (non-zero denominators and the like) are left to the metric operations.
    pub fn problems(&self) -> Vec<ObservationProblem> {
        let mut c = Checker { problems: Vec::new() };
        if let Some(b) = &self.bandwidth {
            c.non_negative("bandwidth.seconds", b.seconds);
        }
        if let Some(pairs) = &self.integrity {
            for (i, p) in pairs.iter().enumerate() {
                c.probability(format!("integrity[{i}].threat"), p.threat);
                c.probability(format!("integrity[{i}].security"), p.security);
            }
        }
        if let Some(u) = &self.usability {
            c.non_negative("usability.learn_time", u.learn_time);
        }
        if let Some(f) = &self.failures {
            c.non_negative("failures.mttf", f.mttf);
            c.non_negative("failures.mttr", f.mttr);
        }
        if let Some(changes) = &self.changes {
            for (i, ch) in changes.iter().enumerate() {
                c.non_negative(format!("changes[{i}].analyze"), ch.analyze);
                c.non_negative(format!("changes[{i}].modify"), ch.modify);
                c.non_negative(format!("changes[{i}].test"), ch.test);
                c.non_negative(format!("changes[{i}].distribute"), ch.distribute);
            }
        }
        if let Some(t) = &self.testing {
            c.non_negative("testing.prep", t.prep);
            c.non_negative("testing.exec", t.exec);
        }
        if let Some(l) = &self.load {
            c.non_negative("load.actual", l.actual);
            c.non_negative("load.expected", l.expected);
        }
        if let Some(cs) = &self.correctness {
            c.non_negative("correctness.expected_cs", cs.expected_cs);
            c.non_negative("correctness.observed_cs", cs.observed_cs);
        }
        if let Some(u) = &self.uptime {
            c.non_negative("uptime.uptime", u.uptime);
            c.non_negative("uptime.downtime", u.downtime);
        }
        if let Some(u) = &self.usage {
            c.non_negative("usage.actual_usage", u.actual_usage);
            c.non_negative("usage.expected_usage", u.expected_usage);
        }
        if let Some(u) = &self.uncertainty {
            for (i, a) in u.amounts.iter().enumerate() {
                c.non_negative(format!("uncertainty.amounts[{i}]"), *a);
            }
        }
        if let Some(events) = &self.server_events {
            for (i, e) in events.iter().enumerate() {
                c.non_negative(format!("server_events[{i}].quantity"), e.quantity);
                c.non_negative(format!("server_events[{i}].seconds"), e.seconds);
            }
        }
        if let Some(points) = &self.flexible_points {
            for (i, p) in points.iter().enumerate() {
                c.non_negative(format!("flexible_points[{i}].flexible_force"), p.flexible_force);
                c.non_negative(format!("flexible_points[{i}].flexible_distance"), p.flexible_distance);
                c.non_negative(
                    format!("flexible_points[{i}].applied_external_force"),
                    p.applied_external_force,
                );
            }
        }
        if let Some(gb) = self.backup_gb {
            c.non_negative("backup_gb", gb);
        }
        if let Some(v) = self.visibility_score {
            c.probability("visibility_score", v);
        }
        if let Some(m) = &self.security {
            if m.check_shape().is_err() {
                c.push("security", "matrix is not well-formed");
            }
        }
        c.problems
    }
}
