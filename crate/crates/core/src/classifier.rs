//! Maps workloads onto the taxonomy: deployment group, quality attributes,
//! dominant resource orientation and execution mode. Also checks a proposed
//! placement against a workload's declared constraints.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::model::{
    DemandProfile, NonScheduledRecord, ScheduledRecord, WorkloadGroup, WorkloadSpec, WorkloadType,
};

const BUILTIN_KB: &str = include_str!("../data/knowledge_base.toml");

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassifyError {
    #[error("demand profile has no positive weight")]
    EmptyDemand,
    #[error("{field} mismatch: record has `{record}`, other side has `{other}`")]
    IdMismatch { field: &'static str, record: String, other: String },
    #[error("knowledge base: {0}")]
    KnowledgeBase(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnowledgeEntry {
    pub wtype: WorkloadType,
    pub group: WorkloadGroup,
    pub quality_attributes: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct KnowledgeFile {
    version: u32,
    types: Vec<KnowledgeEntry>,
}

/// Workload type → group → quality attributes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeBase {
    entries: Vec<KnowledgeEntry>,
}

impl KnowledgeBase {
    /// Parses and checks a knowledge base document: every workload type
    /// exactly once, each with at least one attribute.
    pub fn parse(text: &str) -> Result<Self, ClassifyError> {
        let file: KnowledgeFile =
            toml::from_str(text).map_err(|e| ClassifyError::KnowledgeBase(e.to_string()))?;
        if file.version != 1 {
            return Err(ClassifyError::KnowledgeBase(format!("unsupported version {}", file.version)));
        }
        for wtype in WorkloadType::ALL {
            let n = file.types.iter().filter(|e| e.wtype == wtype).count();
            if n != 1 {
                return Err(ClassifyError::KnowledgeBase(format!("{wtype} listed {n} times")));
            }
        }
        if let Some(e) = file.types.iter().find(|e| e.quality_attributes.is_empty()) {
            return Err(ClassifyError::KnowledgeBase(format!("{} has no quality attributes", e.wtype)));
        }
        Ok(KnowledgeBase { entries: file.types })
    }

    /// The knowledge base compiled into the crate.
    pub fn builtin() -> &'static KnowledgeBase {
        static KB: OnceLock<KnowledgeBase> = OnceLock::new();
        KB.get_or_init(|| KnowledgeBase::parse(BUILTIN_KB).expect("bundled knowledge base is valid"))
    }

    pub fn source() -> &'static str {
        BUILTIN_KB
    }

    pub fn entry(&self, wtype: WorkloadType) -> &KnowledgeEntry {
        self.entries
            .iter()
            .find(|e| e.wtype == wtype)
            .expect("parse guarantees every type is present")
    }

    pub fn entries(&self) -> &[KnowledgeEntry] {
        &self.entries
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAssignment {
    pub group: WorkloadGroup,
    pub quality_attributes: Vec<String>,
}

pub fn classify_group(wtype: WorkloadType) -> GroupAssignment {
    let e = KnowledgeBase::builtin().entry(wtype);
    GroupAssignment { group: e.group, quality_attributes: e.quality_attributes.clone() }
}

/// Dominant resource of a workload. Declaration order is the tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Cpu,
    Memory,
    Network,
    Storage,
}

impl Orientation {
    pub const ALL: [Orientation; 4] =
        [Orientation::Cpu, Orientation::Memory, Orientation::Network, Orientation::Storage];
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Cpu => "CPU",
            Orientation::Memory => "Memory",
            Orientation::Network => "Network",
            Orientation::Storage => "Storage",
        })
    }
}

/// Orientation of the heaviest weight; ties go to the earlier of CPU, memory, network, storage.
pub fn classify_orientation(demand: &DemandProfile) -> Result<Orientation, ClassifyError> {
    let mut best: Option<(Orientation, f64)> = None;
    for (o, w) in Orientation::ALL.into_iter().zip(demand.weights()) {
        if !(w.is_finite() && w > 0.0) {
            continue;
        }
        if best.is_none_or(|(_, bw)| w > bw) {
            best = Some((o, w));
        }
    }
    best.map(|(o, _)| o).ok_or(ClassifyError::EmptyDemand)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExecutionMode {
    Batch,
    Online,
}

impl fmt::Display for ExecutionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExecutionMode::Batch => "Batch",
            ExecutionMode::Online => "Online",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeRecommendation {
    pub mode: ExecutionMode,
    pub rationale: String,
}

const ONLINE_TYPES: [WorkloadType; 5] = [
    WorkloadType::Websites,
    WorkloadType::OnlineTransactionProcessing,
    WorkloadType::ECommerce,
    WorkloadType::CriticalInternetApplications,
    WorkloadType::MobileComputing,
];

/// Online when the workload type is interactive by nature or network is the
/// dominant demand; batch otherwise. The type rule is checked first.
pub fn recommend_mode(spec: &WorkloadSpec) -> ModeRecommendation {
    if ONLINE_TYPES.contains(&spec.wtype) {
        return ModeRecommendation {
            mode: ExecutionMode::Online,
            rationale: format!("{} is an interactive workload type", spec.wtype),
        };
    }
    match classify_orientation(&spec.demand) {
        Ok(Orientation::Network) => ModeRecommendation {
            mode: ExecutionMode::Online,
            rationale: "network bandwidth is the dominant demand".into(),
        },
        Ok(o) => ModeRecommendation {
            mode: ExecutionMode::Batch,
            rationale: format!("{o} is the dominant demand; capacity-bound work suits batch"),
        },
        Err(_) => ModeRecommendation {
            mode: ExecutionMode::Batch,
            rationale: "no dominant demand; defaulting to batch".into(),
        },
    }
}

/// Everything the classifier knows about one workload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub group: WorkloadGroup,
    pub quality_attributes: Vec<String>,
    pub orientation: Orientation,
    pub mode: ExecutionMode,
    pub rationale: String,
}

pub fn classify(spec: &WorkloadSpec) -> Result<Classification, ClassifyError> {
    let GroupAssignment { group, quality_attributes } = classify_group(spec.wtype);
    let orientation = classify_orientation(&spec.demand)?;
    let ModeRecommendation { mode, rationale } = recommend_mode(spec);
    Ok(Classification { group, quality_attributes, orientation, mode, rationale })
}

/// A declared constraint that a proposed placement breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstraintViolation {
    TimeBoundExceeded,
    BeginTimeViolated,
    HardStopViolated,
    Interrupted,
    ShorterThanExecution,
    ResourceBelowMinimum,
    ResourceNotListed,
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstraintViolation::TimeBoundExceeded => "exceeds time bound",
            ConstraintViolation::BeginTimeViolated => "begin time violated",
            ConstraintViolation::HardStopViolated => "hard stop violated",
            ConstraintViolation::Interrupted => "interrupted when non-interruptible",
            ConstraintViolation::ShorterThanExecution => "shorter than execution time",
            ConstraintViolation::ResourceBelowMinimum => "resource below min_resource",
            ConstraintViolation::ResourceNotListed => "resource not in resource list",
        })
    }
}

/// Checks a proposed placement of `record` against the constraints in `spec`.
///
/// `resource_capacity` is the capacity of the proposed resource, if known; the
/// minimum-resource constraint is only checked when it is. A span longer than
/// the execution time means the work was paused somewhere inside it.
pub fn check_constraints(
    record: &NonScheduledRecord,
    spec: &WorkloadSpec,
    proposed: &ScheduledRecord,
    resource_capacity: Option<f64>,
) -> Result<Vec<ConstraintViolation>, ClassifyError> {
    for (field, a, b) in [
        ("workload_id", &record.workload_id, &proposed.workload_id),
        ("process_id", &record.process_id, &proposed.process_id),
        ("workload_id", &record.workload_id, &spec.workload_id),
    ] {
        if a != b {
            return Err(ClassifyError::IdMismatch { field, record: a.clone(), other: b.clone() });
        }
    }

    let c = &spec.constraints;
    let span = proposed.span();
    let mut out = Vec::new();

    if c.time_bound.is_some_and(|bound| span > bound) {
        out.push(ConstraintViolation::TimeBoundExceeded);
    }
    if !c.begin.admits(proposed.begin_time) {
        out.push(ConstraintViolation::BeginTimeViolated);
    }
    if c.hard_stop.is_some_and(|stop| proposed.end_time > stop) {
        out.push(ConstraintViolation::HardStopViolated);
    }
    if span < record.execution_time || proposed.end_time <= proposed.begin_time {
        out.push(ConstraintViolation::ShorterThanExecution);
    } else if !c.interruptible && span > record.execution_time {
        out.push(ConstraintViolation::Interrupted);
    }
    if let (Some(min), Some(cap)) = (c.min_resource, resource_capacity) {
        if cap < min {
            out.push(ConstraintViolation::ResourceBelowMinimum);
        }
    }
    if !record.resource_list.contains(&proposed.resource_id) {
        out.push(ConstraintViolation::ResourceNotListed);
    }
    Ok(out)
}
