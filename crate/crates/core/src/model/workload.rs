use std::fmt;

use serde::{Deserialize, Serialize};

use super::time::Ticks;

/// The thirteen cloud workload types of the taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum WorkloadType {
    Websites,
    TechnologicalComputing,
    EndeavourSoftware,
    PerformanceTesting,
    OnlineTransactionProcessing,
    ECommerce,
    CentralFinancialServices,
    StorageBackup,
    ProductivityApplications,
    SoftwareDevTesting,
    GraphicsOriented,
    CriticalInternetApplications,
    MobileComputing,
}

impl WorkloadType {
    pub const ALL: [WorkloadType; 13] = [
        WorkloadType::Websites,
        WorkloadType::TechnologicalComputing,
        WorkloadType::EndeavourSoftware,
        WorkloadType::PerformanceTesting,
        WorkloadType::OnlineTransactionProcessing,
        WorkloadType::ECommerce,
        WorkloadType::CentralFinancialServices,
        WorkloadType::StorageBackup,
        WorkloadType::ProductivityApplications,
        WorkloadType::SoftwareDevTesting,
        WorkloadType::GraphicsOriented,
        WorkloadType::CriticalInternetApplications,
        WorkloadType::MobileComputing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WorkloadType::Websites => "Websites",
            WorkloadType::TechnologicalComputing => "TechnologicalComputing",
            WorkloadType::EndeavourSoftware => "EndeavourSoftware",
            WorkloadType::PerformanceTesting => "PerformanceTesting",
            WorkloadType::OnlineTransactionProcessing => "OnlineTransactionProcessing",
            WorkloadType::ECommerce => "ECommerce",
            WorkloadType::CentralFinancialServices => "CentralFinancialServices",
            WorkloadType::StorageBackup => "StorageBackup",
            WorkloadType::ProductivityApplications => "ProductivityApplications",
            WorkloadType::SoftwareDevTesting => "SoftwareDevTesting",
            WorkloadType::GraphicsOriented => "GraphicsOriented",
            WorkloadType::CriticalInternetApplications => "CriticalInternetApplications",
            WorkloadType::MobileComputing => "MobileComputing",
        }
    }
}

impl fmt::Display for WorkloadType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Deployment-side grouping of workload types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum WorkloadGroup {
    ServerOriented,
    ClientOriented,
    MobileOriented,
}

impl fmt::Display for WorkloadGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WorkloadGroup::ServerOriented => "ServerOriented",
            WorkloadGroup::ClientOriented => "ClientOriented",
            WorkloadGroup::MobileOriented => "MobileOriented",
        })
    }
}

/// When a workload may start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BeginTime {
    Fixed { at: Ticks },
    Elastic {
        #[serde(default)]
        earliest: Ticks,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        latest: Option<Ticks>,
    },
}

impl BeginTime {
    /// Earliest admissible start.
    pub fn lower_bound(&self) -> Ticks {
        match *self {
            BeginTime::Fixed { at } => at,
            BeginTime::Elastic { earliest, .. } => earliest,
        }
    }

    pub fn admits(&self, start: Ticks) -> bool {
        match *self {
            BeginTime::Fixed { at } => start == at,
            BeginTime::Elastic { earliest, latest } => {
                start >= earliest && latest.is_none_or(|l| start <= l)
            }
        }
    }
}

impl Default for BeginTime {
    fn default() -> Self {
        BeginTime::Elastic { earliest: Ticks::ZERO, latest: None }
    }
}

pub const MAX_URGENCY: u8 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkloadConstraints {
    /// Declared run length ("run for 1 hour"); `None` means time unbound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_bound: Option<Ticks>,
    #[serde(default)]
    pub begin: BeginTime,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hard_stop: Option<Ticks>,
    #[serde(default = "default_true")]
    pub interruptible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_resource: Option<f64>,
    #[serde(default)]
    pub urgency: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<f64>,
}

fn default_true() -> bool {
    true
}

impl Default for WorkloadConstraints {
    fn default() -> Self {
        WorkloadConstraints {
            time_bound: None,
            begin: BeginTime::default(),
            hard_stop: None,
            interruptible: true,
            min_resource: None,
            urgency: 0,
            budget: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadSample {
    pub at: Ticks,
    pub load: f64,
}

/// Relative resource pressure of a workload along the four orientations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemandProfile {
    pub cpu_weight: f64,
    pub memory_weight: f64,
    pub network_weight: f64,
    pub storage_weight: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub load_series: Option<Vec<LoadSample>>,
}

impl DemandProfile {
    pub fn new(cpu: f64, memory: f64, network: f64, storage: f64) -> Self {
        DemandProfile {
            cpu_weight: cpu,
            memory_weight: memory,
            network_weight: network,
            storage_weight: storage,
            load_series: None,
        }
    }

    /// Weights in the fixed order CPU, memory, network, storage.
    pub fn weights(&self) -> [f64; 4] {
        [self.cpu_weight, self.memory_weight, self.network_weight, self.storage_weight]
    }
}

/// Descriptive cost breakdown. Nothing is optimized against it.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostRecord {
    #[serde(default)]
    pub hardware: f64,
    #[serde(default)]
    pub software: f64,
    #[serde(default)]
    pub maintenance: f64,
    #[serde(default)]
    pub provision: f64,
}

impl CostRecord {
    pub fn total(&self) -> f64 {
        self.hardware + self.software + self.maintenance + self.provision
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Rate {
    #[default]
    OneShot,
    Periodic { period: Ticks },
}


#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Characteristics {
    #[serde(default)]
    pub unstable_demand: bool,
    #[serde(default)]
    pub standard: bool,
    #[serde(default)]
    pub self_governing: bool,
    #[serde(default)]
    pub not_critical: bool,
}

/// A declared workload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkloadSpec {
    pub workload_id: String,
    pub name: String,
    pub wtype: WorkloadType,
    #[serde(default)]
    pub constraints: WorkloadConstraints,
    pub demand: DemandProfile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<CostRecord>,
    #[serde(default)]
    pub rate: Rate,
    #[serde(default)]
    pub characteristics: Characteristics,
}

impl WorkloadSpec {
    pub fn new(workload_id: impl Into<String>, wtype: WorkloadType, demand: DemandProfile) -> Self {
        let workload_id = workload_id.into();
        WorkloadSpec {
            name: workload_id.clone(),
            workload_id,
            wtype,
            constraints: WorkloadConstraints::default(),
            demand,
            cost: None,
            rate: Rate::OneShot,
            characteristics: Characteristics::default(),
        }
    }
}

/// A broken invariant on a [`WorkloadSpec`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecViolation {
    EmptyWorkloadId,
    UrgencyOutOfRange(u8),
    NegativeBudget,
    InvalidWeight(&'static str),
    AllWeightsZero,
    ZeroPeriod,
    ZeroTimeBound,
    EmptyBeginWindow,
    BeginPlusExecutionExceedsHardStop,
    InvalidMinResource,
    InvalidCost(&'static str),
    InvalidLoadSample(usize),
}

impl fmt::Display for SpecViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecViolation::EmptyWorkloadId => f.write_str("workload id is empty"),
            SpecViolation::UrgencyOutOfRange(_) => f.write_str("urgency out of range"),
            SpecViolation::NegativeBudget => f.write_str("budget must be finite and non-negative"),
            SpecViolation::InvalidWeight(name) => {
                write!(f, "{name} must be finite and non-negative")
            }
            SpecViolation::AllWeightsZero => f.write_str("all demand weights are zero"),
            SpecViolation::ZeroPeriod => f.write_str("periodic rate needs a positive period"),
            SpecViolation::ZeroTimeBound => f.write_str("time bound must be positive"),
            SpecViolation::EmptyBeginWindow => f.write_str("elastic begin window is empty"),
            SpecViolation::BeginPlusExecutionExceedsHardStop => {
                f.write_str("begin + execution exceeds hard stop")
            }
            SpecViolation::InvalidMinResource => {
                f.write_str("min_resource must be finite and non-negative")
            }
            SpecViolation::InvalidCost(part) => {
                write!(f, "cost.{part} must be finite and non-negative")
            }
            SpecViolation::InvalidLoadSample(i) => {
                write!(f, "load_series[{i}] must be finite and non-negative")
            }
        }
    }
}

fn non_negative(x: f64) -> bool {
    x.is_finite() && x >= 0.0
}

/// Checks every invariant of a workload declaration. An empty result means the spec is valid.
pub fn validate_spec(spec: &WorkloadSpec) -> Vec<SpecViolation> {
    let mut out = Vec::new();
    let c = &spec.constraints;

    if spec.workload_id.is_empty() {
        out.push(SpecViolation::EmptyWorkloadId);
    }
    if c.urgency > MAX_URGENCY {
        out.push(SpecViolation::UrgencyOutOfRange(c.urgency));
    }
    if c.budget.is_some_and(|b| !non_negative(b)) {
        out.push(SpecViolation::NegativeBudget);
    }
    if c.min_resource.is_some_and(|m| !non_negative(m)) {
        out.push(SpecViolation::InvalidMinResource);
    }
    if c.time_bound == Some(Ticks::ZERO) {
        out.push(SpecViolation::ZeroTimeBound);
    }
    if let BeginTime::Elastic { earliest, latest: Some(latest) } = c.begin {
        if earliest > latest {
            out.push(SpecViolation::EmptyBeginWindow);
        }
    }
    // Only checkable when start and run length are both pinned.
    if let (BeginTime::Fixed { at }, Some(run), Some(stop)) = (c.begin, c.time_bound, c.hard_stop) {
        if at.checked_add(run).is_none_or(|end| end > stop) {
            out.push(SpecViolation::BeginPlusExecutionExceedsHardStop);
        }
    }

    let names = ["cpu_weight", "memory_weight", "network_weight", "storage_weight"];
    let weights = spec.demand.weights();
    let mut all_valid = true;
    for (name, w) in names.iter().zip(weights) {
        if !non_negative(w) {
            all_valid = false;
            out.push(SpecViolation::InvalidWeight(name));
        }
    }
    if all_valid && weights.iter().all(|&w| w == 0.0) {
        out.push(SpecViolation::AllWeightsZero);
    }
    if let Some(series) = &spec.demand.load_series {
        for (i, s) in series.iter().enumerate() {
            if !non_negative(s.load) {
                out.push(SpecViolation::InvalidLoadSample(i));
            }
        }
    }

    if let Some(cost) = &spec.cost {
        for (part, v) in [
            ("hardware", cost.hardware),
            ("software", cost.software),
            ("maintenance", cost.maintenance),
            ("provision", cost.provision),
        ] {
            if !non_negative(v) {
                out.push(SpecViolation::InvalidCost(part));
            }
        }
    }
    if spec.rate == (Rate::Periodic { period: Ticks::ZERO }) {
        out.push(SpecViolation::ZeroPeriod);
    }

    out
}
