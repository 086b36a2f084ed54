//! QoS metric formulas.
//!
//! Each function is pure: it takes an already-aggregated measurement and
//! returns a value tagged with its report unit. Time inputs are milliseconds
//! unless the parameter is named `seconds`. [`evaluate`] runs every metric whose
//! inputs are present in an [`ObservationSet`](crate::model::ObservationSet).

mod evaluate;

pub use evaluate::evaluate;

use crate::model::{
    ChangeRequest, FlexiblePoint, FulfillmentLevel, MatrixShapeError, ObservationSet,
    SecurityMatrix, ServerKind, StorageChecklist, ThreatPair, Ticks, Unit,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error("undefined bandwidth: elapsed time must be positive")]
    UndefinedBandwidth,
    #[error("pair {index}: {field} = {value} is not a probability in [0, 1]")]
    Probability { index: usize, field: &'static str, value: f64 },
    #[error("no failure data: mttf and mttr are both zero")]
    NoFailureData,
    #[error("no change requests")]
    NoChangeRequests,
    #[error("causality violation: output at {output} precedes input at {input}")]
    CausalityViolation { input: Ticks, output: Ticks },
    #[error("no changes recorded")]
    NoChangesRecorded,
    #[error("no expected load")]
    NoExpectedLoad,
    #[error("{metric}: {component} is zero")]
    ZeroDenominator { metric: &'static str, component: &'static str },
    #[error("{metric}: {count} exceeds total {total}")]
    CountExceedsTotal { metric: &'static str, count: u64, total: u64 },
    #[error("{metric}: {field} must be finite and non-negative, got {value}")]
    NotNonNegative { metric: &'static str, field: String, value: f64 },
    #[error("persistence: proportion {0} is outside (0, 1]")]
    ProportionOutOfRange(f64),
    #[error("persistence: uncertainty series has no positive total")]
    NoUncertainty,
    #[error("service visibility {0} is outside [0, 1]")]
    VisibilityOutOfRange(f64),
    #[error(transparent)]
    MatrixShape(#[from] MatrixShapeError),
}

pub type Result<T> = std::result::Result<T, MetricError>;

/// A computed value and the unit it is reported in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricValue {
    pub value: f64,
    pub unit: Unit,
}

impl MetricValue {
    pub fn new(value: f64, unit: Unit) -> Self {
        MetricValue { value, unit }
    }

    fn ratio(value: f64) -> Self {
        Self::new(value, Unit::Ratio)
    }
}

fn check_non_negative(metric: &'static str, field: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(MetricError::NotNonNegative { metric, field: field.to_string(), value })
    }
}

fn check_count(metric: &'static str, count: u64, total: u64) -> Result<()> {
    if count > total {
        return Err(MetricError::CountExceedsTotal { metric, count, total });
    }
    Ok(())
}

/// Bits moved per second.
pub fn bandwidth(bits: u64, seconds: f64) -> Result<MetricValue> {
    if !(seconds.is_finite() && seconds > 0.0) {
        return Err(MetricError::UndefinedBandwidth);
    }
    Ok(MetricValue::new(bits as f64 / seconds, Unit::BitsPerSecond))
}

/// Sum over attack types of `(1 - threat) * (1 - security)`.
pub fn integrity(pairs: &[ThreatPair]) -> Result<MetricValue> {
    let mut total = 0.0;
    for (index, p) in pairs.iter().enumerate() {
        for (field, value) in [("threat", p.threat), ("security", p.security)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(MetricError::Probability { index, field, value });
            }
        }
        total += (1.0 - p.threat) * (1.0 - p.security);
    }
    Ok(MetricValue::ratio(total))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Usability {
    /// Reciprocal of the learning time, per millisecond.
    pub learnability: f64,
    pub success_ratio: f64,
}

pub fn usability(learn_time: f64, successful_ops: u64, total_ops: u64) -> Result<Usability> {
    check_non_negative("usability", "learn_time", learn_time)?;
    if learn_time == 0.0 {
        return Err(MetricError::ZeroDenominator { metric: "usability", component: "learn_time" });
    }
    if total_ops == 0 {
        return Err(MetricError::ZeroDenominator { metric: "usability", component: "total_ops" });
    }
    check_count("usability", successful_ops, total_ops)?;
    Ok(Usability {
        learnability: 1.0 / learn_time,
        success_ratio: successful_ops as f64 / total_ops as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reliability {
    pub mtbf: f64,
    pub availability: f64,
}

/// `MTBF = MTTF + MTTR`, `availability = MTTF / MTBF`.
pub fn reliability_availability(mttf: f64, mttr: f64) -> Result<Reliability> {
    check_non_negative("reliability", "mttf", mttf)?;
    check_non_negative("reliability", "mttr", mttr)?;
    let mtbf = mttf + mttr;
    if mtbf == 0.0 {
        return Err(MetricError::NoFailureData);
    }
    Ok(Reliability { mtbf, availability: mttf / mtbf })
}

/// Mean time to change over a set of change requests.
pub fn changeability(changes: &[ChangeRequest]) -> Result<MetricValue> {
    if changes.is_empty() {
        return Err(MetricError::NoChangeRequests);
    }
    let mut total = 0.0;
    for (i, c) in changes.iter().enumerate() {
        for (name, v) in [
            ("analyze", c.analyze),
            ("modify", c.modify),
            ("test", c.test),
            ("distribute", c.distribute),
        ] {
            check_non_negative("changeability", &format!("changes[{i}].{name}"), v)?;
        }
        total += c.analyze + c.modify + c.test + c.distribute;
    }
    Ok(MetricValue::new(total / changes.len() as f64, Unit::Millis))
}

/// Elapsed time between a workload's input and its output.
pub fn latency(input_time: Ticks, output_time: Ticks) -> Result<MetricValue> {
    let elapsed = output_time
        .checked_sub(input_time)
        .ok_or(MetricError::CausalityViolation { input: input_time, output: output_time })?;
    Ok(MetricValue::new(elapsed.as_millis() as f64, Unit::Millis))
}

/// Customer confidence for a fulfillment level.
pub fn confidence_lookup(level: FulfillmentLevel) -> MetricValue {
    let percent = match level {
        FulfillmentLevel::VerySatisfied => 100.0,
        FulfillmentLevel::Satisfied => 75.0,
        FulfillmentLevel::Neutral => 50.0,
        FulfillmentLevel::Dissatisfied => 25.0,
        FulfillmentLevel::CompletelyDissatisfied => 0.0,
    };
    MetricValue::new(percent, Unit::Percent)
}

/// Share of dynamic changes among all changes.
pub fn customizability(dynamic_changes: u64, static_changes: u64) -> Result<MetricValue> {
    let total = dynamic_changes + static_changes;
    if total == 0 {
        return Err(MetricError::NoChangesRecorded);
    }
    Ok(MetricValue::ratio(dynamic_changes as f64 / total as f64))
}

pub fn testing_time(prep: f64, exec: f64) -> Result<MetricValue> {
    check_non_negative("testing_time", "prep", prep)?;
    check_non_negative("testing_time", "exec", exec)?;
    Ok(MetricValue::new(prep + exec, Unit::Millis))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadRatio {
    pub delta_lb: f64,
    /// A server is efficiently loaded while its ratio stays at or below 1.
    pub efficient: bool,
}

pub fn variable_load(actual: f64, expected: f64) -> Result<LoadRatio> {
    check_non_negative("variable_load", "actual", actual)?;
    check_non_negative("variable_load", "expected", expected)?;
    if expected == 0.0 {
        return Err(MetricError::NoExpectedLoad);
    }
    let delta_lb = actual / expected;
    Ok(LoadRatio { delta_lb, efficient: delta_lb <= 1.0 })
}

/// `100 - 100 * inquiries / visits`. Negative when inquiries outnumber visits; not clamped.
pub fn self_service_rate(inquiries: u64, visits: u64) -> Result<MetricValue> {
    if visits == 0 {
        return Err(MetricError::ZeroDenominator { metric: "self_service_rate", component: "visits" });
    }
    Ok(MetricValue::new(100.0 - 100.0 * (inquiries as f64 / visits as f64), Unit::Percent))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correctness {
    pub accuracy: f64,
    pub completeness: f64,
    pub defects_per_cs: f64,
}

pub fn accuracy(expected_cs: f64, observed_cs: f64) -> Result<f64> {
    check_non_negative("correctness", "expected_cs", expected_cs)?;
    check_non_negative("correctness", "observed_cs", observed_cs)?;
    if expected_cs == 0.0 {
        return Err(MetricError::ZeroDenominator { metric: "correctness", component: "expected_cs" });
    }
    Ok((expected_cs - (expected_cs - observed_cs).abs()) / expected_cs)
}

pub fn completeness(existing_cs: u64, requested_cs: u64) -> Result<f64> {
    if requested_cs == 0 {
        return Err(MetricError::ZeroDenominator { metric: "correctness", component: "requested_cs" });
    }
    Ok(existing_cs as f64 / requested_cs as f64)
}

/// Defects per service actually provided.
pub fn defects_per_cs(defects: u64, existing_cs: u64) -> Result<f64> {
    if existing_cs == 0 {
        return Err(MetricError::ZeroDenominator { metric: "correctness", component: "existing_cs" });
    }
    Ok(defects as f64 / existing_cs as f64)
}

pub fn correctness(
    expected_cs: f64,
    observed_cs: f64,
    existing_cs: u64,
    requested_cs: u64,
    defects: u64,
) -> Result<Correctness> {
    Ok(Correctness {
        accuracy: accuracy(expected_cs, observed_cs)?,
        completeness: completeness(existing_cs, requested_cs)?,
        defects_per_cs: defects_per_cs(defects, existing_cs)?,
    })
}

pub fn serviceability(uptime: f64, downtime: f64) -> Result<MetricValue> {
    check_non_negative("serviceability", "uptime", uptime)?;
    check_non_negative("serviceability", "downtime", downtime)?;
    let total = uptime + downtime;
    if total == 0.0 {
        return Err(MetricError::ZeroDenominator {
            metric: "serviceability",
            component: "uptime + downtime",
        });
    }
    Ok(MetricValue::ratio(uptime / total))
}

/// Actual over expected resource usage; above 1 means over-use and is reported as is.
pub fn computing_capacity(actual_usage: f64, expected_usage: f64) -> Result<MetricValue> {
    check_non_negative("computing_capacity", "actual_usage", actual_usage)?;
    check_non_negative("computing_capacity", "expected_usage", expected_usage)?;
    if expected_usage == 0.0 {
        return Err(MetricError::ZeroDenominator {
            metric: "computing_capacity",
            component: "expected_usage",
        });
    }
    Ok(MetricValue::ratio(actual_usage / expected_usage))
}

/// Percentage of requests that timed out.
pub fn internet_accessibility(timeouts: u64, total: u64) -> Result<MetricValue> {
    if total == 0 {
        return Err(MetricError::ZeroDenominator {
            metric: "internet_accessibility",
            component: "request_count",
        });
    }
    check_count("internet_accessibility", timeouts, total)?;
    Ok(MetricValue::new(100.0 * timeouts as f64 / total as f64, Unit::Percent))
}

pub fn portability(compatible: u64, total: u64) -> Result<MetricValue> {
    if total == 0 {
        return Err(MetricError::ZeroDenominator { metric: "portability", component: "total_platforms" });
    }
    check_count("portability", compatible, total)?;
    Ok(MetricValue::ratio(compatible as f64 / total as f64))
}

/// Number of leading periods needed to accumulate `proportion` of the total uncertainty.
pub fn persistence(series: &[f64], proportion: f64) -> Result<usize> {
    if !(proportion > 0.0 && proportion <= 1.0) {
        return Err(MetricError::ProportionOutOfRange(proportion));
    }
    for (i, &a) in series.iter().enumerate() {
        check_non_negative("persistence", &format!("amounts[{i}]"), a)?;
    }
    let total: f64 = series.iter().sum();
    if total == 0.0 {
        return Err(MetricError::NoUncertainty);
    }
    let target = proportion * total;
    let mut acc = 0.0;
    for (i, &a) in series.iter().enumerate() {
        acc += a;
        if acc >= target {
            return Ok(i + 1);
        }
    }
    // acc == total after the last period and target <= total.
    Ok(series.len())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecurityCoverage {
    /// Marked measures per driver, in the matrix's driver order.
    pub per_driver: Vec<(String, usize)>,
    /// Marked drivers per measure, in row order.
    pub per_measure: Vec<(String, usize)>,
    pub coverage_ratio: f64,
}

impl SecurityCoverage {
    pub fn driver(&self, code: &str) -> Option<usize> {
        self.per_driver.iter().find(|(d, _)| d == code).map(|(_, n)| *n)
    }
}

pub fn security_coverage(matrix: &SecurityMatrix) -> Result<SecurityCoverage> {
    matrix.check_shape()?;
    let per_driver = matrix
        .drivers
        .iter()
        .enumerate()
        .map(|(j, d)| (d.clone(), matrix.cells.iter().filter(|row| row[j]).count()))
        .collect();
    let per_measure: Vec<(String, usize)> = matrix
        .measures
        .iter()
        .zip(&matrix.cells)
        .map(|(m, row)| (m.clone(), row.iter().filter(|&&c| c).count()))
        .collect();
    let marked: usize = per_measure.iter().map(|(_, n)| n).sum();
    let cells = matrix.measures.len() * matrix.drivers.len();
    let coverage_ratio = if cells == 0 { 0.0 } else { marked as f64 / cells as f64 };
    Ok(SecurityCoverage { per_driver, per_measure, coverage_ratio })
}

pub fn throughput_unit(kind: ServerKind) -> Unit {
    match kind {
        ServerKind::Mail => Unit::ActionsPerMinute,
        ServerKind::Java => Unit::OrdersPerSecond,
        ServerKind::Web => Unit::AccessesPerSecond,
        ServerKind::Database => Unit::CommitsPerSecond,
        ServerKind::File => Unit::MegabytesPerSecond,
    }
}

/// Server throughput in the unit conventional for its kind.
pub fn performance_throughput(kind: ServerKind, quantity: f64, seconds: f64) -> Result<MetricValue> {
    check_non_negative("performance", "quantity", quantity)?;
    if !(seconds.is_finite() && seconds > 0.0) {
        return Err(MetricError::ZeroDenominator { metric: "performance", component: "duration" });
    }
    let value = match kind {
        ServerKind::Mail => quantity / (seconds / 60.0),
        _ => quantity / seconds,
    };
    Ok(MetricValue::new(value, throughput_unit(kind)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Flexibility {
    /// Flexible degree per point: distance over `1 + force`.
    pub degrees: Vec<f64>,
    /// Sum of the degrees.
    pub capacity: f64,
    /// Whether the applied force is enough to use each point.
    pub usable: Vec<bool>,
}

pub fn flexibility(points: &[FlexiblePoint]) -> Result<Flexibility> {
    let mut degrees = Vec::with_capacity(points.len());
    let mut usable = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        let f = check_non_negative("flexibility", &format!("points[{i}].flexible_force"), p.flexible_force)?;
        let s = check_non_negative(
            "flexibility",
            &format!("points[{i}].flexible_distance"),
            p.flexible_distance,
        )?;
        let fe = check_non_negative(
            "flexibility",
            &format!("points[{i}].applied_external_force"),
            p.applied_external_force,
        )?;
        degrees.push(s / (1.0 + f));
        usable.push(fe >= f);
    }
    let capacity = degrees.iter().sum();
    Ok(Flexibility { degrees, capacity, usable })
}

/// Fraction of the four storage questions answered satisfactorily.
pub fn reliable_storage(checklist: &StorageChecklist) -> MetricValue {
    let yes = checklist.answers().iter().filter(|&&a| a).count();
    MetricValue::ratio(yes as f64 / 4.0)
}

/// Assessed (not computed) qualities: database backup volume, service
/// visibility and reliable storage.
pub fn qualitative_assessments(obs: &ObservationSet) -> Result<Vec<(&'static str, MetricValue)>> {
    let mut out = Vec::new();
    if let Some(gb) = obs.backup_gb {
        check_non_negative("database_backup", "backup_gb", gb)?;
        out.push(("database_backup", MetricValue::new(gb, Unit::Gigabytes)));
    }
    if let Some(v) = obs.visibility_score {
        if !(0.0..=1.0).contains(&v) {
            return Err(MetricError::VisibilityOutOfRange(v));
        }
        out.push(("service_visibility", MetricValue::ratio(v)));
    }
    if let Some(c) = &obs.storage_checklist {
        out.push(("reliable_storage", reliable_storage(c)));
    }
    Ok(out)
}
