use std::collections::BTreeMap;

use crate::metrics;
use crate::model::Ticks;

use super::{Resource, Schedule, SimError};

/// Summary statistics of a schedule. Every field is `None` for an empty schedule.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimReport {
    pub makespan: Option<Ticks>,
    /// Busy time over makespan, per resource.
    pub utilization: Option<BTreeMap<String, f64>>,
    /// Completion of a workload's last record minus its submit time.
    pub latency: Option<BTreeMap<String, f64>>,
}

pub fn simulate_report(
    schedule: &Schedule,
    resources: &[Resource],
    submit_times: &BTreeMap<String, Ticks>,
) -> Result<SimReport, SimError> {
    let (Some(first), Some(last)) = (
        schedule.records.iter().map(|r| r.begin_time).min(),
        schedule.records.iter().map(|r| r.end_time).max(),
    ) else {
        return Ok(SimReport::default());
    };
    let makespan = last - first;

    let mut busy: BTreeMap<String, u64> =
        resources.iter().map(|r| (r.resource_id.clone(), 0)).collect();
    let mut finish: BTreeMap<&str, Ticks> = BTreeMap::new();
    for r in &schedule.records {
        *busy.entry(r.resource_id.clone()).or_default() += r.span().as_millis();
        let slot = finish.entry(r.workload_id.as_str()).or_insert(r.end_time);
        *slot = (*slot).max(r.end_time);
    }
    let utilization = busy
        .into_iter()
        .map(|(id, t)| (id, t as f64 / makespan.as_millis() as f64))
        .collect();

    let mut latency = BTreeMap::new();
    for (workload, end) in finish {
        let submitted = *submit_times
            .get(workload)
            .ok_or_else(|| SimError::MissingSubmitTime(workload.to_string()))?;
        let v = metrics::latency(submitted, end)
            .map_err(|e| SimError::Latency { workload_id: workload.to_string(), source: e })?;
        latency.insert(workload.to_string(), v.value);
    }

    Ok(SimReport { makespan: Some(makespan), utilization: Some(utilization), latency: Some(latency) })
}
