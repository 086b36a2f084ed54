//! Turns non-scheduled records into scheduled ones.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::classifier::{check_constraints, ConstraintViolation};
use crate::model::{NonScheduledRecord, ScheduledRecord, Ticks, WorkloadSpec};

use super::SimError;

/// A machine records can be placed on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resource {
    pub resource_id: String,
    /// Compared against a workload's `min_resource`; unchecked when absent.
    pub capacity: Option<f64>,
    pub available_from: Ticks,
}

impl Resource {
    pub fn new(resource_id: impl Into<String>) -> Self {
        Resource { resource_id: resource_id.into(), capacity: None, available_from: Ticks::ZERO }
    }

    pub fn with_capacity(mut self, capacity: f64) -> Self {
        self.capacity = Some(capacity);
        self
    }

    pub fn available_from(mut self, at: Ticks) -> Self {
        self.available_from = at;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub record: NonScheduledRecord,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Schedule {
    /// Accepted placements, ordered by begin time, then resource.
    pub records: Vec<ScheduledRecord>,
    pub rejected: Vec<Rejection>,
}

impl Schedule {
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Busy intervals of one resource, sorted and disjoint.
#[derive(Debug, Default)]
struct Timeline {
    busy: Vec<(Ticks, Ticks)>,
}

impl Timeline {
    /// Earliest start at or after `from` where `length` fits between busy intervals.
    fn earliest_fit(&self, from: Ticks, length: Ticks) -> Ticks {
        let mut t = from;
        for &(begin, end) in &self.busy {
            if t.saturating_add(length) <= begin {
                break;
            }
            t = t.max(end);
        }
        t
    }

    fn reserve(&mut self, begin: Ticks, end: Ticks) {
        let at = self.busy.partition_point(|&(b, _)| b < begin);
        self.busy.insert(at, (begin, end));
    }
}

fn dispatch_order(records: &[NonScheduledRecord], specs: &BTreeMap<String, WorkloadSpec>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.sort_by_key(|&i| {
        let r = &records[i];
        let c = &specs[&r.workload_id].constraints;
        (
            Reverse(c.urgency),
            c.hard_stop.unwrap_or(Ticks(u64::MAX)),
            r.workload_id.as_str(),
            r.process_id.as_str(),
        )
    });
    order
}

fn describe(violations: &[ConstraintViolation]) -> String {
    violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

/// Non-preemptive earliest-finish-time placement.
///
/// Records are taken by urgency (highest first), then hard stop (earliest
/// first, none last), then workload and process id. Each is tried on every
/// resource in its list at the earliest free slot that respects the begin
/// constraint; the feasible slot finishing first wins, ties going to the
/// earlier entry in the list. A record with no feasible slot is rejected with
/// the violations of its earliest-finishing candidate.
pub fn schedule(
    records: &[NonScheduledRecord],
    specs: &BTreeMap<String, WorkloadSpec>,
    resources: &[Resource],
) -> Result<Schedule, SimError> {
    let mut by_id: BTreeMap<&str, &Resource> = BTreeMap::new();
    for r in resources {
        if by_id.insert(r.resource_id.as_str(), r).is_some() {
            return Err(SimError::DuplicateResource(r.resource_id.clone()));
        }
    }
    for r in records {
        if let Some(problem) = r.problems().first() {
            return Err(SimError::InvalidRecord {
                workload_id: r.workload_id.clone(),
                process_id: r.process_id.clone(),
                reason: problem.to_string(),
            });
        }
        if !specs.contains_key(&r.workload_id) {
            return Err(SimError::MissingSpec(r.workload_id.clone()));
        }
        if let Some(unknown) = r.resource_list.iter().find(|id| !by_id.contains_key(id.as_str())) {
            return Err(SimError::UnknownResource {
                workload_id: r.workload_id.clone(),
                process_id: r.process_id.clone(),
                resource_id: unknown.clone(),
            });
        }
    }

    let mut timelines: BTreeMap<&str, Timeline> = BTreeMap::new();
    let mut out = Schedule::default();

    for i in dispatch_order(records, specs) {
        let record = &records[i];
        let spec = &specs[&record.workload_id];
        let mut best_ok: Option<ScheduledRecord> = None;
        let mut best_bad: Option<(ScheduledRecord, Vec<ConstraintViolation>)> = None;

        for rid in &record.resource_list {
            let resource = by_id[rid.as_str()];
            let from = resource.available_from.max(spec.constraints.begin.lower_bound());
            let timeline = timelines.entry(rid.as_str()).or_default();
            let begin = timeline.earliest_fit(from, record.execution_time);
            let Some(end) = begin.checked_add(record.execution_time) else {
                continue;
            };
            let proposal = ScheduledRecord {
                workload_id: record.workload_id.clone(),
                process_id: record.process_id.clone(),
                begin_time: begin,
                end_time: end,
                resource_id: rid.clone(),
            };
            let violations = check_constraints(record, spec, &proposal, resource.capacity)?;
            if violations.is_empty() {
                if best_ok.as_ref().is_none_or(|b| end < b.end_time) {
                    best_ok = Some(proposal);
                }
            } else if best_bad.as_ref().is_none_or(|(b, _)| end < b.end_time) {
                best_bad = Some((proposal, violations));
            }
        }

        match (best_ok, best_bad) {
            (Some(placed), _) => {
                timelines
                    .get_mut(placed.resource_id.as_str())
                    .expect("timeline created while probing")
                    .reserve(placed.begin_time, placed.end_time);
                out.records.push(placed);
            }
            (None, Some((_, violations))) => out.rejected.push(Rejection {
                record: record.clone(),
                reason: describe(&violations),
            }),
            (None, None) => out.rejected.push(Rejection {
                record: record.clone(),
                reason: "no slot fits before the end of time".into(),
            }),
        }
    }

    out.records.sort_by(|a, b| {
        (a.begin_time, &a.resource_id, &a.workload_id, &a.process_id)
            .cmp(&(b.begin_time, &b.resource_id, &b.workload_id, &b.process_id))
    });
    Ok(out)
}
