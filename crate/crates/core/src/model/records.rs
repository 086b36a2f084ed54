use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::time::Ticks;

/// A unit of work waiting for placement: which resources may run it and for how long.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonScheduledRecord {
    pub workload_id: String,
    pub process_id: String,
    pub execution_time: Ticks,
    pub resource_list: Vec<String>,
}

impl NonScheduledRecord {
    pub fn new(
        workload_id: impl Into<String>,
        process_id: impl Into<String>,
        execution_time: Ticks,
        resource_list: impl IntoIterator<Item = impl Into<String>>,
    ) -> Self {
        NonScheduledRecord {
            workload_id: workload_id.into(),
            process_id: process_id.into(),
            execution_time,
            resource_list: resource_list.into_iter().map(Into::into).collect(),
        }
    }

    /// Violated record invariants, as human-readable messages.
    pub fn problems(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.execution_time == Ticks::ZERO {
            out.push("execution_time must be positive");
        }
        if self.resource_list.is_empty() {
            out.push("resource_list must not be empty");
        }
        out
    }
}

/// A placed unit of work.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduledRecord {
    pub workload_id: String,
    pub process_id: String,
    pub begin_time: Ticks,
    pub end_time: Ticks,
    pub resource_id: String,
}

impl ScheduledRecord {
    pub fn span(&self) -> Ticks {
        self.end_time.checked_sub(self.begin_time).unwrap_or(Ticks::ZERO)
    }

    pub fn overlaps(&self, other: &ScheduledRecord) -> bool {
        self.resource_id == other.resource_id
            && self.begin_time < other.end_time
            && other.begin_time < self.end_time
    }
}

/// A physical server as seen by the load balancer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServerState {
    pub resource_id: String,
    /// Load the server is expected to carry; the denominator of the load ratio.
    pub expected_load_capacity: f64,
    #[serde(default)]
    pub hosted_services: BTreeSet<String>,
    #[serde(default)]
    pub assigned_load: f64,
}

impl ServerState {
    pub fn new(resource_id: impl Into<String>, expected_load_capacity: f64) -> Self {
        ServerState {
            resource_id: resource_id.into(),
            expected_load_capacity,
            hosted_services: BTreeSet::new(),
            assigned_load: 0.0,
        }
    }

    pub fn hosting(mut self, service_id: impl Into<String>, load: f64) -> Self {
        self.hosted_services.insert(service_id.into());
        self.assigned_load += load;
        self
    }

    pub fn problems(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.resource_id.is_empty() {
            out.push("resource_id must not be empty");
        }
        if !(self.expected_load_capacity.is_finite() && self.expected_load_capacity > 0.0) {
            out.push("expected_load_capacity must be positive");
        }
        if !(self.assigned_load.is_finite() && self.assigned_load >= 0.0) {
            out.push("assigned_load must be non-negative");
        }
        out
    }
}
