//! Deterministic desk-scale simulations: ratio-driven load balancing across
//! physical servers, and placement of non-scheduled records onto resources.
//!
//! Single-threaded by contract; two runs on the same input give the same
//! action log and the same schedule.

mod balance;
mod report;
mod schedule;

pub use balance::{
    balance, replay, ActionKind, BalanceAction, BalanceOutcome, BalanceState, Load, ServerLoad,
    ServiceDemand,
};
pub use report::{simulate_report, SimReport};
pub use schedule::{schedule, Rejection, Resource, Schedule};

use crate::classifier::ClassifyError;
use crate::metrics::MetricError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("no servers to balance across")]
    NoServers,
    #[error("resource `{0}` is listed more than once")]
    DuplicateResource(String),
    #[error("server `{resource_id}`: {reason}")]
    InvalidServer { resource_id: String, reason: String },
    #[error("server `{0}` carries load but hosts no service")]
    UnattributedLoad(String),
    #[error("demand for `{0}` is not a finite non-negative load")]
    InvalidDemand(String),
    #[error("no server hosts service `{0}`")]
    UnhostedService(String),
    #[error("cannot apply {action:?}: {reason}")]
    BadAction { action: BalanceAction, reason: String },
    #[error("record {workload_id}/{process_id}: {reason}")]
    InvalidRecord { workload_id: String, process_id: String, reason: String },
    #[error("record {workload_id}/{process_id} lists unknown resource `{resource_id}`")]
    UnknownResource { workload_id: String, process_id: String, resource_id: String },
    #[error("no workload spec for `{0}`")]
    MissingSpec(String),
    #[error("no submit time for workload `{0}`")]
    MissingSubmitTime(String),
    #[error("workload `{workload_id}`: {source}")]
    Latency { workload_id: String, source: MetricError },
    #[error(transparent)]
    Constraint(#[from] ClassifyError),
}
