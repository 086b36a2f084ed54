//! Workload analysis for IaaS capacity planning.
//!
//! * [`model`]: workload declarations, records, observations and reports.
//! * [`classifier`]: taxonomy lookups, resource orientation, execution mode and
//!   constraint checks.
//! * [`metrics`]: the QoS metric formulas.
//! * [`simulator`]: load balancing and record scheduling.
//! * [`io`]: the workload file format, report emission and the command line.

pub mod classifier;
pub mod io;
pub mod metrics;
pub mod model;
pub mod simulator;
