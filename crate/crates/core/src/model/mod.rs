//! Domain types shared by the classifier, metrics engine and simulator.
//!
//! Everything here is a plain value: once built it is never mutated by the
//! rest of the crate, so it is `Send + Sync` and cheap to share.

mod observation;
mod records;
mod report;
mod time;
mod workload;

pub use observation::*;
pub use records::*;
pub use report::*;
pub use time::Ticks;
pub use workload::*;
