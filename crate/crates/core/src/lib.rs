pub mod coarse;
pub mod ei;
pub mod error;
pub mod graph;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod netgen;
pub mod search;
