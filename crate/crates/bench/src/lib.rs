//! Benchmark harness for the `hessfree` solvers: configuration, the run
//! matrix, trace and summary files, scaling fits, and the acceptance battery.

pub mod config;
pub mod fit;
pub mod runner;
pub mod summary;
pub mod trace;
pub mod verify;
