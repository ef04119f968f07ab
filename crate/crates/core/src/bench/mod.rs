//! Benchmark harness: artifact pipeline, sweep execution and rendering.

pub mod config;
pub mod pipeline;
pub mod render;
pub mod sweep;

pub use config::{Method, SweepSpec};
pub use sweep::{run_method, run_sweep, MethodInputs, SweepOutcome};
