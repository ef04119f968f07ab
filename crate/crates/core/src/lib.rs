//! Grid pathfinding with optimality-region pruning.
//!
//! The crate covers the whole loop: procedural map generation, exhaustive
//! ground-truth oracles (exact cost fields, optimal path regions and graded
//! optimality ratings), greedy best-first search and its two pruning
//! variants, evaluation metrics, and a benchmark harness.

pub mod bench;
pub mod error;
pub mod grid;
pub mod gridfile;
pub mod heuristics;
pub mod metrics;
pub mod oracle;
pub mod search;
pub mod worldgen;

pub use error::Error;
pub use grid::{Cell, ExactCost, GridMap, TransitionModel};
