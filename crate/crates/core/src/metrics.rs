//! Evaluation metrics: expansion overhead, path suboptimality and unused
//! OPEN storage, all measured against oracle optima.

use std::fmt::Write as _;

use thiserror::Error;

use crate::grid::{ExactCost, GridMap};
use crate::search::{SearchResult, SearchStatus};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("metric undefined for a {} search", .0.name())]
    Failed(SearchStatus),
    #[error("{0}")]
    InvalidArgument(String),
}

/// Node count of a minimum-cost path, which an ideal search expands exactly.
/// Every optimal path has the same number of moves, since the exact cost
/// fixes both move counts.
pub fn min_path_nodes(optimal_cost: ExactCost) -> usize {
    optimal_cost.steps() as usize + 1
}

fn ensure_success(result: &SearchResult) -> Result<(), MetricError> {
    match result.status {
        SearchStatus::Success => Ok(()),
        other => Err(MetricError::Failed(other)),
    }
}

/// `100·(|expanded| − n_min)/n_min`.
pub fn expanded_rel_err(result: &SearchResult, n_min: usize) -> Result<f64, MetricError> {
    ensure_success(result)?;
    if n_min == 0 {
        return Err(MetricError::InvalidArgument(
            "n_min must be at least 1".into(),
        ));
    }
    let n = result.expanded.len() as f64;
    Ok(100.0 * (n - n_min as f64) / n_min as f64)
}

/// `100·(cost − C*)/C*`, exactly 0 when the costs are equal (including the
/// start = goal case).
pub fn path_rel_err(result: &SearchResult, optimal_cost: ExactCost) -> Result<f64, MetricError> {
    ensure_success(result)?;
    if result.path_cost == optimal_cost {
        return Ok(0.0);
    }
    if optimal_cost.is_zero() {
        return Err(MetricError::InvalidArgument(
            "zero optimal cost with a non-zero path".into(),
        ));
    }
    let opt = optimal_cost.value();
    Ok(100.0 * (result.path_cost.value() - opt) / opt)
}

/// Entries left in OPEN (backup list included) over the map's cell count.
pub fn open_norm(result: &SearchResult, map: &GridMap) -> f64 {
    result.open_remaining as f64 / map.cell_count() as f64
}

/// One (map, method) evaluation row.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub map_id: String,
    pub method: String,
    /// `None` when the search failed.
    pub expanded_rel_err: Option<f64>,
    pub path_rel_err: Option<f64>,
    pub open_norm: f64,
    pub failsafe_count: u32,
    pub status: SearchStatus,
    /// Expansion error summed over all restarts, for restarting planners.
    pub cumulative_expanded_rel_err: Option<f64>,
}

impl BenchRecord {
    pub fn evaluate(
        map: &GridMap,
        method: impl Into<String>,
        result: &SearchResult,
        optimal_cost: ExactCost,
    ) -> BenchRecord {
        let n_min = min_path_nodes(optimal_cost);
        let cumulative = result
            .is_success()
            .then(|| 100.0 * (result.cumulative_expanded as f64 - n_min as f64) / n_min as f64);
        BenchRecord {
            map_id: map.id().to_string(),
            method: method.into(),
            expanded_rel_err: expanded_rel_err(result, n_min).ok(),
            path_rel_err: path_rel_err(result, optimal_cost).ok(),
            open_norm: open_norm(result, map),
            failsafe_count: result.failsafe_count,
            status: result.status,
            cumulative_expanded_rel_err: cumulative,
        }
    }

    pub const CSV_HEADER: &'static str =
        "map_id,method,expanded_rel_err,path_rel_err,open_norm,failsafe_count,status";

    /// CSV row matching [`Self::CSV_HEADER`]; undefined metrics are left empty.
    pub fn csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
        let mut row = String::new();
        let _ = write!(
            row,
            "{},{},{},{},{:.6},{},{}",
            self.map_id,
            self.method,
            opt(self.expanded_rel_err),
            opt(self.path_rel_err),
            self.open_norm,
            self.failsafe_count,
            self.status.name()
        );
        row
    }
}
