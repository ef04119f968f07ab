//! Greedy best-first search and its two pruning variants.
//!
//! All three planners share one engine and differ only in where a new child
//! goes:
//!
//! * [`greedy_search`]: every child enters OPEN.
//! * [`slope_search`]: children rated above `τ` enter OPEN, the rest a backup
//!   list. When OPEN runs dry the backup list becomes OPEN and `τ` is halved;
//!   once `τ` drops below the floor it becomes `-∞` and every child passes.
//! * [`sloper_search`]: children rated at or below `τ` are dropped. When OPEN
//!   runs dry the search restarts from scratch with `τ - ε`; below zero the
//!   final attempt runs with `τ = -∞`, i.e. as plain greedy search.
//!
//! Selection is by `h` alone, ties broken by lower `g` and then by earlier
//! insertion. The goal test happens when a node is selected.

mod open_list;

pub use open_list::{OpenKey, OpenList};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{Cell, ExactCost, GridMap, TransitionModel};
use crate::heuristics::{Heuristic, HeuristicError, Rater};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Heuristic(#[from] HeuristicError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Success,
    Exhausted,
    NodeLimit,
}

impl SearchStatus {
    pub fn name(self) -> &'static str {
        match self {
            SearchStatus::Success => "success",
            SearchStatus::Exhausted => "exhausted",
            SearchStatus::NodeLimit => "node_limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Maximum number of expansions; `None` means `width·height`.
    pub node_limit: Option<usize>,
    /// Fixed threshold for the backup-list planner.
    pub tau: f64,
    /// Below this the backup-list planner switches to `τ = -∞`.
    pub tau_floor: f64,
    /// First threshold of the restarting planner.
    pub restart_tau: f64,
    /// Threshold decrement between restarts.
    pub restart_step: f64,
    pub model: TransitionModel,
    /// Record every child admitted to the active OPEN list.
    pub record_insertions: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_limit: None,
            tau: 0.9,
            tau_floor: 0.05,
            restart_tau: 0.9,
            restart_step: 0.1,
            model: TransitionModel::OCTILE,
            record_insertions: false,
        }
    }
}

fn valid_tau(tau: f64) -> bool {
    tau == f64::NEG_INFINITY || (0.0..=1.0).contains(&tau)
}

impl SearchConfig {
    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_restart_tau(mut self, tau: f64) -> Self {
        self.restart_tau = tau;
        self
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if !valid_tau(self.tau) {
            return Err(SearchError::Config(format!(
                "tau {} not in [0, 1]",
                self.tau
            )));
        }
        if !valid_tau(self.restart_tau) {
            return Err(SearchError::Config(format!(
                "restart tau {} not in [0, 1]",
                self.restart_tau
            )));
        }
        if !(self.restart_step > 0.0) {
            return Err(SearchError::Config(format!(
                "restart step {} must be positive",
                self.restart_step
            )));
        }
        if !(self.tau_floor >= 0.0) {
            return Err(SearchError::Config(format!(
                "tau floor {} must be non-negative",
                self.tau_floor
            )));
        }
        Ok(())
    }
}

/// A child admitted to the active OPEN list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpenInsertion {
    pub cell: Cell,
    pub rating: f64,
    pub tau: f64,
    /// Threshold reductions (or restarts) that happened before this insertion.
    pub failsafes_before: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub status: SearchStatus,
    /// Start to goal; empty unless `status` is `Success`.
    pub path: Vec<Cell>,
    pub path_cost: ExactCost,
    /// Expansion order of the final attempt.
    pub expanded: Vec<Cell>,
    /// Entries left in OPEN (plus the backup list) when the search stopped.
    pub open_remaining: usize,
    /// Part of `open_remaining` held in the backup list.
    pub backup_remaining: usize,
    /// Threshold halvings (backup-list planner) or restarts (restarting planner).
    pub failsafe_count: u32,
    pub final_tau: f64,
    /// Thresholds in use over the run: the initial one and each reduction.
    pub tau_history: Vec<f64>,
    /// Expansions summed over all attempts.
    pub cumulative_expanded: usize,
    /// Filled when [`SearchConfig::record_insertions`] is set.
    pub insertions: Vec<OpenInsertion>,
}

impl SearchResult {
    pub fn is_success(&self) -> bool {
        self.status == SearchStatus::Success
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Routing {
    All,
    Backup,
    Discard,
}

struct Engine<'a> {
    map: &'a GridMap,
    heuristic: &'a Heuristic,
    rater: &'a Rater,
    cfg: &'a SearchConfig,
}

/// Outcome of one run of the search loop.
struct Attempt {
    status: SearchStatus,
    path: Vec<Cell>,
    path_cost: ExactCost,
    expanded: Vec<Cell>,
    open_remaining: usize,
    backup_remaining: usize,
    halvings: u32,
    tau_history: Vec<f64>,
    insertions: Vec<OpenInsertion>,
}

impl Engine<'_> {
    fn h(&self, cell: Cell) -> f64 {
        self.heuristic
            .value(cell, self.map.goal())
            .expect("heuristic checked against the map")
    }

    fn rate(&self, cell: Cell) -> f64 {
        self.rater
            .rate(cell)
            .expect("rater checked against the map")
    }

    fn run(&self, routing: Routing, initial_tau: f64, prior_failsafes: u32) -> Attempt {
        let map = self.map;
        let n = map.cell_count();
        let node_limit = self.cfg.node_limit.unwrap_or(n);
        let start = map.index(map.start());
        let goal = map.index(map.goal());

        let mut open = OpenList::new(n);
        let mut backup = OpenList::new(n);
        let mut g: Vec<Option<ExactCost>> = vec![None; n];
        let mut parent = vec![usize::MAX; n];
        let mut closed = vec![false; n];
        let mut expanded = Vec::new();
        let mut insertions = Vec::new();
        let mut seq = 0u64;
        let mut tau = initial_tau;
        let mut tau_history = vec![tau];
        let mut halvings = 0u32;

        g[start] = Some(ExactCost::ZERO);
        open.insert(
            start,
            OpenKey {
                h: self.h(map.start()),
                g: ExactCost::ZERO,
                seq,
            },
        );
        seq += 1;

        let status = loop {
            if open.is_empty() {
                if routing == Routing::Backup && !backup.is_empty() {
                    std::mem::swap(&mut open, &mut backup);
                    backup.clear();
                    tau /= 2.0;
                    if tau < self.cfg.tau_floor {
                        tau = f64::NEG_INFINITY;
                    }
                    halvings += 1;
                    tau_history.push(tau);
                } else {
                    break SearchStatus::Exhausted;
                }
            }
            if expanded.len() >= node_limit {
                break SearchStatus::NodeLimit;
            }
            let current = open.pop().expect("OPEN is non-empty");
            closed[current] = true;
            let cell = map.cell_at(current);
            expanded.push(cell);
            if current == goal {
                break SearchStatus::Success;
            }

            let base = g[current].expect("expanded cells have a cost");
            for (child, step) in self.cfg.model.successors(map, cell) {
                let idx = map.index(child);
                if closed[idx] {
                    continue;
                }
                let candidate = base + step;
                let holder = if open.contains(idx) {
                    Some(&mut open)
                } else if backup.contains(idx) {
                    Some(&mut backup)
                } else {
                    None
                };
                if let Some(list) = holder {
                    let mut key = list.key(idx).expect("present");
                    if candidate < key.g {
                        key.g = candidate;
                        g[idx] = Some(candidate);
                        parent[idx] = current;
                        list.rekey(idx, key);
                    }
                    continue;
                }

                let key = OpenKey {
                    h: self.h(child),
                    g: candidate,
                    seq,
                };
                let admitted = match routing {
                    Routing::All => true,
                    Routing::Backup | Routing::Discard => {
                        let rating = self.rate(child);
                        let pass = rating > tau;
                        if pass && self.cfg.record_insertions {
                            insertions.push(OpenInsertion {
                                cell: child,
                                rating,
                                tau,
                                failsafes_before: prior_failsafes + halvings,
                            });
                        }
                        pass
                    }
                };
                if admitted {
                    open.insert(idx, key);
                } else if routing == Routing::Backup {
                    backup.insert(idx, key);
                } else {
                    continue;
                }
                seq += 1;
                g[idx] = Some(candidate);
                parent[idx] = current;
            }
        };

        let (path, path_cost) = if status == SearchStatus::Success {
            let mut path = vec![map.goal()];
            let mut at = goal;
            while at != start {
                at = parent[at];
                path.push(map.cell_at(at));
            }
            path.reverse();
            (path, g[goal].expect("goal reached"))
        } else {
            (Vec::new(), ExactCost::ZERO)
        };

        Attempt {
            status,
            path,
            path_cost,
            expanded,
            open_remaining: open.len() + backup.len(),
            backup_remaining: backup.len(),
            halvings,
            tau_history,
            insertions,
        }
    }
}

fn engine<'a>(
    map: &'a GridMap,
    heuristic: &'a Heuristic,
    rater: &'a Rater,
    cfg: &'a SearchConfig,
) -> Result<Engine<'a>, SearchError> {
    cfg.validate()?;
    heuristic.check_map(map)?;
    rater.check_map(map)?;
    Ok(Engine {
        map,
        heuristic,
        rater,
        cfg,
    })
}

fn finish(attempt: Attempt, failsafe_count: u32, cumulative_expanded: usize) -> SearchResult {
    SearchResult {
        status: attempt.status,
        path: attempt.path,
        path_cost: attempt.path_cost,
        open_remaining: attempt.open_remaining,
        backup_remaining: attempt.backup_remaining,
        failsafe_count,
        final_tau: *attempt.tau_history.last().expect("never empty"),
        tau_history: attempt.tau_history,
        cumulative_expanded,
        insertions: attempt.insertions,
        expanded: attempt.expanded,
    }
}

/// Greedy best-first search ordered by `h`.
pub fn greedy_search(
    map: &GridMap,
    heuristic: &Heuristic,
    cfg: &SearchConfig,
) -> Result<SearchResult, SearchError> {
    let engine = engine(map, heuristic, &Rater::AlwaysPass, cfg)?;
    let attempt = engine.run(Routing::All, f64::NEG_INFINITY, 0);
    let cumulative = attempt.expanded.len();
    Ok(finish(attempt, 0, cumulative))
}

/// Pruned greedy search with a backup list and threshold halving, starting
/// from `cfg.tau`.
pub fn slope_search(
    map: &GridMap,
    heuristic: &Heuristic,
    rater: &Rater,
    cfg: &SearchConfig,
) -> Result<SearchResult, SearchError> {
    let engine = engine(map, heuristic, rater, cfg)?;
    let attempt = engine.run(Routing::Backup, cfg.tau, 0);
    let (halvings, cumulative) = (attempt.halvings, attempt.expanded.len());
    Ok(finish(attempt, halvings, cumulative))
}

/// Thresholds of successive restarts: `τ₀ - k·ε` rounded to 1e-9 so that
/// decimal thresholds compare exactly against decimal ratings; `-∞` once
/// the value drops below zero.
pub fn restart_thresholds(initial: f64, step: f64) -> impl Iterator<Item = f64> {
    let mut k = 0u32;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let tau = if initial == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            let snapped = ((initial - k as f64 * step) * 1e9).round() / 1e9;
            if snapped < 0.0 {
                f64::NEG_INFINITY
            } else {
                snapped
            }
        };
        done = tau == f64::NEG_INFINITY;
        k += 1;
        Some(tau)
    })
}

/// Pruned greedy search that drops low-rated children and restarts with a
/// lower threshold whenever OPEN runs dry. The reported expansions and open
/// size belong to the final attempt; `cumulative_expanded` covers all of them.
pub fn sloper_search(
    map: &GridMap,
    heuristic: &Heuristic,
    rater: &Rater,
    cfg: &SearchConfig,
) -> Result<SearchResult, SearchError> {
    let engine = engine(map, heuristic, rater, cfg)?;
    let mut cumulative = 0;
    let mut taus = Vec::new();
    let mut insertions = Vec::new();
    let mut restarts = 0u32;
    for tau in restart_thresholds(cfg.restart_tau, cfg.restart_step) {
        let mut attempt = engine.run(Routing::Discard, tau, restarts);
        cumulative += attempt.expanded.len();
        taus.push(tau);
        insertions.append(&mut attempt.insertions);
        if attempt.status == SearchStatus::Exhausted && tau != f64::NEG_INFINITY {
            restarts += 1;
            continue;
        }
        attempt.tau_history = taus;
        attempt.insertions = insertions;
        return Ok(finish(attempt, restarts, cumulative));
    }
    unreachable!("the threshold sequence ends with -inf")
}
