//! Exhaustive ground truth for a map: exact cost-to-go and cost-to-come
//! fields, the optimal path region, graded optimality ratings, and training
//! dataset export.

mod dataset;
mod rating;

pub use dataset::{dataset_csv, export_dataset, Balance, DatasetSample};
pub use rating::{region_distances, RatingGrid, RatingSource};

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::grid::{Cell, ExactCost, GridMap, TransitionModel};
use crate::gridfile::{GridFile, GridSource};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{target} cell {cell} is not reachable from the {source_role} in map `{map}`")]
    Unreachable {
        map: String,
        source_role: &'static str,
        target: &'static str,
        cell: Cell,
    },
    #[error("field or grid dimensions do not match map `{map}`")]
    ShapeMismatch { map: String },
    #[error("{0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostRole {
    /// h*: cost from each cell to the goal.
    CostToGo,
    /// g*: cost from the start to each cell.
    CostToCome,
}

/// Exact optimal costs for every cell; `None` marks obstacles and cells
/// unreachable from the field's source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostField {
    role: CostRole,
    width: u32,
    height: u32,
    values: Vec<Option<ExactCost>>,
}

impl CostField {
    pub fn role(&self) -> CostRole {
        self.role
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn get(&self, cell: Cell) -> Option<ExactCost> {
        if cell.x >= self.width || cell.y >= self.height {
            return None;
        }
        self.values[(cell.y * self.width + cell.x) as usize]
    }

    pub fn values(&self) -> &[Option<ExactCost>] {
        &self.values
    }

    fn matches(&self, map: &GridMap) -> bool {
        self.width == map.width() && self.height == map.height()
    }

    /// Numeric value grid (`source hvalue`). Cells without a value get
    /// `2·width·height`, which exceeds any path cost on the map.
    pub fn to_value_file(&self) -> GridFile {
        let missing = 2.0 * self.width as f64 * self.height as f64;
        GridFile {
            width: self.width,
            height: self.height,
            m: 0,
            source: GridSource::HValue,
            values: self
                .values
                .iter()
                .map(|v| v.map_or(missing, |c| c.value()))
                .collect(),
        }
    }
}

/// Single-source Dijkstra over exact costs, run until the whole reachable
/// component is settled.
pub fn dijkstra(map: &GridMap, source: Cell, model: &TransitionModel) -> Vec<Option<ExactCost>> {
    let mut dist: Vec<Option<ExactCost>> = vec![None; map.cell_count()];
    if !map.is_free(source) {
        return dist;
    }
    let mut settled = vec![false; map.cell_count()];
    let mut heap = BinaryHeap::new();
    dist[map.index(source)] = Some(ExactCost::ZERO);
    heap.push(Reverse((ExactCost::ZERO, map.index(source))));
    while let Some(Reverse((cost, idx))) = heap.pop() {
        if settled[idx] {
            continue;
        }
        settled[idx] = true;
        for (next, step) in model.successors(map, map.cell_at(idx)) {
            let nidx = map.index(next);
            let candidate = cost + step;
            if !settled[nidx] && dist[nidx].is_none_or(|d| candidate < d) {
                dist[nidx] = Some(candidate);
                heap.push(Reverse((candidate, nidx)));
            }
        }
    }
    dist
}

/// h*: exact cost-to-go from every cell, by backward Dijkstra from the goal
/// (moves are symmetric, so backward edges equal forward ones).
pub fn cost_to_go_field(map: &GridMap, model: &TransitionModel) -> Result<CostField, OracleError> {
    let values = dijkstra(map, map.goal(), model);
    if values[map.index(map.start())].is_none() {
        return Err(OracleError::Unreachable {
            map: map.id().to_string(),
            source_role: "goal",
            target: "start",
            cell: map.start(),
        });
    }
    Ok(CostField {
        role: CostRole::CostToGo,
        width: map.width(),
        height: map.height(),
        values,
    })
}

/// g*: exact cost-to-come from the start to every cell.
pub fn cost_to_come_field(
    map: &GridMap,
    model: &TransitionModel,
) -> Result<CostField, OracleError> {
    let values = dijkstra(map, map.start(), model);
    if values[map.index(map.goal())].is_none() {
        return Err(OracleError::Unreachable {
            map: map.id().to_string(),
            source_role: "start",
            target: "goal",
            cell: map.goal(),
        });
    }
    Ok(CostField {
        role: CostRole::CostToCome,
        width: map.width(),
        height: map.height(),
        values,
    })
}

/// Cells lying on at least one optimal start-goal path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    width: u32,
    members: Vec<bool>,
    optimal_cost: ExactCost,
}

impl Region {
    /// Builds a region from explicit cells; used for hand-made fixtures.
    pub fn from_cells(map: &GridMap, cells: &[Cell], optimal_cost: ExactCost) -> Self {
        let mut members = vec![false; map.cell_count()];
        for &c in cells {
            members[map.index(c)] = true;
        }
        Region {
            width: map.width(),
            members,
            optimal_cost,
        }
    }

    pub fn contains(&self, cell: Cell) -> bool {
        cell.x < self.width
            && self
                .members
                .get((cell.y * self.width + cell.x) as usize)
                .copied()
                .unwrap_or(false)
    }

    pub fn mask(&self) -> &[bool] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// C*, the optimal start-goal cost.
    pub fn optimal_cost(&self) -> ExactCost {
        self.optimal_cost
    }

    pub fn cells(&self) -> Vec<Cell> {
        let w = self.width as usize;
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| Cell::new((i % w) as u32, (i / w) as u32))
            .collect()
    }
}

/// `{ n : g*(n) + h*(n) = C* }` with exact cost equality, `C* = g*(goal)`.
pub fn optimal_region(map: &GridMap, g: &CostField, h: &CostField) -> Result<Region, OracleError> {
    if !g.matches(map) || !h.matches(map) {
        return Err(OracleError::ShapeMismatch {
            map: map.id().to_string(),
        });
    }
    let optimal_cost = g.get(map.goal()).ok_or_else(|| OracleError::Unreachable {
        map: map.id().to_string(),
        source_role: "start",
        target: "goal",
        cell: map.goal(),
    })?;
    let members = g
        .values
        .iter()
        .zip(&h.values)
        .map(|(gv, hv)| matches!((gv, hv), (Some(a), Some(b)) if *a + *b == optimal_cost))
        .collect();
    Ok(Region {
        width: map.width(),
        members,
        optimal_cost,
    })
}

/// Everything the oracle derives for one map.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    pub cost_to_go: CostField,
    pub cost_to_come: CostField,
    pub region: Region,
    pub ratings: RatingGrid,
}

pub fn ground_truth(
    map: &GridMap,
    model: &TransitionModel,
    m: u32,
) -> Result<GroundTruth, OracleError> {
    let cost_to_go = cost_to_go_field(map, model)?;
    let cost_to_come = cost_to_come_field(map, model)?;
    let region = optimal_region(map, &cost_to_come, &cost_to_go)?;
    let ratings = region_distances(map, &region, m)?;
    Ok(GroundTruth {
        cost_to_go,
        cost_to_come,
        region,
        ratings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const OCTILE: TransitionModel = TransitionModel::OCTILE;

    #[test]
    fn empty_3x3_fields() {
        let map = GridMap::empty("e", 3, 3).unwrap();
        let h = cost_to_go_field(&map, &OCTILE).unwrap();
        assert_eq!(h.get(Cell::new(0, 0)), Some(ExactCost::new(0, 2)));
        assert_eq!(h.get(Cell::new(2, 2)), Some(ExactCost::ZERO));
        let g = cost_to_come_field(&map, &OCTILE).unwrap();
        assert_eq!(g.get(Cell::new(0, 0)), Some(ExactCost::ZERO));
        assert_eq!(g.get(Cell::new(2, 1)), Some(ExactCost::new(1, 1)));
        let region = optimal_region(&map, &g, &h).unwrap();
        assert_eq!(
            region.cells(),
            vec![Cell::new(0, 0), Cell::new(1, 1), Cell::new(2, 2)]
        );
        assert_eq!(region.optimal_cost(), ExactCost::new(0, 2));
    }

    #[test]
    fn cost_to_come_equals_cost_to_go_with_goal_at_start() {
        let map = GridMap::from_rows("s", &["....", ".@@.", "...."]).unwrap();
        let g = cost_to_come_field(&map, &OCTILE).unwrap();
        let mirrored = map.clone().with_endpoints(map.goal(), map.start()).unwrap();
        let h = cost_to_go_field(&mirrored, &OCTILE).unwrap();
        assert_eq!(g.values(), h.values());
    }

    #[test]
    fn corridor_region_is_whole_corridor() {
        let map = GridMap::from_rows("c", &["@@@@.", "....@"]).unwrap();
        let gt = ground_truth(&map, &OCTILE, 10).unwrap();
        assert_eq!(gt.region.len(), 5);
        assert!(map.free_cells().all(|c| gt.region.contains(c)));
    }

    #[test]
    fn isolated_endpoints_are_errors() {
        let map = GridMap::from_rows("w", &["..@..", "..@..", "..@.."]).unwrap();
        assert!(matches!(
            cost_to_go_field(&map, &OCTILE),
            Err(OracleError::Unreachable {
                target: "start",
                ..
            })
        ));
        assert!(matches!(
            cost_to_come_field(&map, &OCTILE),
            Err(OracleError::Unreachable { target: "goal", .. })
        ));
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let small = GridMap::empty("a", 3, 3).unwrap();
        let big = GridMap::empty("b", 4, 3).unwrap();
        let g = cost_to_come_field(&small, &OCTILE).unwrap();
        let h = cost_to_go_field(&small, &OCTILE).unwrap();
        assert!(matches!(
            optimal_region(&big, &g, &h),
            Err(OracleError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn unit_costs_count_moves() {
        let map = GridMap::empty("e", 4, 3).unwrap();
        let gt = ground_truth(&map, &TransitionModel::UNIT, 10).unwrap();
        assert_eq!(gt.region.optimal_cost(), ExactCost::new(3, 0));
        assert_eq!(
            gt.region.cells(),
            vec![
                Cell::new(0, 0),
                Cell::new(1, 0),
                Cell::new(1, 1),
                Cell::new(2, 1),
                Cell::new(2, 2),
                Cell::new(3, 2)
            ]
        );
    }

    #[test]
    fn value_file_uses_numeric_costs() {
        let map = GridMap::from_rows("v", &["...", ".@.", "..."]).unwrap();
        let h = cost_to_go_field(&map, &OCTILE).unwrap();
        let file = h.to_value_file();
        assert_eq!(file.values[map.index(Cell::new(1, 1))], 18.0);
        let start = file.values[map.index(map.start())];
        assert!((start - h.get(map.start()).unwrap().value()).abs() < 1e-12);
    }
}
