//! Grid environment: cells, occupancy maps, exact octile costs and the
//! 8-connected transition model.

mod cost;
mod map;
pub mod movingai;

pub use cost::{compare_cost, ExactCost};
pub use map::{Cell, GridMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("map must be at least 2x2, got {width}x{height}")]
    TooSmall { width: u32, height: u32 },
    #[error("expected {expected} cells, got {actual}")]
    CellCount { expected: usize, actual: usize },
    #[error("row {row} has a different width than the first row")]
    RaggedRow { row: usize },
    #[error("cell {cell} is out of bounds")]
    OutOfBounds { cell: Cell },
    #[error("cell {cell} is an obstacle")]
    Obstacle { cell: Cell },
    #[error("{role} cell {cell} is an obstacle")]
    BlockedEndpoint { role: &'static str, cell: Cell },
}

/// Neighbour order used everywhere a cell is expanded: the four cardinal
/// moves (E, N, W, S) followed by the four diagonals (NE, NW, SW, SE).
pub(crate) const NEIGHBOR_OFFSETS: [(i32, i32); 8] = [
    (1, 0),
    (0, 1),
    (-1, 0),
    (0, -1),
    (1, 1),
    (-1, 1),
    (-1, -1),
    (1, -1),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MoveCosts {
    /// 1 for cardinal moves, √2 for diagonal moves.
    #[default]
    Octile,
    /// Every move costs 1.
    Unit,
}

/// 8-connected transition model. Diagonal moves past two blocked
/// orthogonal cells (corner cutting) are allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TransitionModel {
    pub costs: MoveCosts,
}

impl TransitionModel {
    pub const OCTILE: TransitionModel = TransitionModel {
        costs: MoveCosts::Octile,
    };
    pub const UNIT: TransitionModel = TransitionModel {
        costs: MoveCosts::Unit,
    };

    pub fn step_cost(&self, dx: i32, dy: i32) -> ExactCost {
        match (self.costs, dx != 0 && dy != 0) {
            (MoveCosts::Octile, true) => ExactCost::DIAGONAL_STEP,
            _ => ExactCost::CARDINAL_STEP,
        }
    }

    /// Free in-bounds successors of `cell` with their step costs.
    ///
    /// Callers that already know `cell` is valid use this directly; [`expand`]
    /// is the checked entry point.
    pub fn successors<'a>(
        &'a self,
        map: &'a GridMap,
        cell: Cell,
    ) -> impl Iterator<Item = (Cell, ExactCost)> + 'a {
        NEIGHBOR_OFFSETS.iter().filter_map(move |&(dx, dy)| {
            let next = cell.offset(dx, dy)?;
            map.is_free(next).then(|| (next, self.step_cost(dx, dy)))
        })
    }
}

/// Children of `cell` under `model`: every free in-bounds 8-neighbour and its step cost.
pub fn expand(
    map: &GridMap,
    cell: Cell,
    model: &TransitionModel,
) -> Result<Vec<(Cell, ExactCost)>, GridError> {
    if !map.in_bounds(cell) {
        return Err(GridError::OutOfBounds { cell });
    }
    if map.is_obstacle(cell) {
        return Err(GridError::Obstacle { cell });
    }
    Ok(model.successors(map, cell).collect())
}

/// Straight-line distance between two cells.
pub fn euclidean_value(a: Cell, b: Cell) -> f64 {
    let dx = a.x as f64 - b.x as f64;
    let dy = a.y as f64 - b.y as f64;
    (dx * dx + dy * dy).sqrt()
}

/// Cost of a cell sequence under `model`; `None` if two consecutive cells are not adjacent.
pub fn path_cost(path: &[Cell], model: &TransitionModel) -> Option<ExactCost> {
    path.windows(2)
        .map(|w| {
            w[0].is_adjacent(w[1]).then(|| {
                let dx = w[1].x as i32 - w[0].x as i32;
                let dy = w[1].y as i32 - w[0].y as i32;
                model.step_cost(dx, dy)
            })
        })
        .sum()
}
