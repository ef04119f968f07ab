use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::GridError;

/// A grid coordinate. `(0, 0)` is the lower-left cell; `y` grows upwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub x: u32,
    pub y: u32,
}

impl Cell {
    pub const fn new(x: u32, y: u32) -> Self {
        Cell { x, y }
    }

    /// The cell displaced by `(dx, dy)`, or `None` if a coordinate would go negative.
    pub fn offset(self, dx: i32, dy: i32) -> Option<Cell> {
        let x = self.x.checked_add_signed(dx)?;
        let y = self.y.checked_add_signed(dy)?;
        Some(Cell { x, y })
    }

    pub fn is_adjacent(self, other: Cell) -> bool {
        self != other && self.x.abs_diff(other.x) <= 1 && self.y.abs_diff(other.y) <= 1
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Occupancy grid with a start and a goal cell.
///
/// Cells are stored row-major from the bottom row up: index `y * width + x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridMap {
    width: u32,
    height: u32,
    obstacles: Vec<bool>,
    start: Cell,
    goal: Cell,
    id: String,
}

impl GridMap {
    /// Builds a map from row-major (bottom row first) obstacle flags.
    pub fn new(
        id: impl Into<String>,
        width: u32,
        height: u32,
        obstacles: Vec<bool>,
        start: Cell,
        goal: Cell,
    ) -> Result<Self, GridError> {
        if width < 2 || height < 2 {
            return Err(GridError::TooSmall { width, height });
        }
        if obstacles.len() != (width as usize) * (height as usize) {
            return Err(GridError::CellCount {
                expected: (width as usize) * (height as usize),
                actual: obstacles.len(),
            });
        }
        let map = GridMap {
            width,
            height,
            obstacles,
            start,
            goal,
            id: id.into(),
        };
        for (role, cell) in [("start", start), ("goal", goal)] {
            if !map.in_bounds(cell) {
                return Err(GridError::OutOfBounds { cell });
            }
            if map.is_obstacle(cell) {
                return Err(GridError::BlockedEndpoint { role, cell });
            }
        }
        Ok(map)
    }

    /// An obstacle-free map with start and goal on the default corners.
    pub fn empty(id: impl Into<String>, width: u32, height: u32) -> Result<Self, GridError> {
        let obstacles = vec![false; (width as usize) * (height as usize)];
        Self::new(
            id,
            width,
            height,
            obstacles,
            Cell::new(0, 0),
            Cell::new(width.saturating_sub(1), height.saturating_sub(1)),
        )
    }

    /// Builds a map from rows given top row first, `.` free and `@` obstacle.
    /// Start and goal go to the lower-left and upper-right corners.
    pub fn from_rows(id: impl Into<String>, rows: &[&str]) -> Result<Self, GridError> {
        let height = rows.len() as u32;
        let width = rows.first().map_or(0, |r| r.chars().count()) as u32;
        let mut obstacles = vec![false; (width as usize) * (height as usize)];
        for (row_idx, row) in rows.iter().enumerate() {
            if row.chars().count() as u32 != width {
                return Err(GridError::RaggedRow { row: row_idx });
            }
            let y = height as usize - 1 - row_idx;
            for (x, ch) in row.chars().enumerate() {
                obstacles[y * width as usize + x] = ch != '.';
            }
        }
        Self::new(
            id,
            width,
            height,
            obstacles,
            Cell::new(0, 0),
            Cell::new(width.saturating_sub(1), height.saturating_sub(1)),
        )
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn start(&self) -> Cell {
        self.start
    }

    pub fn goal(&self) -> Cell {
        self.goal
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn cell_count(&self) -> usize {
        self.obstacles.len()
    }

    pub fn obstacles(&self) -> &[bool] {
        &self.obstacles
    }

    pub fn set_id(&mut self, id: impl Into<String>) {
        self.id = id.into();
    }

    pub fn with_endpoints(mut self, start: Cell, goal: Cell) -> Result<Self, GridError> {
        for (role, cell) in [("start", start), ("goal", goal)] {
            if !self.in_bounds(cell) {
                return Err(GridError::OutOfBounds { cell });
            }
            if self.is_obstacle(cell) {
                return Err(GridError::BlockedEndpoint { role, cell });
            }
        }
        self.start = start;
        self.goal = goal;
        Ok(self)
    }

    pub fn in_bounds(&self, cell: Cell) -> bool {
        cell.x < self.width && cell.y < self.height
    }

    /// Row-major index of an in-bounds cell.
    #[inline]
    pub fn index(&self, cell: Cell) -> usize {
        cell.y as usize * self.width as usize + cell.x as usize
    }

    #[inline]
    pub fn cell_at(&self, index: usize) -> Cell {
        Cell::new(
            (index % self.width as usize) as u32,
            (index / self.width as usize) as u32,
        )
    }

    /// True for obstacles; out-of-bounds cells are not obstacles, they are just absent.
    pub fn is_obstacle(&self, cell: Cell) -> bool {
        self.in_bounds(cell) && self.obstacles[self.index(cell)]
    }

    pub fn is_free(&self, cell: Cell) -> bool {
        self.in_bounds(cell) && !self.obstacles[self.index(cell)]
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.cell_count()).map(|i| self.cell_at(i))
    }

    pub fn free_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.cells().filter(|&c| self.is_free(c))
    }

    pub fn obstacle_count(&self) -> usize {
        self.obstacles.iter().filter(|&&o| o).count()
    }

    /// Free in-bounds 8-neighbours of `cell`, in the fixed neighbour order.
    pub fn free_neighbors(&self, cell: Cell) -> impl Iterator<Item = Cell> + '_ {
        super::NEIGHBOR_OFFSETS
            .iter()
            .filter_map(move |&(dx, dy)| cell.offset(dx, dy))
            .filter(move |&c| self.is_free(c))
    }

    /// Cells reachable from `from` through free 8-connected moves.
    pub fn reachable_from(&self, from: Cell) -> Vec<bool> {
        let mut seen = vec![false; self.cell_count()];
        if !self.is_free(from) {
            return seen;
        }
        let mut queue = VecDeque::from([from]);
        seen[self.index(from)] = true;
        while let Some(cell) = queue.pop_front() {
            for next in self.free_neighbors(cell) {
                let idx = self.index(next);
                if !seen[idx] {
                    seen[idx] = true;
                    queue.push_back(next);
                }
            }
        }
        seen
    }

    /// Flood-fill check that the goal can be reached from the start.
    pub fn is_solvable(&self) -> bool {
        self.reachable_from(self.start)[self.index(self.goal)]
    }
}
