//! Cost-to-go estimators and optimality raters consumed by the planners.

use thiserror::Error;

use crate::grid::{euclidean_value, Cell, GridMap};
use crate::gridfile::{GridFile, GridFileError, GridSource};
use crate::oracle::{CostField, RatingGrid, RatingSource};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeuristicError {
    #[error("cell {cell} lies outside the {width}x{height} value grid")]
    Lookup { cell: Cell, width: u32, height: u32 },
    #[error("grid is {grid} but map `{map}` is {expected}")]
    Dimensions {
        map: String,
        grid: String,
        expected: String,
    },
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    File(#[from] GridFileError),
}

/// Per-cell cost-to-go values, e.g. a learned estimator's output or the
/// oracle's exact h*.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueGrid {
    width: u32,
    height: u32,
    values: Vec<f64>,
}

impl ValueGrid {
    pub fn new(width: u32, height: u32, values: Vec<f64>) -> Result<Self, HeuristicError> {
        if values.len() != width as usize * height as usize {
            return Err(HeuristicError::Config(format!(
                "value grid needs {} values, got {}",
                width as usize * height as usize,
                values.len()
            )));
        }
        Ok(ValueGrid {
            width,
            height,
            values,
        })
    }

    pub fn from_file(file: GridFile) -> Result<Self, HeuristicError> {
        if file.source != GridSource::HValue {
            return Err(GridFileError::WrongSource {
                expected: GridSource::HValue,
                found: file.source,
            }
            .into());
        }
        Self::new(file.width, file.height, file.values)
    }

    pub fn from_cost_field(field: &CostField) -> Self {
        let file = field.to_value_file();
        ValueGrid {
            width: file.width,
            height: file.height,
            values: file.values,
        }
    }

    pub fn to_file(&self) -> GridFile {
        GridFile {
            width: self.width,
            height: self.height,
            m: 0,
            source: GridSource::HValue,
            values: self.values.clone(),
        }
    }

    pub fn get(&self, cell: Cell) -> Option<f64> {
        (cell.x < self.width && cell.y < self.height)
            .then(|| self.values[cell.y as usize * self.width as usize + cell.x as usize])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Heuristic {
    Euclidean,
    GridLookup(ValueGrid),
}

impl Heuristic {
    /// Estimated cost from `cell` to `goal`. Grid lookups ignore `goal`.
    pub fn value(&self, cell: Cell, goal: Cell) -> Result<f64, HeuristicError> {
        match self {
            Heuristic::Euclidean => Ok(euclidean_value(cell, goal)),
            Heuristic::GridLookup(grid) => grid.get(cell).ok_or(HeuristicError::Lookup {
                cell,
                width: grid.width,
                height: grid.height,
            }),
        }
    }

    /// Checks that every cell of `map` can be evaluated.
    pub fn check_map(&self, map: &GridMap) -> Result<(), HeuristicError> {
        match self {
            Heuristic::Euclidean => Ok(()),
            Heuristic::GridLookup(grid) => check_dims(map, grid.width, grid.height),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Heuristic::Euclidean => "euclidean",
            Heuristic::GridLookup(_) => "grid",
        }
    }
}

fn check_dims(map: &GridMap, width: u32, height: u32) -> Result<(), HeuristicError> {
    if (width, height) != (map.width(), map.height()) {
        return Err(HeuristicError::Dimensions {
            map: map.id().to_string(),
            grid: format!("{width}x{height}"),
            expected: format!("{}x{}", map.width(), map.height()),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RaterKind {
    GroundTruth,
    Learned,
    AlwaysPass,
}

/// Optimality rater `d(n)` used to prune children.
#[derive(Debug, Clone, PartialEq)]
pub enum Rater {
    GroundTruth(RatingGrid),
    Learned(RatingGrid),
    /// Rates every cell 1.
    AlwaysPass,
}

impl Rater {
    pub fn from_kind(kind: RaterKind, grid: Option<RatingGrid>) -> Result<Rater, HeuristicError> {
        match (kind, grid) {
            (RaterKind::AlwaysPass, _) => Ok(Rater::AlwaysPass),
            (RaterKind::GroundTruth, Some(g)) => Ok(Rater::GroundTruth(g)),
            (RaterKind::Learned, Some(g)) => Ok(Rater::Learned(g)),
            (kind, None) => Err(HeuristicError::Config(format!(
                "{kind:?} rater needs a rating grid"
            ))),
        }
    }

    /// Wraps a grid according to its own source tag.
    pub fn from_grid(grid: RatingGrid) -> Rater {
        match grid.source() {
            RatingSource::GroundTruth => Rater::GroundTruth(grid),
            RatingSource::Learned => Rater::Learned(grid),
        }
    }

    pub fn kind(&self) -> RaterKind {
        match self {
            Rater::GroundTruth(_) => RaterKind::GroundTruth,
            Rater::Learned(_) => RaterKind::Learned,
            Rater::AlwaysPass => RaterKind::AlwaysPass,
        }
    }

    pub fn grid(&self) -> Option<&RatingGrid> {
        match self {
            Rater::GroundTruth(g) | Rater::Learned(g) => Some(g),
            Rater::AlwaysPass => None,
        }
    }

    pub fn rate(&self, cell: Cell) -> Result<f64, HeuristicError> {
        match self.grid() {
            None => Ok(1.0),
            Some(g) => g.rating(cell).ok_or(HeuristicError::Lookup {
                cell,
                width: g.width(),
                height: g.height(),
            }),
        }
    }

    pub fn check_map(&self, map: &GridMap) -> Result<(), HeuristicError> {
        match self.grid() {
            None => Ok(()),
            Some(g) => check_dims(map, g.width(), g.height()),
        }
    }
}
