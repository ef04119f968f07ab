use std::collections::VecDeque;

use crate::grid::{Cell, GridMap};
use crate::gridfile::{GridFile, GridFileError, GridSource};

use super::{OracleError, Region};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatingSource {
    GroundTruth,
    Learned,
}

impl RatingSource {
    fn grid_source(self) -> GridSource {
        match self {
            RatingSource::GroundTruth => GridSource::GroundTruth,
            RatingSource::Learned => GridSource::Learned,
        }
    }
}

/// Per-cell optimality rating in `[0, 1]`.
///
/// Ground-truth grids also carry the step distance `k` to the optimal region
/// (`None` for cells `m` or more steps away, obstacles and unreachable cells);
/// their ratings are `(m - k) / m`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingGrid {
    width: u32,
    height: u32,
    m: u32,
    source: RatingSource,
    steps: Option<Vec<Option<u32>>>,
    ratings: Vec<f64>,
}

fn rating_for(steps: Option<u32>, m: u32) -> f64 {
    match steps {
        Some(k) if k < m => (m - k) as f64 / m as f64,
        _ => 0.0,
    }
}

impl RatingGrid {
    /// A learned (model-predicted) grid. Values must lie in `[0, 1]`.
    pub fn learned(
        width: u32,
        height: u32,
        m: u32,
        ratings: Vec<f64>,
    ) -> Result<Self, OracleError> {
        if ratings.len() != width as usize * height as usize {
            return Err(OracleError::InvalidArgument(format!(
                "expected {} ratings, got {}",
                width as usize * height as usize,
                ratings.len()
            )));
        }
        if let Some(v) = ratings.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(OracleError::InvalidArgument(format!(
                "rating {v} outside [0, 1]"
            )));
        }
        Ok(RatingGrid {
            width,
            height,
            m,
            source: RatingSource::Learned,
            steps: None,
            ratings,
        })
    }

    /// A learned grid with the same rating everywhere.
    pub fn constant(width: u32, height: u32, value: f64) -> Result<Self, OracleError> {
        Self::learned(
            width,
            height,
            10,
            vec![value; width as usize * height as usize],
        )
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn source(&self) -> RatingSource {
        self.source
    }

    fn idx(&self, cell: Cell) -> Option<usize> {
        (cell.x < self.width && cell.y < self.height)
            .then(|| cell.y as usize * self.width as usize + cell.x as usize)
    }

    /// Rating of `cell`; `None` outside the grid.
    pub fn rating(&self, cell: Cell) -> Option<f64> {
        self.idx(cell).map(|i| self.ratings[i])
    }

    pub fn ratings(&self) -> &[f64] {
        &self.ratings
    }

    /// Step distance to the optimal region for ground-truth grids.
    /// Outer `None`: unknown (learned grid or out of bounds); inner `None`: far.
    pub fn steps(&self, cell: Cell) -> Option<Option<u32>> {
        let i = self.idx(cell)?;
        self.steps.as_ref().map(|s| s[i])
    }

    pub fn to_file(&self) -> GridFile {
        GridFile {
            width: self.width,
            height: self.height,
            m: self.m,
            source: self.source.grid_source(),
            values: self.ratings.clone(),
        }
    }

    /// Converts a parsed rating file. Ground-truth values are snapped to the
    /// nearest multiple of `1/m` and their step distances restored, so a
    /// written grid reads back identically.
    pub fn from_file(file: GridFile) -> Result<Self, GridFileError> {
        match file.source {
            GridSource::Learned => Ok(RatingGrid {
                width: file.width,
                height: file.height,
                m: file.m,
                source: RatingSource::Learned,
                steps: None,
                ratings: file.values,
            }),
            GridSource::GroundTruth => {
                if file.m == 0 {
                    return Err(GridFileError::Syntax {
                        line: 3,
                        message: "ground-truth grids need m >= 1".into(),
                    });
                }
                let m = file.m;
                let steps: Vec<Option<u32>> = file
                    .values
                    .iter()
                    .map(|v| {
                        let level = (v * m as f64).round() as u32;
                        (level > 0).then(|| m - level)
                    })
                    .collect();
                let ratings = steps.iter().map(|&k| rating_for(k, m)).collect();
                Ok(RatingGrid {
                    width: file.width,
                    height: file.height,
                    m,
                    source: RatingSource::GroundTruth,
                    steps: Some(steps),
                    ratings,
                })
            }
            GridSource::HValue => Err(GridFileError::WrongSource {
                expected: GridSource::GroundTruth,
                found: GridSource::HValue,
            }),
        }
    }
}

/// Multi-source BFS from the optimal region over free cells, counting every
/// 8-connected move (diagonals included) as one step. Cells `m` or more steps
/// away, and cells the BFS never reaches, rate 0; region cells rate 1.
pub fn region_distances(map: &GridMap, region: &Region, m: u32) -> Result<RatingGrid, OracleError> {
    if m == 0 {
        return Err(OracleError::InvalidArgument("m must be at least 1".into()));
    }
    if region.mask().len() != map.cell_count() {
        return Err(OracleError::ShapeMismatch {
            map: map.id().to_string(),
        });
    }
    if region.is_empty() {
        return Err(OracleError::InvalidArgument(
            "optimal region is empty".into(),
        ));
    }

    let mut dist: Vec<Option<u32>> = vec![None; map.cell_count()];
    let mut queue = VecDeque::new();
    for (i, &member) in region.mask().iter().enumerate() {
        if member {
            dist[i] = Some(0);
            queue.push_back(i);
        }
    }
    while let Some(idx) = queue.pop_front() {
        let k = dist[idx].expect("queued cells have a distance");
        if k + 1 >= m {
            continue;
        }
        for next in map.free_neighbors(map.cell_at(idx)) {
            let nidx = map.index(next);
            if dist[nidx].is_none() {
                dist[nidx] = Some(k + 1);
                queue.push_back(nidx);
            }
        }
    }

    let ratings = dist.iter().map(|&k| rating_for(k, m)).collect();
    Ok(RatingGrid {
        width: map.width(),
        height: map.height(),
        m,
        source: RatingSource::GroundTruth,
        steps: Some(dist),
        ratings,
    })
}
