//! Procedural generators for the eight evaluation world families and their
//! train/validation/test splits.
//!
//! Every generator is a pure function of its [`WorldSpec`]: the same spec
//! always yields the same map. Maps are regenerated (drawing further from the
//! same seeded stream) until the goal is reachable from the start, up to
//! [`WorldParams::max_attempts`] times.

mod shapes;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{Cell, GridMap};
use shapes::{Canvas, Opening};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WorldType {
    AlternatingGaps,
    ShiftingGaps,
    SingleBugtrap,
    Forest,
    BugtrapForest,
    GapsForest,
    Maze,
    MultipleBugtraps,
}

impl WorldType {
    pub const ALL: [WorldType; 8] = [
        WorldType::AlternatingGaps,
        WorldType::ShiftingGaps,
        WorldType::SingleBugtrap,
        WorldType::Forest,
        WorldType::BugtrapForest,
        WorldType::GapsForest,
        WorldType::Maze,
        WorldType::MultipleBugtraps,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WorldType::AlternatingGaps => "alternating_gaps",
            WorldType::ShiftingGaps => "shifting_gaps",
            WorldType::SingleBugtrap => "single_bugtrap",
            WorldType::Forest => "forest",
            WorldType::BugtrapForest => "bugtrap_forest",
            WorldType::GapsForest => "gaps_forest",
            WorldType::Maze => "maze",
            WorldType::MultipleBugtraps => "multiple_bugtraps",
        }
    }
}

impl fmt::Display for WorldType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WorldType {
    type Err = GenerationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        WorldType::ALL
            .into_iter()
            .find(|w| w.name() == s)
            .ok_or_else(|| GenerationError::UnknownWorld(s.to_string()))
    }
}

/// Tunable generator parameters. The defaults target 32x32 maps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldParams {
    /// Obstacle probability for `forest`.
    pub forest_density: f64,
    /// Obstacle probability of the forest layer under `bugtrap_forest` and `gaps_forest`.
    pub overlay_density: f64,
    /// Number of vertical walls in the gap worlds.
    pub wall_count: u32,
    /// Height of the single opening in each wall.
    pub gap_size: u32,
    /// Side length of the single bugtrap; `None` means half the smaller map side.
    pub trap_size: Option<u32>,
    /// Inclusive range for the number of traps in `multiple_bugtraps`.
    pub trap_count: (u32, u32),
    /// Maze corridor width.
    pub corridor_width: u32,
    /// Regeneration budget for unsolvable draws.
    pub max_attempts: u32,
}

impl Default for WorldParams {
    fn default() -> Self {
        WorldParams {
            forest_density: 0.2,
            overlay_density: 0.1,
            wall_count: 3,
            gap_size: 3,
            trap_size: None,
            trap_count: (3, 5),
            corridor_width: 2,
            max_attempts: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldSpec {
    pub world_type: WorldType,
    pub width: u32,
    pub height: u32,
    pub seed: u64,
    pub params: WorldParams,
}

impl WorldSpec {
    pub fn new(world_type: WorldType, width: u32, height: u32, seed: u64) -> Self {
        WorldSpec {
            world_type,
            width,
            height,
            seed,
            params: WorldParams::default(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenerationError {
    #[error("unknown world type `{0}`")]
    UnknownWorld(String),
    #[error("world dimensions must be at least 8x8, got {width}x{height}")]
    TooSmall { width: u32, height: u32 },
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("no solvable {} map for seed {} after {attempts} attempts", spec.world_type, spec.seed)]
    Unsolvable { spec: Box<WorldSpec>, attempts: u32 },
    #[error("split counts must be positive")]
    EmptySplit,
}

/// Generates the map described by `spec`. Start and goal sit on the
/// lower-left and upper-right corners.
pub fn generate(spec: &WorldSpec) -> Result<GridMap, GenerationError> {
    let id = format!("{}_{}", spec.world_type, spec.seed);
    generate_with_id(spec, id)
}

fn generate_with_id(spec: &WorldSpec, id: String) -> Result<GridMap, GenerationError> {
    let (w, h) = (spec.width, spec.height);
    if w < 8 || h < 8 {
        return Err(GenerationError::TooSmall {
            width: w,
            height: h,
        });
    }
    validate(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..spec.params.max_attempts {
        let canvas = draw(spec, &mut rng);
        let map = GridMap::new(
            id.clone(),
            w,
            h,
            canvas.obstacles,
            Cell::new(0, 0),
            Cell::new(w - 1, h - 1),
        )
        .expect("corners are cleared by every generator");
        if map.is_solvable() {
            return Ok(map);
        }
    }
    Err(GenerationError::Unsolvable {
        spec: Box::new(spec.clone()),
        attempts: spec.params.max_attempts,
    })
}

fn validate(spec: &WorldSpec) -> Result<(), GenerationError> {
    let p = &spec.params;
    let bad = |msg: String| Err(GenerationError::InvalidParams(msg));
    for (name, d) in [
        ("forest_density", p.forest_density),
        ("overlay_density", p.overlay_density),
    ] {
        if !(0.0..=1.0).contains(&d) {
            return bad(format!("{name} must lie in [0, 1], got {d}"));
        }
    }
    if p.max_attempts == 0 {
        return bad("max_attempts must be positive".into());
    }
    match spec.world_type {
        WorldType::AlternatingGaps | WorldType::ShiftingGaps | WorldType::GapsForest => {
            if p.wall_count == 0 || 2 * p.wall_count + 1 > spec.width {
                return bad(format!(
                    "{} walls do not fit in width {}",
                    p.wall_count, spec.width
                ));
            }
            if p.gap_size == 0 || p.gap_size + 2 > spec.height {
                return bad(format!(
                    "gap size {} does not fit in height {}",
                    p.gap_size, spec.height
                ));
            }
        }
        WorldType::SingleBugtrap | WorldType::BugtrapForest => {
            if let Some(size) = p.trap_size {
                if size < 4 || size + 2 > spec.width.min(spec.height) {
                    return bad(format!("trap size {size} does not fit"));
                }
            }
        }
        WorldType::MultipleBugtraps => {
            if p.trap_count.0 == 0 || p.trap_count.0 > p.trap_count.1 {
                return bad(format!("invalid trap count range {:?}", p.trap_count));
            }
        }
        WorldType::Maze => {
            if p.corridor_width == 0 || 2 * (p.corridor_width + 1) > spec.width.min(spec.height) + 1
            {
                return bad(format!("corridor width {} too large", p.corridor_width));
            }
        }
        WorldType::Forest => {}
    }
    Ok(())
}

fn draw(spec: &WorldSpec, rng: &mut ChaCha8Rng) -> Canvas {
    let (w, h) = (spec.width, spec.height);
    let p = &spec.params;
    let mut canvas = Canvas::new(w, h);
    match spec.world_type {
        WorldType::Forest => canvas.scatter(rng, p.forest_density),
        WorldType::AlternatingGaps => gap_walls(&mut canvas, rng, p, false),
        WorldType::ShiftingGaps => gap_walls(&mut canvas, rng, p, true),
        WorldType::GapsForest => {
            canvas.scatter(rng, p.overlay_density);
            gap_walls(&mut canvas, rng, p, false);
        }
        WorldType::SingleBugtrap => single_trap(&mut canvas, p),
        WorldType::BugtrapForest => {
            canvas.scatter(rng, p.overlay_density);
            single_trap(&mut canvas, p);
        }
        WorldType::MultipleBugtraps => {
            let min_side = w.min(h);
            let lo = (min_side / 5).max(4);
            let hi = (min_side * 2 / 7).max(lo);
            let count = rng.gen_range(p.trap_count.0..=p.trap_count.1);
            for _ in 0..count {
                let size = rng.gen_range(lo..=hi);
                let x0 = rng.gen_range(1..=w - 1 - size);
                let y0 = rng.gen_range(1..=h - 1 - size);
                let opening = Opening::ALL[rng.gen_range(0..4)];
                shapes::c_trap(&mut canvas, x0, y0, size, opening);
            }
        }
        WorldType::Maze => shapes::division_maze(&mut canvas, rng, p.corridor_width),
    }
    canvas.clear_corners();
    canvas
}

/// Column positions of the evenly spaced walls.
pub fn wall_columns(width: u32, wall_count: u32) -> Vec<u32> {
    (1..=wall_count)
        .map(|i| i * width / (wall_count + 1))
        .collect()
}

fn gap_walls(canvas: &mut Canvas, rng: &mut ChaCha8Rng, p: &WorldParams, shifting: bool) {
    let h = canvas.height;
    for (i, x) in wall_columns(canvas.width, p.wall_count)
        .into_iter()
        .enumerate()
    {
        let lo = if shifting {
            rng.gen_range(1..=h - 1 - p.gap_size)
        } else if i % 2 == 0 {
            h - 1 - p.gap_size
        } else {
            1
        };
        shapes::wall_with_gap(canvas, x, lo, lo + p.gap_size - 1);
    }
}

fn single_trap(canvas: &mut Canvas, p: &WorldParams) {
    let (w, h) = (canvas.width, canvas.height);
    let size = p.trap_size.unwrap_or(w.min(h) / 2).max(4);
    let x0 = (w - size) / 2;
    let y0 = (h - size) / 2;
    shapes::corner_trap(canvas, x0, y0, size);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitKind {
    Train,
    Val,
    Test,
}

impl SplitKind {
    pub const ALL: [SplitKind; 3] = [SplitKind::Train, SplitKind::Val, SplitKind::Test];

    pub fn name(self) -> &'static str {
        match self {
            SplitKind::Train => "train",
            SplitKind::Val => "val",
            SplitKind::Test => "test",
        }
    }
}

impl fmt::Display for SplitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SplitKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SplitKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown split `{s}`"))
    }
}

/// A world family: everything in a [`WorldSpec`] except the seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldFamily {
    pub world_type: WorldType,
    pub width: u32,
    pub height: u32,
    pub params: WorldParams,
    /// Offset added to every seed of the split.
    pub base_seed: u64,
}

impl WorldFamily {
    pub fn new(world_type: WorldType, size: u32) -> Self {
        WorldFamily {
            world_type,
            width: size,
            height: size,
            params: WorldParams::default(),
            base_seed: 0,
        }
    }

    pub fn spec(&self, seed: u64) -> WorldSpec {
        WorldSpec {
            world_type: self.world_type,
            width: self.width,
            height: self.height,
            seed,
            params: self.params.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCounts {
    pub train: u32,
    pub val: u32,
    pub test: u32,
}

impl Default for SplitCounts {
    fn default() -> Self {
        SplitCounts {
            train: 320,
            val: 80,
            test: 100,
        }
    }
}

impl SplitCounts {
    /// Seeds of one split. Splits occupy consecutive, disjoint seed ranges
    /// in train, val, test order starting at `base_seed`.
    pub fn seeds(&self, kind: SplitKind, base_seed: u64) -> std::ops::Range<u64> {
        let (t, v, s) = (self.train as u64, self.val as u64, self.test as u64);
        let (lo, len) = match kind {
            SplitKind::Train => (0, t),
            SplitKind::Val => (t, v),
            SplitKind::Test => (t + v, s),
        };
        base_seed + lo..base_seed + lo + len
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedMap {
    pub spec: WorldSpec,
    pub split: SplitKind,
    pub map: GridMap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub train: Vec<GeneratedMap>,
    pub val: Vec<GeneratedMap>,
    pub test: Vec<GeneratedMap>,
}

impl Split {
    pub fn get(&self, kind: SplitKind) -> &[GeneratedMap] {
        match kind {
            SplitKind::Train => &self.train,
            SplitKind::Val => &self.val,
            SplitKind::Test => &self.test,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &GeneratedMap> {
        self.train.iter().chain(&self.val).chain(&self.test)
    }
}

/// Map id used for generated split members: `<world>_<split>_<seed>`.
pub fn split_map_id(world: WorldType, split: SplitKind, seed: u64) -> String {
    format!("{world}_{split}_{seed}")
}

/// Generates train/val/test maps for one family. Generation runs in parallel
/// but the result is independent of scheduling.
pub fn generate_split(family: &WorldFamily, counts: SplitCounts) -> Result<Split, GenerationError> {
    if counts.train == 0 || counts.val == 0 || counts.test == 0 {
        return Err(GenerationError::EmptySplit);
    }
    let build = |kind: SplitKind| -> Result<Vec<GeneratedMap>, GenerationError> {
        counts
            .seeds(kind, family.base_seed)
            .into_par_iter()
            .map(|seed| {
                let spec = family.spec(seed);
                let map = generate_with_id(&spec, split_map_id(family.world_type, kind, seed))?;
                Ok(GeneratedMap {
                    spec,
                    split: kind,
                    map,
                })
            })
            .collect()
    };
    Ok(Split {
        train: build(SplitKind::Train)?,
        val: build(SplitKind::Val)?,
        test: build(SplitKind::Test)?,
    })
}
