#![allow(dead_code)]

use std::cmp::Ordering;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slope_core::bench::pipeline::{artifact_path, load_rating, RATING_EXT};
use slope_core::grid::path_cost;
use slope_core::oracle::RatingGrid;
use slope_core::search::SearchResult;
use slope_core::{Cell, GridMap, TransitionModel};

/// `(cardinal, diagonal)` move counts.
pub type Pair = (u32, u32);

fn value(p: Pair) -> f64 {
    p.0 as f64 + p.1 as f64 * std::f64::consts::SQRT_2
}

/// Distinct pairs never tie since √2 is irrational, and on small maps the
/// float gap between them is far above rounding error.
pub fn cmp_pair(a: Pair, b: Pair) -> Ordering {
    if a == b {
        Ordering::Equal
    } else {
        value(a).partial_cmp(&value(b)).unwrap()
    }
}

const DIRS: [(i32, i32); 8] = [
    (1, 0),
    (0, 1),
    (-1, 0),
    (0, -1),
    (1, 1),
    (-1, 1),
    (-1, -1),
    (1, -1),
];

fn neighbors(map: &GridMap, c: Cell) -> Vec<(Cell, bool)> {
    DIRS.iter()
        .filter_map(|&(dx, dy)| {
            let (x, y) = (c.x as i32 + dx, c.y as i32 + dy);
            if x < 0 || y < 0 || x >= map.width() as i32 || y >= map.height() as i32 {
                return None;
            }
            let n = Cell::new(x as u32, y as u32);
            map.is_free(n).then_some((n, dx != 0 && dy != 0))
        })
        .collect()
}

/// Exhaustive simple-path enumeration from `source`. A branch is cut only
/// when its prefix is strictly worse than a known path to the same cell,
/// so every minimum-cost path is still enumerated.
pub struct Enumeration {
    pub best: Vec<Option<Pair>>,
    /// Union of cells over all minimum-cost paths to `target`.
    pub optimal_cells: u128,
}

pub fn enumerate(map: &GridMap, source: Cell, target: Cell) -> Enumeration {
    assert!(map.cell_count() <= 128);
    let n = map.cell_count();
    let mut best: Vec<Option<Pair>> = vec![None; n];
    let mut to_target: Vec<(Pair, u128)> = Vec::new();

    fn dfs(
        map: &GridMap,
        c: Cell,
        cost: Pair,
        visited: u128,
        target: Cell,
        best: &mut Vec<Option<Pair>>,
        to_target: &mut Vec<(Pair, u128)>,
    ) {
        let i = map.index(c);
        match best[i] {
            Some(b) if cmp_pair(cost, b) == Ordering::Greater => return,
            Some(b) if cmp_pair(cost, b) == Ordering::Equal => {}
            _ => best[i] = Some(cost),
        }
        if c == target {
            to_target.push((cost, visited));
        }
        for (nb, diag) in neighbors(map, c) {
            let bit = 1u128 << map.index(nb);
            if visited & bit != 0 {
                continue;
            }
            let next = if diag {
                (cost.0, cost.1 + 1)
            } else {
                (cost.0 + 1, cost.1)
            };
            dfs(map, nb, next, visited | bit, target, best, to_target);
        }
    }

    if map.is_free(source) {
        dfs(
            map,
            source,
            (0, 0),
            1u128 << map.index(source),
            target,
            &mut best,
            &mut to_target,
        );
    }
    let optimal_cells = match best[map.index(target)] {
        Some(c_star) => to_target
            .iter()
            .filter(|(c, _)| *c == c_star)
            .fold(0, |acc, (_, mask)| acc | mask),
        None => 0,
    };
    Enumeration {
        best,
        optimal_cells,
    }
}

/// Random map with obstacle probability `p` and free corners.
pub fn random_map(id: &str, width: u32, height: u32, p: f64, seed: u64) -> GridMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<String> = (0..height)
        .map(|_| {
            (0..width)
                .map(|_| if rng.gen_bool(p) { '@' } else { '.' })
                .collect()
        })
        .collect();
    let mut rows: Vec<Vec<u8>> = rows.into_iter().map(String::into_bytes).collect();
    rows[0][width as usize - 1] = b'.';
    rows[height as usize - 1][0] = b'.';
    let rows: Vec<String> = rows
        .into_iter()
        .map(|r| String::from_utf8(r).unwrap())
        .collect();
    let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
    GridMap::from_rows(id, &refs).unwrap()
}

/// A deliberately imperfect rater: ground truth plus uniform noise of
/// ±`noise`, with a fraction of cells zeroed, so pruning mistakes and
/// failsafes occur.
pub fn degraded_rating(truth: &RatingGrid, noise: f64, dropout: f64, seed: u64) -> RatingGrid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = truth
        .ratings()
        .iter()
        .map(|&r| {
            let jitter: f64 = rng.gen_range(-noise..=noise);
            let v = if rng.gen_bool(dropout) {
                0.0
            } else {
                (r + jitter).clamp(0.0, 1.0)
            };
            (v * 1e4).round() / 1e4
        })
        .collect();
    RatingGrid::learned(truth.width(), truth.height(), truth.m(), values).unwrap()
}

/// Writes a degraded learned grid for every ground-truth grid in `oracle_dir`
/// whose map id is listed.
pub fn write_learned_stand_ins(oracle_dir: &Path, learned_dir: &Path, ids: &[String], seed: u64) {
    std::fs::create_dir_all(learned_dir).unwrap();
    for (i, id) in ids.iter().enumerate() {
        let truth = load_rating(&artifact_path(oracle_dir, id, RATING_EXT), None).unwrap();
        let learned = degraded_rating(&truth, 0.3, 0.1, seed + i as u64);
        std::fs::write(
            artifact_path(learned_dir, id, RATING_EXT),
            learned.to_file().to_text(),
        )
        .unwrap();
    }
}

/// Checks that a successful result carries a connected obstacle-free path
/// from start to goal whose cost matches the reported one.
pub fn check_path(
    map: &GridMap,
    result: &SearchResult,
    model: &TransitionModel,
) -> Result<(), String> {
    let path = &result.path;
    if path.first() != Some(&map.start()) || path.last() != Some(&map.goal()) {
        return Err("path does not join start and goal".into());
    }
    if let Some(c) = path.iter().find(|c| !map.is_free(**c)) {
        return Err(format!("path crosses blocked cell ({}, {})", c.x, c.y));
    }
    match path_cost(path, model) {
        Some(cost) if cost == result.path_cost => Ok(()),
        Some(cost) => Err(format!(
            "path cost {cost} but {} reported",
            result.path_cost
        )),
        None => Err("path has a non-adjacent step".into()),
    }
}
