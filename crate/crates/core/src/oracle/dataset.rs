use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::grid::{Cell, GridMap};

use super::{OracleError, RatingGrid};

/// One supervised example: a query cell on a map and its rating label.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSample {
    pub map_id: String,
    pub cell: Cell,
    pub rating: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Balance {
    Off,
    /// Per map, subsample the most frequent rating class down to the size of
    /// the second most frequent one, with the given seed.
    Seeded(u64),
}

// FNV-1a, so per-map subsampling does not depend on map order or on std's hasher.
fn stable_hash(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Rating classes compare at the precision the text formats keep.
fn class_key(rating: f64) -> i64 {
    (rating * 10_000.0).round() as i64
}

/// One sample per free cell reachable from the start of each map, in
/// row-major order, optionally class-balanced per map.
pub fn export_dataset(
    maps: &[GridMap],
    grids: &[RatingGrid],
    balance: Balance,
) -> Result<Vec<DatasetSample>, OracleError> {
    if maps.len() != grids.len() {
        return Err(OracleError::InvalidArgument(format!(
            "{} maps but {} rating grids",
            maps.len(),
            grids.len()
        )));
    }
    let mut samples = Vec::new();
    for (map, grid) in maps.iter().zip(grids) {
        if (grid.width(), grid.height()) != (map.width(), map.height()) {
            return Err(OracleError::ShapeMismatch {
                map: map.id().to_string(),
            });
        }
        let reachable = map.reachable_from(map.start());
        let mut cells: Vec<(Cell, f64)> = map
            .cells()
            .filter(|&c| reachable[map.index(c)])
            .map(|c| (c, grid.rating(c).expect("dimensions checked")))
            .collect();

        if let Balance::Seeded(seed) = balance {
            let mut classes: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
            for (i, (_, r)) in cells.iter().enumerate() {
                classes.entry(class_key(*r)).or_default().push(i);
            }
            let mut sizes: Vec<(usize, i64)> = classes.iter().map(|(k, v)| (v.len(), *k)).collect();
            // largest first; ties go to the lower rating
            sizes.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            if let [(largest, key), (second, _), ..] = sizes[..] {
                if largest > second {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ stable_hash(map.id()));
                    let members = &classes[&key];
                    let mut keep: Vec<bool> =
                        cells.iter().map(|(_, r)| class_key(*r) != key).collect();
                    for pick in sample(&mut rng, members.len(), second) {
                        keep[members[pick]] = true;
                    }
                    let mut flags = keep.into_iter();
                    cells.retain(|_| flags.next().unwrap_or(false));
                }
            }
        }

        samples.extend(cells.into_iter().map(|(cell, rating)| DatasetSample {
            map_id: map.id().to_string(),
            cell,
            rating,
        }));
    }
    Ok(samples)
}

/// CSV with a `map_id,x,y,rating` header and 4-decimal ratings.
pub fn dataset_csv(samples: &[DatasetSample]) -> String {
    let mut out = String::from("map_id,x,y,rating\n");
    for s in samples {
        let _ = writeln!(
            out,
            "{},{},{},{:.4}",
            s.map_id, s.cell.x, s.cell.y, s.rating
        );
    }
    out
}
