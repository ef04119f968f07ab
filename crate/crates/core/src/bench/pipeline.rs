//! On-disk artifacts: map directories with a manifest, oracle outputs and
//! the loaders the planners and the sweep use.
//!
//! A maps directory holds `<id>.map` files plus `manifest.json`. An oracle
//! directory holds `<id>.rating` (ground-truth ratings), `<id>.hgrid`
//! (cost-to-go values) and one `dataset_<split>.csv` per split. Learned
//! artifacts use the same names in their own directory.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::movingai::{parse_map, write_map};
use crate::grid::{GridMap, TransitionModel};
use crate::gridfile::GridFile;
use crate::heuristics::ValueGrid;
use crate::oracle::{dataset_csv, export_dataset, ground_truth, Balance, RatingGrid};
use crate::worldgen::{
    generate_split, SplitCounts, SplitKind, WorldFamily, WorldParams, WorldType,
};

pub const MANIFEST: &str = "manifest.json";
pub const RATING_EXT: &str = "rating";
pub const HGRID_EXT: &str = "hgrid";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub world_type: WorldType,
    pub split: SplitKind,
    pub seed: u64,
    pub width: u32,
    pub height: u32,
    pub params: WorldParams,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub maps: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn load(dir: &Path) -> Result<Option<Manifest>> {
        let path = dir.join(MANIFEST);
        if !path.exists() {
            return Ok(None);
        }
        let text = read(&path)?;
        serde_json::from_str(&text)
            .map(Some)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        write(&dir.join(MANIFEST), &(text + "\n"))
    }
}

pub fn artifact_path(dir: &Path, map_id: &str, ext: &str) -> PathBuf {
    dir.join(format!("{map_id}.{ext}"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::MissingArtifact(path.to_path_buf())
        } else {
            Error::io(path, e)
        }
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Reads a `.map` file; the id is the file stem.
pub fn load_map(path: &Path) -> Result<GridMap> {
    let text = read(path)?;
    let id = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("map")
        .to_string();
    parse_map(&id, &text).map_err(|source| Error::MapFile {
        path: path.to_path_buf(),
        source,
    })
}

fn load_grid_file(path: &Path, map: Option<&GridMap>) -> Result<GridFile> {
    let text = read(path)?;
    let wrap = |source| Error::GridFile {
        path: path.to_path_buf(),
        source,
    };
    let file = GridFile::parse(&text).map_err(wrap)?;
    if let Some(map) = map {
        file.expect_dims(map.width(), map.height()).map_err(wrap)?;
    }
    Ok(file)
}

/// Reads a rating grid, checking its shape against `map` when given.
pub fn load_rating(path: &Path, map: Option<&GridMap>) -> Result<RatingGrid> {
    let file = load_grid_file(path, map)?;
    RatingGrid::from_file(file).map_err(|source| Error::GridFile {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a cost-to-go value grid, checking its shape against `map` when given.
pub fn load_value_grid(path: &Path, map: Option<&GridMap>) -> Result<ValueGrid> {
    let file = load_grid_file(path, map)?;
    Ok(ValueGrid::from_file(file)?)
}

/// `.map` files of a directory, sorted by file name.
pub fn list_maps(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::MissingArtifact(dir.to_path_buf())
        } else {
            Error::io(dir, e)
        }
    })?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.extension().is_some_and(|e| e == "map") {
            paths.push(path);
        }
    }
    paths.sort();
    Ok(paths)
}

/// Splits `<world>_<split>_<seed>` into its world and split parts.
pub fn parse_split_id(id: &str) -> Option<(&str, SplitKind)> {
    let (rest, seed) = id.rsplit_once('_')?;
    seed.parse::<u64>().ok()?;
    let (world, split) = rest.rsplit_once('_')?;
    Some((world, split.parse().ok()?))
}

/// Generates the train/val/test maps of one family into `dir` and merges
/// their entries into the directory's manifest.
pub fn gen_maps(
    family: &WorldFamily,
    counts: SplitCounts,
    dir: &Path,
) -> Result<Vec<ManifestEntry>> {
    create_dir(dir)?;
    let split = generate_split(family, counts)?;
    let mut entries = Vec::new();
    for generated in split.iter() {
        let map = &generated.map;
        write(&artifact_path(dir, map.id(), "map"), &write_map(map))?;
        entries.push(ManifestEntry {
            id: map.id().to_string(),
            world_type: generated.spec.world_type,
            split: generated.split,
            seed: generated.spec.seed,
            width: map.width(),
            height: map.height(),
            params: generated.spec.params.clone(),
        });
    }
    let mut manifest = Manifest::load(dir)?.unwrap_or_default();
    manifest.maps.retain(|e| e.world_type != family.world_type);
    manifest.maps.extend(entries.iter().cloned());
    manifest.maps.sort_by(|a, b| a.id.cmp(&b.id));
    manifest.save(dir)?;
    Ok(entries)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSummary {
    pub maps: usize,
    /// Sample count per dataset file name.
    pub samples: BTreeMap<String, usize>,
}

/// Runs the oracle on every map in `maps_dir`, writing rating and value
/// grids plus one training CSV per split to `out_dir`. Maps whose split is
/// unknown (neither in the manifest nor in the id) go to `dataset_all.csv`.
pub fn gen_oracle(
    maps_dir: &Path,
    out_dir: &Path,
    m: u32,
    model: &TransitionModel,
    balance: Balance,
) -> Result<OracleSummary> {
    create_dir(out_dir)?;
    let paths = list_maps(maps_dir)?;
    let maps: Vec<GridMap> = paths.iter().map(|p| load_map(p)).collect::<Result<_>>()?;
    let splits: BTreeMap<String, SplitKind> = Manifest::load(maps_dir)?
        .map(|mf| mf.maps.into_iter().map(|e| (e.id, e.split)).collect())
        .unwrap_or_default();

    let truths = maps
        .par_iter()
        .map(|map| {
            let gt = ground_truth(map, model, m)?;
            write(
                &artifact_path(out_dir, map.id(), RATING_EXT),
                &gt.ratings.to_file().to_text(),
            )?;
            write(
                &artifact_path(out_dir, map.id(), HGRID_EXT),
                &gt.cost_to_go.to_value_file().to_text(),
            )?;
            Ok(gt.ratings)
        })
        .collect::<Result<Vec<RatingGrid>>>()?;

    let mut groups: BTreeMap<String, (Vec<GridMap>, Vec<RatingGrid>)> = BTreeMap::new();
    for (map, grid) in maps.iter().zip(truths) {
        let split = splits
            .get(map.id())
            .copied()
            .or_else(|| parse_split_id(map.id()).map(|(_, s)| s));
        let name = split.map_or("all", |s| s.name());
        let group = groups.entry(format!("dataset_{name}.csv")).or_default();
        group.0.push(map.clone());
        group.1.push(grid);
    }
    let mut samples = BTreeMap::new();
    for (name, (maps, grids)) in groups {
        let rows = export_dataset(&maps, &grids, balance)?;
        write(&out_dir.join(&name), &dataset_csv(&rows))?;
        samples.insert(name, rows.len());
    }
    Ok(OracleSummary {
        maps: maps.len(),
        samples,
    })
}
