//! Planner execution for single runs and full benchmark sweeps.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{ExactCost, GridMap, TransitionModel};
use crate::heuristics::{Heuristic, Rater, RaterKind, ValueGrid};
use crate::metrics::BenchRecord;
use crate::oracle::{dijkstra, RatingGrid, RatingSource};
use crate::search::{greedy_search, slope_search, sloper_search, SearchConfig, SearchResult};

use super::config::{HeuristicChoice, Method, Planner, RaterChoice, SweepSpec};
use super::pipeline::{
    artifact_path, list_maps, load_map, load_rating, load_value_grid, HGRID_EXT, RATING_EXT,
};

/// Grids a method may need beyond the map itself.
#[derive(Debug, Clone, Default)]
pub struct MethodInputs {
    pub rating: Option<RatingGrid>,
    pub hgrid: Option<ValueGrid>,
}

/// Runs one method on one map. `cfg.tau` is the backup-list threshold and
/// `cfg.restart_tau` the first restart threshold.
pub fn run_method(
    map: &GridMap,
    method: Method,
    inputs: &MethodInputs,
    cfg: &SearchConfig,
) -> Result<SearchResult> {
    let heuristic = match method.heuristic() {
        HeuristicChoice::Euclidean => Heuristic::Euclidean,
        HeuristicChoice::Learned => Heuristic::GridLookup(
            inputs
                .hgrid
                .clone()
                .ok_or_else(|| Error::Config(format!("{method} needs a cost-to-go grid")))?,
        ),
    };
    let rater = match method.rater() {
        RaterChoice::None => Rater::AlwaysPass,
        RaterChoice::Learned => Rater::from_kind(RaterKind::Learned, inputs.rating.clone())?,
        RaterChoice::GroundTruth => {
            let grid = inputs.rating.clone();
            if grid
                .as_ref()
                .is_some_and(|g| g.source() != RatingSource::GroundTruth)
            {
                return Err(Error::Config(format!(
                    "{method} needs a ground-truth rating grid"
                )));
            }
            Rater::from_kind(RaterKind::GroundTruth, grid)?
        }
    };
    let result = match method.planner() {
        Planner::Greedy => greedy_search(map, &heuristic, cfg)?,
        Planner::Slope => slope_search(map, &heuristic, &rater, cfg)?,
        Planner::Sloper => sloper_search(map, &heuristic, &rater, cfg)?,
    };
    Ok(result)
}

/// Exact optimal cost from the map's start to its goal.
pub fn optimal_cost(map: &GridMap, model: &TransitionModel) -> Result<ExactCost> {
    dijkstra(map, map.start(), model)[map.index(map.goal())]
        .ok_or_else(|| Error::Config(format!("map `{}` has no path from start to goal", map.id())))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub dataset: String,
    pub record: BenchRecord,
}

/// Mean metrics of one (dataset, method) cell, over successful runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellSummary {
    pub runs: usize,
    pub failures: usize,
    pub expanded_rel_err: Option<f64>,
    pub path_rel_err: Option<f64>,
    pub open_norm: Option<f64>,
    pub cumulative_expanded_rel_err: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    /// Sorted by dataset, method label and map id.
    pub rows: Vec<SweepRow>,
    pub summary: BTreeMap<(String, Method), CellSummary>,
}

/// Maps `<dataset>_<split>_<seed>.map` of `dir`.
fn dataset_maps(spec: &SweepSpec, dataset: &str) -> Result<Vec<GridMap>> {
    let prefix = format!("{dataset}_{}_", spec.split);
    let mut maps = Vec::new();
    for path in list_maps(&spec.maps_dir)? {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("");
        let matches = stem
            .strip_prefix(&prefix)
            .is_some_and(|seed| seed.parse::<u64>().is_ok());
        if matches {
            maps.push(load_map(&path)?);
        }
    }
    if maps.is_empty() {
        return Err(Error::Config(format!(
            "no `{prefix}*.map` files in {}",
            spec.maps_dir.display()
        )));
    }
    Ok(maps)
}

struct Job {
    dataset: String,
    map: GridMap,
}

impl Job {
    fn load_inputs(&self, spec: &SweepSpec, method: Method) -> Result<MethodInputs> {
        let id = self.map.id();
        let rating = match method.rater() {
            RaterChoice::None => None,
            RaterChoice::GroundTruth => {
                let grid = load_rating(
                    &artifact_path(&spec.oracle_dir, id, RATING_EXT),
                    Some(&self.map),
                )?;
                if grid.source() != RatingSource::GroundTruth || grid.m() != spec.m {
                    return Err(Error::Config(format!(
                        "{}: expected a ground-truth grid with m = {}",
                        artifact_path(&spec.oracle_dir, id, RATING_EXT).display(),
                        spec.m
                    )));
                }
                Some(grid)
            }
            RaterChoice::Learned => {
                let dir = spec.learned_dir.as_deref().ok_or_else(|| {
                    Error::Config("methods with a learned rater need `learned_dir`".into())
                })?;
                Some(load_rating(
                    &artifact_path(dir, id, RATING_EXT),
                    Some(&self.map),
                )?)
            }
        };
        let hgrid = match method.heuristic() {
            HeuristicChoice::Euclidean => None,
            HeuristicChoice::Learned => Some(load_value_grid(
                &artifact_path(&spec.hml_dir, id, HGRID_EXT),
                Some(&self.map),
            )?),
        };
        Ok(MethodInputs { rating, hgrid })
    }

    fn run(&self, spec: &SweepSpec, cfg: &SearchConfig) -> Result<Vec<SweepRow>> {
        let c_star = optimal_cost(&self.map, &cfg.model)?;
        let cfg = cfg.clone().with_tau(spec.tau_for(&self.dataset));
        spec.methods
            .iter()
            .map(|&method| {
                let inputs = self.load_inputs(spec, method)?;
                let result = run_method(&self.map, method, &inputs, &cfg)?;
                Ok(SweepRow {
                    dataset: self.dataset.clone(),
                    record: BenchRecord::evaluate(&self.map, method.label(), &result, c_star),
                })
            })
            .collect()
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

fn summarize(rows: &[SweepRow], spec: &SweepSpec) -> BTreeMap<(String, Method), CellSummary> {
    let mut out = BTreeMap::new();
    for dataset in &spec.datasets {
        for &method in &spec.methods {
            let cell: Vec<&BenchRecord> = rows
                .iter()
                .filter(|r| &r.dataset == dataset && r.record.method == method.label())
                .map(|r| &r.record)
                .collect();
            let ok: Vec<&&BenchRecord> = cell
                .iter()
                .filter(|r| r.expanded_rel_err.is_some())
                .collect();
            out.insert(
                (dataset.clone(), method),
                CellSummary {
                    runs: cell.len(),
                    failures: cell.len() - ok.len(),
                    expanded_rel_err: mean(ok.iter().filter_map(|r| r.expanded_rel_err)),
                    path_rel_err: mean(ok.iter().filter_map(|r| r.path_rel_err)),
                    open_norm: mean(ok.iter().map(|r| r.open_norm)),
                    cumulative_expanded_rel_err: mean(
                        ok.iter().filter_map(|r| r.cumulative_expanded_rel_err),
                    ),
                },
            );
        }
    }
    out
}

/// Runs every configured method on every test map of every dataset with
/// `spec.workers` threads and writes `runs.csv` and `summary.md` to
/// `spec.out_dir`. Output is independent of the worker count.
pub fn run_sweep(spec: &SweepSpec, cfg: &SearchConfig) -> Result<SweepOutcome> {
    spec.validate()?;
    cfg.validate()?;
    let mut jobs = Vec::new();
    for dataset in &spec.datasets {
        for map in dataset_maps(spec, dataset)? {
            jobs.push(Job {
                dataset: dataset.clone(),
                map,
            });
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let nested: Vec<Vec<SweepRow>> = pool.install(|| {
        jobs.par_iter()
            .map(|job| job.run(spec, cfg))
            .collect::<Result<_>>()
    })?;
    let mut rows: Vec<SweepRow> = nested.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        (&a.dataset, &a.record.method, &a.record.map_id).cmp(&(
            &b.dataset,
            &b.record.method,
            &b.record.map_id,
        ))
    });
    let summary = summarize(&rows, spec);
    let outcome = SweepOutcome { rows, summary };

    fs::create_dir_all(&spec.out_dir).map_err(|e| Error::io(&spec.out_dir, e))?;
    let csv = spec.out_dir.join("runs.csv");
    fs::write(&csv, runs_csv(&outcome.rows)).map_err(|e| Error::io(&csv, e))?;
    let md = spec.out_dir.join("summary.md");
    fs::write(&md, summary_markdown(spec, &outcome.summary)).map_err(|e| Error::io(&md, e))?;
    Ok(outcome)
}

/// Per-run CSV with a leading `dataset` column.
pub fn runs_csv(rows: &[SweepRow]) -> String {
    let mut out = format!("dataset,{}\n", BenchRecord::CSV_HEADER);
    for row in rows {
        let _ = writeln!(out, "{},{}", row.dataset, row.record.csv_row());
    }
    out
}

/// Results table: one column per method, three metric rows per dataset.
pub fn summary_markdown(
    spec: &SweepSpec,
    summary: &BTreeMap<(String, Method), CellSummary>,
) -> String {
    let fmt =
        |v: Option<f64>, digits: usize| v.map_or("n/a".to_string(), |x| format!("{x:.digits$}"));
    let mut out = String::from("# Benchmark summary\n\n");
    let _ = write!(out, "| dataset | metric |");
    for m in &spec.methods {
        let _ = write!(out, " {m} |");
    }
    out.push('\n');
    out.push_str(&"|---".repeat(spec.methods.len() + 2));
    out.push_str("|\n");
    type Column = (&'static str, fn(&CellSummary) -> Option<f64>, usize);
    let metrics: [Column; 3] = [
        ("expanded rel. err. (%)", |c| c.expanded_rel_err, 2),
        ("path rel. err. (%)", |c| c.path_rel_err, 2),
        ("open list (norm.)", |c| c.open_norm, 4),
    ];
    for dataset in &spec.datasets {
        for (i, (name, get, digits)) in metrics.iter().enumerate() {
            let label = if i == 0 { dataset.as_str() } else { "" };
            let _ = write!(out, "| {label} | {name} |");
            for &m in &spec.methods {
                let _ = write!(
                    out,
                    " {} |",
                    fmt(summary.get(&(dataset.clone(), m)).and_then(get), *digits)
                );
            }
            out.push('\n');
        }
    }

    let failures: Vec<String> = summary
        .iter()
        .filter(|(_, c)| c.failures > 0)
        .map(|((d, m), c)| format!("- {d} / {m}: {} of {} runs failed", c.failures, c.runs))
        .collect();
    out.push_str("\n## Failed runs\n\n");
    if failures.is_empty() {
        out.push_str("none\n");
    } else {
        out.push_str(&failures.join("\n"));
        out.push('\n');
    }

    let restarting: Vec<Method> = spec
        .methods
        .iter()
        .copied()
        .filter(|m| m.planner() == Planner::Sloper)
        .collect();
    if !restarting.is_empty() {
        out.push_str("\n## Restart overhead\n\nExpansion error summed over all restarts (%).\n\n");
        for dataset in &spec.datasets {
            for &m in &restarting {
                let c = summary
                    .get(&(dataset.clone(), m))
                    .and_then(|c| c.cumulative_expanded_rel_err);
                let _ = writeln!(out, "- {dataset} / {m}: {}", fmt(c, 2));
            }
        }
    }
    let _ = write!(out, "\nThresholds: default {}", spec.default_tau);
    for (d, t) in &spec.tau_overrides {
        let _ = write!(out, ", {d} {t}");
    }
    out.push_str(".\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::pipeline::gen_maps;
    use crate::oracle::Balance;
    use crate::worldgen::{SplitCounts, WorldFamily, WorldType};

    #[test]
    fn single_map_methods() {
        let map = GridMap::from_rows("m", &["...", ".@.", "..."]).unwrap();
        let cfg = SearchConfig::default();
        let r = run_method(&map, Method::HEuc, &MethodInputs::default(), &cfg).unwrap();
        assert!(r.is_success());
        assert!(matches!(
            run_method(&map, Method::HMl, &MethodInputs::default(), &cfg),
            Err(Error::Config(_))
        ));
        let learned = RatingGrid::constant(3, 3, 1.0).unwrap();
        let inputs = MethodInputs {
            rating: Some(learned),
            hgrid: None,
        };
        assert!(run_method(&map, Method::Slope, &inputs, &cfg).is_ok());
        assert!(matches!(
            run_method(&map, Method::SlopeGt, &inputs, &cfg),
            Err(Error::Config(_))
        ));
        assert_eq!(
            optimal_cost(&map, &cfg.model).unwrap(),
            ExactCost::new(2, 1)
        );
    }

    #[test]
    fn sweep_writes_sorted_outputs_independent_of_workers() {
        let dir = tempfile::tempdir().unwrap();
        let maps = dir.path().join("maps");
        let oracle = dir.path().join("oracle");
        let counts = SplitCounts {
            train: 1,
            val: 1,
            test: 3,
        };
        for world in [WorldType::Forest, WorldType::SingleBugtrap] {
            gen_maps(&WorldFamily::new(world, 16), counts, &maps).unwrap();
        }
        crate::bench::pipeline::gen_oracle(
            &maps,
            &oracle,
            10,
            &TransitionModel::OCTILE,
            Balance::Off,
        )
        .unwrap();

        let mut spec = SweepSpec::new(&maps, &oracle, dir.path().join("a"));
        spec.datasets = vec!["single_bugtrap".into(), "forest".into()];
        spec.methods = vec![
            Method::SlopeGt,
            Method::HEuc,
            Method::HMl,
            Method::SlopeGtHMl,
        ];
        spec.workers = 1;
        let one = run_sweep(&spec, &SearchConfig::default()).unwrap();
        assert_eq!(one.rows.len(), 2 * 3 * 4);
        assert_eq!(one.rows[0].dataset, "forest");
        assert_eq!(one.rows[0].record.method, "SLOPE_GT");
        assert!(one.rows.iter().all(|r| r.record.status.name() == "success"));
        // the exact cost-to-go makes h_ML expand only the path
        assert!(one
            .rows
            .iter()
            .filter(|r| r.record.method == "h_ML")
            .all(|r| r.record.expanded_rel_err == Some(0.0) && r.record.path_rel_err == Some(0.0)));

        spec.workers = 4;
        spec.out_dir = dir.path().join("b");
        run_sweep(&spec, &SearchConfig::default()).unwrap();
        for file in ["runs.csv", "summary.md"] {
            let a = fs::read(dir.path().join("a").join(file)).unwrap();
            let b = fs::read(dir.path().join("b").join(file)).unwrap();
            assert_eq!(a, b, "{file} differs");
        }
        let md = fs::read_to_string(dir.path().join("a/summary.md")).unwrap();
        assert!(md.contains("| single_bugtrap | expanded rel. err. (%) |"));
    }

    #[test]
    fn sweep_names_missing_learned_grid() {
        let dir = tempfile::tempdir().unwrap();
        let maps = dir.path().join("maps");
        let counts = SplitCounts {
            train: 1,
            val: 1,
            test: 1,
        };
        gen_maps(&WorldFamily::new(WorldType::Forest, 12), counts, &maps).unwrap();
        let mut spec = SweepSpec::new(&maps, dir.path(), dir.path().join("out"));
        spec.datasets = vec!["forest".into()];
        spec.methods = vec![Method::Slope];
        spec.learned_dir = Some(dir.path().join("learned"));
        match run_sweep(&spec, &SearchConfig::default()) {
            Err(Error::MissingArtifact(p)) => assert!(p.ends_with("learned/forest_test_2.rating")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
