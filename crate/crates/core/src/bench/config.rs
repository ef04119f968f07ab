//! Sweep configuration: a flat `key = value` text file.
//!
//! ```text
//! # paths are relative to the config file
//! maps_dir = data/maps
//! oracle_dir = data/oracle
//! learned_dir = data/learned     # needed by SLOPE, SLOPEr and their +h_ML forms
//! hml_dir = data/oracle          # cost-to-go grids for h_ML; default oracle_dir
//! out_dir = results
//! datasets = forest, maze
//! methods = h_EUC, SLOPE_GT, SLOPEr
//! split = test
//! m = 10
//! workers = 4
//! tau.default = 0.9
//! tau.bugtrap_forest = 0.57
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::worldgen::SplitKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Planner {
    Greedy,
    Slope,
    Sloper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HeuristicChoice {
    Euclidean,
    Learned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RaterChoice {
    None,
    Learned,
    GroundTruth,
}

/// A benchmarked (planner, heuristic, rater) combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    HEuc,
    HMl,
    Slope,
    SlopeHMl,
    Sloper,
    SloperHMl,
    SlopeGt,
    SlopeGtHMl,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::HMl,
        Method::Slope,
        Method::SlopeHMl,
        Method::Sloper,
        Method::SloperHMl,
        Method::HEuc,
        Method::SlopeGt,
        Method::SlopeGtHMl,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Method::HEuc => "h_EUC",
            Method::HMl => "h_ML",
            Method::Slope => "SLOPE",
            Method::SlopeHMl => "SLOPE+h_ML",
            Method::Sloper => "SLOPEr",
            Method::SloperHMl => "SLOPEr+h_ML",
            Method::SlopeGt => "SLOPE_GT",
            Method::SlopeGtHMl => "SLOPE_GT+h_ML",
        }
    }

    pub fn planner(self) -> Planner {
        match self {
            Method::HEuc | Method::HMl => Planner::Greedy,
            Method::Slope | Method::SlopeHMl | Method::SlopeGt | Method::SlopeGtHMl => {
                Planner::Slope
            }
            Method::Sloper | Method::SloperHMl => Planner::Sloper,
        }
    }

    pub fn heuristic(self) -> HeuristicChoice {
        match self {
            Method::HMl | Method::SlopeHMl | Method::SloperHMl | Method::SlopeGtHMl => {
                HeuristicChoice::Learned
            }
            _ => HeuristicChoice::Euclidean,
        }
    }

    pub fn rater(self) -> RaterChoice {
        match self {
            Method::HEuc | Method::HMl => RaterChoice::None,
            Method::Slope | Method::SlopeHMl | Method::Sloper | Method::SloperHMl => {
                RaterChoice::Learned
            }
            Method::SlopeGt | Method::SlopeGtHMl => RaterChoice::GroundTruth,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.label() == s)
            .ok_or_else(|| Error::Config(format!("unknown method `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub maps_dir: PathBuf,
    pub oracle_dir: PathBuf,
    pub learned_dir: Option<PathBuf>,
    pub hml_dir: PathBuf,
    pub out_dir: PathBuf,
    pub datasets: Vec<String>,
    pub methods: Vec<Method>,
    pub split: SplitKind,
    pub m: u32,
    pub workers: usize,
    pub default_tau: f64,
    pub tau_overrides: BTreeMap<String, f64>,
}

/// Fixed thresholds known to work for specific datasets; everything else
/// uses `tau.default`.
pub fn builtin_tau_overrides() -> BTreeMap<String, f64> {
    BTreeMap::from([("bugtrap_forest".to_string(), 0.57)])
}

impl SweepSpec {
    /// A spec with default thresholds, `m = 10`, the test split and one
    /// worker per available core.
    pub fn new(
        maps_dir: impl Into<PathBuf>,
        oracle_dir: impl Into<PathBuf>,
        out_dir: impl Into<PathBuf>,
    ) -> Self {
        let oracle_dir = oracle_dir.into();
        SweepSpec {
            maps_dir: maps_dir.into(),
            hml_dir: oracle_dir.clone(),
            oracle_dir,
            learned_dir: None,
            out_dir: out_dir.into(),
            datasets: Vec::new(),
            methods: Vec::new(),
            split: SplitKind::Test,
            m: 10,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            default_tau: 0.9,
            tau_overrides: builtin_tau_overrides(),
        }
    }

    /// Fixed threshold used by the backup-list planner on `dataset`.
    pub fn tau_for(&self, dataset: &str) -> f64 {
        self.tau_overrides
            .get(dataset)
            .copied()
            .unwrap_or(self.default_tau)
    }

    pub fn parse(text: &str, base_dir: &Path) -> Result<SweepSpec> {
        let mut values: BTreeMap<String, String> = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", n + 1)))?;
            let key = key.trim().to_string();
            if values
                .insert(key.clone(), value.trim().to_string())
                .is_some()
            {
                return Err(Error::Config(format!(
                    "line {}: duplicate key `{key}`",
                    n + 1
                )));
            }
        }

        let path = |v: &str| base_dir.join(v);
        let required = |values: &mut BTreeMap<String, String>, key: &str| {
            values
                .remove(key)
                .ok_or_else(|| Error::Config(format!("missing required key `{key}`")))
        };
        let maps_dir = path(&required(&mut values, "maps_dir")?);
        let oracle_dir = path(&required(&mut values, "oracle_dir")?);
        let out_dir = path(
            &values
                .remove("out_dir")
                .unwrap_or_else(|| "bench_out".into()),
        );
        let mut spec = SweepSpec::new(maps_dir, oracle_dir, out_dir);
        if let Some(v) = values.remove("learned_dir") {
            spec.learned_dir = Some(path(&v));
        }
        if let Some(v) = values.remove("hml_dir") {
            spec.hml_dir = path(&v);
        }
        let list = |v: String| -> Vec<String> {
            v.split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect()
        };
        spec.datasets = list(required(&mut values, "datasets")?);
        spec.methods = list(required(&mut values, "methods")?)
            .iter()
            .map(|s| s.parse())
            .collect::<Result<_>>()?;
        if let Some(v) = values.remove("split") {
            spec.split = v.parse().map_err(Error::Config)?;
        }
        if let Some(v) = values.remove("m") {
            spec.m = parse_num(&v, "m")?;
        }
        if let Some(v) = values.remove("workers") {
            spec.workers = parse_num(&v, "workers")?;
        }
        if let Some(v) = values.remove("tau.default") {
            spec.default_tau = parse_tau(&v)?;
        }
        for (key, value) in std::mem::take(&mut values) {
            match key.strip_prefix("tau.") {
                Some(dataset) => {
                    spec.tau_overrides
                        .insert(dataset.to_string(), parse_tau(&value)?);
                }
                None => return Err(Error::Config(format!("unknown key `{key}`"))),
            }
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<SweepSpec> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    /// Applies `SLOPE_OUT_DIR` and `SLOPE_WORKERS` from the environment.
    pub fn apply_env_overrides(&mut self) -> Result<()> {
        if let Ok(dir) = std::env::var("SLOPE_OUT_DIR") {
            self.out_dir = PathBuf::from(dir);
        }
        if let Ok(workers) = std::env::var("SLOPE_WORKERS") {
            self.workers = parse_num(&workers, "SLOPE_WORKERS")?;
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::Config("m must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        let needs_learned = self
            .methods
            .iter()
            .any(|m| m.rater() == RaterChoice::Learned);
        if needs_learned && self.learned_dir.is_none() {
            return Err(Error::Config(
                "methods with a learned rater need `learned_dir`".into(),
            ));
        }
        Ok(())
    }
}

fn parse_num<T: FromStr>(v: &str, key: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("invalid value `{v}` for `{key}`")))
}

fn parse_tau(v: &str) -> Result<f64> {
    let tau: f64 = parse_num(v, "tau")?;
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::Config(format!("threshold {tau} not in [0, 1]")));
    }
    Ok(tau)
}
