//! Python module `slopepy`: map generation, the oracle and the planners.
//!
//! Grids cross the boundary as flat lists in row-major order with the
//! bottom row first, the same layout [`GridMap::index`] uses.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use slope_core::bench::sweep::optimal_cost;
use slope_core::bench::{run_method, Method, MethodInputs};
use slope_core::grid::movingai::{parse_map, write_map};
use slope_core::grid::MoveCosts;
use slope_core::heuristics::ValueGrid;
use slope_core::metrics::BenchRecord;
use slope_core::oracle::{ground_truth as oracle_ground_truth, RatingGrid};
use slope_core::search::SearchConfig;
use slope_core::worldgen::{generate, WorldSpec, WorldType};
use slope_core::{Cell, Error, GridMap, TransitionModel};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn core_error(e: Error) -> PyErr {
    match e.category() {
        "config" | "format" => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn model(unit: bool) -> TransitionModel {
    TransitionModel {
        costs: if unit {
            MoveCosts::Unit
        } else {
            MoveCosts::Octile
        },
    }
}

fn xy(c: Cell) -> (u32, u32) {
    (c.x, c.y)
}

/// An occupancy grid with start and goal cells; `(0, 0)` is the lower-left corner.
#[pyclass(name = "GridMap", frozen)]
struct PyGridMap {
    inner: GridMap,
}

#[pymethods]
impl PyGridMap {
    /// Builds a map from text rows, top row first; `.` is free, anything else blocked.
    #[new]
    #[pyo3(signature = (rows, id = "map"))]
    fn new(rows: Vec<String>, id: &str) -> PyResult<Self> {
        let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
        let inner = GridMap::from_rows(id, &refs).map_err(value_error)?;
        Ok(PyGridMap { inner })
    }

    /// Parses MovingAI `.map` text.
    #[staticmethod]
    #[pyo3(signature = (text, id = "map"))]
    fn parse(text: &str, id: &str) -> PyResult<Self> {
        let inner = parse_map(id, text).map_err(value_error)?;
        Ok(PyGridMap { inner })
    }

    /// Generates a map of one of the eight world families.
    #[staticmethod]
    #[pyo3(signature = (world, size = 32, seed = 0))]
    fn generate(world: &str, size: u32, seed: u64) -> PyResult<Self> {
        let world: WorldType = world.parse().map_err(value_error)?;
        let inner = generate(&WorldSpec::new(world, size, size, seed)).map_err(value_error)?;
        Ok(PyGridMap { inner })
    }

    fn to_text(&self) -> String {
        write_map(&self.inner)
    }

    #[getter]
    fn id(&self) -> &str {
        self.inner.id()
    }

    #[getter]
    fn width(&self) -> u32 {
        self.inner.width()
    }

    #[getter]
    fn height(&self) -> u32 {
        self.inner.height()
    }

    #[getter]
    fn start(&self) -> (u32, u32) {
        xy(self.inner.start())
    }

    #[getter]
    fn goal(&self) -> (u32, u32) {
        xy(self.inner.goal())
    }

    fn is_free(&self, x: u32, y: u32) -> bool {
        let c = Cell::new(x, y);
        self.inner.in_bounds(c) && self.inner.is_free(c)
    }

    fn is_solvable(&self) -> bool {
        self.inner.is_solvable()
    }

    fn __repr__(&self) -> String {
        format!(
            "GridMap(id={:?}, width={}, height={})",
            self.inner.id(),
            self.inner.width(),
            self.inner.height()
        )
    }
}

/// Exact cost fields, optimal region and ratings of a map.
///
/// Returns a dict with `optimal_cost`, `region` (list of cells), `ratings`
/// and `cost_to_go` (flat lists; unreachable cells are `None`).
#[pyfunction]
#[pyo3(signature = (map, m = 10, unit = false))]
fn ground_truth<'py>(
    py: Python<'py>,
    map: &PyGridMap,
    m: u32,
    unit: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let gt = oracle_ground_truth(&map.inner, &model(unit), m).map_err(value_error)?;
    let out = PyDict::new(py);
    out.set_item("optimal_cost", gt.region.optimal_cost().value())?;
    let c = gt.region.optimal_cost();
    out.set_item("optimal_cost_exact", (c.cardinal, c.diagonal))?;
    out.set_item(
        "region",
        gt.region.cells().into_iter().map(xy).collect::<Vec<_>>(),
    )?;
    out.set_item("ratings", gt.ratings.ratings().to_vec())?;
    let h: Vec<Option<f64>> = gt
        .cost_to_go
        .values()
        .iter()
        .map(|v| v.map(|c| c.value()))
        .collect();
    out.set_item("cost_to_go", h)?;
    Ok(out)
}

/// Runs one benchmark method on `map` and returns its result record.
///
/// `ratings` feeds the learned-rater methods (`SLOPE`, `SLOPEr` and their
/// `+h_ML` forms). Ground-truth methods compute their ratings from the
/// oracle. `hgrid` feeds the `h_ML` methods and defaults to the exact
/// cost-to-go.
#[pyfunction]
#[pyo3(signature = (map, method = "h_EUC", ratings = None, hgrid = None, tau = 0.9, unit = false))]
fn plan<'py>(
    py: Python<'py>,
    map: &PyGridMap,
    method: &str,
    ratings: Option<Vec<f64>>,
    hgrid: Option<Vec<f64>>,
    tau: f64,
    unit: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let map = &map.inner;
    let method: Method = method.parse().map_err(core_error)?;
    let cfg = SearchConfig {
        model: model(unit),
        ..SearchConfig::default()
    }
    .with_tau(tau);
    let (w, h) = (map.width(), map.height());

    let needs_truth = ratings.is_none() || hgrid.is_none();
    let truth = if needs_truth {
        Some(oracle_ground_truth(map, &cfg.model, 10).map_err(value_error)?)
    } else {
        None
    };
    let rating = match (method.label().starts_with("SLOPE_GT"), ratings) {
        (true, Some(_)) => {
            return Err(PyValueError::new_err(
                "ground-truth methods take their ratings from the oracle",
            ))
        }
        (true, None) => truth.as_ref().map(|t| t.ratings.clone()),
        (false, Some(values)) => Some(RatingGrid::learned(w, h, 10, values).map_err(value_error)?),
        (false, None) => None,
    };
    let hgrid = match hgrid {
        Some(values) => ValueGrid::new(w, h, values).map_err(value_error)?,
        None => ValueGrid::from_cost_field(&truth.as_ref().expect("computed").cost_to_go),
    };
    let inputs = MethodInputs {
        rating,
        hgrid: Some(hgrid),
    };

    let c_star = optimal_cost(map, &cfg.model).map_err(core_error)?;
    let result = run_method(map, method, &inputs, &cfg).map_err(core_error)?;
    let record = BenchRecord::evaluate(map, method.label(), &result, c_star);

    let out = PyDict::new(py);
    out.set_item("method", method.label())?;
    out.set_item("status", result.status.name())?;
    out.set_item(
        "path",
        result.path.iter().copied().map(xy).collect::<Vec<_>>(),
    )?;
    out.set_item("path_cost", result.path_cost.value())?;
    out.set_item("optimal_cost", c_star.value())?;
    out.set_item(
        "expanded",
        result.expanded.iter().copied().map(xy).collect::<Vec<_>>(),
    )?;
    out.set_item("cumulative_expanded", result.cumulative_expanded)?;
    out.set_item("open_remaining", result.open_remaining)?;
    out.set_item("failsafe_count", result.failsafe_count)?;
    out.set_item("expanded_rel_err", record.expanded_rel_err)?;
    out.set_item("path_rel_err", record.path_rel_err)?;
    out.set_item("open_norm", record.open_norm)?;
    Ok(out)
}

/// Labels of all benchmark methods.
#[pyfunction]
fn methods() -> Vec<&'static str> {
    Method::ALL.iter().map(|m| m.label()).collect()
}

/// Names of the world families `GridMap.generate` accepts.
#[pyfunction]
fn worlds() -> Vec<&'static str> {
    WorldType::ALL.iter().map(|w| w.name()).collect()
}

#[pymodule]
fn slopepy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGridMap>()?;
    m.add_function(wrap_pyfunction!(ground_truth, m)?)?;
    m.add_function(wrap_pyfunction!(plan, m)?)?;
    m.add_function(wrap_pyfunction!(methods, m)?)?;
    m.add_function(wrap_pyfunction!(worlds, m)?)?;
    Ok(())
}
