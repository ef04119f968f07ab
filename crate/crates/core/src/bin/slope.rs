use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use slope_core::bench::pipeline::{gen_maps, gen_oracle, load_map, load_rating, load_value_grid};
use slope_core::bench::render::{render, Layers};
use slope_core::bench::sweep::optimal_cost;
use slope_core::bench::{run_method, run_sweep, Method, MethodInputs, SweepSpec};
use slope_core::grid::MoveCosts;
use slope_core::metrics::BenchRecord;
use slope_core::oracle::Balance;
use slope_core::search::SearchConfig;
use slope_core::worldgen::{SplitCounts, WorldFamily, WorldType};
use slope_core::{Error, TransitionModel};

#[derive(Parser)]
#[command(
    name = "slope",
    version,
    about = "Grid planning with optimality-rated pruning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate train/val/test maps for one world family (or `all`).
    GenMaps {
        #[arg(long)]
        world: String,
        #[arg(long, default_value_t = 32)]
        size: u32,
        #[arg(long, default_value_t = 320)]
        train: u32,
        #[arg(long, default_value_t = 80)]
        val: u32,
        #[arg(long, default_value_t = 100)]
        test: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute rating grids, cost-to-go grids and training CSVs for a map directory.
    GenOracle {
        #[arg(long)]
        maps: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 10)]
        m: u32,
        /// Subsample the dominant rating class of each map.
        #[arg(long)]
        balance: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        unit: bool,
    },
    /// Run one method on one map and print a JSON record.
    Plan {
        #[command(flatten)]
        run: RunArgs,
        /// Include the path cells in the record.
        #[arg(long)]
        path: bool,
    },
    /// Run a benchmark sweep from a config file.
    Bench {
        #[arg(long)]
        config: PathBuf,
    },
    /// Draw a map as a PPM image, optionally with ratings and a search overlay.
    Render {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Rating grid drawn as a green ramp.
        #[arg(long)]
        ratings: Option<PathBuf>,
        /// Overlay the expansions and path of this method.
        #[arg(long)]
        method: Option<Method>,
        #[arg(long)]
        rating_grid: Option<PathBuf>,
        #[arg(long)]
        hgrid: Option<PathBuf>,
        #[arg(long, default_value_t = 0.9)]
        tau: f64,
        #[arg(long, default_value_t = 8)]
        scale: u32,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    map: PathBuf,
    #[arg(long, default_value = "h_EUC")]
    method: Method,
    /// Rating grid for the pruning methods.
    #[arg(long)]
    rating_grid: Option<PathBuf>,
    /// Cost-to-go grid for the `h_ML` methods.
    #[arg(long)]
    hgrid: Option<PathBuf>,
    #[arg(long, default_value_t = 0.9)]
    tau: f64,
    #[arg(long)]
    node_limit: Option<usize>,
    #[arg(long)]
    unit: bool,
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

fn worlds(name: &str) -> Result<Vec<WorldType>, Error> {
    if name == "all" {
        return Ok(WorldType::ALL.to_vec());
    }
    Ok(vec![name.parse::<WorldType>()?])
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::GenMaps {
            world,
            size,
            train,
            val,
            test,
            seed,
            out,
        } => {
            let counts = SplitCounts { train, val, test };
            for world in worlds(&world)? {
                let mut family = WorldFamily::new(world, size);
                family.base_seed = seed;
                let entries = gen_maps(&family, counts, &out)?;
                println!(
                    "{world}: {} maps written to {}",
                    entries.len(),
                    out.display()
                );
            }
        }
        Command::GenOracle {
            maps,
            out,
            m,
            balance,
            seed,
            unit,
        } => {
            let balance = if balance {
                Balance::Seeded(seed)
            } else {
                Balance::Off
            };
            let summary = gen_oracle(&maps, &out, m, &model(unit), balance)?;
            println!("{} maps labelled", summary.maps);
            for (name, n) in summary.samples {
                println!("{name}: {n} samples");
            }
        }
        Command::Plan { run, path } => {
            let (map, result, c_star) = plan(&run)?;
            let record = BenchRecord::evaluate(&map, run.method.label(), &result, c_star);
            let mut out = json!({
                "map_id": record.map_id,
                "method": record.method,
                "status": record.status.name(),
                "path_cost": result.path_cost.value(),
                "optimal_cost": c_star.value(),
                "expanded": result.expanded.len(),
                "cumulative_expanded": result.cumulative_expanded,
                "open_remaining": result.open_remaining,
                "failsafe_count": result.failsafe_count,
                "expanded_rel_err": record.expanded_rel_err,
                "path_rel_err": record.path_rel_err,
                "open_norm": record.open_norm,
            });
            if path {
                out["path"] = result.path.iter().map(|c| json!([c.x, c.y])).collect();
            }
            println!("{out}");
        }
        Command::Bench { config } => {
            let mut spec = SweepSpec::load(&config)?;
            spec.apply_env_overrides()?;
            let outcome = run_sweep(&spec, &SearchConfig::default())?;
            println!(
                "{} runs written to {}",
                outcome.rows.len(),
                spec.out_dir.display()
            );
        }
        Command::Render {
            map,
            out,
            ratings,
            method,
            rating_grid,
            hgrid,
            tau,
            scale,
        } => {
            let grid_map = load_map(&map)?;
            let ratings = ratings
                .map(|p| load_rating(&p, Some(&grid_map)))
                .transpose()?;
            let searched = match method {
                Some(method) => {
                    let args = RunArgs {
                        map: map.clone(),
                        method,
                        rating_grid,
                        hgrid,
                        tau,
                        node_limit: None,
                        unit: false,
                    };
                    Some(plan(&args)?.1)
                }
                None => None,
            };
            let layers = Layers {
                ratings: ratings.as_ref(),
                expanded: searched.as_ref().map(|r| r.expanded.as_slice()),
                path: searched.as_ref().map(|r| r.path.as_slice()),
                endpoints: true,
            };
            let image = render(&grid_map, &layers, scale)?;
            std::fs::write(&out, image.to_ppm()).map_err(|e| Error::io(&out, e))?;
        }
    }
    Ok(())
}

fn plan(
    args: &RunArgs,
) -> Result<
    (
        slope_core::GridMap,
        slope_core::search::SearchResult,
        slope_core::ExactCost,
    ),
    Error,
> {
    let map = load_map(&args.map)?;
    let inputs = MethodInputs {
        rating: args
            .rating_grid
            .as_ref()
            .map(|p| load_rating(p, Some(&map)))
            .transpose()?,
        hgrid: args
            .hgrid
            .as_ref()
            .map(|p| load_value_grid(p, Some(&map)))
            .transpose()?,
    };
    let mut cfg = SearchConfig::default().with_tau(args.tau);
    cfg.node_limit = args.node_limit;
    cfg.model = model(args.unit);
    let c_star = optimal_cost(&map, &cfg.model)?;
    let result = run_method(&map, args.method, &inputs, &cfg)?;
    Ok((map, result, c_star))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error [{}]: {e}", e.category());
            ExitCode::from(e.exit_code())
        }
    }
}
