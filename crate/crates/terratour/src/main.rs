//! `terratour` command line: `gen`, `solve`, `experiment`, `render`.
//!
//! Exit codes: 0 success, 1 I/O or other failure, 2 invalid arguments or
//! inputs, 3 instance too large for the exact solver, 4 infeasible output.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use terratour::ascii_grid::parse_ascii_grid;
use terratour::experiment::{run_experiment, write_reports, ExperimentConfig};
use terratour::formats::{
    read_json, read_regions, write_json, ApproxTourJson, InstanceJson, PoiJson, RegionJson,
    TinJson, TourJson, WaypointsJson,
};
use terratour::gtsplib::write_gtsplib;
use terratour::pipeline::{solve, Budgets, Solution, SolverKind};
use terratour::render::render_svg;
use terratour_core::terrain::{random_grid, triangulate, Tin};
use terratour_core::visibility::{random_pois, Poi, ViewParams};

#[derive(Parser)]
#[command(name = "terratour", version, about = "UAV monitoring tours over 2.5D terrain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded random terrain and write it as TIN JSON.
    Gen(GenArgs),
    /// Compute visibility regions and plan a tour over them.
    Solve(SolveArgs),
    /// Run an experiment matrix from a JSON config.
    Experiment(ExperimentArgs),
    /// Draw a terrain, its regions and a tour as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 10)]
    nrows: usize,
    #[arg(long, default_value_t = 10)]
    ncols: usize,
    #[arg(long, default_value_t = 22.22)]
    cellsize: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    hmin: f64,
    #[arg(long, default_value_t = 100.0, allow_negative_numbers = true)]
    hmax: f64,
}

#[derive(Args)]
struct SolveArgs {
    /// Terrain as TIN JSON or ESRI ASCII grid.
    #[arg(long)]
    terrain: PathBuf,
    /// JSON array of `{"id"?, "x", "y"}` objects.
    #[arg(long, conflicts_with = "num_pois")]
    pois: Option<PathBuf>,
    /// Draw this many points of interest at random instead.
    #[arg(long, required_unless_present = "pois")]
    num_pois: Option<usize>,
    /// Seeds random points of interest and the ALNS search.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    h: f64,
    #[arg(long)]
    delta_deg: f64,
    #[arg(long)]
    d: usize,
    #[arg(long, value_enum)]
    solver: SolverKind,
    #[arg(long, default_value_t = Budgets::default().alns_iterations)]
    alns_iterations: u64,
    /// Output directory for regions.json, tour.json, validation.json,
    /// instance.json and instance.gtsp.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's `out_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    terrain: PathBuf,
    #[arg(long)]
    regions: PathBuf,
    #[arg(long)]
    tour: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

struct Failure {
    code: u8,
    err: anyhow::Error,
}

fn code_for(err: &anyhow::Error) -> u8 {
    use terratour_core::Error as C;
    let core = err.chain().find_map(|e| {
        e.downcast_ref::<C>().or_else(|| match e.downcast_ref::<terratour::Error>() {
            Some(terratour::Error::Core(c)) => Some(c),
            _ => None,
        })
    });
    match core {
        Some(C::InstanceTooLarge { .. }) => return 3,
        Some(
            C::InvalidHeightRange { .. }
            | C::InvalidViewParams(_)
            | C::AltitudeTooLow { .. }
            | C::OutOfBounds { .. }
            | C::InvalidGrid(_)
            | C::InvalidTin(_)
            | C::Empty(_),
        ) => return 2,
        _ => {}
    }
    let harness = err.chain().find_map(|e| e.downcast_ref::<terratour::Error>());
    match harness {
        Some(
            terratour::Error::MalformedGrid(_)
            | terratour::Error::NodataPresent { .. }
            | terratour::Error::Json(_)
            | terratour::Error::Config(_)
            | terratour::Error::Mismatch(_),
        ) => 2,
        _ => 1,
    }
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let err = e.into();
        Failure {
            code: code_for(&err),
            err,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve_cmd(a),
        Command::Experiment(a) => experiment(a),
        Command::Render(a) => render(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

fn gen(a: GenArgs) -> Result<(), Failure> {
    let dem = random_grid(a.seed, a.nrows, a.ncols, a.cellsize, a.hmin, a.hmax)?;
    let tin = triangulate(&dem);
    write_json(&a.out, &TinJson::from(&tin))?;
    Ok(())
}

fn load_terrain(path: &Path) -> anyhow::Result<Tin> {
    let text = terratour::error::read_to_string(path)?;
    let tin = if text.trim_start().starts_with('{') {
        serde_json::from_str::<TinJson>(&text)
            .map_err(terratour::Error::from)
            .and_then(Tin::try_from)
    } else {
        parse_ascii_grid(&text).map(|dem| triangulate(&dem))
    };
    tin.with_context(|| format!("loading terrain {}", path.display()))
}

#[derive(Serialize)]
struct ValidationJson {
    solver: SolverKind,
    feasible: bool,
    length: f64,
    unknown_vertices: Vec<usize>,
    visit_violations: Vec<usize>,
    degree_violations: Vec<usize>,
    subtour_cuts: Vec<Vec<usize>>,
    length_mismatch: Option<(f64, f64)>,
    /// Poi ids a TSPN tour fails to reach.
    missed_pois: Vec<usize>,
}

fn solve_cmd(a: SolveArgs) -> Result<(), Failure> {
    let tin = load_terrain(&a.terrain)?;
    let pois: Vec<Poi> = match (&a.pois, a.num_pois) {
        (Some(path), _) => {
            let given: Vec<PoiJson> = read_json(path)?;
            given
                .iter()
                .enumerate()
                .map(|(i, p)| Poi::on_terrain(&tin, p.id.unwrap_or(i), p.x, p.y))
                .collect::<Result<_, _>>()?
        }
        (None, Some(n)) => random_pois(&tin, n, tin.cellsize(), a.seed, n as u64)?,
        (None, None) => unreachable!("clap requires one of --pois and --num-pois"),
    };
    let params = ViewParams::from_degrees(a.delta_deg, a.h, a.d)?;
    let budgets = Budgets {
        alns_iterations: a.alns_iterations,
        exact_work_limit: None,
    };
    let (regions, inst, sol) = solve(&tin, &pois, &params, a.solver, &budgets, a.seed)?;

    std::fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let regions_json: Vec<RegionJson> = regions.iter().map(RegionJson::from).collect();
    write_json(&a.out.join("regions.json"), &regions_json)?;
    write_json(&a.out.join("instance.json"), &InstanceJson::from(&inst))?;
    terratour::error::write(&a.out.join("instance.gtsp"), write_gtsplib("terratour", &inst))?;

    let validation = match &sol {
        Solution::Gtsp { tour, report, .. } => {
            write_json(&a.out.join("tour.json"), &TourJson::new(tour, &inst, &regions))?;
            ValidationJson {
                solver: a.solver,
                feasible: report.is_feasible(),
                length: tour.length,
                unknown_vertices: report.unknown_vertices.clone(),
                visit_violations: report.visit_violations.clone(),
                degree_violations: report.degree_violations.clone(),
                subtour_cuts: report.subtour_cuts.iter().map(|c| c.sets.clone()).collect(),
                length_mismatch: report.length_mismatch,
                missed_pois: Vec::new(),
            }
        }
        Solution::Tspn { tour, missed } => {
            write_json(&a.out.join("tour.json"), &ApproxTourJson::from(tour))?;
            ValidationJson {
                solver: a.solver,
                feasible: missed.is_empty(),
                length: tour.length,
                unknown_vertices: Vec::new(),
                visit_violations: Vec::new(),
                degree_violations: Vec::new(),
                subtour_cuts: Vec::new(),
                length_mismatch: None,
                missed_pois: missed.iter().map(|&i| regions[i].poi().id).collect(),
            }
        }
    };
    write_json(&a.out.join("validation.json"), &validation)?;
    println!("{} tour length {}", a.solver, validation.length);
    if !validation.feasible {
        return Err(Failure {
            code: 4,
            err: anyhow::anyhow!("infeasible tour, see validation.json"),
        });
    }
    Ok(())
}

fn experiment(a: ExperimentArgs) -> Result<(), Failure> {
    let mut cfg: ExperimentConfig = read_json(&a.config)?;
    if let Some(out) = a.out {
        cfg.out_dir = out;
    }
    let rows = run_experiment(&cfg)?;
    let paths = write_reports(&cfg, &rows, &cfg.out_dir)?;
    println!("{} rows -> {}", rows.len(), paths.results.display());
    println!("summary -> {}", paths.summary.display());
    Ok(())
}

fn render(a: RenderArgs) -> Result<(), Failure> {
    let tin = load_terrain(&a.terrain)?;
    let regions = read_regions(&a.regions)?;
    let tour: WaypointsJson = read_json(&a.tour)?;
    let svg = render_svg(&tin, &regions, &tour)?;
    terratour::error::write(&a.out, svg)?;
    Ok(())
}
