//! Seeded experiment matrices and their CSV reports.
//!
//! Every `(seed, m, δ, d)` cell is an independent job: the terrain comes
//! from `random_grid(seed, ..)`, the points of interest from
//! `random_pois(tin, m, cellsize, seed, m)`, and every configured solver runs
//! on the resulting instance. Jobs run on a rayon pool whose size can be
//! capped with `TERRATOUR_THREADS`; rows are sorted before writing so the
//! output does not depend on scheduling.
//!
//! `results.csv` columns:
//!
//! | column | meaning |
//! |---|---|
//! | `seed`, `m`, `delta_deg`, `d` | instance key |
//! | `solver` | `exact`, `alns` or `tspn` |
//! | `vertex_count` | GTSP vertices after duplication |
//! | `tour_length` | empty when the solver failed |
//! | `exact_length` | exact GTSP optimum, empty when unavailable |
//! | `gap_percent` | `100·(tour − exact)/exact`; 0 within 1e-9 relative |
//! | `wall_time_ms` | solver wall time, not reproducible |
//! | `feasible` | GTSP: `validate` passes; TSPN: every region is reached |
//! | `exact_work` | DP relaxations (exact rows) |
//! | `outer_mis_size`, `lower_bound`, `ratio_constant`, `containment_fallback` | TSPN certificate (tspn rows) |
//! | `status` | `ok` or the error that stopped the solver |
//!
//! `summary.csv` has one row per `(table, m)` and one column per `(δ, d)`
//! pair named `delta=<δ> d=<d>`. Tables `alns_gap`, `tspn_gap`, `exact_work`
//! and `vertex_count` hold `mean (std)` with the sample standard deviation
//! (0 for a single value, `n/a` when there are no values); `exact_solved`
//! holds `solved (attempted)`. `timing.csv` has the same layout with the
//! mean wall time per solver and is the only non-reproducible artifact
//! besides the `wall_time_ms` column.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use terratour_core::gtsp::build_instance;
use terratour_core::terrain::{random_grid, triangulate, Tin};
use terratour_core::visibility::{random_pois, ViewParams};

use crate::error::{Error, Result};
use crate::pipeline::{compute_regions, run_solver, Budgets, Solution, SolverKind};

/// Relative length difference reported as a zero gap.
pub const GAP_TOL: f64 = 1e-9;

fn default_solvers() -> Vec<SolverKind> {
    vec![SolverKind::Exact, SolverKind::Alns, SolverKind::Tspn]
}

fn default_alns_iterations() -> u64 {
    Budgets::default().alns_iterations
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("results")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seeds: Vec<u64>,
    pub nrows: usize,
    pub ncols: usize,
    pub cellsize: f64,
    pub hmin: f64,
    pub hmax: f64,
    /// Flight altitude.
    pub h: f64,
    pub m_values: Vec<usize>,
    pub delta_values_deg: Vec<f64>,
    pub d_values: Vec<usize>,
    #[serde(default = "default_solvers")]
    pub solvers: Vec<SolverKind>,
    #[serde(default = "default_alns_iterations")]
    pub alns_iterations: u64,
    /// Optional cap on exact-solver DP relaxations per instance.
    #[serde(default)]
    pub exact_work_limit: Option<u64>,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    /// 20 terrains of 10×10 nodes spanning about 200×200 units with heights
    /// in `[0, 100]`, flown at 125 units, crossed with three poi counts,
    /// three half-angles and three azimuth counts: 540 instances.
    pub fn standard() -> Self {
        Self {
            seeds: (1..=20).collect(),
            nrows: 10,
            ncols: 10,
            cellsize: 22.22,
            hmin: 0.0,
            hmax: 100.0,
            h: 125.0,
            m_values: vec![4, 6, 8],
            delta_values_deg: vec![20.0, 30.0, 40.0],
            d_values: vec![20, 30, 40],
            solvers: default_solvers(),
            alns_iterations: default_alns_iterations(),
            exact_work_limit: None,
            out_dir: default_out_dir(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.seeds.is_empty()
            || self.m_values.is_empty()
            || self.delta_values_deg.is_empty()
            || self.d_values.is_empty()
            || self.solvers.is_empty()
        {
            return bad("seeds, m_values, delta_values_deg, d_values and solvers must be non-empty");
        }
        if !(self.hmin.is_finite() && self.hmax.is_finite()) || self.hmin > self.hmax {
            return Err(terratour_core::Error::InvalidHeightRange {
                hmin: self.hmin,
                hmax: self.hmax,
            }
            .into());
        }
        if !(self.h > self.hmax) {
            return bad("h must exceed hmax");
        }
        if self.delta_values_deg.iter().any(|&d| !(d > 0.0 && d < 90.0)) {
            return bad("every delta must lie strictly between 0 and 90 degrees");
        }
        if self.m_values.contains(&0) {
            return bad("m values must be positive");
        }
        for &d in &self.d_values {
            ViewParams::from_degrees(self.delta_values_deg[0], self.h, d)?;
        }
        Ok(())
    }

    fn terrain(&self, seed: u64) -> Result<Tin> {
        let dem = random_grid(seed, self.nrows, self.ncols, self.cellsize, self.hmin, self.hmax)?;
        // normalized so the lowest node sits at 0, as for ingested grids
        Ok(triangulate(&dem.normalized()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub seed: u64,
    pub m: usize,
    pub delta_deg: f64,
    pub d: usize,
    pub solver: SolverKind,
    pub vertex_count: usize,
    pub tour_length: Option<f64>,
    pub exact_length: Option<f64>,
    pub gap_percent: Option<f64>,
    pub wall_time_ms: f64,
    pub feasible: bool,
    pub exact_work: Option<u64>,
    pub outer_mis_size: Option<usize>,
    pub lower_bound: Option<f64>,
    pub ratio_constant: Option<f64>,
    pub containment_fallback: Option<bool>,
    pub status: String,
}

/// `100·(tour − exact)/exact`, snapped to 0 within [`GAP_TOL`]. `None` when
/// the exact optimum is 0 but the tour is not.
pub fn gap_percent(tour: f64, exact: f64) -> Option<f64> {
    if (tour - exact).abs() <= GAP_TOL * exact.abs() || tour == exact {
        Some(0.0)
    } else if exact > 0.0 {
        Some(100.0 * (tour - exact) / exact)
    } else {
        None
    }
}

fn solver_rank(s: SolverKind) -> u8 {
    match s {
        SolverKind::Exact => 0,
        SolverKind::Alns => 1,
        SolverKind::Tspn => 2,
    }
}

fn alns_seed(seed: u64, m: usize, delta_deg: f64, d: usize) -> u64 {
    seed.wrapping_mul(1_000_003)
        ^ (m as u64).wrapping_mul(7919)
        ^ delta_deg.to_bits().rotate_left(17)
        ^ (d as u64).wrapping_mul(104_729)
}

#[derive(Debug, Clone, Copy)]
struct Job {
    seed: u64,
    m: usize,
    delta_deg: f64,
    d: usize,
}

fn run_job(cfg: &ExperimentConfig, job: Job) -> Vec<ResultRow> {
    let blank = |solver: SolverKind, status: String| ResultRow {
        seed: job.seed,
        m: job.m,
        delta_deg: job.delta_deg,
        d: job.d,
        solver,
        vertex_count: 0,
        tour_length: None,
        exact_length: None,
        gap_percent: None,
        wall_time_ms: 0.0,
        feasible: false,
        exact_work: None,
        outer_mis_size: None,
        lower_bound: None,
        ratio_constant: None,
        containment_fallback: None,
        status,
    };
    let setup = (|| -> Result<_> {
        let tin = cfg.terrain(job.seed)?;
        let params = ViewParams::from_degrees(job.delta_deg, cfg.h, job.d)?;
        let pois = random_pois(&tin, job.m, cfg.cellsize, job.seed, job.m as u64)?;
        let regions = compute_regions(&tin, &pois, &params)?;
        let inst = build_instance(&regions)?;
        Ok((tin, params, regions, inst))
    })();
    let (tin, params, regions, inst) = match setup {
        Ok(s) => s,
        Err(e) => {
            return cfg
                .solvers
                .iter()
                .map(|&s| blank(s, e.to_string()))
                .collect()
        }
    };
    let budgets = Budgets {
        alns_iterations: cfg.alns_iterations,
        exact_work_limit: cfg.exact_work_limit,
    };
    let seed = alns_seed(job.seed, job.m, job.delta_deg, job.d);

    // the exact optimum is the reference for every gap, so it always runs
    let (exact, exact_ms) = run_solver(SolverKind::Exact, &tin, &regions, &inst, &params, &budgets, seed);
    let exact_length = exact.as_ref().ok().filter(|s| s.is_feasible()).map(Solution::length);

    let mut rows = Vec::new();
    for &kind in &cfg.solvers {
        let (sol, ms) = if kind == SolverKind::Exact {
            (exact.clone(), exact_ms)
        } else {
            run_solver(kind, &tin, &regions, &inst, &params, &budgets, seed)
        };
        let mut row = blank(kind, "ok".to_string());
        row.vertex_count = inst.vertex_count();
        row.wall_time_ms = ms;
        row.exact_length = exact_length;
        match sol {
            Ok(sol) => {
                let len = sol.length();
                row.tour_length = Some(len);
                row.feasible = sol.is_feasible();
                row.gap_percent = exact_length.and_then(|e| gap_percent(len, e));
                match &sol {
                    Solution::Gtsp { work, .. } => row.exact_work = *work,
                    Solution::Tspn { tour, .. } => {
                        row.outer_mis_size = Some(tour.outer_mis_size);
                        row.lower_bound = tour.lower_bound;
                        row.ratio_constant = tour.ratio_constant;
                        row.containment_fallback = Some(tour.containment_fallback);
                    }
                }
            }
            Err(e) => row.status = e.to_string(),
        }
        rows.push(row);
    }
    rows
}

fn thread_cap() -> Result<Option<usize>> {
    match std::env::var("TERRATOUR_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::Config(format!("TERRATOUR_THREADS must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(None),
    }
}

/// Runs the whole cross-product and returns the sorted rows.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let mut jobs = Vec::new();
    for &seed in &cfg.seeds {
        for &m in &cfg.m_values {
            for &delta_deg in &cfg.delta_values_deg {
                for &d in &cfg.d_values {
                    jobs.push(Job { seed, m, delta_deg, d });
                }
            }
        }
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap()? {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let mut rows: Vec<ResultRow> =
        pool.install(|| jobs.par_iter().flat_map_iter(|&j| run_job(cfg, j)).collect());
    rows.sort_by(|a, b| {
        (a.seed, a.m)
            .cmp(&(b.seed, b.m))
            .then(a.delta_deg.total_cmp(&b.delta_deg))
            .then(a.d.cmp(&b.d))
            .then(solver_rank(a.solver).cmp(&solver_rank(b.solver)))
    });
    Ok(rows)
}

pub fn results_csv(rows: &[ResultRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Config(format!("csv buffer: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn read_results_csv(text: &str) -> Result<Vec<ResultRow>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}

/// Mean and sample standard deviation (`n − 1`); the deviation of a single
/// value is reported as 0.
pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() == 1 {
        return Some((mean, 0.0));
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Some((mean, var.sqrt()))
}

fn cell(values: &[f64]) -> String {
    match mean_std(values) {
        Some((mean, std)) => format!("{mean} ({std})"),
        None => "n/a".to_string(),
    }
}

fn table_columns(cfg_deltas: &[f64], cfg_ds: &[usize]) -> Vec<(f64, usize)> {
    let mut cols = Vec::new();
    for &delta in cfg_deltas {
        for &d in cfg_ds {
            cols.push((delta, d));
        }
    }
    cols
}

fn grid(
    cfg: &ExperimentConfig,
    rows: &[ResultRow],
    tables: &[(&str, &dyn Fn(&[&ResultRow]) -> String)],
) -> Vec<Vec<String>> {
    let cols = table_columns(&cfg.delta_values_deg, &cfg.d_values);
    let mut by_cell: BTreeMap<(usize, u64, usize), Vec<&ResultRow>> = BTreeMap::new();
    for r in rows {
        by_cell
            .entry((r.m, r.delta_deg.to_bits(), r.d))
            .or_default()
            .push(r);
    }
    let mut out = Vec::new();
    let mut header = vec!["table".to_string(), "m".to_string()];
    header.extend(cols.iter().map(|(delta, d)| format!("delta={delta} d={d}")));
    out.push(header);
    for (name, f) in tables {
        for &m in &cfg.m_values {
            let mut line = vec![name.to_string(), m.to_string()];
            for &(delta, d) in &cols {
                let empty = Vec::new();
                let members = by_cell.get(&(m, delta.to_bits(), d)).unwrap_or(&empty);
                line.push(f(members));
            }
            out.push(line);
        }
    }
    out
}

fn of_solver<'a>(rows: &[&'a ResultRow], s: SolverKind) -> Vec<&'a ResultRow> {
    rows.iter().copied().filter(|r| r.solver == s).collect()
}

/// Aggregated tables in the `m × (δ, d)` layout.
pub fn summary_table(cfg: &ExperimentConfig, rows: &[ResultRow]) -> Vec<Vec<String>> {
    let gap = |s: SolverKind| {
        move |rs: &[&ResultRow]| {
            let v: Vec<f64> = of_solver(rs, s).iter().filter_map(|r| r.gap_percent).collect();
            cell(&v)
        }
    };
    let alns_gap = gap(SolverKind::Alns);
    let tspn_gap = gap(SolverKind::Tspn);
    let exact_solved = |rs: &[&ResultRow]| {
        let ex = of_solver(rs, SolverKind::Exact);
        let solved = ex.iter().filter(|r| r.feasible).count();
        format!("{solved} ({})", ex.len())
    };
    let exact_work = |rs: &[&ResultRow]| {
        let v: Vec<f64> = of_solver(rs, SolverKind::Exact)
            .iter()
            .filter_map(|r| r.exact_work.map(|w| w as f64))
            .collect();
        cell(&v)
    };
    let vertex_count = |rs: &[&ResultRow]| {
        // one value per instance
        let first = rs.first().map(|r| r.solver);
        let v: Vec<f64> = rs
            .iter()
            .filter(|r| Some(r.solver) == first && r.vertex_count > 0)
            .map(|r| r.vertex_count as f64)
            .collect();
        cell(&v)
    };
    let mut tables: Vec<(&str, &dyn Fn(&[&ResultRow]) -> String)> = Vec::new();
    if cfg.solvers.contains(&SolverKind::Alns) {
        tables.push(("alns_gap", &alns_gap));
    }
    if cfg.solvers.contains(&SolverKind::Tspn) {
        tables.push(("tspn_gap", &tspn_gap));
    }
    if cfg.solvers.contains(&SolverKind::Exact) {
        tables.push(("exact_solved", &exact_solved));
        tables.push(("exact_work", &exact_work));
    }
    tables.push(("vertex_count", &vertex_count));
    grid(cfg, rows, &tables)
}

/// Mean (std) solver wall time in milliseconds, same layout as the summary.
pub fn timing_table(cfg: &ExperimentConfig, rows: &[ResultRow]) -> Vec<Vec<String>> {
    let fns: Vec<(SolverKind, Box<dyn Fn(&[&ResultRow]) -> String>)> = cfg
        .solvers
        .iter()
        .map(|&s| {
            let f: Box<dyn Fn(&[&ResultRow]) -> String> = Box::new(move |rs: &[&ResultRow]| {
                let v: Vec<f64> = of_solver(rs, s).iter().map(|r| r.wall_time_ms).collect();
                cell(&v)
            });
            (s, f)
        })
        .collect();
    let names: Vec<String> = fns.iter().map(|(s, _)| format!("{s}_time_ms")).collect();
    let tables: Vec<(&str, &dyn Fn(&[&ResultRow]) -> String)> = fns
        .iter()
        .zip(&names)
        .map(|((_, f), n)| (n.as_str(), f.as_ref()))
        .collect();
    grid(cfg, rows, &tables)
}

pub fn table_csv(table: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for line in table {
        w.write_record(line)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Config(format!("csv buffer: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Paths of the files written by [`write_reports`].
#[derive(Debug, Clone)]
pub struct ReportPaths {
    pub results: PathBuf,
    pub summary: PathBuf,
    pub timing: PathBuf,
}

pub fn write_reports(cfg: &ExperimentConfig, rows: &[ResultRow], dir: &Path) -> Result<ReportPaths> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let paths = ReportPaths {
        results: dir.join("results.csv"),
        summary: dir.join("summary.csv"),
        timing: dir.join("timing.csv"),
    };
    crate::error::write(&paths.results, results_csv(rows)?)?;
    crate::error::write(&paths.summary, table_csv(&summary_table(cfg, rows))?)?;
    crate::error::write(&paths.timing, table_csv(&timing_table(cfg, rows))?)?;
    Ok(paths)
}
