//! One end-to-end solve: regions, GTSP instance, solver, validation.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use terratour_core::gtsp::{
    alns_solve, build_instance, exact_solve_with, validate, AlnsConfig, ExactConfig, GtspInstance,
    Tour, ValidationReport,
};
use terratour_core::terrain::Tin;
use terratour_core::tspn::{tspn_tour, ApproxTour};
use terratour_core::visibility::{compute_region, Poi, ViewParams, VisibilityRegion};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Exact,
    Alns,
    Tspn,
}

impl SolverKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolverKind::Exact => "exact",
            SolverKind::Alns => "alns",
            SolverKind::Tspn => "tspn",
        }
    }
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budgets {
    pub alns_iterations: u64,
    pub exact_work_limit: Option<u64>,
}

impl Default for Budgets {
    fn default() -> Self {
        Self {
            alns_iterations: AlnsConfig::default().iterations,
            exact_work_limit: None,
        }
    }
}

pub fn compute_regions(
    tin: &Tin,
    pois: &[Poi],
    params: &ViewParams,
) -> terratour_core::Result<Vec<VisibilityRegion>> {
    params.check_terrain(tin)?;
    pois.iter().map(|p| compute_region(tin, p, params)).collect()
}

/// What a solver produced.
#[derive(Debug, Clone)]
pub enum Solution {
    Gtsp {
        tour: Tour,
        report: ValidationReport,
        /// DP relaxations, exact solver only.
        work: Option<u64>,
    },
    Tspn {
        tour: ApproxTour,
        /// Regions that no waypoint or circle reaches.
        missed: Vec<usize>,
    },
}

impl Solution {
    pub fn length(&self) -> f64 {
        match self {
            Solution::Gtsp { tour, .. } => tour.length,
            Solution::Tspn { tour, .. } => tour.length,
        }
    }

    pub fn is_feasible(&self) -> bool {
        match self {
            Solution::Gtsp { report, .. } => report.is_feasible(),
            Solution::Tspn { missed, .. } => missed.is_empty(),
        }
    }
}

/// Runs one solver. The returned duration covers the solver call only.
pub fn run_solver(
    kind: SolverKind,
    tin: &Tin,
    regions: &[VisibilityRegion],
    inst: &GtspInstance,
    params: &ViewParams,
    budgets: &Budgets,
    seed: u64,
) -> (terratour_core::Result<Solution>, f64) {
    let start = Instant::now();
    let out = match kind {
        SolverKind::Exact => exact_solve_with(
            inst,
            &ExactConfig {
                work_limit: budgets.exact_work_limit,
            },
        )
        .map(|o| (o.tour, Some(o.work))),
        SolverKind::Alns => Ok((
            alns_solve(inst, &AlnsConfig::with_iterations(budgets.alns_iterations), seed),
            None,
        )),
        SolverKind::Tspn => {
            let res = tspn_tour(tin, regions, params, seed);
            let ms = start.elapsed().as_secs_f64() * 1e3;
            return (
                res.map(|tour| {
                    let missed = (0..regions.len()).filter(|&i| !tour.touches(&regions[i])).collect();
                    Solution::Tspn { tour, missed }
                }),
                ms,
            );
        }
    };
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let sol = out.map(|(tour, work)| Solution::Gtsp {
        report: validate(inst, &tour),
        tour,
        work,
    });
    (sol, ms)
}

/// Convenience wrapper: regions, instance and solution in one call.
pub fn solve(
    tin: &Tin,
    pois: &[Poi],
    params: &ViewParams,
    kind: SolverKind,
    budgets: &Budgets,
    seed: u64,
) -> terratour_core::Result<(Vec<VisibilityRegion>, GtspInstance, Solution)> {
    let regions = compute_regions(tin, pois, params)?;
    let inst = build_instance(&regions)?;
    let (sol, _) = run_solver(kind, tin, &regions, &inst, params, budgets, seed);
    Ok((regions, inst, sol?))
}
