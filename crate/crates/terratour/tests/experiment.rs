use std::collections::BTreeMap;

use terratour::experiment::{
    read_results_csv, run_experiment, write_reports, ExperimentConfig, ResultRow,
};
use terratour::pipeline::SolverKind;

fn small_config() -> ExperimentConfig {
    ExperimentConfig {
        seeds: vec![1, 2, 3],
        m_values: vec![4, 5],
        delta_values_deg: vec![20.0, 35.0],
        d_values: vec![12, 20],
        alns_iterations: 60,
        ..ExperimentConfig::standard()
    }
}

/// `STDEV.S` the way a spreadsheet writes it: one pass over sums.
fn spreadsheet_mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let s1: f64 = xs.iter().sum();
    let s2: f64 = xs.iter().map(|x| x * x).sum();
    let mean = s1 / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = ((n * s2 - s1 * s1) / (n * (n - 1.0))).max(0.0);
    (mean, var.sqrt())
}

fn parse_cell(c: &str) -> (f64, f64) {
    let (m, s) = c.split_once(" (").unwrap();
    (m.parse().unwrap(), s.trim_end_matches(')').parse().unwrap())
}

#[test]
fn summary_matches_spreadsheet_recomputation() {
    let cfg = small_config();
    let dir = tempfile::tempdir().unwrap();
    let rows = run_experiment(&cfg).unwrap();
    let paths = write_reports(&cfg, &rows, dir.path()).unwrap();

    // recompute from the CSV text, keyed by the column names
    let mut rdr = csv::Reader::from_path(&paths.results).unwrap();
    let headers = rdr.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let mut gaps: BTreeMap<(String, String, String, String), Vec<f64>> = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let gap = &rec[col("gap_percent")];
        if gap.is_empty() {
            continue;
        }
        let key = (
            rec[col("solver")].to_string(),
            rec[col("m")].to_string(),
            rec[col("delta_deg")].to_string(),
            rec[col("d")].to_string(),
        );
        gaps.entry(key).or_default().push(gap.parse().unwrap());
    }

    let mut rdr = csv::Reader::from_path(&paths.summary).unwrap();
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    let mut compared = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let solver = match &rec[0] {
            "alns_gap" => "alns",
            "tspn_gap" => "tspn",
            _ => continue,
        };
        for (i, cellname) in header.iter().enumerate().skip(2) {
            // "delta=20 d=12"
            let (dpart, npart) = cellname.split_once(' ').unwrap();
            let delta: f64 = dpart.trim_start_matches("delta=").parse().unwrap();
            let d = npart.trim_start_matches("d=");
            let key = (solver.to_string(), rec[1].to_string(), format!("{delta:?}"), d.to_string());
            let values = &gaps[&key];
            let (m, s) = parse_cell(&rec[i]);
            let (wm, ws) = spreadsheet_mean_std(values);
            assert!((m - wm).abs() <= 1e-9 * wm.abs().max(1.0), "{key:?}: {m} vs {wm}");
            assert!((s - ws).abs() <= 1e-9 * ws.abs().max(1.0), "{key:?}: {s} vs {ws}");
            compared += 1;
        }
    }
    assert_eq!(compared, 2 * 2 * 4);

    // the CSV reads back into the same rows
    let back = read_results_csv(&std::fs::read_to_string(&paths.results).unwrap()).unwrap();
    assert_eq!(back, rows);
}

#[test]
fn rows_are_complete_sorted_and_consistent() {
    let cfg = small_config();
    let rows = run_experiment(&cfg).unwrap();
    assert_eq!(rows.len(), 3 * 2 * 2 * 2 * 3);
    let key = |r: &ResultRow| (r.seed, r.m, r.delta_deg.to_bits(), r.d);
    for w in rows.windows(2) {
        assert!(key(&w[0]) <= key(&w[1]));
    }
    for r in &rows {
        assert_eq!(r.status, "ok");
        assert!(r.feasible, "{r:?}");
        let (len, exact) = (r.tour_length.unwrap(), r.exact_length.unwrap());
        assert!(len >= exact - 1e-9 * exact);
        if let Some(g) = r.gap_percent {
            assert!(g >= 0.0);
            if exact > 0.0 && g > 0.0 {
                assert!((g - 100.0 * (len - exact) / exact).abs() < 1e-9);
            }
        }
        match r.solver {
            SolverKind::Exact => assert_eq!(r.gap_percent, Some(0.0)),
            SolverKind::Tspn => assert!(r.outer_mis_size.is_some() && r.containment_fallback.is_some()),
            SolverKind::Alns => {}
        }
        assert!(r.vertex_count >= r.m * r.d);
    }
}

#[test]
fn work_limit_failures_are_recorded_per_row() {
    let cfg = ExperimentConfig {
        seeds: vec![1],
        m_values: vec![6],
        delta_values_deg: vec![30.0],
        d_values: vec![20],
        alns_iterations: 50,
        exact_work_limit: Some(10),
        ..ExperimentConfig::standard()
    };
    let rows = run_experiment(&cfg).unwrap();
    assert_eq!(rows.len(), 3);
    let exact = &rows[0];
    assert_eq!(exact.solver, SolverKind::Exact);
    assert!(!exact.feasible && exact.tour_length.is_none());
    assert!(exact.status.contains("work limit"));
    // the other solvers still run, without a reference
    assert!(rows[1].feasible && rows[1].gap_percent.is_none());
    let summary = terratour::experiment::summary_table(&cfg, &rows);
    let solved = summary.iter().find(|l| l[0] == "exact_solved").unwrap();
    assert_eq!(solved[2], "0 (1)");
}

#[test]
fn thread_count_does_not_change_results() {
    let cfg = ExperimentConfig {
        seeds: vec![4, 5],
        ..small_config()
    };
    let a = run_experiment(&cfg).unwrap();
    std::env::set_var("TERRATOUR_THREADS", "3");
    let b = run_experiment(&cfg).unwrap();
    std::env::remove_var("TERRATOUR_THREADS");
    let strip = |rows: Vec<ResultRow>| -> Vec<ResultRow> {
        rows.into_iter().map(|r| ResultRow { wall_time_ms: 0.0, ..r }).collect()
    };
    assert_eq!(strip(a), strip(b));
}
