mod oracles;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use terratour_core::gtsp::{build_instance, exact_solve};
use terratour_core::terrain::{random_grid, triangulate, GridDem, Tin};
use terratour_core::tsp::{tsp_tour, TspMode};
use terratour_core::tspn::{
    greedy_mis, inner_disks, lower_bound, outer_disks, ratio_constant, tspn_tour, ApproxTour, Disk,
    DiskFamily,
};
use terratour_core::visibility::{compute_region, random_pois, Poi, ViewParams, VisibilityRegion};
use terratour_core::{Error, Point2};

// 30-digit reference values computed outside the crate.
const OUTER_125_20: f64 = 45.496_279_283_275_295;
const LOWER_BOUND_3: f64 = 32.661_778_897_463_334;
const RATIO_L100: f64 = 701.692_315_685_715_5;
const RATIO_L0: f64 = 141.178_463_137_143_1;

fn flat_tin(n: usize, cs: f64) -> Tin {
    triangulate(&GridDem::new(n, n, cs, Point2::new(0.0, 0.0), vec![0.0; n * n]).unwrap())
}

fn regions_for(tin: &Tin, pois: &[Poi], params: &ViewParams) -> Vec<VisibilityRegion> {
    pois.iter().map(|p| compute_region(tin, p, params).unwrap()).collect()
}

#[test]
fn frozen_reference_values() {
    let p = ViewParams::from_degrees(20.0, 125.0, 20).unwrap();
    assert!((p.outer_radius() - OUTER_125_20).abs() < 1e-9);
    assert!((lower_bound(3, &p).unwrap() - LOWER_BOUND_3).abs() < 1e-9);
    assert!((ratio_constant(125.0, 100.0, 0.05).unwrap() - RATIO_L100).abs() < 1e-9);
    assert!((ratio_constant(125.0, 0.0, 0.05).unwrap() - RATIO_L0).abs() < 1e-9);
    assert!(matches!(lower_bound(2, &p), Err(Error::TooFewDisjointDisks(2))));
}

#[test]
fn flat_terrain_inner_radius_has_no_fallback() {
    let tin = flat_tin(10, 22.22);
    let p = ViewParams::from_degrees(20.0, 125.0, 20).unwrap();
    let pois = random_pois(&tin, 4, 22.22, 1, 4).unwrap();
    let regions = regions_for(&tin, &pois, &p);
    let inner = inner_disks(&regions, tin.lmax(), &p).unwrap();
    assert!((inner.radius - OUTER_125_20).abs() < 1e-9);
    assert!(!inner.containment_fallback);
    let outer = outer_disks(&regions, &p);
    assert!(outer.disks.iter().all(|d| (d.radius - OUTER_125_20).abs() < 1e-9));
    assert!(matches!(
        inner_disks(&regions, 125.0, &p),
        Err(Error::AltitudeTooLow { .. })
    ));
}

/// Plateau at 100 with a single pit node at the center: the pit's walls are
/// 5 units away, far closer than l(h − l)tanδ/h ≈ 7.28.
fn well_terrain() -> Tin {
    let n = 9;
    let mut heights = vec![100.0; n * n];
    heights[4 * n + 4] = 0.0;
    triangulate(&GridDem::new(n, n, 5.0, Point2::new(0.0, 0.0), heights).unwrap())
}

#[test]
fn deep_narrow_well_triggers_fallback() {
    let tin = well_terrain();
    let p = ViewParams::from_degrees(20.0, 125.0, 36).unwrap();
    let mut pois = vec![Poi::on_terrain(&tin, 0, 20.0, 20.0).unwrap()];
    pois.push(Poi::on_terrain(&tin, 1, 5.0, 35.0).unwrap());
    pois.push(Poi::on_terrain(&tin, 2, 33.0, 6.0).unwrap());
    assert_eq!(pois[0].z, 0.0);
    let regions = regions_for(&tin, &pois, &p);
    let inner = inner_disks(&regions, tin.lmax(), &p).unwrap();
    let nominal = (125.0 - 100.0) * 20f64.to_radians().tan();
    assert!(inner.containment_fallback);
    assert!(inner.radius < nominal);
    assert_eq!(inner.radius, regions[0].min_extent());

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (disk, region) in inner.disks.iter().zip(&regions) {
        for _ in 0..10_000 {
            let r = disk.radius * rng.gen::<f64>().sqrt();
            let a = rng.gen::<f64>() * std::f64::consts::TAU;
            let q = disk.center + Point2::new(r * a.cos(), r * a.sin());
            assert!(region.contains(q));
            let c = region.center();
            let v = q - c;
            assert!(v.norm() <= oracles::interpolated_radius(region.radial_extents(), v.y.atan2(v.x)) * (1.0 + 1e-9));
        }
    }
    let tour = tspn_tour(&tin, &regions, &p, 0).unwrap();
    assert!(tour.containment_fallback);
    for region in &regions {
        assert!(tour.touches(region));
    }
}

#[test]
fn single_region_tour_is_a_point() {
    let tin = flat_tin(10, 22.22);
    let p = ViewParams::from_degrees(30.0, 125.0, 20).unwrap();
    let pois = random_pois(&tin, 1, 22.22, 9, 1).unwrap();
    let regions = regions_for(&tin, &pois, &p);
    let t = tspn_tour(&tin, &regions, &p, 0).unwrap();
    assert_eq!(t.length, 0.0);
    assert_eq!(t.waypoints, vec![pois[0].position()]);
}

#[test]
fn two_disjoint_disks_length() {
    let tin = flat_tin(20, 20.0);
    let p = ViewParams::from_degrees(20.0, 125.0, 20).unwrap();
    let pois = vec![
        Poi::on_terrain(&tin, 0, 50.0, 100.0).unwrap(),
        Poi::on_terrain(&tin, 1, 300.0, 140.0).unwrap(),
    ];
    let regions = regions_for(&tin, &pois, &p);
    let t = tspn_tour(&tin, &regions, &p, 0).unwrap();
    let dist = pois[0].position().dist(pois[1].position());
    let rho = OUTER_125_20;
    let want = 2.0 * dist + 2.0 * std::f64::consts::TAU * rho;
    assert!((t.length - want).abs() < 1e-9 * want);
    // the polyline itself only cuts chords off the circles
    let poly: f64 = (0..t.waypoints.len())
        .map(|k| t.waypoints[k].dist(t.waypoints[(k + 1) % t.waypoints.len()]))
        .sum();
    assert!(poly <= t.length && poly > 0.999 * t.length);
}

#[test]
fn held_karp_matches_permutation_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let pts: Vec<Point2> = (0..8)
            .map(|_| Point2::new(rng.gen::<f64>() * 200.0, rng.gen::<f64>() * 200.0))
            .collect();
        let exact = tsp_tour(&pts, TspMode::Exact, 0).unwrap();
        let oracle = oracles::brute_force_tsp(&pts);
        assert!((exact.length - oracle).abs() <= 1e-9 * oracle);
        for seed in 0..3 {
            let heur = tsp_tour(&pts, TspMode::Heuristic, seed).unwrap();
            assert!(heur.length >= exact.length - 1e-9);
            let mut seen = heur.order.clone();
            seen.sort();
            assert_eq!(seen, (0..8).collect::<Vec<_>>());
        }
    }
}

fn family(radius: f64, centers: &[Point2]) -> DiskFamily {
    DiskFamily {
        radius,
        disks: centers
            .iter()
            .enumerate()
            .map(|(i, &center)| Disk { center, radius, poi_id: i })
            .collect(),
        containment_fallback: false,
    }
}

#[test]
fn greedy_mis_is_maximal_and_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let pts: Vec<Point2> = (0..30)
            .map(|_| Point2::new(rng.gen::<f64>() * 100.0, rng.gen::<f64>() * 100.0))
            .collect();
        let fam = family(7.5, &pts);
        let mis = greedy_mis(&fam);
        for (a, &i) in mis.iter().enumerate() {
            for &j in &mis[a + 1..] {
                assert!(pts[i].dist(pts[j]) > 15.0);
            }
        }
        for (k, p) in pts.iter().enumerate() {
            if !mis.contains(&k) {
                assert!(mis.iter().any(|&j| pts[j].dist(*p) <= 15.0));
            }
        }
    }
}

fn bench_instance(seed: u64, m: usize, delta: f64, d: usize) -> (Tin, ViewParams, Vec<VisibilityRegion>) {
    let tin = triangulate(&random_grid(seed, 10, 10, 22.22, 0.0, 100.0).unwrap());
    let p = ViewParams::from_degrees(delta, 125.0, d).unwrap();
    let pois = random_pois(&tin, m, 22.22, seed, m as u64).unwrap();
    let regions = regions_for(&tin, &pois, &p);
    (tin, p, regions)
}

#[test]
fn packing_bound_between_inner_and_outer() {
    for seed in 0..10 {
        for m in [4, 6, 8] {
            for delta in [20.0, 30.0, 40.0] {
                let (tin, p, regions) = bench_instance(seed, m, delta, 20);
                let centers: Vec<Point2> = regions.iter().map(|r| r.center()).collect();
                let l = tin.lmax();
                let inner = family((125.0 - l) * p.delta().tan(), &centers);
                let outer = family(p.outer_radius(), &centers);
                let ratio = (2.0 * 125.0 / (125.0 - l)).powi(2);
                let (ni, no) = (greedy_mis(&inner).len(), greedy_mis(&outer).len());
                assert!(ni as f64 <= ratio * no as f64);
                assert!(ni >= no);
            }
        }
    }
}

/// Densely samples the tour's legs and full circles and returns, per region,
/// the smallest `|q − c| / r(θ)` found (≤ 1 means the region is met).
fn coverage_ratios(tour: &ApproxTour, regions: &[VisibilityRegion]) -> Vec<f64> {
    let mut samples: Vec<Point2> = Vec::new();
    let w = &tour.waypoints;
    for k in 0..w.len() {
        let (a, b) = (w[k], w[(k + 1) % w.len()]);
        for s in 0..8 {
            samples.push(a + (b - a) * (s as f64 / 8.0));
        }
    }
    for det in &tour.detours {
        for s in 0..3600 {
            let th = std::f64::consts::TAU * s as f64 / 3600.0;
            samples.push(det.center + Point2::new(det.radius * th.cos(), det.radius * th.sin()));
        }
    }
    regions
        .iter()
        .map(|r| {
            samples
                .iter()
                .map(|&q| {
                    let v = q - r.center();
                    v.norm() / oracles::interpolated_radius(r.radial_extents(), v.y.atan2(v.x))
                })
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

#[test]
fn tspn_tour_meets_every_region() {
    for seed in 0..6 {
        for m in [4, 6, 8] {
            for delta in [20.0, 40.0] {
                let (tin, p, regions) = bench_instance(seed, m, delta, 30);
                let tour = tspn_tour(&tin, &regions, &p, seed).unwrap();
                for (r, ratio) in regions.iter().zip(coverage_ratios(&tour, &regions)) {
                    assert!(tour.touches(r));
                    assert!(ratio <= 1.0 + 1e-6, "seed {seed} m {m}: ratio {ratio}");
                }
                let again = tspn_tour(&tin, &regions, &p, seed).unwrap();
                assert_eq!(tour, again);
            }
        }
    }
}

#[test]
fn certificates_against_exact_gtsp() {
    for seed in 0..8 {
        let (tin, p, regions) = bench_instance(seed, 4, 20.0, 20);
        let tour = tspn_tour(&tin, &regions, &p, seed).unwrap();
        let exact = exact_solve(&build_instance(&regions).unwrap()).unwrap();
        if let Some(lb) = tour.lower_bound {
            assert!(tour.outer_mis_size >= 3);
            assert!(exact.length >= lb);
        }
        if let (false, Some(c)) = (tour.containment_fallback, tour.ratio_constant) {
            assert!(tour.length <= c * exact.length || exact.length == 0.0 && tour.length == 0.0);
        }
    }
}
