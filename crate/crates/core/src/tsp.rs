//! Closed Euclidean TSP tours through a handful of points.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geom::Point2;

/// Largest instance the subset DP accepts.
pub const MAX_EXACT_POINTS: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TspMode {
    /// Held-Karp dynamic programming over subsets.
    Exact,
    /// Nearest neighbour construction followed by 2-opt to a local optimum.
    Heuristic,
}

impl TspMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            TspMode::Exact => "exact",
            TspMode::Heuristic => "heuristic",
        }
    }
}

/// Closed tour over a point list: `order` is a permutation of point indices.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneTour {
    pub order: Vec<usize>,
    pub length: f64,
}

pub fn closed_length(points: &[Point2], order: &[usize]) -> f64 {
    if order.len() < 2 {
        return 0.0;
    }
    (0..order.len())
        .map(|k| points[order[k]].dist(points[order[(k + 1) % order.len()]]))
        .sum()
}

/// Tour through `points`. In heuristic mode `seed` picks the starting point
/// of the nearest-neighbour construction.
pub fn tsp_tour(points: &[Point2], mode: TspMode, seed: u64) -> Result<PlaneTour> {
    let n = points.len();
    if n == 0 {
        return Ok(PlaneTour {
            order: Vec::new(),
            length: 0.0,
        });
    }
    let order = match mode {
        TspMode::Exact => {
            if n > MAX_EXACT_POINTS {
                return Err(Error::TooManyPoints {
                    max: MAX_EXACT_POINTS,
                    got: n,
                });
            }
            held_karp(points)
        }
        TspMode::Heuristic => {
            let mut order = nearest_neighbour(points, (seed % n as u64) as usize);
            two_opt(points, &mut order);
            order
        }
    };
    let length = closed_length(points, &order);
    Ok(PlaneTour { order, length })
}

fn held_karp(points: &[Point2]) -> Vec<usize> {
    let n = points.len();
    if n <= 3 {
        return (0..n).collect();
    }
    // Point 0 is the fixed start; subsets range over points 1..n.
    let k = n - 1;
    let full = 1usize << k;
    let mut cost = vec![f64::INFINITY; full * k];
    let mut parent = vec![usize::MAX; full * k];
    for j in 0..k {
        cost[(1 << j) * k + j] = points[0].dist(points[j + 1]);
    }
    for mask in 1..full {
        for last in 0..k {
            if mask & (1 << last) == 0 {
                continue;
            }
            let base = cost[mask * k + last];
            if !base.is_finite() {
                continue;
            }
            for next in 0..k {
                if mask & (1 << next) != 0 {
                    continue;
                }
                let m2 = mask | (1 << next);
                let c = base + points[last + 1].dist(points[next + 1]);
                if c < cost[m2 * k + next] {
                    cost[m2 * k + next] = c;
                    parent[m2 * k + next] = last;
                }
            }
        }
    }
    let mask = full - 1;
    let mut best = f64::INFINITY;
    let mut last = 0;
    for j in 0..k {
        let c = cost[mask * k + j] + points[j + 1].dist(points[0]);
        if c < best {
            best = c;
            last = j;
        }
    }
    let mut rev = Vec::with_capacity(n);
    let mut mask = mask;
    let mut cur = last;
    while cur != usize::MAX {
        rev.push(cur + 1);
        let p = parent[mask * k + cur];
        mask &= !(1 << cur);
        cur = p;
    }
    rev.push(0);
    rev.reverse();
    rev
}

fn nearest_neighbour(points: &[Point2], start: usize) -> Vec<usize> {
    let n = points.len();
    let mut used = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut cur = start;
    used[cur] = true;
    order.push(cur);
    for _ in 1..n {
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (j, p) in points.iter().enumerate() {
            if !used[j] {
                let d = points[cur].dist(*p);
                if d < best_d {
                    best_d = d;
                    best = j;
                }
            }
        }
        used[best] = true;
        order.push(best);
        cur = best;
    }
    order
}

/// First-improvement 2-opt until no move shortens the tour by more than a
/// relative 1e-12.
fn two_opt(points: &[Point2], order: &mut [usize]) {
    let n = order.len();
    if n < 4 {
        return;
    }
    let d = |order: &[usize], a: usize, b: usize| points[order[a]].dist(points[order[b]]);
    loop {
        let mut improved = false;
        for i in 0..n - 1 {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b, c, e) = (i, i + 1, j, (j + 1) % n);
                let old = d(order, a, b) + d(order, c, e);
                let delta = d(order, a, c) + d(order, b, e) - old;
                if delta < -1e-12 * old {
                    order[i + 1..=j].reverse();
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_triangle() {
        let pts = [Point2::new(0.0, 0.0), Point2::new(3.0, 0.0), Point2::new(0.0, 4.0)];
        for mode in [TspMode::Exact, TspMode::Heuristic] {
            assert_eq!(tsp_tour(&pts, mode, 0).unwrap().length, 12.0);
        }
    }

    #[test]
    fn single_point() {
        let t = tsp_tour(&[Point2::new(5.0, 5.0)], TspMode::Exact, 0).unwrap();
        assert_eq!(t.order, vec![0]);
        assert_eq!(t.length, 0.0);
    }

    #[test]
    fn exact_rejects_large() {
        let pts: Vec<Point2> = (0..16).map(|i| Point2::new(i as f64, 0.0)).collect();
        assert!(matches!(
            tsp_tour(&pts, TspMode::Exact, 0),
            Err(Error::TooManyPoints { .. })
        ));
        assert!(tsp_tour(&pts, TspMode::Heuristic, 0).is_ok());
    }

    #[test]
    fn square_is_perimeter() {
        let pts = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        ];
        assert_eq!(tsp_tour(&pts, TspMode::Exact, 0).unwrap().length, 4.0);
        assert_eq!(tsp_tour(&pts, TspMode::Heuristic, 3).unwrap().length, 4.0);
    }
}
