//! Independent reference computations shared by the test suites.
//!
//! Nothing here calls into the code under test except for `Tin::height_at`
//! and plain data accessors.
#![allow(dead_code)]

use terratour_core::gtsp::GtspInstance;
use terratour_core::terrain::Tin;
use terratour_core::visibility::{Poi, VisibilityRegion};
use terratour_core::Point2;

/// Distance from `o` along `dir` to the boundary of the terrain rectangle.
pub fn exit_distance(tin: &Tin, o: Point2, dir: Point2) -> f64 {
    let b = tin.bounds();
    let mut t = f64::INFINITY;
    if dir.x > 1e-15 {
        t = t.min((b.xmax - o.x) / dir.x);
    } else if dir.x < -1e-15 {
        t = t.min((b.xmin - o.x) / dir.x);
    }
    if dir.y > 1e-15 {
        t = t.min((b.ymax - o.y) / dir.y);
    } else if dir.y < -1e-15 {
        t = t.min((b.ymin - o.y) / dir.y);
    }
    t.max(0.0)
}

pub struct DenseHorizon {
    /// Maximum over the uniform samples only.
    pub raw: f64,
    /// Raw maximum with every sampled local maximum refined by golden-section
    /// search on the continuous elevation function.
    pub refined: f64,
}

fn clamp_height(tin: &Tin, p: Point2) -> f64 {
    let b = tin.bounds();
    tin.height_at(p.x.clamp(b.xmin, b.xmax), p.y.clamp(b.ymin, b.ymax))
        .expect("clamped point lies inside")
}

/// Horizon elevation from `samples` uniformly spaced heights along the ray,
/// both raw and locally refined. Both are clamped at 0.
///
/// The search runs on the slope `(z − z₀)/t`, which `atan` maps monotonically
/// onto the elevation angle.
pub fn dense_horizon(tin: &Tin, poi: &Poi, azimuth: f64, samples: usize) -> DenseHorizon {
    let o = poi.position();
    let dir = Point2::new(azimuth.cos(), azimuth.sin());
    let t_end = exit_distance(tin, o, dir);
    if t_end <= 0.0 {
        return DenseHorizon { raw: 0.0, refined: 0.0 };
    }
    let slope = |t: f64| (clamp_height(tin, o + dir * t) - poi.z) / t;
    let step = t_end / samples as f64;
    let slopes: Vec<f64> = (1..=samples).map(|k| slope(step * k as f64)).collect();
    let raw_slope = slopes.iter().copied().fold(0.0, f64::max);
    let raw = raw_slope.atan();
    let mut refined = raw;
    for k in 0..slopes.len() {
        let left = if k == 0 { f64::NEG_INFINITY } else { slopes[k - 1] };
        let right = if k + 1 == slopes.len() { f64::NEG_INFINITY } else { slopes[k + 1] };
        if slopes[k] >= left && slopes[k] >= right && slopes[k].atan() > raw - 1e-2 {
            let lo = if k == 0 { 0.5 * step } else { step * k as f64 };
            let hi = (step * (k + 2) as f64).min(t_end);
            refined = refined.max(golden_max(&slope, lo, hi).atan());
        }
    }
    DenseHorizon { raw, refined }
}

fn golden_max(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = f(a).max(f(b)).max(fc).max(fd);
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        best = best.max(fc).max(fd);
    }
    best
}

/// Radius of the region boundary at angle `theta`, by linear interpolation
/// of the stored radii, written out independently.
pub fn interpolated_radius(radii: &[f64], theta: f64) -> f64 {
    let d = radii.len() as f64;
    let tau = std::f64::consts::TAU;
    let mut a = theta % tau;
    if a < 0.0 {
        a += tau;
    }
    let s = a / tau * d;
    let k = (s.floor() as usize) % radii.len();
    let f = s - s.floor();
    radii[k] * (1.0 - f) + radii[(k + 1) % radii.len()] * f
}

/// Dense polygon tracing the interpolated boundary, `per_gap` points per
/// angular sample interval.
pub fn dense_boundary(region: &VisibilityRegion, per_gap: usize) -> Vec<Point2> {
    let radii = region.radial_extents();
    let n = radii.len() * per_gap;
    let c = region.center();
    (0..n)
        .map(|i| {
            let th = std::f64::consts::TAU * i as f64 / n as f64;
            let r = interpolated_radius(radii, th);
            Point2::new(c.x + r * th.cos(), c.y + r * th.sin())
        })
        .collect()
}

/// Even-odd ray casting.
pub fn ray_cast_inside(poly: &[Point2], q: Point2) -> bool {
    let mut inside = false;
    let n = poly.len();
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a.y > q.y) != (b.y > q.y) {
            let x = a.x + (q.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if q.x < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

pub fn distance_to_polyline(poly: &[Point2], q: Point2) -> f64 {
    (0..poly.len())
        .map(|i| q.dist_to_segment(poly[i], poly[(i + 1) % poly.len()]))
        .fold(f64::INFINITY, f64::min)
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        out(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Shortest closed tour over `points` by trying every permutation with the
/// first point fixed.
pub fn brute_force_tsp(points: &[Point2]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let mut rest: Vec<usize> = (1..points.len()).collect();
    let mut best = f64::INFINITY;
    permutations(&mut rest, 0, &mut |perm| {
        let mut len = points[0].dist(points[perm[0]]);
        for w in perm.windows(2) {
            len += points[w[0]].dist(points[w[1]]);
        }
        len += points[*perm.last().unwrap()].dist(points[0]);
        best = best.min(len);
    });
    best
}

/// Optimal GTSP length over the full product space: every set order with
/// set 0 first times every choice of one vertex per set.
pub fn brute_force_gtsp(inst: &GtspInstance) -> f64 {
    let m = inst.set_count();
    let sets = inst.sets();
    let pts = inst.coords();
    if m == 1 {
        return 0.0;
    }
    let mut rest: Vec<usize> = (1..m).collect();
    let mut best = f64::INFINITY;
    permutations(&mut rest, 0, &mut |perm| {
        let order: Vec<usize> = std::iter::once(0).chain(perm.iter().copied()).collect();
        let mut choice = vec![0usize; m];
        loop {
            let mut len = 0.0;
            for k in 0..m {
                let a = sets[order[k]][choice[k]];
                let b = sets[order[(k + 1) % m]][choice[(k + 1) % m]];
                len += pts[a].dist(pts[b]);
            }
            best = best.min(len);
            // odometer over vertex choices
            let mut pos = 0;
            loop {
                if pos == m {
                    return;
                }
                choice[pos] += 1;
                if choice[pos] < sets[order[pos]].len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
        }
    });
    best
}

/// Union-find partition of `0..n` under the given unions, as sorted groups
/// ordered by smallest member.
pub fn union_find_partition(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for &(a, b) in pairs {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for x in 0..n {
        let r = root(&mut parent, x);
        groups.entry(r).or_default().push(x);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort_by_key(|g| g[0]);
    out
}

/// Sample mean and (n − 1) standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
