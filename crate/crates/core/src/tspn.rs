//! Constant-factor approximation for visiting every visibility region.
//!
//! Each region `V_i` is sandwiched between an outer disk of radius `h·tan δ`
//! (which contains it) and an inner disk of a common radius `ρ` (contained in
//! it). The tour visits the centers of a greedy maximal independent set of
//! inner disks and circles each selected disk once, which touches every
//! inner disk and therefore every region. Outer disks give the lower bound.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geom::{self, Point2, TAU};
use crate::terrain::Tin;
use crate::tsp::{tsp_tour, TspMode, MAX_EXACT_POINTS};
use crate::visibility::{ViewParams, VisibilityRegion};

/// Packing constant for tours through disjoint disks of equal radius.
pub const ALPHA: f64 = 0.4786;

/// Chords used to draw each circumnavigation in the waypoint list.
pub const CIRCLE_CHORDS: usize = 360;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub center: Point2,
    pub radius: f64,
    pub poi_id: usize,
}

/// Disks of one common radius, one per point of interest.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskFamily {
    pub radius: f64,
    pub disks: Vec<Disk>,
    /// Set when some region's own extent forced the radius below
    /// `(h − l)·tan δ`.
    pub containment_fallback: bool,
}

/// Disks of radius `h·tan δ` around every region center.
pub fn outer_disks(regions: &[VisibilityRegion], params: &ViewParams) -> DiskFamily {
    let radius = params.outer_radius();
    DiskFamily {
        radius,
        disks: regions
            .iter()
            .map(|r| Disk {
                center: r.center(),
                radius,
                poi_id: r.poi().id,
            })
            .collect(),
        containment_fallback: false,
    }
}

/// Inner disks of common radius `min((h − l)·tan δ, min_i r_min(V_i))`.
pub fn inner_disks(regions: &[VisibilityRegion], lmax: f64, params: &ViewParams) -> Result<DiskFamily> {
    if lmax >= params.h() {
        return Err(Error::AltitudeTooLow { h: params.h(), lmax });
    }
    let nominal = (params.h() - lmax) * geom::tan(params.delta());
    let tightest = regions
        .iter()
        .map(VisibilityRegion::min_extent)
        .fold(f64::INFINITY, f64::min);
    let containment_fallback = tightest < nominal;
    let radius = nominal.min(tightest);
    Ok(DiskFamily {
        radius,
        disks: regions
            .iter()
            .map(|r| Disk {
                center: r.center(),
                radius,
                poi_id: r.poi().id,
            })
            .collect(),
        containment_fallback,
    })
}

/// Greedy maximal independent set: take the remaining disk with the
/// lexicographically smallest center and drop every disk meeting it
/// (closed intersection, center distance `≤ 2ρ`). Returns indices into
/// `family.disks` in selection order.
pub fn greedy_mis(family: &DiskFamily) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..family.disks.len()).collect();
    idx.sort_by(|&a, &b| family.disks[a].center.lex_cmp(&family.disks[b].center));
    let reach = 2.0 * family.radius;
    let mut chosen: Vec<usize> = Vec::new();
    for i in idx {
        let c = family.disks[i].center;
        if chosen
            .iter()
            .all(|&j| family.disks[j].center.dist(c) > reach)
        {
            chosen.push(i);
        }
    }
    chosen
}

/// Lower bound `(m/2)·α·h·tan δ` on any tour meeting `m` pairwise-disjoint
/// outer disks. Not claimed for `m < 3`.
pub fn lower_bound(m_disjoint: usize, params: &ViewParams) -> Result<f64> {
    if m_disjoint < 3 {
        return Err(Error::TooFewDisjointDisks(m_disjoint));
    }
    Ok(m_disjoint as f64 / 2.0 * ALPHA * params.outer_radius())
}

/// Approximation constant `C = (1+ε)(1 + 16h/(α(h−l))) + 16πh/(α(h−l))`.
pub fn ratio_constant(h: f64, lmax: f64, eps_tsp: f64) -> Result<f64> {
    if lmax >= h {
        return Err(Error::AltitudeTooLow { h, lmax });
    }
    if !(eps_tsp >= 0.0) {
        return Err(Error::InvalidViewParams("TSP slack must be non-negative"));
    }
    let k = h / (ALPHA * (h - lmax));
    Ok((1.0 + eps_tsp) * (1.0 + 16.0 * k) + 16.0 * core::f64::consts::PI * k)
}

/// A full circle flown around a selected inner disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detour {
    pub center: Point2,
    pub radius: f64,
    /// Angle of the entry point on the circle.
    pub entry_angle: f64,
}

impl Detour {
    /// Point of the circle closest to `q`.
    pub fn closest_point(&self, q: Point2) -> Point2 {
        let v = q - self.center;
        let n = v.norm();
        let dir = if n == 0.0 {
            Point2::from_angle(self.entry_angle)
        } else {
            v * (1.0 / n)
        };
        self.center + dir * self.radius
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxTour {
    /// Closed polyline; the last waypoint connects back to the first.
    pub waypoints: Vec<Point2>,
    /// TSP length over the selected centers plus `2πρ` per circle (plus the
    /// radial in and out legs when only one disk is circled).
    pub length: f64,
    pub mis_poi_ids: Vec<usize>,
    pub inner_radius: f64,
    pub outer_mis_size: usize,
    pub lower_bound: Option<f64>,
    /// `None` when the center tour came from the heuristic, whose slack is
    /// unbounded.
    pub ratio_constant: Option<f64>,
    pub containment_fallback: bool,
    pub tsp_mode: TspMode,
    pub detours: Vec<Detour>,
}

impl ApproxTour {
    /// Whether some waypoint, or the point of some circle nearest to the
    /// region's center, lies in `region`.
    pub fn touches(&self, region: &VisibilityRegion) -> bool {
        self.waypoints.iter().any(|&p| region.contains(p))
            || self
                .detours
                .iter()
                .any(|d| region.contains(d.closest_point(region.center())))
    }
}

/// Runs the disk approximation over `regions` on `tin`.
pub fn tspn_tour(
    tin: &Tin,
    regions: &[VisibilityRegion],
    params: &ViewParams,
    seed: u64,
) -> Result<ApproxTour> {
    if regions.is_empty() {
        return Err(Error::Empty("no visibility regions"));
    }
    let lmax = tin.lmax();
    let inner = inner_disks(regions, lmax, params)?;
    let outer = outer_disks(regions, params);
    let outer_mis_size = greedy_mis(&outer).len();
    let lower = lower_bound(outer_mis_size, params).ok();

    let mis = greedy_mis(&inner);
    let centers: Vec<Point2> = mis.iter().map(|&i| inner.disks[i].center).collect();
    let mode = if centers.len() <= MAX_EXACT_POINTS {
        TspMode::Exact
    } else {
        TspMode::Heuristic
    };
    let ratio = match mode {
        TspMode::Exact => Some(ratio_constant(params.h(), lmax, 0.0)?),
        TspMode::Heuristic => None,
    };
    let tour = tsp_tour(&centers, mode, seed)?;
    let rho = inner.radius;
    let ordered: Vec<Point2> = tour.order.iter().map(|&k| centers[k]).collect();

    let mut waypoints = Vec::new();
    let mut detours = Vec::new();
    let mut length = tour.length;
    let single_covers = ordered.len() == 1
        && inner
            .disks
            .iter()
            .all(|d| d.center.dist(ordered[0]) <= rho);
    if single_covers {
        waypoints.push(ordered[0]);
    } else {
        let n = ordered.len();
        for k in 0..n {
            let c = ordered[k];
            let entry_angle = if n == 1 {
                0.0
            } else {
                (ordered[(k + n - 1) % n] - c).angle()
            };
            let entry = c + Point2::from_angle(entry_angle) * rho;
            waypoints.push(entry);
            for j in 1..CIRCLE_CHORDS {
                let a = entry_angle + TAU * j as f64 / CIRCLE_CHORDS as f64;
                waypoints.push(c + Point2::from_angle(a) * rho);
            }
            waypoints.push(entry);
            waypoints.push(c);
            detours.push(Detour {
                center: c,
                radius: rho,
                entry_angle,
            });
            length += TAU * rho;
        }
        if n == 1 {
            length += 2.0 * rho;
        }
    }

    Ok(ApproxTour {
        waypoints,
        length,
        mis_poi_ids: tour.order.iter().map(|&k| inner.disks[mis[k]].poi_id).collect(),
        inner_radius: rho,
        outer_mis_size,
        lower_bound: lower,
        ratio_constant: ratio,
        containment_fallback: inner.containment_fallback,
        tsp_mode: mode,
        detours,
    })
}
