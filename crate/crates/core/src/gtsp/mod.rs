//! Generalized TSP over sampled visibility-region boundaries.
//!
//! Each region contributes its `d` boundary vertices as one vertex set.
//! A vertex that also lies inside another region is duplicated into that
//! region's set under a fresh index, so a tour may satisfy several regions
//! at a shared point. A tour picks exactly one vertex per set.

mod alns;
mod exact;
mod separation;

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geom::Point2;
use crate::visibility::VisibilityRegion;

pub use alns::{alns_solve, AlnsConfig};
pub use exact::{exact_solve, exact_solve_with, ExactConfig, ExactOutcome, MAX_EXACT_SETS};
pub use separation::{
    separation, set_components, validate, validate_selection, Cut, CutSet, EdgeSelection,
    ValidationReport,
};

/// Vertex sets with Euclidean costs between flight-plane coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GtspInstance {
    sets: Vec<Vec<usize>>,
    coords: Vec<Point2>,
    set_of: Vec<usize>,
}

impl GtspInstance {
    pub fn new(sets: Vec<Vec<usize>>, coords: Vec<Point2>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::InvalidInstance("no vertex sets"));
        }
        let mut set_of = vec![usize::MAX; coords.len()];
        for (s, members) in sets.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::InvalidInstance("empty vertex set"));
            }
            for &v in members {
                if v >= coords.len() {
                    return Err(Error::InvalidInstance("vertex index out of range"));
                }
                if set_of[v] != usize::MAX {
                    return Err(Error::InvalidInstance("vertex belongs to more than one set"));
                }
                set_of[v] = s;
            }
        }
        if set_of.contains(&usize::MAX) {
            return Err(Error::InvalidInstance("vertex belongs to no set"));
        }
        if coords.iter().any(|p| !(p.x.is_finite() && p.y.is_finite())) {
            return Err(Error::InvalidInstance("non-finite coordinate"));
        }
        Ok(Self { sets, coords, set_of })
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn coords(&self) -> &[Point2] {
        &self.coords
    }

    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.coords.len()
    }

    pub fn set_of(&self, v: usize) -> usize {
        self.set_of[v]
    }

    /// Straight-line travel cost on the flight plane.
    pub fn cost(&self, a: usize, b: usize) -> f64 {
        self.coords[a].dist(self.coords[b])
    }

    /// Length of the closed tour through `order`.
    pub fn cycle_length(&self, order: &[usize]) -> f64 {
        if order.len() < 2 {
            return 0.0;
        }
        (0..order.len())
            .map(|k| self.cost(order[k], order[(k + 1) % order.len()]))
            .sum()
    }

    /// Copy with every coordinate multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            sets: self.sets.clone(),
            coords: self.coords.iter().map(|&p| p * s).collect(),
            set_of: self.set_of.clone(),
        }
    }

    /// Copy with vertex `p` appended to set `set`.
    pub fn with_extra_vertex(&self, set: usize, p: Point2) -> Self {
        let mut out = self.clone();
        let v = out.coords.len();
        out.coords.push(p);
        out.set_of.push(set);
        out.sets[set].push(v);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Exact,
    Alns,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Exact => "exact",
            Provenance::Alns => "alns",
        }
    }
}

/// One vertex per set in cyclic visiting order.
#[derive(Debug, Clone, PartialEq)]
pub struct Tour {
    pub order: Vec<usize>,
    pub length: f64,
    pub provenance: Provenance,
}

impl Tour {
    pub fn waypoints(&self, inst: &GtspInstance) -> Vec<Point2> {
        self.order.iter().map(|&v| inst.coords()[v]).collect()
    }
}

/// Rotates a cyclic vertex order to start in set 0 and orients it so the
/// second vertex's set index is below the last one's.
pub(crate) fn canonical_order(inst: &GtspInstance, order: &[usize]) -> Vec<usize> {
    let n = order.len();
    if n == 0 {
        return Vec::new();
    }
    let start = (0..n)
        .min_by_key(|&k| (inst.set_of(order[k]), order[k]))
        .unwrap_or(0);
    let mut out: Vec<usize> = (0..n).map(|k| order[(start + k) % n]).collect();
    if n >= 3 && inst.set_of(out[1]) > inst.set_of(out[n - 1]) {
        out[1..].reverse();
    }
    out
}

/// Reduces visibility regions to a GTSP instance.
///
/// Set `i` starts with the boundary vertices of region `i`; then every
/// vertex of region `i` that lies in region `j ≠ i` is copied into set `j`
/// (scanning `i`, then vertex, then `j` in increasing order).
pub fn build_instance(regions: &[VisibilityRegion]) -> Result<GtspInstance> {
    if regions.is_empty() {
        return Err(Error::Empty("no visibility regions"));
    }
    let h = regions[0].h();
    if regions.iter().any(|r| r.h() != h) {
        return Err(Error::InvalidInstance("regions use different altitudes"));
    }
    let mut coords = Vec::new();
    let mut sets: Vec<Vec<usize>> = Vec::with_capacity(regions.len());
    let mut originals: Vec<Vec<Point2>> = Vec::with_capacity(regions.len());
    for r in regions {
        let verts = r.vertices();
        sets.push((coords.len()..coords.len() + verts.len()).collect());
        coords.extend_from_slice(&verts);
        originals.push(verts);
    }
    for (i, verts) in originals.iter().enumerate() {
        for &v in verts {
            for (j, other) in regions.iter().enumerate() {
                if j != i && other.contains(v) {
                    sets[j].push(coords.len());
                    coords.push(v);
                }
            }
        }
    }
    GtspInstance::new(sets, coords)
}
