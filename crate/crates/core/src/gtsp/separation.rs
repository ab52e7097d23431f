//! Subtour separation over set-level connectivity and tour validation.
//!
//! A candidate edge selection `y` is collapsed to a directed graph on the
//! vertex sets (edge `i → j` whenever some selected vertex pair leads from
//! `S_i` to `S_j`). More than one connected component means the selection
//! contains subtours; each component `κ` yields the inequality
//! `Σ_{(i,j)∈δ⁺(κ)} y_ij = 1`.

use alloc::vec;
use alloc::vec::Vec;

use super::{GtspInstance, Tour};
use crate::error::{Error, Result};

/// Directed vertex pairs with `y_ij = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeSelection {
    pub edges: Vec<(usize, usize)>,
}

impl EdgeSelection {
    /// The closed cycle through `order`. A single vertex yields a self-loop.
    pub fn from_cycle(order: &[usize]) -> Self {
        let n = order.len();
        Self {
            edges: (0..n).map(|k| (order[k], order[(k + 1) % n])).collect(),
        }
    }
}

/// A subtour-elimination cut over the sets in `sets` (sorted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub sets: Vec<usize>,
}

impl Cut {
    fn inside(&self, inst: &GtspInstance, v: usize) -> bool {
        self.sets.binary_search(&inst.set_of(v)).is_ok()
    }

    /// `δ⁺(κ)`: every vertex pair leaving the union of the cut's sets.
    pub fn crossing_pairs(&self, inst: &GtspInstance) -> Vec<(usize, usize)> {
        let n = inst.vertex_count();
        let (ins, outs): (Vec<usize>, Vec<usize>) = (0..n).partition(|&v| self.inside(inst, v));
        ins.iter()
            .flat_map(|&a| outs.iter().map(move |&b| (a, b)))
            .collect()
    }

    /// Left-hand side `Σ_{(i,j)∈δ⁺(κ)} y_ij` under `sel`.
    pub fn crossing_value(&self, inst: &GtspInstance, sel: &EdgeSelection) -> usize {
        sel.edges
            .iter()
            .filter(|&&(a, b)| self.inside(inst, a) && !self.inside(inst, b))
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CutSet {
    pub cuts: Vec<Cut>,
}

impl CutSet {
    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Weakly connected components of the set-level graph, each sorted, ordered
/// by smallest member. Edges with unknown vertices are ignored.
pub fn set_components(inst: &GtspInstance, sel: &EdgeSelection) -> Vec<Vec<usize>> {
    let m = inst.set_count();
    let mut parent: Vec<usize> = (0..m).collect();
    for &(a, b) in &sel.edges {
        if a >= inst.vertex_count() || b >= inst.vertex_count() {
            continue;
        }
        let (ra, rb) = (find(&mut parent, inst.set_of(a)), find(&mut parent, inst.set_of(b)));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; m];
    for s in 0..m {
        let r = find(&mut parent, s);
        if slot[r] == usize::MAX {
            slot[r] = comps.len();
            comps.push(Vec::new());
        }
        comps[slot[r]].push(s);
    }
    comps
}

/// Emits one cut per component when the selection splits into several.
///
/// Requires exactly one selected edge leaving a vertex of every set.
pub fn separation(inst: &GtspInstance, sel: &EdgeSelection) -> Result<CutSet> {
    let mut out_degree = vec![0usize; inst.set_count()];
    for &(a, b) in &sel.edges {
        if a >= inst.vertex_count() || b >= inst.vertex_count() {
            return Err(Error::InvalidInstance("edge references an unknown vertex"));
        }
        out_degree[inst.set_of(a)] += 1;
    }
    if let Some(s) = out_degree.iter().position(|&d| d != 1) {
        return Err(Error::NotDegreeFeasible(s));
    }
    let comps = set_components(inst, sel);
    if comps.len() <= 1 {
        return Ok(CutSet::default());
    }
    Ok(CutSet {
        cuts: comps.into_iter().map(|sets| Cut { sets }).collect(),
    })
}

/// Constraint families violated by a tour or edge selection.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    /// Edges or tour entries naming vertices outside the instance.
    pub unknown_vertices: Vec<usize>,
    /// Sets not entered exactly once from outside (visit constraint).
    pub visit_violations: Vec<usize>,
    /// Vertices whose in-degree differs from their out-degree.
    pub degree_violations: Vec<usize>,
    /// Subtour cuts when the selection is not a single connected cycle.
    pub subtour_cuts: Vec<Cut>,
    /// `(reported, recomputed)` when the stated length is off by more than
    /// 1e-9 relative.
    pub length_mismatch: Option<(f64, f64)>,
}

impl ValidationReport {
    pub fn is_feasible(&self) -> bool {
        self.unknown_vertices.is_empty()
            && self.visit_violations.is_empty()
            && self.degree_violations.is_empty()
            && self.subtour_cuts.is_empty()
            && self.length_mismatch.is_none()
    }
}

/// Checks an edge selection against the degree, visit and subtour
/// constraints.
pub fn validate_selection(inst: &GtspInstance, sel: &EdgeSelection) -> ValidationReport {
    let n = inst.vertex_count();
    let m = inst.set_count();
    let mut report = ValidationReport::default();
    let mut indeg = vec![0i64; n];
    let mut outdeg = vec![0i64; n];
    let mut entries = vec![0usize; m];
    let mut touched = vec![false; m];
    for &(a, b) in &sel.edges {
        let mut bad = false;
        for v in [a, b] {
            if v >= n {
                report.unknown_vertices.push(v);
                bad = true;
            }
        }
        if bad {
            continue;
        }
        outdeg[a] += 1;
        indeg[b] += 1;
        touched[inst.set_of(a)] = true;
        touched[inst.set_of(b)] = true;
        if inst.set_of(a) != inst.set_of(b) {
            entries[inst.set_of(b)] += 1;
        }
    }
    report.unknown_vertices.sort_unstable();
    report.unknown_vertices.dedup();
    // A lone set closes on itself: it is visited once with no entering edge.
    let lone = m == 1;
    report.visit_violations = (0..m)
        .filter(|&s| if lone { !touched[s] } else { entries[s] != 1 })
        .collect();
    report.degree_violations = (0..n).filter(|&v| indeg[v] != outdeg[v]).collect();
    let comps = set_components(inst, sel);
    if comps.len() > 1 {
        report.subtour_cuts = comps.into_iter().map(|sets| Cut { sets }).collect();
    }
    report
}

/// Checks a tour: one vertex per set, balanced degrees, a single connected
/// cycle, and a consistent length.
pub fn validate(inst: &GtspInstance, tour: &Tour) -> ValidationReport {
    let mut report = validate_selection(inst, &EdgeSelection::from_cycle(&tour.order));
    let mut hits = vec![0usize; inst.set_count()];
    for &v in &tour.order {
        if v < inst.vertex_count() {
            hits[inst.set_of(v)] += 1;
        }
    }
    for (s, &h) in hits.iter().enumerate() {
        if h != 1 && !report.visit_violations.contains(&s) {
            report.visit_violations.push(s);
        }
    }
    report.visit_violations.sort_unstable();
    if report.unknown_vertices.is_empty() {
        let actual = inst.cycle_length(&tour.order);
        if (actual - tour.length).abs() > 1e-9 * actual.abs().max(1.0) {
            report.length_mismatch = Some((tour.length, actual));
        }
    }
    report
}
