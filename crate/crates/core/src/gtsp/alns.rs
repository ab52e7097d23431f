//! Adaptive large neighbourhood search for the GTSP.
//!
//! Destroy/repair loop over set orders: drop a random fraction of the sets,
//! reinsert each at its cheapest (noise-perturbed) position and vertex,
//! re-pick every set's vertex optimally for the resulting cyclic order by a
//! layered shortest-path pass, then accept by simulated annealing.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{canonical_order, GtspInstance, Provenance, Tour};
use crate::geom;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlnsConfig {
    pub iterations: u64,
    /// Fraction of the sets removed per iteration (at least one).
    pub removal_fraction: f64,
    /// Insertion costs are multiplied by a factor uniform in `[1, 1 + noise]`.
    pub noise: f64,
    /// Starting temperature as a fraction of the initial tour length.
    pub initial_temperature: f64,
    /// Geometric cooling factor applied after every iteration.
    pub cooling: f64,
}

impl Default for AlnsConfig {
    fn default() -> Self {
        Self {
            iterations: 50_000,
            removal_fraction: 0.3,
            noise: 0.1,
            initial_temperature: 0.1,
            cooling: 0.9995,
        }
    }
}

impl AlnsConfig {
    pub fn with_iterations(iterations: u64) -> Self {
        Self {
            iterations,
            ..Self::default()
        }
    }
}

/// Set order plus the chosen vertex at each position.
#[derive(Debug, Clone)]
struct State {
    sets: Vec<usize>,
    verts: Vec<usize>,
    length: f64,
}

/// Instance view with a precomputed distance matrix.
struct Costs<'a> {
    inst: &'a GtspInstance,
    n: usize,
    matrix: Vec<f64>,
}

impl<'a> Costs<'a> {
    fn new(inst: &'a GtspInstance) -> Self {
        let n = inst.vertex_count();
        let mut matrix = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                matrix.push(inst.cost(a, b));
            }
        }
        Self { inst, n, matrix }
    }

    fn sets(&self) -> &'a [Vec<usize>] {
        self.inst.sets()
    }

    #[inline]
    fn cost(&self, a: usize, b: usize) -> f64 {
        self.matrix[a * self.n + b]
    }
}

pub fn alns_solve(instance: &GtspInstance, config: &AlnsConfig, seed: u64) -> Tour {
    let m = instance.set_count();
    let inst = &Costs::new(instance);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut rng);
    let mut verts = Vec::with_capacity(m);
    for (k, &s) in order.iter().enumerate() {
        let v = if k == 0 {
            *inst.sets()[s].iter().min().expect("sets are non-empty")
        } else {
            nearest_in(inst, s, verts[k - 1])
        };
        verts.push(v);
    }
    let mut current = State {
        sets: order,
        verts,
        length: 0.0,
    };
    reoptimize(inst, &mut current);
    let mut best = current.clone();

    if m > 1 {
        let mut temperature = config.initial_temperature * current.length;
        let remove = ((config.removal_fraction * m as f64) as usize).clamp(1, m - 1);
        let mut removed = Vec::with_capacity(remove);
        let mut memo = BTreeMap::new();
        for _ in 0..config.iterations {
            let mut cand = current.clone();
            removed.clear();
            for _ in 0..remove {
                let pos = rng.gen_range(0..cand.sets.len());
                removed.push(cand.sets.remove(pos));
                cand.verts.remove(pos);
            }
            removed.shuffle(&mut rng);
            for &s in &removed {
                insert_cheapest(inst, &mut cand, s, config.noise, &mut rng);
            }
            reoptimize_cached(inst, &mut cand, &mut memo);

            let accept = if cand.length <= current.length {
                true
            } else if temperature > 0.0 {
                let u: f64 = rng.gen();
                u < geom::exp(-(cand.length - current.length) / temperature)
            } else {
                false
            };
            if accept {
                current = cand;
                if current.length < best.length {
                    best = current.clone();
                }
            }
            temperature *= config.cooling;
        }
    }

    let order = canonical_order(instance, &best.verts);
    Tour {
        length: instance.cycle_length(&order),
        order,
        provenance: Provenance::Alns,
    }
}

fn nearest_in(inst: &Costs, set: usize, from: usize) -> usize {
    let mut best = inst.sets()[set][0];
    let mut best_c = f64::INFINITY;
    for &v in &inst.sets()[set] {
        let c = inst.cost(from, v);
        if c < best_c {
            best_c = c;
            best = v;
        }
    }
    best
}

fn insert_cheapest(inst: &Costs, st: &mut State, set: usize, noise: f64, rng: &mut ChaCha8Rng) {
    let n = st.sets.len();
    let mut best_pos = 0;
    let mut best_v = inst.sets()[set][0];
    let mut best_c = f64::INFINITY;
    for &v in &inst.sets()[set] {
        if n == 0 {
            // any vertex will do for an empty tour
            let c = 0.0;
            if c < best_c {
                best_c = c;
                best_v = v;
            }
            continue;
        }
        for pos in 0..n {
            let a = st.verts[pos];
            let b = st.verts[(pos + 1) % n];
            let delta = inst.cost(a, v) + inst.cost(v, b) - inst.cost(a, b);
            let factor = 1.0 + noise * rng.gen::<f64>();
            let c = delta * factor;
            if c < best_c {
                best_c = c;
                best_v = v;
                best_pos = pos + 1;
            }
        }
    }
    st.sets.insert(best_pos, set);
    st.verts.insert(best_pos, best_v);
}

/// Set orders already reoptimized, keyed by [`canonical_cycle`].
type Memo = BTreeMap<Vec<usize>, (f64, Vec<usize>)>;

/// Rotation and direction of a cyclic set order that is lexicographically
/// smallest. Costs are symmetric, so every variant has the same optimum.
fn canonical_cycle(sets: &[usize]) -> Vec<usize> {
    let n = sets.len();
    let start = (0..n).min_by_key(|&k| sets[k]).expect("non-empty order");
    let fwd: Vec<usize> = (0..n).map(|k| sets[(start + k) % n]).collect();
    let rev: Vec<usize> = (0..n).map(|k| sets[(start + n - k) % n]).collect();
    if rev < fwd {
        rev
    } else {
        fwd
    }
}

fn reoptimize_cached(inst: &Costs, st: &mut State, memo: &mut Memo) {
    if st.sets.len() <= 1 {
        reoptimize(inst, st);
        return;
    }
    let key = canonical_cycle(&st.sets);
    if let Some((length, verts)) = memo.get(&key) {
        st.sets = key;
        st.verts = verts.clone();
        st.length = *length;
        return;
    }
    st.sets = key.clone();
    reoptimize(inst, st);
    memo.insert(key, (st.length, st.verts.clone()));
}

/// Optimal vertex choice for the fixed cyclic set order. The layered
/// shortest-path pass is rooted at the smallest set and run from each of its
/// vertices at once.
fn reoptimize(inst: &Costs, st: &mut State) {
    let n = st.sets.len();
    if n <= 1 {
        st.length = 0.0;
        return;
    }
    let sets = inst.sets();
    let root = (0..n)
        .min_by_key(|&k| (sets[st.sets[k]].len(), k))
        .expect("non-empty order");
    let at = |k: usize| st.sets[(root + k) % n];
    let starts = &sets[at(0)];
    let ns = starts.len();
    // cost[s * |layer| + u]: cheapest path from start s to vertex u of the
    // current layer; back[k][s * |layer k| + u] is the predecessor index.
    let mut prev: &[usize] = starts;
    let mut cost = vec![f64::INFINITY; ns * ns];
    for s in 0..ns {
        cost[s * ns + s] = 0.0;
    }
    let mut back: Vec<Vec<u32>> = Vec::with_capacity(n);
    for k in 1..n {
        let layer = &sets[at(k)];
        let (np, nl) = (prev.len(), layer.len());
        let mut next = vec![f64::INFINITY; ns * nl];
        let mut bp = vec![0u32; ns * nl];
        for s in 0..ns {
            for (i, &v) in prev.iter().enumerate() {
                let base = cost[s * np + i];
                if base == f64::INFINITY {
                    continue;
                }
                for (j, &u) in layer.iter().enumerate() {
                    let c = base + inst.cost(v, u);
                    if c < next[s * nl + j] {
                        next[s * nl + j] = c;
                        bp[s * nl + j] = i as u32;
                    }
                }
            }
        }
        back.push(bp);
        cost = next;
        prev = layer;
    }
    let nl = prev.len();
    let (mut bs, mut bu, mut bc) = (0, 0, f64::INFINITY);
    for s in 0..ns {
        for (j, &u) in prev.iter().enumerate() {
            let c = cost[s * nl + j] + inst.cost(u, starts[s]);
            if c < bc {
                (bs, bu, bc) = (s, j, c);
            }
        }
    }
    let mut idx = bu;
    for k in (1..n).rev() {
        st.verts[(root + k) % n] = sets[at(k)][idx];
        let nl = sets[at(k)].len();
        idx = back[k - 1][bs * nl + idx] as usize;
    }
    st.verts[root] = starts[bs];
    st.length = bc;
}
