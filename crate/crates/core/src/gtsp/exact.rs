//! Exact GTSP by enumerating cyclic set orders with layered shortest paths.
//!
//! The smallest set is fixed as the anchor. A depth-first search extends set
//! orders one set at a time; each node keeps, for every anchor vertex `s`,
//! the cheapest path cost from `s` to every vertex of the last set. Leaves
//! close the cycle back to `s`. Orders and their reversals describe the
//! same cycle, so only orders whose second set index is below the last are
//! completed.
//!
//! Pruning uses the triangle inequality: any completion that still has to
//! visit set `r` costs at least `min_{s,u∈r} path(s→u) + |u − s|`, and the
//! maximum of this over the remaining sets bounds the node. Ties keep the
//! first optimum found in the enumeration order, which is deterministic.

use alloc::vec;
use alloc::vec::Vec;

use super::{canonical_order, GtspInstance, Provenance, Tour};
use crate::error::{Error, Result};

/// Largest set count the enumeration accepts.
pub const MAX_EXACT_SETS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExactConfig {
    /// Abort with [`Error::WorkLimitExceeded`] after this many DP relaxations.
    pub work_limit: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactOutcome {
    pub tour: Tour,
    /// DP relaxations performed.
    pub work: u64,
}

pub fn exact_solve(inst: &GtspInstance) -> Result<Tour> {
    exact_solve_with(inst, &ExactConfig::default()).map(|o| o.tour)
}

pub fn exact_solve_with(inst: &GtspInstance, config: &ExactConfig) -> Result<ExactOutcome> {
    let m = inst.set_count();
    if m > MAX_EXACT_SETS {
        return Err(Error::InstanceTooLarge {
            max: MAX_EXACT_SETS,
            got: m,
        });
    }
    if m == 1 {
        let v = *inst.sets()[0].iter().min().expect("sets are non-empty");
        return Ok(ExactOutcome {
            tour: Tour {
                order: vec![v],
                length: 0.0,
                provenance: Provenance::Exact,
            },
            work: 0,
        });
    }

    let anchor = (0..m)
        .min_by_key(|&s| (inst.sets()[s].len(), s))
        .expect("at least one set");
    let mut search = Search::new(inst, anchor, config.work_limit);
    let ns = inst.sets()[anchor].len();
    // Depth 0: paths of length zero, encoded so that stepping to the first
    // set yields `cost[s][u] = |s − u|`.
    let mut root = vec![f64::INFINITY; ns * ns];
    for s in 0..ns {
        root[s * ns + s] = 0.0;
    }
    let remaining: u32 = (0..m).filter(|&s| s != anchor).fold(0, |acc, s| acc | 1 << s);
    search.stack.push(Layer {
        set: anchor,
        cost: root,
    });
    search.dfs(remaining, None)?;

    let (verts, length) = search.best.take().expect("a complete order is always reached");
    let order = canonical_order(inst, &verts);
    debug_assert!((inst.cycle_length(&order) - length).abs() <= 1e-9 * length.max(1.0));
    let length = inst.cycle_length(&order);
    Ok(ExactOutcome {
        tour: Tour {
            order,
            length,
            provenance: Provenance::Exact,
        },
        work: search.work,
    })
}

struct Layer {
    set: usize,
    /// `cost[s * |set| + v]`: cheapest path from anchor vertex `s` to vertex
    /// `v` of `set` through the sets on the stack.
    cost: Vec<f64>,
}

struct Search<'a> {
    inst: &'a GtspInstance,
    m: usize,
    anchor: usize,
    ns: usize,
    /// Row-major distance blocks between set pairs, `blocks[a * m + b]`.
    blocks: Vec<Vec<f64>>,
    stack: Vec<Layer>,
    best_len: f64,
    best: Option<(Vec<usize>, f64)>,
    work: u64,
    work_limit: Option<u64>,
}

struct Child {
    set: usize,
    cost: Vec<f64>,
    bound: f64,
}

impl<'a> Search<'a> {
    fn new(inst: &'a GtspInstance, anchor: usize, work_limit: Option<u64>) -> Self {
        let m = inst.set_count();
        let mut blocks = Vec::with_capacity(m * m);
        for a in 0..m {
            for b in 0..m {
                let sa = &inst.sets()[a];
                let sb = &inst.sets()[b];
                let mut blk = Vec::with_capacity(sa.len() * sb.len());
                for &u in sa {
                    for &v in sb {
                        blk.push(inst.cost(u, v));
                    }
                }
                blocks.push(blk);
            }
        }
        Self {
            inst,
            m,
            anchor,
            ns: inst.sets()[anchor].len(),
            blocks,
            stack: Vec::new(),
            best_len: f64::INFINITY,
            best: None,
            work: 0,
            work_limit,
        }
    }

    fn len(&self, set: usize) -> usize {
        self.inst.sets()[set].len()
    }

    fn block(&self, a: usize, b: usize) -> &[f64] {
        &self.blocks[a * self.m + b]
    }

    /// Extends the top layer by `next` and returns the new layer together
    /// with its closing bound `min_{s,u} cost[s][u] + |u − s|`.
    fn step(&mut self, next: usize) -> Result<Child> {
        let top = self.stack.last().expect("stack is never empty");
        let (last, nl, nr, ns) = (top.set, self.len(top.set), self.len(next), self.ns);
        self.work += (ns * nl * nr) as u64;
        if let Some(limit) = self.work_limit {
            if self.work > limit {
                return Err(Error::WorkLimitExceeded(limit));
            }
        }
        let blk = self.block(last, next);
        let mut cost = vec![f64::INFINITY; ns * nr];
        for s in 0..ns {
            let row = &mut cost[s * nr..(s + 1) * nr];
            for v in 0..nl {
                let base = top.cost[s * nl + v];
                if base == f64::INFINITY {
                    continue;
                }
                let brow = &blk[v * nr..(v + 1) * nr];
                for (dst, &c) in row.iter_mut().zip(brow) {
                    let cand = base + c;
                    if cand < *dst {
                        *dst = cand;
                    }
                }
            }
        }
        let close = self.block(next, self.anchor);
        let mut bound = f64::INFINITY;
        for s in 0..ns {
            for u in 0..nr {
                let c = cost[s * nr + u] + close[u * ns + s];
                if c < bound {
                    bound = c;
                }
            }
        }
        Ok(Child {
            set: next,
            cost,
            bound,
        })
    }

    fn dfs(&mut self, remaining: u32, first: Option<usize>) -> Result<()> {
        let mut children = Vec::new();
        let mut node_bound: f64 = 0.0;
        for r in 0..self.m {
            if remaining & (1 << r) == 0 {
                continue;
            }
            let child = self.step(r)?;
            node_bound = node_bound.max(child.bound);
            children.push(child);
        }
        if node_bound >= self.best_len {
            return Ok(());
        }
        children.sort_by(|a, b| a.bound.total_cmp(&b.bound).then(a.set.cmp(&b.set)));
        for child in children {
            if child.bound >= self.best_len {
                break;
            }
            let rest = remaining & !(1 << child.set);
            // Reversal symmetry: the last set must have a larger index than
            // the first one after the anchor.
            let first_here = first.unwrap_or(child.set);
            if rest == 0 {
                if first.is_some_and(|f| child.set < f) {
                    continue;
                }
            } else if ((31 - rest.leading_zeros()) as usize) < first_here {
                continue;
            }
            if rest == 0 {
                self.best_len = child.bound;
                self.stack.push(Layer {
                    set: child.set,
                    cost: child.cost,
                });
                let verts = self.reconstruct();
                self.stack.pop();
                self.best = Some((verts, child.bound));
            } else {
                self.stack.push(Layer {
                    set: child.set,
                    cost: child.cost,
                });
                let res = self.dfs(rest, Some(first_here));
                self.stack.pop();
                res?;
            }
        }
        Ok(())
    }

    /// Recovers the vertex sequence of the best cycle ending at the top layer.
    fn reconstruct(&self) -> Vec<usize> {
        let ns = self.ns;
        let top = self.stack.last().expect("leaf layer");
        let nr = self.len(top.set);
        let close = self.block(top.set, self.anchor);
        let (mut bs, mut bu, mut bc) = (0, 0, f64::INFINITY);
        for s in 0..ns {
            for u in 0..nr {
                let c = top.cost[s * nr + u] + close[u * ns + s];
                if c < bc {
                    (bs, bu, bc) = (s, u, c);
                }
            }
        }
        let depth = self.stack.len();
        let mut local = vec![0usize; depth];
        local[0] = bs;
        local[depth - 1] = bu;
        for level in (2..depth).rev() {
            let cur = &self.stack[level];
            let prev = &self.stack[level - 1];
            let (np, nc) = (self.len(prev.set), self.len(cur.set));
            let blk = self.block(prev.set, cur.set);
            let u = local[level];
            let target = cur.cost[bs * nc + u];
            let mut best_v = 0;
            let mut best_c = f64::INFINITY;
            for v in 0..np {
                let c = prev.cost[bs * np + v] + blk[v * nc + u];
                if c == target {
                    best_v = v;
                    break;
                }
                if c < best_c {
                    best_c = c;
                    best_v = v;
                }
            }
            local[level - 1] = best_v;
        }
        self.stack
            .iter()
            .zip(&local)
            .map(|(layer, &k)| self.inst.sets()[layer.set][k])
            .collect()
    }
}
