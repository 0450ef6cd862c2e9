//! The direct route over a lattice: completion for extended atomic fibers,
//! then filtering down to partially extended atomic fibers of a given order.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::fiber::FiberEngine;
use crate::intlin::IntVec;
use crate::minkowski::restricted_sum_eq;
use crate::rhs_order;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    ExtendedCompletion,
    RestrictToOrder,
    ProjectAndLift,
    ConvexFilter,
}

/// Right-hand sides of (candidate) atomic fibers of one order.  `0` is listed
/// only when `Q_0^(k) ≠ {0}`: such a fiber admits no nontrivial splitting and
/// is atomic in its own right, while `Q_0^(k) = {0}` is the neutral element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomicFiberSet {
    pub order: usize,
    pub rhs: Vec<IntVec>,
    pub provenance: Provenance,
}

impl AtomicFiberSet {
    pub fn new(order: usize, mut rhs: Vec<IntVec>, provenance: Provenance) -> Self {
        rhs.retain(|b| !b.is_zero());
        rhs.sort_by(rhs_order);
        rhs.dedup();
        AtomicFiberSet { order, rhs, provenance }
    }

    /// As [`AtomicFiberSet::new`], then adds `0` when `Q_0^(order)` is
    /// nontrivial.
    pub fn for_engine(engine: &FiberEngine, order: usize, rhs: Vec<IntVec>, provenance: Provenance) -> Self {
        let mut set = Self::new(order, rhs, provenance);
        if !engine.homogeneous_trivial(order) {
            set.rhs.insert(0, IntVec::zeros(engine.d()));
        }
        set
    }

    /// Right-hand sides other than `0`.
    pub fn nonzero(&self) -> impl Iterator<Item = &IntVec> {
        self.rhs.iter().filter(|b| !b.is_zero())
    }

    pub fn len(&self) -> usize {
        self.rhs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhs.is_empty()
    }
}

/// `Q_s = Q_g ⊕ Q_{s-g}` for extended fibers.
fn splits(engine: &FiberEngine, s: &IntVec, g: &IntVec) -> Result<bool> {
    let rest = s - g;
    if rest.is_zero() {
        return Ok(true);
    }
    if !engine.column_lattice().contains(&rest) {
        return Ok(false);
    }
    restricted_sum_eq(engine, g, &rest, 0, engine.n())
}

/// Reduces `s` by the first splitting reducer in `g` until none applies.
pub fn normal_form(engine: &FiberEngine, s: &IntVec, g: &[IntVec]) -> Result<IntVec> {
    let mut s = s.clone();
    'outer: while !s.is_zero() {
        for h in g {
            if !h.is_zero() && splits(engine, &s, h)? {
                s = &s - h;
                continue 'outer;
            }
        }
        break;
    }
    Ok(s)
}

/// The default input set `{±A_i}`.
pub fn default_generators(engine: &FiberEngine) -> Vec<IntVec> {
    let mut out = Vec::new();
    for j in 0..engine.n() {
        let c = engine.column(j).clone();
        if c.is_zero() {
            continue;
        }
        let m = -&c;
        for x in [c, m] {
            if !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

/// Completion over sums of pairs, FIFO with deduplication of candidates.
/// `budget` caps the number of processed candidates.
pub fn extended_atomic_fibers(engine: &FiberEngine, f: &[IntVec], budget: Option<usize>) -> Result<AtomicFiberSet> {
    let mut g: Vec<IntVec> = Vec::new();
    for x in f {
        x.check_dim(engine.d())?;
        if !x.is_zero() && !g.contains(x) {
            g.push(x.clone());
        }
    }
    let mut queue = VecDeque::new();
    let mut seen = HashSet::new();
    for i in 0..g.len() {
        for j in i..g.len() {
            let s = &g[i] + &g[j];
            if seen.insert(s.clone()) {
                queue.push_back(s);
            }
        }
    }
    let mut processed = 0usize;
    while let Some(s) = queue.pop_front() {
        processed += 1;
        if budget.is_some_and(|b| processed > b) {
            return Err(Error::BudgetExceeded { budget: budget.unwrap() });
        }
        let r = normal_form(engine, &s, &g)?;
        if r.is_zero() || g.contains(&r) {
            continue;
        }
        g.push(r.clone());
        for h in &g {
            let t = &r + h;
            if seen.insert(t.clone()) {
                queue.push_back(t);
            }
        }
    }
    Ok(AtomicFiberSet::for_engine(engine, 0, g, Provenance::ExtendedCompletion))
}

/// Keeps `b` with nonempty `Q_b^(k)` that admits no splitting
/// `Q_b^(k) = Q_g^(k) ⊕ Q_{b-g}^(k)` with `g ≠ b` from the set.
pub fn restrict_to_order(engine: &FiberEngine, g: &AtomicFiberSet, k: usize) -> Result<AtomicFiberSet> {
    let n = engine.n();
    let mut out = Vec::new();
    let live: Vec<&IntVec> = g
        .nonzero()
        .filter_map(|b| match engine.is_empty(b, k) {
            Ok(false) => Some(Ok(b)),
            Ok(true) => None,
            Err(e) => Some(Err(e)),
        })
        .collect::<Result<_>>()?;
    for b in &live {
        let mut reducible = false;
        for h in &live {
            if h == b {
                continue;
            }
            let rest = *b - *h;
            if rest.is_zero() || !engine.column_lattice().contains(&rest) || engine.is_empty(&rest, k)? {
                continue;
            }
            if restricted_sum_eq(engine, h, &rest, k, n)? {
                reducible = true;
                break;
            }
        }
        if !reducible {
            out.push((*b).clone());
        }
    }
    Ok(AtomicFiberSet::for_engine(engine, k, out, Provenance::RestrictToOrder))
}
