//! Project-and-lift: atomic fibers of `A` with respect to a lattice or monoid
//! of right-hand sides, adding one sign constraint per step.
//!
//! Step `k = 1..n` refines the previous output for `⪯_k`, completes it over
//! fibers of order `k-1` under `⊕^(k)`, then intersects with order `k` and
//! drops reducible right-hand sides.  The zero right-hand side is the
//! implicit neutral element and never stored.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;

use crate::completion::{AtomicFiberSet, Provenance};
use crate::error::{Error, Result};
use crate::fiber::FiberEngine;
use crate::intlin::{min_coeff_in_coset, IntMat, IntVec, Lattice};
use crate::minkowski::restricted_sum_eq;
use crate::monoid::{refine_cover, sbar_generators, RhsContext, SbarContext};

#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Cap on candidates processed per completion; `None` is unbounded.
    pub budget: Option<usize>,
    /// Cap on the size of a monoid covering set.
    pub cover_budget: usize,
    /// Check pairwise `⪯_k`-incomparability after every phase.
    pub audit: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { budget: None, cover_budget: 1_000_000, audit: false }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StepTrace {
    pub k: usize,
    pub refined: usize,
    pub completed: usize,
    pub reduced: usize,
    pub candidates: usize,
    pub reductions: usize,
    /// The monoid covering set was infinite or over budget and generators of
    /// `S̄^(k-1)` were added instead.
    pub cover_fallback: bool,
    /// Pairs found comparable by the audit (always 0 when correct).
    pub audit_violations: usize,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub set: AtomicFiberSet,
    pub trace: Vec<StepTrace>,
}

/// Number of ordered pairs `b_i ≠ b_j` with `b_i ⪯ b_j`.
pub fn audit_incomparable(sctx: &SbarContext, set: &[IntVec]) -> usize {
    let mut bad = 0;
    for (i, a) in set.iter().enumerate() {
        for (j, b) in set.iter().enumerate() {
            if i != j && a != b && sctx.preceq(a, b) {
                bad += 1;
            }
        }
    }
    bad
}

pub struct Lifter<'a> {
    pub engine: &'a FiberEngine,
    pub ctx: &'a RhsContext,
    pub opts: RunOptions,
    candidates: usize,
    reductions: usize,
}

impl<'a> Lifter<'a> {
    pub fn new(engine: &'a FiberEngine, ctx: &'a RhsContext, opts: RunOptions) -> Self {
        Lifter { engine, ctx, opts, candidates: 0, reductions: 0 }
    }

    fn sbar(&self, l: usize) -> SbarContext<'a> {
        SbarContext::new(self.engine, self.ctx, l)
    }

    /// `Q_s^(k-1) = Q_g^(k-1) ⊕^(k) Q_{s-g}^(k-1)` with `s - g ∈ M^(k-1)`.
    fn reduces(&mut self, s: &IntVec, g: &IntVec, k: usize) -> Result<bool> {
        let rest = s - g;
        if rest.is_zero() {
            return Ok(true);
        }
        if !self.ctx.contains(&rest) || self.engine.is_empty(&rest, k - 1)? {
            return Ok(false);
        }
        let r = restricted_sum_eq(self.engine, g, &rest, k - 1, k)?;
        if r {
            self.reductions += 1;
        }
        Ok(r)
    }

    /// Zero if some element of `g1` reduces `s`; otherwise `s` reduced by
    /// `g0` for as long as possible.
    pub fn monoid_normal_form(&mut self, s: &IntVec, g0: &[IntVec], g1: &[IntVec], k: usize) -> Result<IntVec> {
        let zero = IntVec::zeros(s.dim());
        if s.is_zero() {
            return Ok(zero);
        }
        for g in g1 {
            if self.reduces(s, g, k)? {
                return Ok(zero);
            }
        }
        let mut s = s.clone();
        'outer: while !s.is_zero() {
            for g in g0 {
                if self.reduces(&s, g, k)? {
                    s = &s - g;
                    continue 'outer;
                }
            }
            break;
        }
        Ok(s)
    }

    fn tick(&mut self) -> Result<()> {
        self.candidates += 1;
        match self.opts.budget {
            Some(b) if self.candidates > b => Err(Error::BudgetExceeded { budget: b }),
            _ => Ok(()),
        }
    }

    /// Weight-stratified completion of step `k`, returning `G_{k-1}` without 0.
    pub fn lift_completion(&mut self, fbar: &[IntVec], k: usize) -> Result<Vec<IntVec>> {
        let engine = self.engine;
        let sk = self.sbar(k);
        let zero_weight = |f: &IntVec| engine.trailing_lattice(k - 1).contains(f);

        // weight zero: close under sums, keep what is not ⪯_k-trivial
        let mut gbar0: Vec<IntVec> = fbar.iter().filter(|f| zero_weight(f)).cloned().collect();
        let mut queue = VecDeque::new();
        let mut seen = HashSet::new();
        for i in 0..gbar0.len() {
            for j in i..gbar0.len() {
                let s = &gbar0[i] + &gbar0[j];
                if seen.insert(s.clone()) {
                    queue.push_back(s);
                }
            }
        }
        while let Some(s) = queue.pop_front() {
            self.tick()?;
            let f = self.monoid_normal_form(&s, &gbar0, &[], k)?;
            if f.is_zero() || sk.member(&f) || gbar0.contains(&f) {
                continue;
            }
            gbar0.push(f.clone());
            for g in &gbar0 {
                let t = &f + g;
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        let mut g0 = Vec::new();
        for b in &gbar0 {
            let mut keep = true;
            for g in &gbar0 {
                if g != b && self.reduces(b, g, k)? {
                    keep = false;
                    break;
                }
            }
            if keep {
                g0.push(b.clone());
            }
        }

        // positive weight: smallest weight first, ties lexicographic
        let mut g1: Vec<IntVec> = Vec::new();
        for f in fbar.iter().filter(|f| !zero_weight(f)) {
            let h = self.monoid_normal_form(f, &g0, &[], k)?;
            if !h.is_zero() && !sk.member(&h) && !g1.contains(&h) {
                g1.push(h);
            }
        }
        let mut pending: BTreeSet<(BigInt, IntVec)> = BTreeSet::new();
        let mut seen1 = HashSet::new();
        let mut push = |s: IntVec, pending: &mut BTreeSet<(BigInt, IntVec)>| -> Result<()> {
            if seen1.insert(s.clone()) {
                let w = engine.weight(&s, k - 1, k - 1)?;
                pending.insert((w, s));
            }
            Ok(())
        };
        for i in 0..g1.len() {
            for j in i..g1.len() {
                push(&g1[i] + &g1[j], &mut pending)?;
            }
            for g in &g0 {
                push(&g1[i] + g, &mut pending)?;
            }
        }
        while let Some((_, s)) = pending.pop_first() {
            self.tick()?;
            let f = self.monoid_normal_form(&s, &g0, &g1, k)?;
            if f.is_zero() || sk.member(&f) || g1.contains(&f) || g0.contains(&f) {
                continue;
            }
            g1.push(f.clone());
            for g in g0.iter().chain(g1.iter()) {
                push(&f + g, &mut pending)?;
            }
        }
        g0.extend(g1);
        Ok(g0)
    }

    /// Keeps `b` with nonempty `Q_b^(k)` that does not split as
    /// `Q_g^(k) ⊕^(k) Q_{b-g}^(k)` for another `g` in the set.
    pub fn intersect_reduce(&mut self, g: &[IntVec], k: usize) -> Result<Vec<IntVec>> {
        let engine = self.engine;
        let mut live = Vec::new();
        for b in g {
            if !b.is_zero() && !engine.is_empty(b, k)? {
                live.push(b.clone());
            }
        }
        let mut out = Vec::new();
        for b in &live {
            let mut keep = true;
            for h in &live {
                if h == b {
                    continue;
                }
                let rest = b - h;
                if rest.is_zero() || !self.ctx.contains(&rest) || engine.is_empty(&rest, k)? {
                    continue;
                }
                if restricted_sum_eq(engine, h, &rest, k, k)? {
                    keep = false;
                    break;
                }
            }
            if keep {
                out.push(b.clone());
            }
        }
        Ok(out)
    }

    /// Prepares `F_{k-1}` for step `k` in the lattice case: adds the
    /// representative `s` of the smallest positive multiple of `A_k` (1-based)
    /// that reaches the lattice modulo the later columns.
    pub fn refine_lattice(&mut self, f: &[IntVec], k: usize) -> Result<Vec<IntVec>> {
        let engine = self.engine;
        let mut out = f.to_vec();
        let Some((_, s)) = min_coeff_in_coset(engine.matrix(), k, self.ctx.gens())? else {
            return Ok(out);
        };
        let sbar_lat: Lattice = engine.trailing_lattice(k).intersect(&Lattice::from_columns(self.ctx.gens()));
        let s = sbar_lat.reduce(&s);
        let sk = self.sbar(k);
        if s.is_zero() || sk.member(&s) {
            return Ok(out);
        }
        let neg = -&s;
        let both = !sk.member(&(&neg - &s));
        for x in if both { vec![s, neg] } else { vec![s] } {
            if !out.contains(&x) {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// Monoid case: `⪯_k`-filtered `{b + s : b ∈ F_{k-1} ∪ {0}, s ∈ L}` with `L`
    /// covering `S̄^(k-1)`.  When no finite cover exists, the generators of
    /// `S̄^(k-1)` not already trivial at level `k` are added instead.
    pub fn refine_monoid(&mut self, f: &[IntVec], k: usize) -> Result<(Vec<IntVec>, bool)> {
        let engine = self.engine;
        let sk = self.sbar(k);
        match refine_cover(engine, self.ctx, k - 1, self.opts.cover_budget) {
            Ok(cover) => {
                let zero = IntVec::zeros(engine.d());
                let mut cand = Vec::new();
                for b in std::iter::once(&zero).chain(f.iter()) {
                    for s in &cover {
                        cand.push(b + s);
                    }
                }
                Ok((sk.filter(cand), false))
            }
            Err(Error::CoverTooLarge { .. }) => {
                let mut cand = f.to_vec();
                cand.extend(sbar_generators(engine, self.ctx, k - 1)?.into_iter().filter(|h| !sk.member(h)));
                Ok((sk.filter(cand), true))
            }
            Err(e) => Err(e),
        }
    }

    pub fn run(&mut self) -> Result<RunResult> {
        let n = self.engine.n();
        let mut f: Vec<IntVec> = Vec::new();
        let mut trace = Vec::with_capacity(n);
        for k in 1..=n {
            let (cand0, red0) = (self.candidates, self.reductions);
            let (fbar, fallback) = if self.ctx.is_lattice() {
                (self.refine_lattice(&f, k)?, false)
            } else {
                self.refine_monoid(&f, k)?
            };
            let g = self.lift_completion(&fbar, k)?;
            f = self.intersect_reduce(&g, k)?;
            let mut t = StepTrace {
                k,
                refined: fbar.len(),
                completed: g.len(),
                reduced: f.len(),
                candidates: self.candidates - cand0,
                reductions: self.reductions - red0,
                cover_fallback: fallback,
                audit_violations: 0,
            };
            if self.opts.audit {
                let sk = self.sbar(k);
                t.audit_violations = audit_incomparable(&sk, &fbar) + audit_incomparable(&sk, &g) + audit_incomparable(&sk, &f);
            }
            trace.push(t);
        }
        Ok(RunResult { set: AtomicFiberSet::for_engine(self.engine, n, f, Provenance::ProjectAndLift), trace })
    }
}

/// Atomic fibers of `A` over `ctx` (order `n`).
pub fn run(a: &IntMat, ctx: &RhsContext, opts: RunOptions) -> Result<RunResult> {
    let engine = FiberEngine::new(a.clone());
    run_with(&engine, ctx, opts)
}

pub fn run_with(engine: &FiberEngine, ctx: &RhsContext, opts: RunOptions) -> Result<RunResult> {
    if ctx.dim() != engine.d() {
        return Err(Error::DimensionMismatch { expected: engine.d(), found: ctx.dim() });
    }
    Lifter::new(engine, ctx, opts).run()
}
