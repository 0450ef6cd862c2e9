//! Right-hand-side domains (lattices and finitely generated monoids), the
//! sets `S̄^(l) = span_Z(A_l, …, A_{n-1}) ∩ M` and the preorder `⪯_l`.

use std::collections::{HashMap, HashSet};

use num_traits::ToPrimitive;
use parking_lot::Mutex;

use crate::error::{Error, Result};
use crate::fiber::FiberEngine;
use crate::intlin::{min_coeff_in_coset, minimal_solutions, DioSystem, IntMat, IntVec, Lattice, VarSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhsKind {
    Lattice,
    Monoid,
}

/// Nonnegative (monoid) or integer (lattice) coefficients on the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidCoeffs {
    pub alpha: IntVec,
}

pub struct RhsContext {
    kind: RhsKind,
    gens: IntMat,
    /// The generated lattice; for monoids, the group they generate.
    group: Lattice,
    monoid: Option<FiberEngine>,
    memo: Mutex<HashMap<IntVec, bool>>,
}

impl RhsContext {
    /// Lattice spanned by the columns of `gens`.
    pub fn lattice(gens: IntMat) -> Self {
        RhsContext {
            kind: RhsKind::Lattice,
            group: Lattice::from_columns(&gens),
            gens,
            monoid: None,
            memo: Mutex::new(HashMap::new()),
        }
    }

    /// Monoid generated by the columns of `gens`.
    pub fn monoid(gens: IntMat) -> Self {
        RhsContext {
            kind: RhsKind::Monoid,
            group: Lattice::from_columns(&gens),
            monoid: Some(FiberEngine::new(gens.clone())),
            gens,
            memo: Mutex::new(HashMap::new()),
        }
    }

    /// The default domain: the lattice generated by the columns of `a`.
    pub fn column_lattice(a: &IntMat) -> Self {
        RhsContext::lattice(a.clone())
    }

    pub fn kind(&self) -> RhsKind {
        self.kind
    }

    pub fn is_lattice(&self) -> bool {
        self.kind == RhsKind::Lattice
    }

    pub fn gens(&self) -> &IntMat {
        &self.gens
    }

    pub fn dim(&self) -> usize {
        self.gens.rows()
    }

    pub fn member(&self, b: &IntVec) -> Result<Option<MonoidCoeffs>> {
        b.check_dim(self.dim())?;
        match &self.monoid {
            None => Ok(self.group.solve(b).map(|alpha| MonoidCoeffs { alpha })),
            Some(eng) => {
                if !self.group.contains(b) {
                    return Ok(None);
                }
                let t = self.gens.cols();
                match eng.min_reps(b, t, t) {
                    Ok(reps) => Ok(Some(MonoidCoeffs { alpha: reps.reps[0].clone() })),
                    Err(Error::EmptyFiber) => Ok(None),
                    Err(e) => Err(e),
                }
            }
        }
    }

    /// Membership without coefficients; memoized for monoids.
    pub fn contains(&self, b: &IntVec) -> bool {
        if b.dim() != self.dim() {
            return false;
        }
        if self.is_lattice() {
            return self.group.contains(b);
        }
        if let Some(&hit) = self.memo.lock().get(b) {
            return hit;
        }
        let r = matches!(self.member(b), Ok(Some(_)));
        self.memo.lock().insert(b.clone(), r);
        r
    }
}

/// `S̄^(l)` for a fixed engine and domain.
#[derive(Clone, Copy)]
pub struct SbarContext<'a> {
    pub level: usize,
    pub engine: &'a FiberEngine,
    pub ctx: &'a RhsContext,
}

impl<'a> SbarContext<'a> {
    pub fn new(engine: &'a FiberEngine, ctx: &'a RhsContext, level: usize) -> Self {
        SbarContext { level, engine, ctx }
    }

    pub fn member(&self, b: &IntVec) -> bool {
        self.engine.trailing_lattice(self.level).contains(b) && self.ctx.contains(b)
    }

    /// `b1 ⪯_l b2`, i.e. `b2 - b1 ∈ S̄^(l)`.
    pub fn preceq(&self, b1: &IntVec, b2: &IntVec) -> bool {
        self.member(&(b2 - b1))
    }

    /// Drops every `b` dominated by another element or by the implicit `0`;
    /// of mutually equivalent elements the first survives.
    pub fn filter(&self, set: Vec<IntVec>) -> Vec<IntVec> {
        let mut out: Vec<IntVec> = Vec::new();
        for (i, b) in set.iter().enumerate() {
            if b.is_zero() || self.member(b) {
                continue;
            }
            let dominated = set.iter().enumerate().any(|(j, c)| {
                j != i && c != b && self.preceq(c, b) && (j < i || !self.preceq(b, c))
            });
            if !dominated && !out.contains(b) {
                out.push(b.clone());
            }
        }
        out
    }
}

pub fn sbar_member(sctx: &SbarContext, b: &IntVec) -> bool {
    sctx.member(b)
}

pub fn preceq(sctx: &SbarContext, b1: &IntVec, b2: &IntVec) -> bool {
    sctx.preceq(b1, b2)
}

/// `b ∈ M^(k)`: in the domain and with nonempty `Q_b^(k)`.
pub fn in_mk(engine: &FiberEngine, ctx: &RhsContext, b: &IntVec, k: usize) -> Result<bool> {
    Ok(ctx.contains(b) && !engine.is_empty(b, k)?)
}

/// Monoid generators of `S̄^(l)`: images `Mα` of the minimal nonnegative `α`
/// with `Mα ∈ span_Z(A_{≥l})`.
pub fn sbar_generators(engine: &FiberEngine, ctx: &RhsContext, l: usize) -> Result<Vec<IntVec>> {
    let m = ctx.gens();
    let t = m.cols();
    let trailing = engine.matrix().col_range(l, engine.n());
    let neg = IntMat::from_columns(ctx.dim(), &trailing.columns().iter().map(|c| -c).collect::<Vec<_>>());
    let sys_mat = m.hcat(&neg);
    let mut spec = vec![VarSpec::NonNeg; t];
    spec.extend(vec![VarSpec::Free; trailing.cols()]);
    let sys = DioSystem::new(sys_mat, IntVec::zeros(ctx.dim()), spec)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for x in minimal_solutions(&sys)? {
        let alpha = IntVec::new(x.entries()[..t].to_vec());
        let s = m.mul_vec(&alpha);
        if !s.is_zero() && seen.insert(s.clone()) {
            out.push(s);
        }
    }
    out.sort_by(crate::rhs_order);
    Ok(out)
}

/// A finite `L ⊆ S̄^(k)` such that every `s ∈ S̄^(k)` has some `s' ∈ L` with
/// `s' ⪯_{k+1} s`.
///
/// With generators `h` of `S̄^(k)` and `c_h` the least positive multiple with
/// `c_h·h ∈ S̄^(k+1)`, every `s = Σ n_h h` differs from `Σ (n_h mod c_h) h` by
/// an element of `S̄^(k+1)`, so those residues form `L`.  When some `h` has no
/// such multiple, `S̄^(k+1)` has smaller rank and no finite `L` exists.
pub fn refine_cover(engine: &FiberEngine, ctx: &RhsContext, k: usize, budget: usize) -> Result<Vec<IntVec>> {
    if ctx.is_lattice() {
        return Err(Error::WrongDomain("monoid"));
    }
    if k >= engine.n() {
        return Err(Error::InvalidLevel { k, l: k + 1 });
    }
    let next = SbarContext::new(engine, ctx, k + 1);
    let basis = IntMat::from_columns(ctx.dim(), &engine.trailing_lattice(k + 1).basis());
    let mut residues: Vec<(IntVec, usize)> = Vec::new();
    let mut size: usize = 1;
    for h in sbar_generators(engine, ctx, k)? {
        if next.member(&h) {
            continue;
        }
        let hm = IntMat::from_columns(ctx.dim(), std::slice::from_ref(&h));
        let (c, _) = min_coeff_in_coset(&hm, 1, &basis)?.ok_or(Error::CoverTooLarge { budget })?;
        let c = c.to_usize().filter(|&c| c <= budget).ok_or(Error::CoverTooLarge { budget })?;
        size = size.checked_mul(c).filter(|&s| s <= budget).ok_or(Error::CoverTooLarge { budget })?;
        residues.push((h, c));
    }
    let mut cover = vec![IntVec::zeros(ctx.dim())];
    for (h, c) in residues {
        let mut grown = Vec::with_capacity(cover.len() * c);
        for base in &cover {
            let mut cur = base.clone();
            for _ in 0..c {
                grown.push(cur.clone());
                cur = &cur + &h;
            }
        }
        cover = grown;
    }
    let mut seen = HashSet::new();
    cover.retain(|s| seen.insert(s.clone()));
    // keep one representative per ⪯_{k+1} class, plus 0
    let mut out = vec![IntVec::zeros(ctx.dim())];
    out.extend(next.filter(cover));
    Ok(out)
}
