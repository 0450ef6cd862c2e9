//! Restricted Minkowski sums of fibers and greedy decomposition into atoms.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::fiber::{sq_leq, FiberEngine};
use crate::intlin::{minimal_solutions, DioSystem, IntVec, VarSpec};
use crate::monoid::RhsContext;

/// Some `w ∈ Q_{b1}^(k)` with `w ⊑_l v`, if one exists.
pub fn dominated_exists(engine: &FiberEngine, v: &IntVec, b1: &IntVec, k: usize, l: usize) -> Result<Option<IntVec>> {
    v.check_dim(engine.n())?;
    match engine.min_reps(b1, k, l) {
        // any dominated point dominates a minimal one of the same π_l class
        Ok(reps) => Ok(reps.reps.iter().find(|r| sq_leq(r, v, l)).cloned()),
        Err(Error::EmptyFiber) => Ok(None),
        Err(e) => Err(e),
    }
}

/// The same question posed as a single constrained diophantine system.
pub fn dominated_exists_direct(engine: &FiberEngine, v: &IntVec, b1: &IntVec, k: usize, l: usize) -> Result<Option<IntVec>> {
    v.check_dim(engine.n())?;
    if k > l || l > engine.n() {
        return Err(Error::InvalidLevel { k, l });
    }
    let spec: Vec<VarSpec> = (0..engine.n())
        .map(|i| {
            if i >= l {
                VarSpec::Free
            } else if i < k && v[i].is_negative() {
                VarSpec::SignBoundedBy(BigInt::zero())
            } else {
                VarSpec::SignBoundedBy(v[i].clone())
            }
        })
        .collect();
    let sys = DioSystem::new(engine.matrix().clone(), b1.clone(), spec)?;
    match minimal_solutions(&sys) {
        Ok(sols) => Ok(sols.into_iter().next()),
        Err(Error::Infeasible) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `Q_{b1+b2}^(k) = Q_{b1}^(k) ⊕^(l) Q_{b2}^(k)`, decided on the minimal
/// representatives of the sum fiber.
pub fn restricted_sum_eq(engine: &FiberEngine, b1: &IntVec, b2: &IntVec, k: usize, l: usize) -> Result<bool> {
    if engine.is_empty(b1, k)? || engine.is_empty(b2, k)? {
        return Err(Error::EmptySummand);
    }
    if b1.is_zero() || b2.is_zero() {
        return Ok(true);
    }
    let sum = b1 + b2;
    let target = engine.min_reps(&sum, k, l)?;
    let parts = engine.min_reps(b1, k, l)?;
    Ok(target.reps.iter().all(|v| parts.reps.iter().any(|r| sq_leq(r, v, l))))
}

/// `π_l(Q_b^(k)) = π_l(Q_0^(k))`; for `l ≥ k` this holds exactly when `b` is
/// an integer combination of the columns beyond `l`.
pub fn pi_trivial(engine: &FiberEngine, b: &IntVec, k: usize, l: usize) -> Result<bool> {
    b.check_dim(engine.d())?;
    if k > l || l > engine.n() {
        return Err(Error::InvalidLevel { k, l });
    }
    Ok(engine.trailing_lattice(l).contains(b))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub rhs: IntVec,
    /// Every atom in scan order with its multiplicity.
    pub atoms: Vec<(IntVec, usize)>,
    pub residual: IntVec,
    /// Set when the residual is neither zero nor itself an atom.
    pub incomplete: bool,
}

impl Decomposition {
    pub fn multiplicity(&self, atom: &IntVec) -> usize {
        self.atoms.iter().find(|(a, _)| a == atom).map_or(0, |(_, m)| *m)
    }
}

/// Greedy decomposition of `Q_b^(k)` over `atoms` in the given order.
pub fn decompose(engine: &FiberEngine, b: &IntVec, atoms: &[IntVec], k: usize, ctx: &RhsContext) -> Result<Decomposition> {
    b.check_dim(engine.d())?;
    let n = engine.n();
    let mut rest = b.clone();
    let mut out = Vec::with_capacity(atoms.len());
    for atom in atoms {
        let mut mult = 0;
        while !rest.is_zero() && !atom.is_zero() {
            let diff = &rest - atom;
            if !ctx.contains(&diff) || engine.is_empty(&diff, k)? || engine.is_empty(atom, k)? {
                break;
            }
            if !restricted_sum_eq(engine, atom, &diff, k, n)? {
                break;
            }
            rest = diff;
            mult += 1;
        }
        out.push((atom.clone(), mult));
    }
    let incomplete = !rest.is_zero() && !atoms.contains(&rest);
    Ok(Decomposition { rhs: b.clone(), atoms: out, residual: rest, incomplete })
}
