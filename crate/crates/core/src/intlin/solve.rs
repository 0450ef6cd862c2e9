//! Minimal solutions of linear diophantine systems with compared and free
//! variables.
//!
//! Variables split into *compared* ones (carrying an optional sign constraint
//! and magnitude bound, and ordered by `⊑`) and *free* ones that are
//! projected out.  Minimal compared parts come from the lift engine run on
//! the projection of the homogenized kernel; free parts are recovered by an
//! integer solve and brought to a canonical representative.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::hnf::{echelon, kernel_cols, reduce_mod_echelon, Col, Lattice};
use super::lift::{minimal_vectors, LiftProblem};
use super::types::IntVec;

#[derive(Clone, Debug)]
pub(crate) struct Kind {
    pub nonneg: bool,
    pub bound: Option<BigInt>,
}

impl Kind {
    pub const NONNEG: Kind = Kind { nonneg: true, bound: None };
    pub const SIGNED: Kind = Kind { nonneg: false, bound: None };
}

/// Canonical completion of free coordinates: solves `F z = r` and reduces `z`
/// modulo `ker F` into the fundamental domain of its echelon basis.
#[derive(Clone, Debug)]
pub(crate) struct FreeLift {
    lat: Lattice,
    ker: Vec<(usize, Col)>,
    order: Vec<usize>,
}

impl FreeLift {
    pub fn new(dim: usize, free_cols: &[IntVec]) -> Self {
        let q = free_cols.len();
        let cols: Vec<Col> = free_cols.iter().map(|c| c.entries().to_vec()).collect();
        let order: Vec<usize> = (0..q).collect();
        let ker = echelon(kernel_cols(dim, cols), &order);
        FreeLift { lat: Lattice::new(dim, free_cols), ker, order }
    }

    pub fn lift(&self, r: &IntVec) -> Option<Vec<BigInt>> {
        let mut z = self.lat.solve(r)?.into_entries();
        reduce_mod_echelon(&mut z, &self.ker, &self.order);
        Some(z)
    }
}

/// Minimal compared parts of `C y + F z = b`.
#[derive(Clone, Debug, Default)]
pub(crate) struct MinimalParts {
    /// `⊑`-minimal compared parts of solutions (just `0` when `b = 0`).
    pub inhom: Vec<Vec<BigInt>>,
    /// `⊑`-minimal nonzero compared parts of homogeneous solutions.
    pub hom: Vec<Vec<BigInt>>,
}

/// Processing order: homogenizing variable first, then bounded, then
/// sign-constrained, then the rest; constrained coordinates early keep the
/// truncated completion small.
fn processing_order(kinds: &[Kind], u: Option<usize>) -> Vec<usize> {
    let mut order: Vec<usize> = u.into_iter().collect();
    order.extend((0..kinds.len()).filter(|&i| kinds[i].bound.is_some()));
    order.extend((0..kinds.len()).filter(|&i| kinds[i].bound.is_none() && kinds[i].nonneg));
    order.extend((0..kinds.len()).filter(|&i| kinds[i].bound.is_none() && !kinds[i].nonneg));
    order
}

/// Returns `None` when the system has no integer solution at all (ignoring
/// sign constraints); the minimal set may still be empty otherwise.
pub(crate) fn minimal_parts(
    dim: usize,
    cmp: &[IntVec],
    kinds: &[Kind],
    free: &[IntVec],
    b: &IntVec,
) -> Option<MinimalParts> {
    let p = cmp.len();
    let homog = b.is_zero();
    let mut cols: Vec<Col> = cmp.iter().map(|c| c.entries().to_vec()).collect();
    if !homog {
        cols.push(b.entries().iter().map(|x| -x).collect());
    }
    cols.extend(free.iter().map(|c| c.entries().to_vec()));
    let width = if homog { p } else { p + 1 };
    let projected: Vec<Col> =
        kernel_cols(dim, cols).into_iter().map(|mut k| {
            k.truncate(width);
            k
        }).collect();

    let mut all_kinds: Vec<Kind> = kinds.to_vec();
    if !homog {
        all_kinds.push(Kind { nonneg: true, bound: Some(BigInt::one()) });
    }
    let order = processing_order(kinds, (!homog).then_some(p));
    let rows = echelon(projected, &order);

    if !homog {
        match rows.first() {
            Some((0, r)) if r[p].is_one() => {}
            _ => return None,
        }
    }

    let nonneg: Vec<bool> = all_kinds.iter().map(|k| k.nonneg).collect();
    let bound: Vec<Option<BigInt>> = all_kinds.iter().map(|k| k.bound.clone()).collect();
    let problem = LiftProblem { dim: width, rows: &rows, order: &order, nonneg: &nonneg, bound: &bound };
    let found = minimal_vectors(&problem);

    let mut out = MinimalParts::default();
    if homog {
        out.inhom.push(vec![BigInt::zero(); p]);
        out.hom = found;
    } else {
        for mut v in found {
            let u = v.pop().unwrap();
            if u.is_zero() {
                out.hom.push(v);
            } else {
                out.inhom.push(v);
            }
        }
    }
    out.inhom.sort();
    out.hom.sort();
    Some(out)
}
