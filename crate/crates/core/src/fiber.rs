//! Partially extended fibers `Q_b^(k) = {z : Az = b, z_i ≥ 0 for i < k}`.
//!
//! Orders and projection levels count coordinates: `k = 0` is the extended
//! fiber, `k = n` the ordinary nonnegative fiber.  All queries go through a
//! [`FiberEngine`] that owns the matrix and memoizes minimal representatives.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use parking_lot::Mutex;

use crate::error::{Error, Result};
use crate::intlin::solve::{minimal_parts, FreeLift, Kind};
use crate::intlin::{IntMat, IntVec, Lattice};

/// `u ⊑_l v`: on the first `l` coordinates `u` and `v` never have opposite
/// signs and `|u_i| ≤ |v_i|`.
pub fn sq_leq(u: &IntVec, v: &IntVec, l: usize) -> bool {
    u.entries()[..l].iter().zip(&v.entries()[..l]).all(|(x, y)| {
        x.is_zero() || (x.signum() == y.signum() && x.magnitude() <= y.magnitude())
    })
}

/// A fiber `Q_b^(k)` of the engine's matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiberKey {
    pub b: IntVec,
    pub k: usize,
}

/// One representative per `π_l`-class of `⊑_l`-minimal elements of `Q_b^(k)`,
/// with canonical coordinates beyond `l`; sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinRepSet {
    pub key: FiberKey,
    pub l: usize,
    pub reps: Vec<IntVec>,
}

type Cached = std::result::Result<Arc<MinRepSet>, Error>;

pub struct FiberEngine {
    a: IntMat,
    cols: Vec<IntVec>,
    /// `span_Z(A_l, …, A_{n-1})` for `l = 0..=n`.
    trailing: Vec<Lattice>,
    free: Vec<FreeLift>,
    cache: Mutex<HashMap<(FiberKey, usize), Cached>>,
    homog_trivial: Mutex<HashMap<usize, bool>>,
}

impl FiberEngine {
    pub fn new(a: IntMat) -> Self {
        let d = a.rows();
        let n = a.cols();
        let cols = a.columns();
        let trailing = (0..=n).map(|l| Lattice::new(d, &cols[l..])).collect();
        let free = (0..=n).map(|l| FreeLift::new(d, &cols[l..])).collect();
        FiberEngine {
            a,
            cols,
            trailing,
            free,
            cache: Mutex::new(HashMap::new()),
            homog_trivial: Mutex::new(HashMap::new()),
        }
    }

    pub fn matrix(&self) -> &IntMat {
        &self.a
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn d(&self) -> usize {
        self.a.rows()
    }

    pub fn column(&self, j: usize) -> &IntVec {
        &self.cols[j]
    }

    /// The lattice spanned by the columns with index `≥ l`.
    pub fn trailing_lattice(&self, l: usize) -> &Lattice {
        &self.trailing[l]
    }

    pub fn column_lattice(&self) -> &Lattice {
        &self.trailing[0]
    }

    fn check(&self, b: &IntVec, k: usize, l: usize) -> Result<()> {
        b.check_dim(self.d())?;
        if k > l || l > self.n() {
            return Err(Error::InvalidLevel { k, l });
        }
        Ok(())
    }

    /// `R_{b,l}^(k)`. Errors with [`Error::EmptyFiber`] when the fiber is empty.
    pub fn min_reps(&self, b: &IntVec, k: usize, l: usize) -> Result<Arc<MinRepSet>> {
        self.check(b, k, l)?;
        let key = (FiberKey { b: b.clone(), k }, l);
        if let Some(hit) = self.cache.lock().get(&key) {
            return hit.clone();
        }
        let fresh = self.compute_min_reps(b, k, l).map(Arc::new);
        self.cache.lock().insert(key, fresh.clone());
        fresh
    }

    fn compute_min_reps(&self, b: &IntVec, k: usize, l: usize) -> Result<MinRepSet> {
        let key = FiberKey { b: b.clone(), k };
        let n = self.n();
        if b.is_zero() {
            return Ok(MinRepSet { key, l, reps: vec![IntVec::zeros(n)] });
        }
        if !self.trailing[0].contains(b) {
            return Err(Error::EmptyFiber);
        }
        let kinds: Vec<Kind> =
            (0..l).map(|i| if i < k { Kind::NONNEG } else { Kind::SIGNED }).collect();
        let parts = minimal_parts(self.d(), &self.cols[..l], &kinds, &self.cols[l..], b)
            .ok_or(Error::EmptyFiber)?;
        if parts.inhom.is_empty() {
            return Err(Error::EmptyFiber);
        }
        let reps = parts
            .inhom
            .into_iter()
            .map(|y| self.complete(b, y, l))
            .collect::<Vec<_>>();
        let mut reps = reps;
        reps.sort();
        Ok(MinRepSet { key, l, reps })
    }

    /// Extends the first `l` coordinates `y` to a canonical solution of `Az = b`.
    fn complete(&self, b: &IntVec, mut y: Vec<BigInt>, l: usize) -> IntVec {
        let mut rest = b.entries().to_vec();
        for (yi, col) in y.iter().zip(&self.cols) {
            if !yi.is_zero() {
                for (r, c) in rest.iter_mut().zip(col.entries()) {
                    *r -= yi * c;
                }
            }
        }
        let z = self.free[l].lift(&IntVec::new(rest)).expect("projected kernel element lifts");
        y.extend(z);
        IntVec::new(y)
    }

    pub fn is_empty(&self, b: &IntVec, k: usize) -> Result<bool> {
        self.check(b, k, k)?;
        if !self.trailing[0].contains(b) {
            return Ok(true);
        }
        match self.min_reps(b, k, k) {
            Ok(_) => Ok(false),
            Err(Error::EmptyFiber) => Ok(true),
            Err(e) => Err(e),
        }
    }

    /// `ω_m(Q_b^(k)) = min ‖π_m(v)‖₁` over the fiber.
    pub fn weight(&self, b: &IntVec, k: usize, m: usize) -> Result<BigInt> {
        let l = m.max(k);
        let reps = self.min_reps(b, k, l)?;
        Ok(reps.reps.iter().map(|v| v.l1_prefix(m)).min().expect("nonempty fiber"))
    }

    /// Whether `Az = 0` has only the trivial solution with `z_i ≥ 0` for `i < k`.
    pub fn homogeneous_trivial(&self, k: usize) -> bool {
        if let Some(&t) = self.homog_trivial.lock().get(&k) {
            return t;
        }
        let n = self.n();
        let kinds: Vec<Kind> =
            (0..n).map(|i| if i < k { Kind::NONNEG } else { Kind::SIGNED }).collect();
        let parts = minimal_parts(self.d(), &self.cols, &kinds, &[], &IntVec::zeros(self.d()))
            .expect("homogeneous systems are solvable");
        let t = parts.hom.is_empty();
        self.homog_trivial.lock().insert(k, t);
        t
    }

    pub fn is_finite(&self, b: &IntVec, k: usize) -> Result<bool> {
        self.check(b, k, k)?;
        Ok(self.homogeneous_trivial(k) || self.is_empty(b, k)?)
    }

    /// Every point of a finite fiber, sorted; empty fibers give an empty list.
    pub fn enumerate(&self, b: &IntVec, k: usize) -> Result<Vec<IntVec>> {
        self.check(b, k, k)?;
        if self.is_empty(b, k)? {
            return Ok(Vec::new());
        }
        if !self.homogeneous_trivial(k) {
            return Err(Error::InfiniteFiber);
        }
        // no nonzero homogeneous solution: every point is ⊑_n-minimal
        Ok(self.min_reps(b, k, self.n())?.reps.clone())
    }

    /// Number of cached minimal-representative sets.
    pub fn cache_len(&self) -> usize {
        self.cache.lock().len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tc() -> FiberEngine {
        FiberEngine::new(IntMat::from_i64(&[&[3, 2, 1, 0], &[0, 1, 2, 3]]))
    }

    fn v(x: &[i64]) -> IntVec {
        IntVec::from_i64(x)
    }

    fn set(xs: &[&[i64]]) -> Vec<IntVec> {
        let mut s: Vec<IntVec> = xs.iter().map(|x| v(x)).collect();
        s.sort();
        s
    }

    #[test]
    fn sq_leq_examples() {
        assert!(sq_leq(&v(&[0, 0]), &v(&[5, -3]), 2));
        assert!(sq_leq(&v(&[0, 1, 0, 1]), &v(&[0, 2, 0, 1]), 4));
        assert!(!sq_leq(&v(&[1, -1]), &v(&[1, 1]), 2));
        assert!(sq_leq(&v(&[1, -1]), &v(&[1, 1]), 1));
    }

    #[test]
    fn emptiness() {
        let e = tc();
        assert!(!e.is_empty(&v(&[0, 0]), 4).unwrap());
        assert!(!e.is_empty(&v(&[1, 5]), 4).unwrap());
        assert!(e.is_empty(&v(&[1, 0]), 0).unwrap());
        assert!(e.is_empty(&v(&[-3, 0]), 4).unwrap());
        assert!(!e.is_empty(&v(&[-3, 0]), 0).unwrap());
    }

    #[test]
    fn twisted_cubic_min_reps() {
        let e = tc();
        assert_eq!(e.min_reps(&v(&[0, 0]), 2, 3).unwrap().reps, set(&[&[0, 0, 0, 0]]));
        assert_eq!(e.min_reps(&v(&[2, 4]), 4, 4).unwrap().reps, set(&[&[0, 1, 0, 1], &[0, 0, 2, 0]]));
        assert_eq!(
            e.min_reps(&v(&[8, 7]), 4, 4).unwrap().reps,
            set(&[&[2, 1, 0, 2], &[2, 0, 2, 1], &[1, 1, 3, 0], &[1, 2, 1, 1], &[0, 4, 0, 1], &[0, 3, 2, 0]])
        );
        assert_eq!(e.min_reps(&v(&[1, 0]), 4, 4).unwrap_err(), Error::EmptyFiber);
        assert!(matches!(e.min_reps(&v(&[2, 4]), 3, 2), Err(Error::InvalidLevel { .. })));
    }

    #[test]
    fn weights() {
        let e = tc();
        assert_eq!(e.weight(&v(&[0, 0]), 4, 4).unwrap(), BigInt::zero());
        assert_eq!(e.weight(&v(&[2, 4]), 4, 4).unwrap(), BigInt::from(2));
        assert_eq!(e.weight(&v(&[0, 3]), 4, 4).unwrap(), BigInt::from(1));
        // the free last coordinate absorbs (0,3): weight over the first three is 0
        assert_eq!(e.weight(&v(&[0, 3]), 3, 3).unwrap(), BigInt::zero());
    }

    #[test]
    fn finiteness_and_enumeration() {
        let e = tc();
        assert!(e.is_finite(&v(&[6, 6]), 4).unwrap());
        assert!(!e.is_finite(&v(&[6, 6]), 0).unwrap());
        assert_eq!(
            e.enumerate(&v(&[6, 6]), 4).unwrap(),
            set(&[&[2, 0, 0, 2], &[0, 3, 0, 1], &[1, 1, 1, 1], &[1, 0, 3, 0], &[0, 2, 2, 0]])
        );
        assert_eq!(e.enumerate(&v(&[0, 0]), 4).unwrap(), set(&[&[0, 0, 0, 0]]));
        assert_eq!(e.enumerate(&v(&[6, 6]), 1).unwrap_err(), Error::InfiniteFiber);

        let diag = FiberEngine::new(IntMat::from_i64(&[&[1, -1]]));
        assert!(!diag.is_finite(&v(&[0]), 2).unwrap());
    }

    #[test]
    fn covering_property_on_extended_fiber() {
        // every point of a box slice of Q_b^(1) is dominated by a representative
        let e = tc();
        let b = v(&[5, 7]);
        let reps = e.min_reps(&b, 1, 3).unwrap();
        for x0 in 0..6i64 {
            for x1 in -6..7i64 {
                for x2 in -6..7i64 {
                    let r0 = 5 - 3 * x0 - 2 * x1 - x2;
                    let r1 = 7 - x1 - 2 * x2;
                    if r0 != 0 || r1 % 3 != 0 {
                        continue;
                    }
                    let z = v(&[x0, x1, x2, r1 / 3]);
                    assert!(reps.reps.iter().any(|r| sq_leq(r, &z, 3)), "{z:?} uncovered");
                }
            }
        }
    }

    #[test]
    fn cache_is_transparent() {
        let e = tc();
        let a = e.min_reps(&v(&[8, 7]), 2, 4).unwrap();
        let b = e.min_reps(&v(&[8, 7]), 2, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.reps, FiberEngine::new(e.matrix().clone()).min_reps(&v(&[8, 7]), 2, 4).unwrap().reps);
    }
}
