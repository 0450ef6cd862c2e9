//! Convex hulls of nonnegative fibers, `P̃_b = conv(P_b)`, and the filter
//! that extracts atomic hulls from atomic fibers.
//!
//! Extreme points are found by exact linear programming: a point of a finite
//! set is a vertex of its hull iff it is not a convex combination of the
//! remaining points.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::completion::{AtomicFiberSet, Provenance};
use crate::error::{Error, Result};
use crate::fiber::FiberEngine;
use crate::intlin::IntVec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    /// Sorted extreme points.
    pub vertices: Vec<IntVec>,
    pub dim: usize,
}

impl LatticePolytope {
    pub fn from_points(dim: usize, points: &[IntVec]) -> Self {
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        let vertices = (0..pts.len())
            .filter(|&i| {
                let others: Vec<&IntVec> = pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p).collect();
                !in_hull(&pts[i], &others)
            })
            .map(|i| pts[i].clone())
            .collect();
        LatticePolytope { vertices, dim }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, p: &IntVec) -> bool {
        let vs: Vec<&IntVec> = self.vertices.iter().collect();
        self.vertices.contains(p) || in_hull(p, &vs)
    }

    /// Extreme points of the Minkowski sum.
    pub fn minkowski_sum(&self, o: &LatticePolytope) -> LatticePolytope {
        let sums: Vec<IntVec> = self.vertices.iter().flat_map(|v| o.vertices.iter().map(move |w| v + w)).collect();
        LatticePolytope::from_points(self.dim, &sums)
    }
}

fn q(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// `p ∈ conv(pts)`.
pub fn in_hull(p: &IntVec, pts: &[&IntVec]) -> bool {
    if pts.is_empty() {
        return false;
    }
    let n = p.dim();
    let mut rows: Vec<Vec<BigRational>> = (0..n).map(|i| pts.iter().map(|x| q(&x[i])).collect()).collect();
    let mut rhs: Vec<BigRational> = (0..n).map(|i| q(&p[i])).collect();
    rows.push(vec![BigRational::one(); pts.len()]);
    rhs.push(BigRational::one());
    phase_one_feasible(rows, rhs)
}

/// Decides `{x ≥ 0 : M x = c}` ≠ ∅ by the phase-one simplex method with
/// Bland's rule, in exact rational arithmetic.
fn phase_one_feasible(mut m: Vec<Vec<BigRational>>, mut c: Vec<BigRational>) -> bool {
    let r = m.len();
    let nv = m.first().map_or(0, |row| row.len());
    for i in 0..r {
        if c[i].is_negative() {
            c[i] = -c[i].clone();
            for x in &mut m[i] {
                *x = -x.clone();
            }
        }
    }
    // tableau [M | I | c], artificials are columns nv..nv+r
    let w = nv + r;
    let mut t: Vec<Vec<BigRational>> = (0..r)
        .map(|i| {
            let mut row = m[i].clone();
            row.extend((0..r).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row.push(c[i].clone());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (nv..w).collect();
    // reduced costs of minimizing the artificial sum; last entry is -objective
    let mut z: Vec<BigRational> = vec![BigRational::zero(); w + 1];
    for row in &t {
        for j in 0..nv {
            z[j] -= &row[j];
        }
        z[w] -= &row[w];
    }
    while let Some(col) = (0..w).find(|&j| z[j].is_negative()) {
        let mut pivot: Option<(usize, BigRational)> = None;
        for i in 0..r {
            if t[i][col].is_positive() {
                let ratio = &t[i][w] / &t[i][col];
                let better = match &pivot {
                    None => true,
                    Some((pi, pr)) => ratio < *pr || (ratio == *pr && basis[i] < basis[*pi]),
                };
                if better {
                    pivot = Some((i, ratio));
                }
            }
        }
        // phase one is bounded below by 0, so an entering column always has a pivot
        let (pi, _) = pivot.expect("phase one is bounded");
        let inv = t[pi][col].recip();
        for x in &mut t[pi] {
            *x *= &inv;
        }
        let prow = t[pi].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != pi && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x -= &f * y;
                }
            }
        }
        if !z[col].is_zero() {
            let f = z[col].clone();
            for (x, y) in z.iter_mut().zip(&prow) {
                *x -= &f * y;
            }
        }
        basis[pi] = col;
    }
    z[w].is_zero()
}

fn finite_points(engine: &FiberEngine, b: &IntVec) -> Result<Vec<IntVec>> {
    let n = engine.n();
    if !engine.is_finite(b, n)? {
        return Err(Error::InfiniteFiber);
    }
    let pts = engine.enumerate(b, n)?;
    if pts.is_empty() {
        return Err(Error::EmptyFiber);
    }
    Ok(pts)
}

/// Extreme points of `P̃_b`.
pub fn vertices(engine: &FiberEngine, b: &IntVec) -> Result<LatticePolytope> {
    b.check_dim(engine.d())?;
    let pts = finite_points(engine, b)?;
    Ok(LatticePolytope::from_points(engine.n(), &pts))
}

/// `P̃_b = P̃_g + P̃_{b-g}`.
pub fn polytope_minkowski_eq(engine: &FiberEngine, b: &IntVec, g: &IntVec) -> Result<bool> {
    let vb = vertices(engine, b)?;
    let vg = vertices(engine, g)?;
    let vr = vertices(engine, &(b - g))?;
    Ok(vb == vg.minkowski_sum(&vr))
}

/// Keeps nonzero `b ∈ F` unless `P̃_b = P̃_g + P̃_{b-g}` for some other `g ∈ F` whose
/// complement `b - g` has a nonempty finite fiber.
pub fn convex_atomic_filter(engine: &FiberEngine, f: &AtomicFiberSet) -> Result<AtomicFiberSet> {
    let n = engine.n();
    let mut out = Vec::new();
    for b in f.nonzero() {
        let mut reducible = false;
        for g in f.nonzero() {
            if g == b {
                continue;
            }
            let rest = b - g;
            if !engine.column_lattice().contains(&rest) || engine.is_empty(&rest, n)? || !engine.is_finite(&rest, n)? {
                continue;
            }
            if polytope_minkowski_eq(engine, b, g)? {
                reducible = true;
                break;
            }
        }
        if !reducible {
            out.push(b.clone());
        }
    }
    Ok(AtomicFiberSet::new(n, out, Provenance::ConvexFilter))
}
