//! Hermite and Smith normal forms, kernels and lattice membership.
//!
//! Column HNF convention: `H = M·U` is lower trapezoidal, the pivot of column
//! `r` sits in row `pivots[r]` (strictly increasing), pivots are positive, and
//! entries left of a pivot are reduced into `[0, pivot)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::types::{IntMat, IntVec};

pub(crate) type Col = Vec<BigInt>;

fn axpy(dst: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    // dst -= q * src
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

fn negate(v: &mut [BigInt]) {
    for x in v.iter_mut() {
        *x = -std::mem::take(x);
    }
}

pub(crate) struct ColumnHnf {
    /// Nonzero columns of H.
    pub h: Vec<Col>,
    /// Columns of U; the first `h.len()` correspond to `h`, the rest span the kernel.
    pub u: Vec<Col>,
    pub pivots: Vec<usize>,
}

pub(crate) fn column_hnf(rows: usize, cols: Vec<Col>) -> ColumnHnf {
    let n = cols.len();
    let mut m = cols;
    let mut u: Vec<Col> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for i in 0..rows {
        if r == n {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..n).filter(|&j| !m[j][i].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let j0 = *nz.iter().min_by_key(|&&j| m[j][i].abs()).unwrap();
            if nz.len() == 1 {
                m.swap(r, j0);
                u.swap(r, j0);
                if m[r][i].is_negative() {
                    negate(&mut m[r]);
                    negate(&mut u[r]);
                }
                let piv = m[r][i].clone();
                let (left, right) = m.split_at_mut(r);
                let (uleft, uright) = u.split_at_mut(r);
                for j in 0..r {
                    let q = left[j][i].div_floor(&piv);
                    if !q.is_zero() {
                        axpy(&mut left[j], &q, &right[0]);
                        axpy(&mut uleft[j], &q, &uright[0]);
                    }
                }
                pivots.push(i);
                r += 1;
                break;
            }
            let piv = m[j0][i].clone();
            let pc = m[j0].clone();
            let pu = u[j0].clone();
            for &j in &nz {
                if j != j0 {
                    let q = &m[j][i] / &piv;
                    axpy(&mut m[j], &q, &pc);
                    axpy(&mut u[j], &q, &pu);
                }
            }
        }
    }
    m.truncate(r);
    ColumnHnf { h: m, u, pivots }
}

/// Column Hermite normal form `H = M·U` with `U` unimodular.
pub fn hnf(m: &IntMat) -> (IntMat, IntMat) {
    let cols: Vec<Col> = m.columns().into_iter().map(IntVec::into_entries).collect();
    let res = column_hnf(m.rows(), cols);
    let n = m.cols();
    let mut h = IntMat::zeros(m.rows(), n);
    for (j, c) in res.h.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            h.set(i, j, x.clone());
        }
    }
    let mut u = IntMat::zeros(n, n);
    for (j, c) in res.u.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            u.set(i, j, x.clone());
        }
    }
    (h, u)
}

/// A basis of the integer kernel `{x : M x = 0}`, one vector per row.
pub fn kernel(m: &IntMat) -> Vec<IntVec> {
    let cols: Vec<Col> = m.columns().into_iter().map(IntVec::into_entries).collect();
    kernel_cols(m.rows(), cols).into_iter().map(IntVec::new).collect()
}

pub(crate) fn kernel_cols(rows: usize, cols: Vec<Col>) -> Vec<Col> {
    let res = column_hnf(rows, cols);
    let r = res.h.len();
    res.u.into_iter().skip(r).collect()
}

/// Row echelon form with respect to a coordinate processing order: each
/// returned row is zero on all coordinates processed before its pivot, the
/// pivot entry is positive, and pivot positions strictly increase.
pub(crate) fn echelon(mut rows: Vec<Col>, order: &[usize]) -> Vec<(usize, Col)> {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let mut out = Vec::new();
    for (pos, &c) in order.iter().enumerate() {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let i0 = *nz.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            if nz.len() == 1 {
                let mut r = rows.swap_remove(i0);
                if r[c].is_negative() {
                    negate(&mut r);
                }
                out.push((pos, r));
                break;
            }
            let piv = rows[i0][c].clone();
            let pr = rows[i0].clone();
            for &i in &nz {
                if i != i0 {
                    let q = &rows[i][c] / &piv;
                    axpy(&mut rows[i], &q, &pr);
                }
            }
        }
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        if rows.is_empty() {
            break;
        }
    }
    out
}

/// Reduces `v` modulo the lattice spanned by echelon rows so that every pivot
/// coordinate lands in `[0, pivot)`.
pub(crate) fn reduce_mod_echelon(v: &mut [BigInt], rows: &[(usize, Col)], order: &[usize]) {
    for (pos, r) in rows {
        let c = order[*pos];
        let q = v[c].div_floor(&r[c]);
        if !q.is_zero() {
            axpy(v, &q, r);
        }
    }
}

/// A lattice in `Z^dim` presented by its column HNF.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    h: Vec<Col>,
    pivots: Vec<usize>,
    /// Coefficients of each HNF column in terms of the original generators.
    u: Vec<Col>,
    ngens: usize,
}

impl Lattice {
    pub fn new(dim: usize, gens: &[IntVec]) -> Self {
        let cols: Vec<Col> = gens.iter().map(|g| g.entries().to_vec()).collect();
        let ngens = cols.len();
        let res = column_hnf(dim, cols);
        let r = res.h.len();
        let mut u = res.u;
        u.truncate(r);
        Lattice { dim, h: res.h, pivots: res.pivots, u, ngens }
    }

    pub fn from_columns(m: &IntMat) -> Self {
        Lattice::new(m.rows(), &m.columns())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.h.len()
    }

    pub fn basis(&self) -> Vec<IntVec> {
        self.h.iter().map(|c| IntVec::new(c.clone())).collect()
    }

    /// Coordinates of `b` with respect to the HNF basis, if `b` is a member.
    fn hnf_coords(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut rest = b.to_vec();
        let mut x = Vec::with_capacity(self.h.len());
        for (col, &p) in self.h.iter().zip(&self.pivots) {
            let (q, rem) = rest[p].div_rem(&col[p]);
            if !rem.is_zero() {
                return None;
            }
            if !q.is_zero() {
                axpy(&mut rest, &q, col);
            }
            x.push(q);
        }
        if rest.iter().all(Zero::is_zero) {
            Some(x)
        } else {
            None
        }
    }

    pub fn contains(&self, b: &IntVec) -> bool {
        b.dim() == self.dim && self.hnf_coords(b.entries()).is_some()
    }

    /// Integer coefficients on the original generators reproducing `b`.
    pub fn solve(&self, b: &IntVec) -> Option<IntVec> {
        if b.dim() != self.dim {
            return None;
        }
        let x = self.hnf_coords(b.entries())?;
        let mut lam = vec![BigInt::zero(); self.ngens];
        for (xi, ucol) in x.iter().zip(&self.u) {
            if xi.is_zero() {
                continue;
            }
            for (l, uv) in lam.iter_mut().zip(ucol) {
                *l += xi * uv;
            }
        }
        Some(IntVec::new(lam))
    }

    /// A short representative of `b` modulo the lattice: pivot rows are
    /// brought into the centered range `(-p/2, p/2]`. Members reduce to zero.
    pub fn reduce(&self, b: &IntVec) -> IntVec {
        let mut v = b.entries().to_vec();
        for (col, &p) in self.h.iter().zip(&self.pivots) {
            let piv = &col[p];
            let mut q = v[p].div_floor(piv);
            let rem = &v[p] - &q * piv;
            if &rem * 2 > *piv {
                q += 1;
            }
            if !q.is_zero() {
                axpy(&mut v, &q, col);
            }
        }
        IntVec::new(v)
    }

    /// Intersection with another lattice of the same dimension.
    pub fn intersect(&self, other: &Lattice) -> Lattice {
        let k1 = self.h.len();
        let mut cols: Vec<Col> = self.h.clone();
        for c in &other.h {
            cols.push(c.iter().map(|x| -x).collect());
        }
        let ker = kernel_cols(self.dim, cols);
        let gens: Vec<IntVec> = ker
            .iter()
            .map(|k| {
                let mut v = vec![BigInt::zero(); self.dim];
                for (coef, col) in k[..k1].iter().zip(&self.h) {
                    for (vi, ci) in v.iter_mut().zip(col) {
                        *vi += coef * ci;
                    }
                }
                IntVec::new(v)
            })
            .collect();
        Lattice::new(self.dim, &gens)
    }

    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        self.basis().iter().all(|b| other.contains(b))
    }
}

/// Membership of `b` in the integer column span of `gens`, with coefficients.
pub fn lattice_member(b: &IntVec, gens: &IntMat) -> crate::Result<Option<IntVec>> {
    b.check_dim(gens.rows())?;
    Ok(Lattice::from_columns(gens).solve(b))
}

/// Smith normal form `D = U·M·V` with unimodular `U`, `V`, nonnegative
/// diagonal and each diagonal entry dividing the next.
pub fn snf(m: &IntMat) -> (IntMat, IntMat, IntMat) {
    let (d, n) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = (0..d).map(|i| m.row(i).into_entries()).collect();
    let mut u: Vec<Vec<BigInt>> = (0..d)
        .map(|i| (0..d).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect();
    let mut v: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect();

    fn col_op(mat: &mut [Vec<BigInt>], dst: usize, q: &BigInt, src: usize) {
        for row in mat.iter_mut() {
            let s = row[src].clone();
            row[dst] -= q * s;
        }
    }
    fn col_swap(mat: &mut [Vec<BigInt>], a: usize, b: usize) {
        for row in mat.iter_mut() {
            row.swap(a, b);
        }
    }

    for t in 0..d.min(n) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..d {
                for j in t..n {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            u.swap(t, bi);
            col_swap(&mut a, t, bj);
            col_swap(&mut v, t, bj);

            let mut dirty = false;
            for i in t + 1..d {
                let q = &a[i][t] / &a[t][t];
                if !q.is_zero() {
                    let (top, bot) = a.split_at_mut(i);
                    axpy(&mut bot[0], &q, &top[t]);
                    let (ut, ub) = u.split_at_mut(i);
                    axpy(&mut ub[0], &q, &ut[t]);
                }
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..n {
                let q = &a[t][j] / &a[t][t];
                if !q.is_zero() {
                    col_op(&mut a, j, &q, t);
                    col_op(&mut v, j, &q, t);
                }
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            let piv = a[t][t].clone();
            let bad = (t + 1..d).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&piv)));
            if let Some(i) = bad {
                let minus_one = BigInt::from(-1);
                let (top, bot) = a.split_at_mut(i);
                axpy(&mut top[t], &minus_one, &bot[0]);
                let (ut, ub) = u.split_at_mut(i);
                axpy(&mut ut[t], &minus_one, &ub[0]);
                continue;
            }
            break;
        }
        if a[t][t].is_negative() {
            negate(&mut a[t]);
            negate(&mut u[t]);
        }
    }
    let to_mat = |rows: Vec<Vec<BigInt>>, r: usize, c: usize| {
        IntMat::from_rows(r, c, rows).expect("shape preserved")
    };
    (to_mat(a, d, n), to_mat(u, d, d), to_mat(v, n, n))
}
