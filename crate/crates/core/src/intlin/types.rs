use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision integer vector. Ordering is lexicographic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntVec(Vec<BigInt>);

impl IntVec {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVec(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        IntVec(vec![BigInt::zero(); dim])
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        IntVec(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    /// Sum of absolute values of the first `m` entries.
    pub fn l1_prefix(&self, m: usize) -> BigInt {
        self.0[..m].iter().map(|x| x.abs()).sum()
    }

    pub fn prefix(&self, m: usize) -> IntVec {
        IntVec(self.0[..m].to_vec())
    }

    pub fn scaled(&self, c: &BigInt) -> IntVec {
        IntVec(self.0.iter().map(|x| x * c).collect())
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|x| x.to_i64()).collect()
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: self.dim() });
        }
        Ok(())
    }
}

impl Index<usize> for IntVec {
    type Output = BigInt;
    fn index(&self, i: usize) -> &BigInt {
        &self.0[i]
    }
}

impl<'a> Add<&'a IntVec> for &'a IntVec {
    type Output = IntVec;
    fn add(self, o: &IntVec) -> IntVec {
        debug_assert_eq!(self.dim(), o.dim());
        IntVec(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a IntVec> for &'a IntVec {
    type Output = IntVec;
    fn sub(self, o: &IntVec) -> IntVec {
        debug_assert_eq!(self.dim(), o.dim());
        IntVec(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntVec {
    type Output = IntVec;
    fn neg(self) -> IntVec {
        IntVec(self.0.iter().map(|a| -a).collect())
    }
}

impl From<Vec<i64>> for IntVec {
    fn from(v: Vec<i64>) -> Self {
        IntVec::from_i64(&v)
    }
}

impl fmt::Display for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", x)?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", x)?;
        }
        f.write_str(")")
    }
}

/// Dense row-major integer matrix. Columns are addressed 0-based.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::from(1));
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Vec<BigInt>>) -> Result<Self> {
        if entries.len() != rows {
            return Err(Error::DimensionMismatch { expected: rows, found: entries.len() });
        }
        let mut data = Vec::with_capacity(rows * cols);
        for r in entries {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend(r);
        }
        Ok(IntMat { rows, cols, data })
    }

    /// Convenience constructor for literals; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let d = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == n), "ragged matrix literal");
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| BigInt::from(x))).collect();
        IntMat { rows: d, cols: n, data }
    }

    pub fn from_columns(dim: usize, cols: &[IntVec]) -> Self {
        let mut m = IntMat::zeros(dim, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.dim(), dim);
            for i in 0..dim {
                m.set(i, j, c[i].clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> IntVec {
        IntVec::new((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn row(&self, i: usize) -> IntVec {
        IntVec::new(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn columns(&self) -> Vec<IntVec> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    /// The submatrix formed by the given columns, in the given order.
    pub fn select_cols(&self, idx: &[usize]) -> IntMat {
        let mut m = IntMat::zeros(self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                m.set(i, jj, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn col_range(&self, from: usize, to: usize) -> IntMat {
        let idx: Vec<usize> = (from..to).collect();
        self.select_cols(&idx)
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &IntVec) -> IntVec {
        assert_eq!(x.dim(), self.cols);
        IntVec::new(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| self.get(i, j) * &x[j]).sum())
                .collect(),
        )
    }

    pub fn mul(&self, o: &IntMat) -> IntMat {
        assert_eq!(self.cols, o.rows);
        let mut m = IntMat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let s: BigInt = (0..self.cols).map(|k| self.get(i, k) * o.get(k, j)).sum();
                m.set(i, j, s);
            }
        }
        m
    }

    pub fn hcat(&self, o: &IntMat) -> IntMat {
        assert_eq!(self.rows, o.rows);
        let mut m = IntMat::zeros(self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..o.cols {
                m.set(i, self.cols + j, o.get(i, j).clone());
            }
        }
        m
    }

    pub fn is_nonneg(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        f.write_str("]")
    }
}

/// Per-variable constraint of a [`DioSystem`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VarSpec {
    NonNeg,
    /// Projected out: neither sign-constrained nor compared.
    Free,
    /// Same sign as the value and magnitude at most its absolute value.
    SignBoundedBy(BigInt),
    /// Sign fixed (`+1` or `-1`), magnitude unbounded.
    FixedSignFree(i8),
    /// Any sign, but still compared by sign-compatible domination.
    Signed,
}

/// `A x = b` with per-variable constraints.
#[derive(Clone, Debug)]
pub struct DioSystem {
    pub a: IntMat,
    pub b: IntVec,
    pub varspec: Vec<VarSpec>,
}

impl DioSystem {
    pub fn new(a: IntMat, b: IntVec, varspec: Vec<VarSpec>) -> Result<Self> {
        b.check_dim(a.rows())?;
        if varspec.len() != a.cols() {
            return Err(Error::DimensionMismatch { expected: a.cols(), found: varspec.len() });
        }
        Ok(DioSystem { a, b, varspec })
    }

    pub fn nonneg(a: IntMat, b: IntVec) -> Result<Self> {
        let n = a.cols();
        DioSystem::new(a, b, vec![VarSpec::NonNeg; n])
    }

    /// Whether `x` solves the equations and respects every constraint.
    pub fn satisfies(&self, x: &IntVec) -> bool {
        if x.dim() != self.a.cols() || self.a.mul_vec(x) != self.b {
            return false;
        }
        self.varspec.iter().zip(x.entries()).all(|(s, v)| match s {
            VarSpec::NonNeg => !v.is_negative(),
            VarSpec::Free | VarSpec::Signed => true,
            VarSpec::SignBoundedBy(w) => {
                (v.is_zero() || v.signum() == w.signum()) && v.abs() <= w.abs()
            }
            VarSpec::FixedSignFree(s) => {
                if *s >= 0 {
                    !v.is_negative()
                } else {
                    !v.is_positive()
                }
            }
        })
    }
}
