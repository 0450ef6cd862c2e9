//! Project-and-lift completion for sign-compatibly minimal lattice vectors.
//!
//! Given a lattice `K ⊆ Z^m` (as echelon rows with respect to a processing
//! order), per-coordinate sign constraints and magnitude bounds, computes all
//! nonzero `v ∈ K` satisfying the constraints that are minimal under `⊑`
//! (same sign, smaller magnitude, coordinatewise).  Coordinates are added one
//! at a time; after step `j` the working set is the `⊑`-minimal set of the
//! projection of `K` onto the processed coordinates, lifted arbitrarily.
//! A lifting step adds the echelon row whose pivot is the new coordinate and
//! completes over critical pairs that are sign-compatible on the old
//! coordinates and of opposite sign on the new one.  Constraints on processed
//! coordinates truncate the search, since every needed summand is dominated by
//! a constrained target.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;

use super::scalar::{Overflow, Scalar};

pub(crate) struct LiftProblem<'a> {
    pub dim: usize,
    pub rows: &'a [(usize, Vec<BigInt>)],
    pub order: &'a [usize],
    pub nonneg: &'a [bool],
    pub bound: &'a [Option<BigInt>],
}

pub(crate) fn minimal_vectors(p: &LiftProblem) -> Vec<Vec<BigInt>> {
    match run::<i64>(p) {
        Ok(v) => v.into_iter().map(|e| e.iter().map(Scalar::to_big).collect()).collect(),
        Err(Overflow) => run::<BigInt>(p).expect("arbitrary precision cannot overflow"),
    }
}

#[derive(Clone, Debug)]
struct Elem<T> {
    v: Vec<T>,
    pos: u128,
    neg: u128,
}

impl<T: Scalar> Elem<T> {
    fn new(v: Vec<T>, processed: u128) -> Self {
        let mut e = Elem { v, pos: 0, neg: 0 };
        e.remask(processed);
        e
    }

    fn remask(&mut self, processed: u128) {
        self.pos = 0;
        self.neg = 0;
        let mut bits = processed;
        while bits != 0 {
            let c = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            self.set_bit(c);
        }
    }

    fn set_bit(&mut self, c: usize) {
        let b = 1u128 << c;
        if self.v[c].is_pos() {
            self.pos |= b;
        } else if self.v[c].is_neg() {
            self.neg |= b;
        }
    }

    fn support(&self) -> u128 {
        self.pos | self.neg
    }

    /// `self ⊑ s` on the processed coordinates.
    fn reduces(&self, s: &Elem<T>) -> bool {
        if self.pos & !s.pos != 0 || self.neg & !s.neg != 0 {
            return false;
        }
        let mut sup = self.support();
        while sup != 0 {
            let c = sup.trailing_zeros() as usize;
            sup &= sup - 1;
            if !self.v[c].abs_le(&s.v[c]) {
                return false;
            }
        }
        true
    }
}

fn add_vec<T: Scalar>(a: &[T], b: &[T]) -> Result<Vec<T>, Overflow> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

struct Step<'p, 'a> {
    p: &'p LiftProblem<'a>,
    processed: u128,
    old: u128,
    bit: u128,
    bounded_old: Vec<usize>,
}

impl Step<'_, '_> {
    /// Priority of the critical pair `f + g`, or `None` when the pair is not
    /// needed: no sign clash on the new coordinate, a clash on an old one, or
    /// an old bound violated by the sum.
    fn pair_key<T: Scalar>(&self, f: &Elem<T>, g: &Elem<T>) -> Result<Option<T>, Overflow> {
        let clash = (f.pos & g.neg) | (f.neg & g.pos);
        if clash & self.bit == 0 || clash & self.old != 0 {
            return Ok(None);
        }
        for &c in &self.bounded_old {
            let s = f.v[c].add(&g.v[c])?;
            if s.abs_gt_big(self.p.bound[c].as_ref().unwrap()) {
                return Ok(None);
            }
        }
        let mut norm = T::zero();
        let mut bits = self.processed;
        while bits != 0 {
            let c = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            norm = norm.add(&f.v[c].add(&g.v[c])?.abs_u()?)?;
        }
        Ok(Some(norm))
    }

    fn normal_form<T: Scalar>(&self, mut s: Elem<T>, set: &[Elem<T>]) -> Result<Option<Elem<T>>, Overflow> {
        'outer: loop {
            if s.support() == 0 {
                return Ok(None);
            }
            for h in set {
                if h.reduces(&s) {
                    let v: Result<Vec<T>, Overflow> =
                        s.v.iter().zip(&h.v).map(|(x, y)| x.sub(y)).collect();
                    s = Elem::new(v?, self.processed);
                    continue 'outer;
                }
            }
            return Ok(Some(s));
        }
    }
}

fn run<T: Scalar>(p: &LiftProblem) -> Result<Vec<Vec<T>>, Overflow> {
    assert!(p.dim <= 128, "at most 128 coordinates supported");
    let rows: Vec<(usize, Vec<T>)> = p
        .rows
        .iter()
        .map(|(pos, r)| Ok((*pos, r.iter().map(T::from_big).collect::<Result<Vec<T>, _>>()?)))
        .collect::<Result<_, Overflow>>()?;
    let mut next_row = 0;
    let mut elems: Vec<Elem<T>> = Vec::new();
    let mut processed: u128 = 0;

    for (j, &c) in p.order.iter().enumerate() {
        let old = processed;
        let bit = 1u128 << c;
        processed |= bit;
        for e in elems.iter_mut() {
            e.set_bit(c);
        }
        if next_row < rows.len() && rows[next_row].0 == j {
            let r = rows[next_row].1.clone();
            next_row += 1;
            let minus: Vec<T> = r.iter().map(|x| x.neg()).collect::<Result<_, _>>()?;
            elems.push(Elem::new(r, processed));
            elems.push(Elem::new(minus, processed));
        }

        let step = Step {
            p,
            processed,
            old,
            bit,
            bounded_old: (0..p.dim)
                .filter(|&i| old & (1u128 << i) != 0 && p.bound[i].is_some())
                .collect(),
        };

        let mut heap: BinaryHeap<Reverse<(T, usize, usize)>> = BinaryHeap::new();
        for a in 0..elems.len() {
            for b in a + 1..elems.len() {
                if let Some(k) = step.pair_key(&elems[a], &elems[b])? {
                    heap.push(Reverse((k, a, b)));
                }
            }
        }
        while let Some(Reverse((_, a, b))) = heap.pop() {
            let s = Elem::new(add_vec(&elems[a].v, &elems[b].v)?, processed);
            if let Some(s) = step.normal_form(s, &elems)? {
                let idx = elems.len();
                elems.push(s);
                for a in 0..idx {
                    if let Some(k) = step.pair_key(&elems[a], &elems[idx])? {
                        heap.push(Reverse((k, a, idx)));
                    }
                }
            }
        }

        elems.retain(|e| {
            !(p.nonneg[c] && e.v[c].is_neg())
                && !p.bound[c].as_ref().is_some_and(|bd| e.v[c].abs_gt_big(bd))
        });
        elems = minimalize(elems);
    }
    Ok(elems.into_iter().map(|e| e.v).collect())
}

fn minimalize<T: Scalar>(elems: Vec<Elem<T>>) -> Vec<Elem<T>> {
    let keep: Vec<bool> = (0..elems.len())
        .map(|i| {
            !(0..elems.len()).any(|j| {
                j != i
                    && elems[j].reduces(&elems[i])
                    && (j < i || !elems[i].reduces(&elems[j]))
            })
        })
        .collect();
    elems.into_iter().zip(keep).filter(|(_, k)| *k).map(|(e, _)| e).collect()
}

#[cfg(test)]
mod tests {
    use super::super::hnf::echelon;
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn solve(gens: &[&[i64]], order: &[usize], nonneg: &[bool], bound: &[Option<i64>]) -> Vec<Vec<i64>> {
        let rows = echelon(gens.iter().map(|g| big(g)).collect(), order);
        let bound: Vec<Option<BigInt>> = bound.iter().map(|b| b.map(BigInt::from)).collect();
        let p = LiftProblem { dim: order.len(), rows: &rows, order, nonneg, bound: &bound };
        let mut out: Vec<Vec<i64>> = minimal_vectors(&p)
            .into_iter()
            .map(|v| v.iter().map(|x| i64::try_from(x).unwrap()).collect())
            .collect();
        out.sort();
        out
    }

    #[test]
    fn graver_of_line() {
        // lattice spanned by (1,-1): Graver basis ±(1,-1)
        let out = solve(&[&[1, -1]], &[0, 1], &[false, false], &[None, None]);
        assert_eq!(out, vec![vec![-1, 1], vec![1, -1]]);
    }

    #[test]
    fn hilbert_basis_of_x1_plus_x2_eq_x3() {
        // kernel of [1 1 -1] restricted to the nonnegative orthant
        let out = solve(&[&[1, 0, 1], &[0, 1, 1]], &[0, 1, 2], &[true; 3], &[None; 3]);
        assert_eq!(out, vec![vec![0, 1, 1], vec![1, 0, 1]]);
    }

    #[test]
    fn graver_of_twisted_cubic_kernel() {
        // primitive partition identities of degree (1,2) ... well known 10 moves up to sign
        let out = solve(&[&[1, -2, 1, 0], &[0, 1, -2, 1]], &[0, 1, 2, 3], &[false; 4], &[None; 4]);
        assert!(out.contains(&vec![1, -2, 1, 0]));
        assert!(out.contains(&vec![1, -1, -1, 1]));
        assert!(out.contains(&vec![1, 0, -3, 2]));
        assert_eq!(out.len() % 2, 0);
        for v in &out {
            assert!(out.contains(&v.iter().map(|x| -x).collect()));
        }
    }
}
