//! Exact integer linear algebra: normal forms, lattices and minimal solutions
//! of sign- and bound-constrained diophantine systems.

mod hnf;
mod lift;
pub(crate) mod scalar;
pub(crate) mod solve;
mod types;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub use hnf::{hnf, kernel, lattice_member, snf, Lattice};
pub use types::{DioSystem, IntMat, IntVec, VarSpec};

pub(crate) use hnf::{echelon, kernel_cols};

use crate::error::{Error, Result};
use solve::{minimal_parts, FreeLift, Kind};

/// The `⊑`-minimal solutions of `sys`, compared on every non-`Free`
/// coordinate, one per class modulo the free solution lattice (free
/// coordinates canonicalized).  For `b = 0` this is the Hilbert basis without
/// `0`; for `b ≠ 0` an unsolvable system yields [`Error::Infeasible`].
pub fn minimal_solutions(sys: &DioSystem) -> Result<Vec<IntVec>> {
    let a = &sys.a;
    let d = a.rows();
    // (variable, negated) for every compared variable
    let mut cmp: Vec<(usize, bool)> = Vec::new();
    let mut kinds = Vec::new();
    let mut free = Vec::new();
    for (j, spec) in sys.varspec.iter().enumerate() {
        match spec {
            VarSpec::NonNeg => {
                cmp.push((j, false));
                kinds.push(Kind::NONNEG);
            }
            VarSpec::Signed => {
                cmp.push((j, false));
                kinds.push(Kind::SIGNED);
            }
            VarSpec::FixedSignFree(s) => {
                cmp.push((j, *s < 0));
                kinds.push(Kind::NONNEG);
            }
            VarSpec::SignBoundedBy(v) if v.is_zero() => {}
            VarSpec::SignBoundedBy(v) => {
                cmp.push((j, v.is_negative()));
                kinds.push(Kind { nonneg: true, bound: Some(v.abs()) });
            }
            VarSpec::Free => free.push(j),
        }
    }
    let cmp_cols: Vec<IntVec> = cmp
        .iter()
        .map(|&(j, neg)| if neg { -&a.col(j) } else { a.col(j) })
        .collect();
    let free_cols: Vec<IntVec> = free.iter().map(|&j| a.col(j)).collect();

    let homog = sys.b.is_zero();
    let parts = minimal_parts(d, &cmp_cols, &kinds, &free_cols, &sys.b).ok_or(Error::Infeasible)?;
    let ys = if homog { parts.hom } else { parts.inhom };
    if !homog && ys.is_empty() {
        return Err(Error::Infeasible);
    }

    let lift = FreeLift::new(d, &free_cols);
    let mut out: Vec<IntVec> = ys
        .into_iter()
        .map(|y| {
            let mut x = vec![BigInt::zero(); a.cols()];
            let mut rest = sys.b.entries().to_vec();
            for (yi, (&(j, neg), col)) in y.iter().zip(cmp.iter().zip(&cmp_cols)) {
                x[j] = if neg { -yi } else { yi.clone() };
                for (r, c) in rest.iter_mut().zip(col.entries()) {
                    *r -= yi * c;
                }
            }
            let z = lift.lift(&IntVec::new(rest)).expect("kernel element lifts");
            for (zi, &j) in z.into_iter().zip(&free) {
                x[j] = zi;
            }
            IntVec::new(x)
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Smallest `λ > 0` such that `λ·A_k + Σ_{i>k} λ_i A_i` lies in the lattice
/// generated by the columns of `lattice_gens`, together with that vector.
/// `k` is 1-based.  `None` when only `λ = 0` is possible.
pub fn min_coeff_in_coset(a: &IntMat, k: usize, lattice_gens: &IntMat) -> Result<Option<(BigInt, IntVec)>> {
    let n = a.cols();
    if k == 0 || k > n {
        return Err(Error::InvalidLevel { k, l: n });
    }
    if lattice_gens.rows() != a.rows() {
        return Err(Error::DimensionMismatch { expected: a.rows(), found: lattice_gens.rows() });
    }
    let mut cols: Vec<Vec<BigInt>> = (k - 1..n).map(|j| a.col(j).into_entries()).collect();
    let width = cols.len();
    cols.extend(lattice_gens.columns().iter().map(|c| (-c).into_entries()));
    let mut ker = kernel_cols(a.rows(), cols);
    for r in ker.iter_mut() {
        r.truncate(width);
    }
    let order: Vec<usize> = (0..width).collect();
    let rows = echelon(ker, &order);
    match rows.first() {
        Some((0, r)) => {
            let mut s = IntVec::zeros(a.rows());
            for (j, coef) in r.iter().enumerate() {
                if !coef.is_zero() {
                    s = &s + &a.col(k - 1 + j).scaled(coef);
                }
            }
            Ok(Some((r[0].clone(), s)))
        }
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sols(a: &[&[i64]], b: &[i64], spec: Vec<VarSpec>) -> Result<Vec<Vec<i64>>> {
        let sys = DioSystem::new(IntMat::from_i64(a), IntVec::from_i64(b), spec)?;
        let out = minimal_solutions(&sys)?;
        for x in &out {
            assert!(sys.satisfies(x), "{x:?} does not solve the system");
        }
        Ok(out.iter().map(|x| x.to_i64().unwrap()).collect())
    }

    #[test]
    fn diagonal_hilbert_basis() {
        assert_eq!(sols(&[&[1, -1]], &[0], vec![VarSpec::NonNeg; 2]).unwrap(), vec![vec![1, 1]]);
    }

    #[test]
    fn x1_plus_x2_eq_x3() {
        assert_eq!(
            sols(&[&[1, 1, -1]], &[0], vec![VarSpec::NonNeg; 3]).unwrap(),
            vec![vec![0, 1, 1], vec![1, 0, 1]]
        );
    }

    #[test]
    fn twisted_cubic_fiber_2_4() {
        assert_eq!(
            sols(&[&[3, 2, 1, 0], &[0, 1, 2, 3]], &[2, 4], vec![VarSpec::NonNeg; 4]).unwrap(),
            vec![vec![0, 0, 2, 0], vec![0, 1, 0, 1]]
        );
    }

    #[test]
    fn infeasible_inhomogeneous() {
        let a: &[&[i64]] = &[&[3, 2, 1, 0], &[0, 1, 2, 3]];
        assert_eq!(sols(a, &[1, 0], vec![VarSpec::NonNeg; 4]), Err(Error::Infeasible));
        // solvable over Z but not over the orthant
        assert_eq!(sols(a, &[-3, 0], vec![VarSpec::NonNeg; 4]), Err(Error::Infeasible));
    }

    #[test]
    fn free_coordinates_are_canonical() {
        // x1 + x2 = 3 with x2 free: x1 is fixed only by minimality
        let out = sols(&[&[1, 1]], &[3], vec![VarSpec::NonNeg, VarSpec::Free]).unwrap();
        assert_eq!(out, vec![vec![0, 3]]);
        let out = sols(&[&[1, 2, 2]], &[3], vec![VarSpec::NonNeg, VarSpec::Free, VarSpec::Free]).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0][0], 1);
    }

    #[test]
    fn sign_bounded_and_fixed_sign() {
        // x1 + x2 = 0 with x1 ∈ [-2, 0], x2 of fixed positive sign
        let out = sols(
            &[&[1, 1]],
            &[0],
            vec![VarSpec::SignBoundedBy(BigInt::from(-2)), VarSpec::FixedSignFree(1)],
        )
        .unwrap();
        assert_eq!(out, vec![vec![-1, 1]]);
        // SignBoundedBy(0) pins the variable
        let out = sols(&[&[1, 1]], &[2], vec![VarSpec::SignBoundedBy(BigInt::zero()), VarSpec::NonNeg]).unwrap();
        assert_eq!(out, vec![vec![0, 2]]);
    }

    #[test]
    fn signed_graver_elements() {
        let out = sols(&[&[1, 1, 1]], &[0], vec![VarSpec::Signed; 3]).unwrap();
        assert_eq!(out.len(), 6);
    }

    #[test]
    fn min_coeff_examples() {
        let tc = IntMat::from_i64(&[&[3, 2, 1, 0], &[0, 1, 2, 3]]);
        let (l, s) = min_coeff_in_coset(&tc, 1, &tc).unwrap().unwrap();
        assert_eq!(l, BigInt::from(1));
        assert!(Lattice::from_columns(&tc).contains(&s));

        let a = IntMat::from_i64(&[&[2, 0]]);
        let (l, _) = min_coeff_in_coset(&a, 1, &IntMat::from_i64(&[&[1]])).unwrap().unwrap();
        assert_eq!(l, BigInt::from(1));
        let (l, s) = min_coeff_in_coset(&a, 1, &IntMat::from_i64(&[&[4]])).unwrap().unwrap();
        assert_eq!(l, BigInt::from(2));
        assert_eq!(s, IntVec::from_i64(&[4]));

        assert_eq!(min_coeff_in_coset(&a, 1, &IntMat::zeros(1, 0)).unwrap(), None);
        assert!(matches!(min_coeff_in_coset(&a, 3, &a), Err(Error::InvalidLevel { .. })));
    }

    /// All nonnegative solutions of `A x = b` for entrywise nonnegative `A`
    /// with nonzero columns; coordinates are bounded by `max b`.
    fn box_solutions(a: &[Vec<i64>], b: &[i64]) -> Vec<Vec<i64>> {
        let n = a[0].len();
        let bound = *b.iter().max().unwrap();
        let mut out = Vec::new();
        let mut x = vec![0i64; n];
        loop {
            if (0..a.len()).all(|i| (0..n).map(|j| a[i][j] * x[j]).sum::<i64>() == b[i]) {
                out.push(x.clone());
            }
            let mut j = 0;
            loop {
                if j == n {
                    return out;
                }
                x[j] += 1;
                if x[j] <= bound {
                    break;
                }
                x[j] = 0;
                j += 1;
            }
        }
    }

    fn minimal_of(sol: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let mut m: Vec<Vec<i64>> = sol
            .iter()
            .filter(|x| !sol.iter().any(|y| y != *x && y.iter().zip(x.iter()).all(|(a, b)| a <= b)))
            .cloned()
            .collect();
        m.sort();
        m
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn nonneg_systems_match_box_enumeration(
            d in 1usize..=2,
            n in 1usize..=4,
            seed in prop::collection::vec(0i64..=3, 8),
            b in prop::collection::vec(0i64..=6, 2),
        ) {
            let mut a: Vec<Vec<i64>> = (0..d).map(|i| seed[i * 4..i * 4 + n].to_vec()).collect();
            for j in 0..n {
                if (0..d).all(|i| a[i][j] == 0) {
                    a[0][j] = 1;
                }
            }
            let b = &b[..d];
            let rows: Vec<&[i64]> = a.iter().map(|r| r.as_slice()).collect();
            let expect = minimal_of(&box_solutions(&a, b));
            let got = sols(&rows, b, vec![VarSpec::NonNeg; n]);
            if b.iter().all(|&x| x == 0) {
                prop_assert_eq!(got.unwrap(), Vec::<Vec<i64>>::new());
            } else if expect.is_empty() {
                prop_assert_eq!(got, Err(Error::Infeasible));
            } else {
                prop_assert_eq!(got.unwrap(), expect);
            }
        }

        #[test]
        fn min_coeff_is_generator_of_feasible_coefficients(
            a0 in -6i64..=6, a1 in -6i64..=6, l0 in 1i64..=9,
        ) {
            let a = IntMat::from_i64(&[&[a0, a1]]);
            let lat = IntMat::from_i64(&[&[l0]]);
            let feasible = |lam: i64| (-20i64..=20).any(|m| (lam * a0 + m * a1) % l0 == 0);
            match min_coeff_in_coset(&a, 1, &lat).unwrap() {
                Some((g, s)) => {
                    let g = i64::try_from(&g).unwrap();
                    prop_assert!(g > 0 && feasible(g) && feasible(2 * g));
                    for smaller in 1..g {
                        prop_assert!(!feasible(smaller));
                    }
                    prop_assert_eq!(s.to_i64().unwrap()[0] % l0, 0);
                }
                None => prop_assert!(false, "a full-rank lattice always admits a positive coefficient"),
            }
        }
    }
}
