pub mod error;
pub mod completion;
pub mod convexfiber;
pub mod fiber;
pub mod intlin;
pub mod minkowski;
pub mod monoid;
pub mod projectlift;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Signed;

pub use error::{Error, Result};
pub use fiber::{sq_leq, FiberEngine, FiberKey, MinRepSet};
pub use intlin::{DioSystem, IntMat, IntVec, Lattice, VarSpec};
pub use minkowski::{decompose, dominated_exists, pi_trivial, restricted_sum_eq, Decomposition};
pub use monoid::{RhsContext, RhsKind, SbarContext};

/// Presentation order for right-hand sides: by `Σ|b_i|`, then lexicographically.
pub fn rhs_order(a: &IntVec, b: &IntVec) -> Ordering {
    let na: BigInt = a.entries().iter().map(|x| x.abs()).sum();
    let nb: BigInt = b.entries().iter().map(|x| x.abs()).sum();
    na.cmp(&nb).then_with(|| a.cmp(b))
}
