//! Exact integer linear algebra.
//!
//! Everything here is generic over an [`IntScalar`]: any signed integer type
//! from `num-traits`/`num-integer`. The workbench itself always instantiates
//! it with [`num_bigint::BigInt`]; fixed-width types are accepted for small
//! problems and for cross-checking.
//!
//! The main entry points are [`snf`], [`solve_integer`],
//! [`cokernel_invariants`] and [`kernel_basis`]. Large sparse systems go
//! through [`IntegerSystem`], which factors a matrix once and answers many
//! right-hand sides.

mod dense;
mod invariants;
mod matrix;
pub mod modular;
mod presented;
mod sparse;

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

pub use dense::{determinant, smith_dense, DenseMatrix, SnfResult};
pub use invariants::AbelianInvariants;
pub use matrix::SparseIntMatrix;
pub use presented::{kron, PresentedModule};
pub use sparse::{EliminationRing, IntegerSystem, Integers, UnitElimination};

/// Signed integer scalar usable by every exact routine in this crate.
pub trait IntScalar:
    Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Converts a machine integer. Panics only if the target type cannot hold it.
    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("integer does not fit scalar type")
    }

    /// True for `1` and `-1`.
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
}

impl<T> IntScalar for T where
    T: Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("entry ({row}, {col}) out of bounds for a {rows}x{cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("malformed matrix text: {0}")]
    Parse(String),
}

/// Smith normal form with unimodular transforms.
pub fn snf<T: IntScalar>(a: &SparseIntMatrix<T>) -> SnfResult<T> {
    smith_dense(&DenseMatrix::from_sparse(a), true)
}

/// Finds some integer `x` with `A x = b`, or `None` when no integer solution exists.
pub fn solve_integer<T: IntScalar>(
    a: &SparseIntMatrix<T>,
    b: &[T],
) -> Result<Option<Vec<T>>, LinalgError> {
    if b.len() != a.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.rows(),
            got: b.len(),
        });
    }
    Ok(IntegerSystem::factor(a, true).solve(b))
}

/// Isomorphism type of `Z^rows / image(A)`.
pub fn cokernel_invariants<T: IntScalar>(a: &SparseIntMatrix<T>) -> AbelianInvariants<T> {
    IntegerSystem::factor(a, false).cokernel()
}

/// Columns form a lattice basis of `{x : A x = 0}`.
pub fn kernel_basis<T: IntScalar>(a: &SparseIntMatrix<T>) -> SparseIntMatrix<T> {
    let res = smith_dense(&DenseMatrix::from_sparse(a), true);
    let rank = res.rank();
    let v = res.v.expect("transforms requested");
    let mut out = SparseIntMatrix::zeros(a.cols(), a.cols() - rank);
    for (k, j) in (rank..a.cols()).enumerate() {
        for i in 0..a.cols() {
            out.set(i, k, v.get(i, j).clone());
        }
    }
    out
}
