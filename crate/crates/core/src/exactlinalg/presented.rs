use num_traits::Zero;

use super::{smith_dense, AbelianInvariants, DenseMatrix, IntScalar, SparseIntMatrix};

/// A finitely presented abelian group `Z^generators / span(relations)`.
///
/// Elements are integer vectors over the generators. [`reduce`](Self::reduce)
/// maps them to canonical coordinates in `Z/d_1 + ... + Z/d_k + Z^r`, which
/// makes equality decidable.
#[derive(Clone, Debug)]
pub struct PresentedModule<T: IntScalar> {
    relations: SparseIntMatrix<T>,
    /// row transform of the Smith form of `relations`
    u: DenseMatrix<T>,
    /// one entry per generator; zero means a free coordinate
    moduli: Vec<T>,
}

impl<T: IntScalar> PresentedModule<T> {
    /// `relations` has one row per generator and one column per relation.
    pub fn new(relations: SparseIntMatrix<T>) -> Self {
        let smith = smith_dense(&DenseMatrix::from_sparse(&relations), true);
        let mut moduli = smith.diagonal();
        moduli.resize(relations.rows(), T::zero());
        Self {
            u: smith.u.expect("transforms requested"),
            relations,
            moduli,
        }
    }

    pub fn free(generators: usize) -> Self {
        Self::new(SparseIntMatrix::zeros(generators, 0))
    }

    /// `Z/n` on one generator.
    pub fn cyclic(n: T) -> Self {
        let mut rel = SparseIntMatrix::zeros(1, 1);
        rel.set(0, 0, n);
        Self::new(rel)
    }

    pub fn generators(&self) -> usize {
        self.relations.rows()
    }

    pub fn relations(&self) -> &SparseIntMatrix<T> {
        &self.relations
    }

    /// Canonical coordinates: `(U v)_i mod d_i`, left untouched where `d_i = 0`.
    pub fn reduce(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.generators(), "element length");
        self.u
            .mul_vec(v)
            .into_iter()
            .zip(&self.moduli)
            .map(|(x, d)| if d.is_zero() { x } else { x.mod_floor(d) })
            .collect()
    }

    pub fn is_zero(&self, v: &[T]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn invariants(&self) -> AbelianInvariants<T> {
        AbelianInvariants::from_cyclic_orders(self.moduli.iter().cloned())
    }

    /// Presentation of the tensor product, on generator pairs `(i, j) -> i * n + j`.
    pub fn tensor(&self, other: &Self) -> Self {
        let (m, n) = (self.generators(), other.generators());
        let mut trip = Vec::new();
        let mut col = 0;
        for r in 0..self.relations.cols() {
            for j in 0..n {
                for (i, v) in self.relations.column(r) {
                    trip.push((i * n + j, col, v.clone()));
                }
                col += 1;
            }
        }
        for r in 0..other.relations.cols() {
            for i in 0..m {
                for (j, v) in other.relations.column(r) {
                    trip.push((i * n + j, col, v.clone()));
                }
                col += 1;
            }
        }
        Self::new(SparseIntMatrix::from_triplets(m * n, col, trip).expect("in range"))
    }

    /// Adds extra relations to the presentation.
    pub fn quotient(&self, extra: &SparseIntMatrix<T>) -> Self {
        Self::new(self.relations.hstack(extra))
    }
}

/// Kronecker product of coordinate vectors, matching [`PresentedModule::tensor`].
pub fn kron<T: IntScalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x.clone() * y.clone()))
        .collect()
}
