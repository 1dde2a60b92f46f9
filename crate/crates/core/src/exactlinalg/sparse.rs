//! Sparse elimination on unit pivots, followed by a dense Smith reduction of
//! whatever is left.
//!
//! Boundary matrices of bar complexes are extremely sparse and mostly made of
//! `±1` entries, so nearly all of the rank is found by cheap unit pivots. The
//! remaining block is usually tiny and handled by [`smith_dense`].

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Debug;
use std::marker::PhantomData;

use super::{smith_dense, AbelianInvariants, DenseMatrix, IntScalar, SnfResult, SparseIntMatrix};

/// The few ring operations needed by [`UnitElimination`].
pub trait EliminationRing {
    type Elem: Clone + Debug;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_unit(&self, a: &Self::Elem) -> bool;
    fn unit_inverse(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `a - b`
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
}

/// The integers, with elements of scalar type `T`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Integers<T>(PhantomData<T>);

impl<T: IntScalar> EliminationRing for Integers<T> {
    type Elem = T;
    fn is_zero(&self, a: &T) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &T) -> bool {
        a.is_unit()
    }
    fn unit_inverse(&self, a: &T) -> T {
        a.clone()
    }
    fn mul(&self, a: &T, b: &T) -> T {
        a.clone() * b.clone()
    }
    fn sub(&self, a: &T, b: &T) -> T {
        a.clone() - b.clone()
    }
    fn neg(&self, a: &T) -> T {
        -a.clone()
    }
}

#[derive(Clone, Debug)]
struct Pivot<E> {
    row: usize,
    col: usize,
    inverse: E,
}

/// `rhs[target] -= factor * rhs[source]`
#[derive(Clone, Debug)]
struct RowOp<E> {
    target: u32,
    source: u32,
    factor: E,
}

type Row<E> = Vec<(u32, E)>;

/// Result of eliminating every unit pivot the Markowitz-style search can find.
///
/// Pivots are taken column by column: the live column with the fewest
/// nonzeros first (lowest index on ties), and inside it the unit entry whose
/// row is shortest (lowest row on ties). Only row operations are performed;
/// they are logged so that right-hand sides can be replayed later.
#[derive(Clone, Debug)]
pub struct UnitElimination<R: EliminationRing> {
    ring: R,
    nrows: usize,
    ncols: usize,
    rows: Vec<Row<R::Elem>>,
    pivots: Vec<Pivot<R::Elem>>,
    ops: Vec<RowOp<R::Elem>>,
    pivot_row: Vec<bool>,
    pivot_col: Vec<bool>,
}

impl<R: EliminationRing> UnitElimination<R> {
    /// `columns[j]` lists the nonzero `(row, value)` entries of column `j`.
    pub fn run(ring: R, nrows: usize, columns: &[Vec<(u32, R::Elem)>]) -> Self {
        let ncols = columns.len();
        let mut rows: Vec<Row<R::Elem>> = vec![Vec::new(); nrows];
        let mut col_rows: Vec<Vec<u32>> = Vec::with_capacity(ncols);
        let mut col_count: Vec<u32> = Vec::with_capacity(ncols);
        for (j, col) in columns.iter().enumerate() {
            let mut members = Vec::with_capacity(col.len());
            for (i, v) in col {
                if !ring.is_zero(v) {
                    rows[*i as usize].push((j as u32, v.clone()));
                    members.push(*i);
                }
            }
            col_count.push(members.len() as u32);
            col_rows.push(members);
        }
        // columns were visited in order, so every row is already sorted

        let mut st = Self {
            ring,
            nrows,
            ncols,
            rows,
            pivots: Vec::new(),
            ops: Vec::new(),
            pivot_row: vec![false; nrows],
            pivot_col: vec![false; ncols],
        };

        let mut heap: BinaryHeap<Reverse<(u32, u32)>> = (0..ncols)
            .filter(|&j| col_count[j] > 0)
            .map(|j| Reverse((col_count[j], j as u32)))
            .collect();
        let mut deferred: Vec<u32> = Vec::new();
        loop {
            while let Some(Reverse((cnt, c))) = heap.pop() {
                let cu = c as usize;
                if st.pivot_col[cu] || col_count[cu] == 0 {
                    continue;
                }
                if cnt != col_count[cu] {
                    heap.push(Reverse((col_count[cu], c)));
                    continue;
                }
                let live = st.live_rows(cu, &mut col_rows[cu]);
                let choice = live
                    .iter()
                    .filter(|&&r| {
                        let e = st.entry(r as usize, c).expect("live row has entry");
                        st.ring.is_unit(e)
                    })
                    .min_by_key(|&&r| (st.rows[r as usize].len(), r))
                    .copied();
                match choice {
                    Some(r) => st.pivot(r as usize, cu, &live, &mut col_rows, &mut col_count),
                    None => deferred.push(c),
                }
            }
            // entries of deferred columns may have become units through fill-in
            let revived: Vec<u32> = deferred
                .iter()
                .copied()
                .filter(|&c| {
                    let cu = c as usize;
                    !st.pivot_col[cu]
                        && col_count[cu] > 0
                        && col_rows[cu].iter().any(|&r| {
                            !st.pivot_row[r as usize]
                                && st.entry(r as usize, c).is_some_and(|e| st.ring.is_unit(e))
                        })
                })
                .collect();
            if revived.is_empty() {
                break;
            }
            deferred.retain(|c| !revived.contains(c));
            heap.extend(revived.into_iter().map(|c| Reverse((col_count[c as usize], c))));
        }
        st
    }

    fn entry(&self, r: usize, c: u32) -> Option<&R::Elem> {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |e| e.0).ok().map(|k| &row[k].1)
    }

    fn live_rows(&self, c: usize, members: &mut Vec<u32>) -> Vec<u32> {
        members.sort_unstable();
        members.dedup();
        members.retain(|&r| !self.pivot_row[r as usize] && self.entry(r as usize, c as u32).is_some());
        members.clone()
    }

    fn pivot(&mut self, r: usize, c: usize, live: &[u32], col_rows: &mut [Vec<u32>], col_count: &mut [u32]) {
        let pivot_val = self.entry(r, c as u32).expect("pivot entry").clone();
        let inverse = self.ring.unit_inverse(&pivot_val);
        let source = std::mem::take(&mut self.rows[r]);
        for &t in live {
            let t = t as usize;
            if t == r {
                continue;
            }
            let a_tc = self.entry(t, c as u32).expect("live row").clone();
            let factor = self.ring.mul(&a_tc, &inverse);
            let target = std::mem::take(&mut self.rows[t]);
            let merged = self.merge(&target, &source, &factor, t as u32, col_rows, col_count);
            self.rows[t] = merged;
            self.ops.push(RowOp {
                target: t as u32,
                source: r as u32,
                factor,
            });
        }
        for (j, _) in &source {
            col_count[*j as usize] = col_count[*j as usize].saturating_sub(1);
        }
        col_count[c] = 0;
        self.rows[r] = source;
        self.pivot_row[r] = true;
        self.pivot_col[c] = true;
        self.pivots.push(Pivot { row: r, col: c, inverse });
    }

    /// `target - factor * source`, keeping column bookkeeping in sync.
    fn merge(
        &self,
        target: &Row<R::Elem>,
        source: &Row<R::Elem>,
        factor: &R::Elem,
        t: u32,
        col_rows: &mut [Vec<u32>],
        col_count: &mut [u32],
    ) -> Row<R::Elem> {
        let mut out = Vec::with_capacity(target.len() + source.len());
        let (mut i, mut k) = (0, 0);
        while i < target.len() || k < source.len() {
            let tj = target.get(i).map(|e| e.0);
            let sj = source.get(k).map(|e| e.0);
            match (tj, sj) {
                (Some(a), Some(b)) if a == b => {
                    let v = self.ring.sub(&target[i].1, &self.ring.mul(factor, &source[k].1));
                    if self.ring.is_zero(&v) {
                        col_count[a as usize] -= 1;
                    } else {
                        out.push((a, v));
                    }
                    i += 1;
                    k += 1;
                }
                (Some(a), b) if b.is_none_or(|b| a < b) => {
                    out.push(target[i].clone());
                    i += 1;
                }
                (_, Some(b)) => {
                    let v = self.ring.neg(&self.ring.mul(factor, &source[k].1));
                    if !self.ring.is_zero(&v) {
                        out.push((b, v));
                        col_count[b as usize] += 1;
                        col_rows[b as usize].push(t);
                    }
                    k += 1;
                }
                _ => unreachable!(),
            }
        }
        out
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn pivot_count(&self) -> usize {
        self.pivots.len()
    }

    /// Columns used as pivots, in elimination order.
    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.iter().map(|p| p.col)
    }

    /// Rows that were not used as pivots, with their surviving entries.
    /// Empty rows are included so callers can see zero constraints.
    pub fn residual_rows(&self) -> impl Iterator<Item = (usize, &[(u32, R::Elem)])> + '_ {
        (0..self.nrows)
            .filter(|&i| !self.pivot_row[i])
            .map(|i| (i, self.rows[i].as_slice()))
    }

    /// Applies the logged row operations to a right-hand side in place.
    pub fn replay(&self, rhs: &mut [R::Elem]) {
        assert_eq!(rhs.len(), self.nrows, "rhs length");
        for op in &self.ops {
            let s = &rhs[op.source as usize];
            if self.ring.is_zero(s) {
                continue;
            }
            let v = self.ring.sub(&rhs[op.target as usize], &self.ring.mul(&op.factor, s));
            rhs[op.target as usize] = v;
        }
    }

    /// Fills in the pivot variables of `x`, whose other coordinates must
    /// already hold a solution of the residual system. `rhs` must be replayed.
    pub fn back_substitute(&self, rhs: &[R::Elem], x: &mut [R::Elem]) {
        for p in self.pivots.iter().rev() {
            let mut acc = rhs[p.row].clone();
            for (j, v) in &self.rows[p.row] {
                if *j as usize != p.col {
                    acc = self.ring.sub(&acc, &self.ring.mul(v, &x[*j as usize]));
                }
            }
            x[p.col] = self.ring.mul(&p.inverse, &acc);
        }
    }
}

/// Sparse integer combination of columns, sorted by column.
type Combination<T> = Vec<(usize, T)>;

/// `a x + b y` for sorted sparse combinations.
fn combine<T: IntScalar>(a: &T, x: &Combination<T>, b: &T, y: &Combination<T>) -> Combination<T> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut k) = (0, 0);
    while i < x.len() || k < y.len() {
        let (col, v) = match (x.get(i), y.get(k)) {
            (Some(p), Some(q)) if p.0 == q.0 => {
                i += 1;
                k += 1;
                (p.0, a.clone() * p.1.clone() + b.clone() * q.1.clone())
            }
            (Some(p), q) if q.is_none_or(|q| p.0 < q.0) => {
                i += 1;
                (p.0, a.clone() * p.1.clone())
            }
            (_, Some(q)) => {
                k += 1;
                (q.0, b.clone() * q.1.clone())
            }
            _ => unreachable!(),
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    out
}

fn combine_dense<T: IntScalar>(a: &T, x: &[T], b: &T, y: &[T]) -> Vec<T> {
    x.iter()
        .zip(y)
        .map(|(p, q)| a.clone() * p.clone() + b.clone() * q.clone())
        .collect()
}

/// Echelon lattice basis of the span of `columns` (each of length `rows`),
/// built by unimodular 2x2 column operations. With `track`, each basis vector
/// carries its combination of the input columns.
fn lattice_basis<T: IntScalar>(
    rows: usize,
    columns: Vec<Vec<T>>,
    track: bool,
) -> (Vec<Vec<T>>, Vec<Combination<T>>) {
    let mut pivots: Vec<Option<(Vec<T>, Combination<T>)>> = vec![None; rows];
    for (j, mut v) in columns.into_iter().enumerate() {
        let mut comb = if track { vec![(j, T::one())] } else { Vec::new() };
        let mut row = 0;
        while row < rows {
            if v[row].is_zero() {
                row += 1;
                continue;
            }
            let Some((p, pc)) = pivots[row].take() else {
                pivots[row] = Some((v, comb));
                break;
            };
            let (a, b) = (p[row].clone(), v[row].clone());
            let (q, r) = b.div_rem(&a);
            if r.is_zero() {
                let neg_q = -q;
                v = combine_dense(&T::one(), &v, &neg_q, &p);
                if track {
                    comb = combine(&T::one(), &comb, &neg_q, &pc);
                }
                pivots[row] = Some((p, pc));
            } else {
                let e = a.extended_gcd(&b);
                let (ag, bg) = (a / e.gcd.clone(), b / e.gcd.clone());
                let np = combine_dense(&e.x, &p, &e.y, &v);
                let nv = combine_dense(&ag, &v, &-bg.clone(), &p);
                if track {
                    let npc = combine(&e.x, &pc, &e.y, &comb);
                    comb = combine(&ag, &comb, &-bg, &pc);
                    pivots[row] = Some((np, npc));
                } else {
                    pivots[row] = Some((np, Vec::new()));
                }
                v = nv;
            }
            row += 1;
        }
    }
    pivots.into_iter().flatten().unzip()
}

/// A factored integer matrix that answers rank, cokernel and solvability
/// queries for many right-hand sides.
///
/// Unit pivots are eliminated sparsely; the remaining block is replaced by a
/// lattice basis of its column span (at most one column per remaining row),
/// and only that small matrix goes through the dense Smith reduction.
#[derive(Clone, Debug)]
pub struct IntegerSystem<T: IntScalar> {
    elim: UnitElimination<Integers<T>>,
    residual_rows: Vec<usize>,
    residual_cols: Vec<usize>,
    /// active rows with no entries left
    empty_rows: Vec<usize>,
    /// basis vector `k` as a combination of positions in `residual_cols`
    basis: Vec<Combination<T>>,
    smith: SnfResult<T>,
}

impl<T: IntScalar> IntegerSystem<T> {
    /// With `track` unset only invariants are available; `solve` and
    /// `annihilator` need the residual transforms.
    pub fn factor(a: &SparseIntMatrix<T>, track: bool) -> Self {
        let columns: Vec<Vec<(u32, T)>> = (0..a.cols())
            .map(|j| a.column(j).iter().map(|(i, v)| (*i as u32, v.clone())).collect())
            .collect();
        Self::factor_columns(a.rows(), &columns, track)
    }

    pub fn factor_columns(nrows: usize, columns: &[Vec<(u32, T)>], track: bool) -> Self {
        let elim = UnitElimination::run(Integers::<T>(PhantomData), nrows, columns);
        let mut residual_rows = Vec::new();
        let mut empty_rows = Vec::new();
        let mut cols = Vec::new();
        for (i, row) in elim.residual_rows() {
            if row.is_empty() {
                empty_rows.push(i);
            } else {
                residual_rows.push(i);
                cols.extend(row.iter().map(|e| e.0 as usize));
            }
        }
        cols.sort_unstable();
        cols.dedup();
        let r = residual_rows.len();
        let mut block = vec![vec![T::zero(); r]; cols.len()];
        for (ri, (_, row)) in elim.residual_rows().filter(|(_, row)| !row.is_empty()).enumerate() {
            for (j, v) in row {
                let cj = cols.binary_search(&(*j as usize)).expect("column collected");
                block[cj][ri] = v.clone();
            }
        }
        let (vectors, basis) = lattice_basis(r, block, track);
        let mut dense = DenseMatrix::zeros(r, vectors.len());
        for (k, v) in vectors.iter().enumerate() {
            for (i, x) in v.iter().enumerate() {
                dense.set(i, k, x.clone());
            }
        }
        let smith = smith_dense(&dense, track);
        Self {
            elim,
            residual_rows,
            residual_cols: cols,
            empty_rows,
            basis,
            smith,
        }
    }

    pub fn rows(&self) -> usize {
        self.elim.nrows()
    }

    pub fn cols(&self) -> usize {
        self.elim.ncols()
    }

    pub fn rank(&self) -> usize {
        self.elim.pivot_count() + self.smith.rank()
    }

    /// Columns eliminated with a unit pivot. The matrix restricted to them is
    /// injective over the integers and over every `Z/N`.
    pub fn unit_pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.elim.pivot_columns()
    }

    /// Size of the block left after unit elimination.
    pub fn residual_shape(&self) -> (usize, usize) {
        (self.residual_rows.len(), self.residual_cols.len())
    }

    /// Nonzero invariant factors, including the leading ones.
    pub fn invariant_factors(&self) -> Vec<T> {
        let mut out = vec![T::one(); self.elim.pivot_count()];
        out.extend(self.smith.diagonal().into_iter().filter(|d| !d.is_zero()));
        out
    }

    pub fn cokernel(&self) -> AbelianInvariants<T> {
        let torsion = self
            .smith
            .diagonal()
            .into_iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .collect();
        AbelianInvariants::new(torsion, self.rows() - self.rank())
    }

    /// Replayed rhs restricted to the residual block and transformed by `U`,
    /// plus whether every row outside the residual block is satisfied.
    fn reduced_rhs(&self, b: &[T]) -> (Vec<T>, Vec<T>, bool) {
        let mut rhs = b.to_vec();
        self.elim.replay(&mut rhs);
        let empty_ok = self.empty_rows.iter().all(|&i| rhs[i].is_zero());
        let y: Vec<T> = self.residual_rows.iter().map(|&i| rhs[i].clone()).collect();
        let u = self.smith.u.as_ref().expect("system factored without transforms");
        (rhs, u.mul_vec(&y), empty_ok)
    }

    /// Some integer `x` with `A x = b`.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows(), "rhs length");
        let (rhs, z, empty_ok) = self.reduced_rhs(b);
        if !empty_ok {
            return None;
        }
        let diag = self.smith.diagonal();
        let mut w = vec![T::zero(); self.basis.len()];
        for (i, zi) in z.iter().enumerate() {
            let d = diag.get(i).cloned().unwrap_or_else(T::zero);
            if d.is_zero() {
                if !zi.is_zero() {
                    return None;
                }
            } else {
                let (q, r) = zi.div_rem(&d);
                if !r.is_zero() {
                    return None;
                }
                w[i] = q;
            }
        }
        let v = self.smith.v.as_ref().expect("system factored without transforms");
        let coeffs = v.mul_vec(&w);
        let mut x = vec![T::zero(); self.cols()];
        for (c, comb) in coeffs.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (k, m) in comb {
                let j = self.residual_cols[*k];
                x[j] = x[j].clone() + c.clone() * m.clone();
            }
        }
        self.elim.back_substitute(&rhs, &mut x);
        Some(x)
    }

    /// Smallest `k >= 1` with `k b` in the column span, or `None` if no multiple is.
    pub fn annihilator(&self, b: &[T]) -> Option<T> {
        assert_eq!(b.len(), self.rows(), "rhs length");
        let (_, z, empty_ok) = self.reduced_rhs(b);
        if !empty_ok {
            return None;
        }
        let diag = self.smith.diagonal();
        let mut k = T::one();
        for (i, zi) in z.iter().enumerate() {
            let d = diag.get(i).cloned().unwrap_or_else(T::zero);
            if d.is_zero() {
                if !zi.is_zero() {
                    return None;
                }
            } else {
                let need = d.clone() / d.gcd(zi);
                k = k.lcm(&need);
            }
        }
        Some(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use num_traits::{One, Zero};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn random_matrix() -> impl Strategy<Value = SparseIntMatrix<BigInt>> {
        (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec(prop_oneof![4 => Just(0i64), 3 => -1i64..2, 2 => -6i64..7], r * c).prop_map(
                move |vals| {
                    let trip = vals
                        .into_iter()
                        .enumerate()
                        .map(|(k, v)| (k / c, k % c, BigInt::from(v)));
                    SparseIntMatrix::from_triplets(r, c, trip).unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn sparse_invariants_match_dense_smith(a in random_matrix()) {
            let sys = IntegerSystem::factor(&a, false);
            let dense = smith_dense(&DenseMatrix::from_sparse(&a), false);
            let want: Vec<BigInt> = dense.diagonal().into_iter().filter(|d| !d.is_zero()).collect();
            prop_assert_eq!(sys.invariant_factors(), want);
        }

        #[test]
        fn solutions_substitute(a in random_matrix(), seed in proptest::collection::vec(-3i64..4, 7)) {
            let sys = IntegerSystem::factor(&a, true);
            // b in the image: always solvable
            let x0: Vec<BigInt> = (0..a.cols()).map(|j| BigInt::from(seed[j])).collect();
            let b = a.mul_vec(&x0);
            let x = sys.solve(&b).expect("b is in the image");
            prop_assert_eq!(a.mul_vec(&x), b.clone());
            prop_assert_eq!(sys.annihilator(&b), Some(BigInt::one()));
        }

        #[test]
        fn solvability_matches_snf_criterion(a in random_matrix(), rhs in proptest::collection::vec(-4i64..5, 7)) {
            let b: Vec<BigInt> = (0..a.rows()).map(|i| BigInt::from(rhs[i])).collect();
            let sys = IntegerSystem::factor(&a, true);
            // independent route: full dense SNF on A, test d_i | (U b)_i
            let full = smith_dense(&DenseMatrix::from_sparse(&a), true);
            let ub = full.u.as_ref().unwrap().mul_vec(&b);
            let diag = full.diagonal();
            let solvable = ub.iter().enumerate().all(|(i, v)| match diag.get(i) {
                Some(d) if !d.is_zero() => v.is_multiple_of(d),
                _ => v.is_zero(),
            });
            let got = sys.solve(&b);
            prop_assert_eq!(got.is_some(), solvable);
            if let Some(x) = got {
                prop_assert_eq!(a.mul_vec(&x), b);
            }
        }
    }

    #[test]
    fn annihilator_of_torsion_class() {
        // coker diag(4, 6): vector (2, 3) has order 2
        let a = SparseIntMatrix::<BigInt>::from_rows(&[&[4, 0], &[0, 6]]);
        let sys = IntegerSystem::factor(&a, true);
        assert_eq!(sys.annihilator(&[BigInt::from(2), BigInt::from(3)]), Some(BigInt::from(2)));
        assert_eq!(sys.annihilator(&[BigInt::from(1), BigInt::from(0)]), Some(BigInt::from(4)));
        let b = SparseIntMatrix::<BigInt>::from_rows(&[&[1], &[0]]);
        let sys = IntegerSystem::factor(&b, true);
        assert_eq!(sys.annihilator(&[BigInt::from(0), BigInt::from(1)]), None);
    }
}
