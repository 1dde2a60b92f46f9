//! Boundary matrices, homology, and boundary-membership decisions.
//!
//! Cells of degree `n` in a group of order `N` are indexed in mixed radix:
//! `[g1|...|gn]` has index `sum (g_i - 1) (N-1)^(n-i)`.
//!
//! Boundary membership has two backends. The exact one factors the integer
//! matrix of `d_{n+1}` and returns a witness. The modular one works over
//! `Z/N`: for `n >= 1` the group order annihilates `H_n`, so a cycle `z`
//! is a boundary iff `z` lies in `im d_{n+1} + N C_n`, and its class order is
//! its order in `C_n / (im d_{n+1} + N C_n)`. Both answers are exact; the
//! modular backend just gives no witness.
//!
//! Both backends, and [`homology`], first drop redundant rows of `d_{n+1}`.
//! If `S` is the set of unit-pivot columns of `d_n`, then `d_n` restricted to
//! `S` is injective (over `Z` and every `Z/N`), so a cycle vanishing off `S`
//! vanishes. Projection away from `S` is therefore injective on cycles, and
//! `z` is a boundary iff its projection lies in the image of the projected
//! `d_{n+1}`. The projected cycles are a saturated sublattice, so the torsion
//! of the projected cokernel is still the torsion of `H_n`.

use std::sync::Arc;
use std::time::{Duration, Instant};

use super::{BarChain, BarError};
use crate::exactlinalg::modular::ModularSystem;
use crate::exactlinalg::{AbelianInvariants, IntScalar, IntegerSystem};
use crate::groups::FiniteGroup;

/// `d_{n+1}` matrices with at most this many columns use the exact backend under [`OracleStrategy::Auto`].
pub const EXACT_COLUMN_LIMIT: usize = 60_000;

/// Number of normalized cells of degree `n`, `(order - 1)^n`.
pub fn cell_count(order: usize, n: usize) -> u128 {
    (order as u128 - 1).pow(n as u32)
}

pub fn cell_index(order: usize, cell: &[u32]) -> usize {
    let k = order - 1;
    cell.iter().fold(0, |acc, &g| acc * k + (g as usize - 1))
}

pub fn cell_of_index(order: usize, n: usize, mut index: usize) -> Vec<u32> {
    let k = order - 1;
    let mut cell = vec![0; n];
    for slot in cell.iter_mut().rev() {
        *slot = (index % k) as u32 + 1;
        index /= k;
    }
    cell
}

fn check_cap(order: usize, n: usize, cap: usize) -> Result<usize, BarError> {
    let cells = cell_count(order, n);
    if cells > cap as u128 {
        return Err(BarError::CellCap { cells, cap });
    }
    Ok(cells as usize)
}

/// Columns of `d_n : C_n -> C_{n-1}`, one per degree-`n` cell, entries sorted by row.
pub fn boundary_columns(group: &FiniteGroup, n: usize) -> Vec<Vec<(u32, i64)>> {
    let order = group.order();
    let total = cell_count(order, n) as usize;
    if n == 0 || order == 1 {
        return vec![Vec::new(); total];
    }
    let mut columns = Vec::with_capacity(total);
    let mut cell = vec![1u32; n];
    let mut face = vec![0u32; n - 1];
    let mut entries: Vec<(u32, i64)> = Vec::with_capacity(n + 1);
    for _ in 0..total {
        entries.clear();
        let mut push = |face: &[u32], sign: i64| {
            if !face.contains(&0) {
                entries.push((cell_index(order, face) as u32, sign));
            }
        };
        push(&cell[1..], 1);
        for i in 1..n {
            face[..i - 1].copy_from_slice(&cell[..i - 1]);
            face[i - 1] = group.mul(cell[i - 1], cell[i]);
            face[i..].copy_from_slice(&cell[i + 1..]);
            push(&face, if i % 2 == 1 { -1 } else { 1 });
        }
        push(&cell[..n - 1], if n % 2 == 1 { -1 } else { 1 });
        entries.sort_unstable_by_key(|e| e.0);
        let mut col: Vec<(u32, i64)> = Vec::with_capacity(entries.len());
        for &(r, v) in &entries {
            match col.last_mut() {
                Some(last) if last.0 == r => last.1 += v,
                _ => col.push((r, v)),
            }
        }
        col.retain(|e| e.1 != 0);
        columns.push(col);
        // advance the mixed-radix counter, last slot fastest
        for slot in cell.iter_mut().rev() {
            if (*slot as usize) < order - 1 {
                *slot += 1;
                break;
            }
            *slot = 1;
        }
    }
    columns
}

fn to_scalar_columns<T: IntScalar>(cols: &[Vec<(u32, i64)>]) -> Vec<Vec<(u32, T)>> {
    cols.iter()
        .map(|c| c.iter().map(|&(i, v)| (i, T::from_i64_exact(v))).collect())
        .collect()
}

/// `d_{n+1}` with the rows of redundant degree-`n` cells removed.
struct ReducedBoundary {
    /// original row -> kept row, `u32::MAX` when dropped
    row_map: Vec<u32>,
    kept: usize,
    columns: Vec<Vec<(u32, i64)>>,
    /// rank of `d_n`, when it was computed
    rank_below: usize,
}

fn reduced_boundary<T: IntScalar>(group: &FiniteGroup, n: usize) -> ReducedBoundary {
    let order = group.order();
    let rows = cell_count(order, n) as usize;
    let mut redundant = vec![false; rows];
    let mut rank_below = 0;
    if n >= 1 {
        let below = IntegerSystem::<T>::factor_columns(
            cell_count(order, n - 1) as usize,
            &to_scalar_columns(&boundary_columns(group, n)),
            false,
        );
        rank_below = below.rank();
        for c in below.unit_pivot_columns() {
            redundant[c] = true;
        }
    }
    let mut row_map = vec![u32::MAX; rows];
    let mut kept = 0;
    for (i, r) in redundant.iter().enumerate() {
        if !r {
            row_map[i] = kept as u32;
            kept += 1;
        }
    }
    let columns = boundary_columns(group, n + 1)
        .into_iter()
        .map(|c| {
            c.into_iter()
                .filter_map(|(i, v)| {
                    let k = row_map[i as usize];
                    (k != u32::MAX).then_some((k, v))
                })
                .collect()
        })
        .collect();
    ReducedBoundary {
        row_map,
        kept,
        columns,
        rank_below,
    }
}

/// `H_n(G; Z)` with the sizes involved in computing it.
#[derive(Clone, Debug)]
pub struct HomologyReport<T: IntScalar> {
    pub group_order: usize,
    pub degree: usize,
    pub invariants: AbelianInvariants<T>,
    /// normalized cells in degrees `n` and `n + 1`
    pub cells: (usize, usize),
    /// ranks of `d_n` and `d_{n+1}`
    pub ranks: (usize, usize),
    /// rows of `d_{n+1}` kept after dropping redundant cells
    pub kept_rows: usize,
    /// block left after unit elimination of the reduced `d_{n+1}`
    pub residual: (usize, usize),
    pub elapsed: Duration,
}

/// Homology of the normalized bar complex, exact over the integers.
pub fn homology<T: IntScalar>(group: &FiniteGroup, n: usize, cap: usize) -> Result<HomologyReport<T>, BarError> {
    let start = Instant::now();
    let order = group.order();
    let above = check_cap(order, n + 1, cap)?;
    let here = cell_count(order, n) as usize;
    let reduced = reduced_boundary::<T>(group, n);
    let rank_out = reduced.rank_below;
    let sys = IntegerSystem::<T>::factor_columns(reduced.kept, &to_scalar_columns(&reduced.columns), false);
    let rank_in = sys.rank();
    let torsion = sys.cokernel().torsion;
    Ok(HomologyReport {
        group_order: order,
        degree: n,
        invariants: AbelianInvariants::new(torsion, here - rank_out - rank_in),
        cells: (here, above),
        ranks: (rank_out, rank_in),
        kept_rows: reduced.kept,
        residual: sys.residual_shape(),
        elapsed: start.elapsed(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OracleStrategy {
    /// exact up to [`EXACT_COLUMN_LIMIT`] columns, modular beyond
    #[default]
    Auto,
    Exact,
    Modular,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryDecision<T: IntScalar> {
    pub is_boundary: bool,
    /// some `w` with `dw = c`, when the exact backend found one
    pub witness: Option<BarChain<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassOrder {
    Finite(u64),
    Infinite,
}

#[derive(Debug)]
enum Backend<T: IntScalar> {
    Exact(IntegerSystem<T>),
    Modular(ModularSystem),
}

/// Answers boundary and class-order queries in a fixed degree, factoring
/// `d_{n+1}` once.
#[derive(Debug)]
pub struct BoundaryOracle<T: IntScalar> {
    group: Arc<FiniteGroup>,
    degree: usize,
    backend: Backend<T>,
    row_map: Vec<u32>,
    kept: usize,
    elapsed: Duration,
}

impl<T: IntScalar> BoundaryOracle<T> {
    pub fn new(group: Arc<FiniteGroup>, degree: usize, cap: usize, strategy: OracleStrategy) -> Result<Self, BarError> {
        let start = Instant::now();
        let order = group.order();
        let above = check_cap(order, degree + 1, cap)?;
        let reduced = reduced_boundary::<T>(&group, degree);
        // the modular criterion needs the group order to kill H_n, true only for n >= 1
        let modular = degree >= 1
            && match strategy {
                OracleStrategy::Auto => above > EXACT_COLUMN_LIMIT,
                OracleStrategy::Exact => false,
                OracleStrategy::Modular => true,
            };
        let backend = if modular {
            Backend::Modular(ModularSystem::factor(order as u64, reduced.kept, &reduced.columns))
        } else {
            Backend::Exact(IntegerSystem::factor_columns(
                reduced.kept,
                &to_scalar_columns(&reduced.columns),
                true,
            ))
        };
        Ok(Self {
            group,
            degree,
            backend,
            row_map: reduced.row_map,
            kept: reduced.kept,
            elapsed: start.elapsed(),
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn backend_name(&self) -> &'static str {
        match self.backend {
            Backend::Exact(_) => "exact",
            Backend::Modular(_) => "modular",
        }
    }

    /// Rows of `d_{n+1}` left after dropping redundant cells.
    pub fn kept_rows(&self) -> usize {
        self.kept
    }

    /// Time spent assembling and factoring the matrix.
    pub fn setup_time(&self) -> Duration {
        self.elapsed
    }

    fn check_chain(&self, c: &BarChain<T>) -> Result<(), BarError> {
        if c.degree() != self.degree {
            return Err(BarError::DegreeMismatch(self.degree, c.degree()));
        }
        if !Arc::ptr_eq(c.group(), &self.group) && **c.group() != *self.group {
            return Err(BarError::GroupMismatch);
        }
        if !c.is_cycle() {
            return Err(BarError::NotACycle);
        }
        Ok(())
    }

    /// Coordinates of `c` on the kept rows.
    fn dense(&self, c: &BarChain<T>) -> Vec<T> {
        let order = self.group.order();
        let mut v = vec![T::zero(); self.kept];
        for (cell, x) in c.terms() {
            let k = self.row_map[cell_index(order, cell)];
            if k != u32::MAX {
                v[k as usize] = x.clone();
            }
        }
        v
    }

    fn dense_mod(&self, c: &BarChain<T>) -> Vec<i64> {
        let n = T::from_usize(self.group.order()).expect("group order fits the scalar");
        self.dense(c)
            .into_iter()
            .map(|x| x.mod_floor(&n).to_i64().expect("residue fits i64"))
            .collect()
    }

    pub fn is_boundary(&self, c: &BarChain<T>) -> Result<BoundaryDecision<T>, BarError> {
        self.check_chain(c)?;
        if c.is_zero() {
            return Ok(BoundaryDecision {
                is_boundary: true,
                witness: Some(BarChain::zero(self.group.clone(), self.degree + 1)),
            });
        }
        match &self.backend {
            Backend::Exact(sys) => {
                let Some(x) = sys.solve(&self.dense(c)) else {
                    return Ok(BoundaryDecision {
                        is_boundary: false,
                        witness: None,
                    });
                };
                let order = self.group.order();
                let n = self.degree + 1;
                let terms = x
                    .into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (cell_of_index(order, n, j), v));
                let w = BarChain::from_terms(self.group.clone(), n, terms)?;
                assert!(w.boundary() == *c, "witness does not reproduce the chain");
                Ok(BoundaryDecision {
                    is_boundary: true,
                    witness: Some(w),
                })
            }
            Backend::Modular(sys) => Ok(BoundaryDecision {
                is_boundary: sys.contains(&self.dense_mod(c)),
                witness: None,
            }),
        }
    }

    /// Smallest `k >= 1` with `k c` a boundary.
    pub fn class_order(&self, c: &BarChain<T>) -> Result<ClassOrder, BarError> {
        self.check_chain(c)?;
        if c.is_zero() {
            return Ok(ClassOrder::Finite(1));
        }
        Ok(match &self.backend {
            Backend::Exact(sys) => match sys.annihilator(&self.dense(c)) {
                Some(k) => ClassOrder::Finite(k.to_u64().expect("class order fits u64")),
                None => ClassOrder::Infinite,
            },
            Backend::Modular(sys) => ClassOrder::Finite(sys.annihilator(&self.dense_mod(c))),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::FiniteAbelianGroup;
    use num_bigint::BigInt;

    type Chain = BarChain<BigInt>;

    fn abelian(orders: &[u64]) -> Arc<FiniteGroup> {
        Arc::new(FiniteAbelianGroup::new(orders.to_vec()).unwrap().to_group())
    }

    fn h(orders: &[u64], n: usize) -> AbelianInvariants<BigInt> {
        homology::<BigInt>(&abelian(orders), n, 1_000_000).unwrap().invariants
    }

    fn inv(t: &[i64], free: usize) -> AbelianInvariants<BigInt> {
        AbelianInvariants::new(t.iter().map(|&x| BigInt::from(x)).collect(), free)
    }

    #[test]
    fn indexing_round_trip() {
        for i in 0..64 {
            assert_eq!(cell_index(5, &cell_of_index(5, 3, i)), i);
        }
        assert_eq!(cell_of_index(5, 2, 0), vec![1, 1]);
        assert_eq!(cell_of_index(5, 2, 1), vec![1, 2]);
    }

    #[test]
    fn columns_match_chain_boundary() {
        let g = abelian(&[2, 3]);
        let cols = boundary_columns(&g, 3);
        for (j, col) in cols.iter().enumerate().step_by(7) {
            let cell = cell_of_index(6, 3, j);
            let d = Chain::cell(g.clone(), &cell, BigInt::from(1)).unwrap().boundary();
            let from_col: Vec<(Vec<u32>, BigInt)> =
                col.iter().map(|&(i, v)| (cell_of_index(6, 2, i as usize), BigInt::from(v))).collect();
            assert_eq!(d, Chain::from_terms(g.clone(), 2, from_col).unwrap());
        }
    }

    #[test]
    fn cyclic_homology() {
        assert_eq!(h(&[2], 3), inv(&[2], 0));
        assert_eq!(h(&[5], 1), inv(&[5], 0));
        assert_eq!(h(&[4], 2), inv(&[], 0));
        assert_eq!(h(&[3], 0), inv(&[], 1));
        assert_eq!(h(&[1], 2), inv(&[], 0));
        assert_eq!(h(&[1], 0), inv(&[], 1));
    }

    #[test]
    fn klein_four() {
        assert_eq!(h(&[2, 2], 1), inv(&[2, 2], 0));
        assert_eq!(h(&[2, 2], 2), inv(&[2], 0));
        assert_eq!(h(&[2, 2], 3), inv(&[2, 2, 2], 0));
    }

    #[test]
    fn cap_is_enforced() {
        let err = homology::<BigInt>(&abelian(&[6]), 3, 100).unwrap_err();
        assert_eq!(err, BarError::CellCap { cells: 625, cap: 100 });
    }

    #[test]
    fn boundary_queries() {
        let g = abelian(&[6]);
        let oracle = BoundaryOracle::<BigInt>::new(g.clone(), 1, 1_000_000, OracleStrategy::Exact).unwrap();
        let z = Chain::zero(g.clone(), 1);
        let d = oracle.is_boundary(&z).unwrap();
        assert!(d.is_boundary && d.witness.unwrap().is_zero());
        let gen = Chain::cell(g.clone(), &[1], BigInt::from(1)).unwrap();
        assert!(!oracle.is_boundary(&gen).unwrap().is_boundary);
        let six = gen.scale(&BigInt::from(6));
        let w = oracle.is_boundary(&six).unwrap().witness.unwrap();
        assert_eq!(w.boundary(), six);
        assert_eq!(oracle.class_order(&gen).unwrap(), ClassOrder::Finite(6));
        assert_eq!(oracle.class_order(&z).unwrap(), ClassOrder::Finite(1));
        let two = Chain::cell(g.clone(), &[2], BigInt::from(1)).unwrap();
        assert_eq!(oracle.class_order(&two).unwrap(), ClassOrder::Finite(3));
        let not_cycle = Chain::cell(g.clone(), &[1, 1], BigInt::from(1)).unwrap();
        let o2 = BoundaryOracle::<BigInt>::new(g, 2, 1_000_000, OracleStrategy::Auto).unwrap();
        assert_eq!(o2.is_boundary(&not_cycle).unwrap_err(), BarError::NotACycle);
    }

    #[test]
    fn degree_zero_classes_are_free() {
        let g = abelian(&[3]);
        let oracle = BoundaryOracle::<BigInt>::new(g.clone(), 0, 100, OracleStrategy::Modular).unwrap();
        assert_eq!(oracle.backend_name(), "exact");
        assert_eq!(oracle.class_order(&Chain::unit(g)).unwrap(), ClassOrder::Infinite);
    }

    #[test]
    fn modular_backend_agrees_with_exact() {
        let g = abelian(&[2, 4]);
        let exact = BoundaryOracle::<BigInt>::new(g.clone(), 2, 1_000_000, OracleStrategy::Exact).unwrap();
        let modular = BoundaryOracle::<BigInt>::new(g.clone(), 2, 1_000_000, OracleStrategy::Modular).unwrap();
        assert_eq!(modular.backend_name(), "modular");
        for (a, b) in [(1, 4), (2, 4), (1, 2), (4, 5), (3, 6)] {
            let c = Chain::c_symbol(g.clone(), &[a, b]).unwrap();
            assert_eq!(
                exact.is_boundary(&c).unwrap().is_boundary,
                modular.is_boundary(&c).unwrap().is_boundary
            );
            assert_eq!(exact.class_order(&c).unwrap(), modular.class_order(&c).unwrap());
        }
        // H_2(Z/2 x Z/4) = Z/2, generated by c((1,0),(0,1))
        assert_eq!(exact.class_order(&Chain::c_symbol(g, &[4, 1]).unwrap()).unwrap(), ClassOrder::Finite(2));
    }
}
