use std::collections::{BTreeMap, BTreeSet};

use super::{sort_with_sign, TorusError, WedgeClass};
use crate::bar::permutations;
use crate::exactlinalg::{IntScalar, IntegerSystem, SparseIntMatrix};

/// Outcome of a coinvariant comparison, with the size of the relation lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoinvariantProof<T> {
    pub equal: bool,
    /// Monomials in the orbit closure of the difference.
    pub monomials: usize,
    /// Generating relations `w - s.w`.
    pub relations: usize,
    /// Coefficients on the relations when `equal`.
    pub witness: Option<Vec<T>>,
}

/// Relations `w - s.w` over the orbit closure of a set of monomials.
#[derive(Clone, Debug)]
pub struct WeylRelationLattice<T: IntScalar> {
    pub monomials: Vec<Vec<usize>>,
    pub matrix: SparseIntMatrix<T>,
}

impl<T: IntScalar> WeylRelationLattice<T> {
    pub fn build(seed: impl IntoIterator<Item = Vec<usize>>, slots: usize, generators: &[Vec<usize>]) -> Self {
        let act = |m: &[usize], p: &[usize]| -> (Vec<usize>, i64) {
            let mut moved: Vec<usize> = m.iter().map(|&i| (i / slots) * slots + p[i % slots]).collect();
            // slot permutations never collide two distinct basis vectors
            let sign = sort_with_sign(&mut moved).expect("injective on basis");
            (moved, sign)
        };
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue: Vec<Vec<usize>> = seed.into_iter().collect();
        while let Some(m) = queue.pop() {
            if !seen.insert(m.clone()) {
                continue;
            }
            for p in generators {
                let (moved, _) = act(&m, p);
                if !seen.contains(&moved) {
                    queue.push(moved);
                }
            }
        }
        let monomials: Vec<Vec<usize>> = seen.into_iter().collect();
        let index: BTreeMap<&[usize], usize> = monomials.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
        let mut columns = Vec::new();
        for m in &monomials {
            for p in generators {
                let (moved, sign) = act(m, p);
                let (i, j) = (index[m.as_slice()], index[moved.as_slice()]);
                let mut col = BTreeMap::new();
                *col.entry(i).or_insert(0i64) += 1;
                *col.entry(j).or_insert(0i64) -= sign;
                let col: Vec<(usize, T)> = col
                    .into_iter()
                    .filter(|e| e.1 != 0)
                    .map(|(r, v)| (r, T::from_i64_exact(v)))
                    .collect();
                if !col.is_empty() {
                    columns.push(col);
                }
            }
        }
        let matrix = SparseIntMatrix::from_columns(monomials.len(), columns).expect("rows in range");
        Self { monomials, matrix }
    }
}

/// `w1 == w2` modulo the action of the full symmetric group on slots.
pub fn coinvariant_equal<T: IntScalar>(w1: &WedgeClass<T>, w2: &WedgeClass<T>) -> Result<CoinvariantProof<T>, TorusError> {
    let n = w1.lattice().slots();
    let generators: Vec<Vec<usize>> = permutations(n).into_iter().map(|(p, _)| p).collect();
    coinvariant_equal_under(w1, w2, &generators)
}

/// As [`coinvariant_equal`], for the slot-permutation group generated by `generators` (0-based).
pub fn coinvariant_equal_under<T: IntScalar>(
    w1: &WedgeClass<T>,
    w2: &WedgeClass<T>,
    generators: &[Vec<usize>],
) -> Result<CoinvariantProof<T>, TorusError> {
    let n = w1.lattice().slots();
    if let Some(p) = generators.iter().find(|p| !is_permutation(p, n)) {
        return Err(TorusError::BadSlot { slot: p.len(), slots: n });
    }
    let diff = w1.sub(w2)?;
    if diff.is_zero() {
        return Ok(CoinvariantProof {
            equal: true,
            monomials: 0,
            relations: 0,
            witness: Some(Vec::new()),
        });
    }
    let lattice = WeylRelationLattice::<T>::build(diff.terms().keys().cloned(), n, generators);
    let mut b = vec![T::zero(); lattice.monomials.len()];
    for (m, v) in diff.terms() {
        let i = lattice.monomials.binary_search(m).expect("seed monomial present");
        b[i] = v.clone();
    }
    let witness = IntegerSystem::factor(&lattice.matrix, true).solve(&b);
    Ok(CoinvariantProof {
        equal: witness.is_some(),
        monomials: lattice.monomials.len(),
        relations: lattice.matrix.cols(),
        witness,
    })
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n && p.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

#[cfg(test)]
mod tests {
    use super::super::{wedge, LatticeVector, UnitLattice};
    use super::*;
    use num_bigint::BigInt;
    use std::sync::Arc;

    fn e(l: &Arc<UnitLattice>, u: &str, s: usize) -> LatticeVector {
        LatticeVector::basis(l, u, s).unwrap()
    }

    fn w(vs: &[LatticeVector]) -> WedgeClass<BigInt> {
        wedge(vs).unwrap()
    }

    #[test]
    fn self_equal() {
        let l = UnitLattice::new(&["a", "b", "c"], 2).unwrap();
        let x = w(&[e(&l, "a", 1), e(&l, "b", 2), e(&l, "c", 1)]);
        assert!(coinvariant_equal(&x, &x).unwrap().equal);
    }

    #[test]
    fn swap_and_reorder() {
        let l = UnitLattice::new(&["a", "b", "c"], 2).unwrap();
        let c = LatticeVector::diag(&l, &["c", "c^-1"]).unwrap();
        let lhs = w(&[e(&l, "a", 2), e(&l, "b", 1), c.clone()]);
        let lw = w(&[e(&l, "a", 1), e(&l, "b", 2), c]);
        let proof = coinvariant_equal(&lhs, &lw.scale(&BigInt::from(-1))).unwrap();
        assert!(proof.equal);
        assert!(proof.monomials > 0);
        // Independent check: the swap image of lhs is literally -l.
        assert_eq!(lhs.permute_slots(&[1, 0]), lw.scale(&BigInt::from(-1)));
    }

    #[test]
    fn distinct_orbits_differ() {
        let l = UnitLattice::new(&["a", "b", "c"], 2).unwrap();
        let x = w(&[e(&l, "a", 1), e(&l, "b", 2), e(&l, "c", 1)]);
        let y = w(&[e(&l, "a", 1), e(&l, "b", 2), e(&l, "c", 2)]);
        assert!(!coinvariant_equal(&x, &y).unwrap().equal);
    }

    #[test]
    fn torsion_in_the_quotient() {
        // In one unit and two slots, e(a,1)^e(a,2) is sent to its negative by the swap,
        // so twice it vanishes but it does not.
        let l = UnitLattice::new(&["a"], 2).unwrap();
        let x = w(&[e(&l, "a", 1), e(&l, "a", 2)]);
        let zero = WedgeClass::zero(l.clone(), 2);
        assert!(!coinvariant_equal(&x, &zero).unwrap().equal);
        assert!(coinvariant_equal(&x.scale(&BigInt::from(2)), &zero).unwrap().equal);
    }

    #[test]
    fn subgroup_action() {
        let l = UnitLattice::new(&["a", "b", "c"], 3).unwrap();
        let x = w(&[e(&l, "a", 1), e(&l, "b", 2), e(&l, "c", 3)]);
        let y = w(&[e(&l, "a", 2), e(&l, "b", 3), e(&l, "c", 1)]);
        let z = w(&[e(&l, "a", 2), e(&l, "b", 1), e(&l, "c", 3)]);
        let cycle = vec![vec![1, 2, 0]];
        assert!(coinvariant_equal_under(&x, &y, &cycle).unwrap().equal);
        assert!(!coinvariant_equal_under(&x, &z, &cycle).unwrap().equal);
        assert!(coinvariant_equal(&x, &z).unwrap().equal);
        assert!(coinvariant_equal_under(&x, &y, &[vec![0, 0, 1]]).is_err());
    }
}
