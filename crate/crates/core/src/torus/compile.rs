use std::collections::BTreeMap;
use std::sync::Arc;

use super::{LatticeVector, TorusError, UnitLattice, WedgeClass};
use crate::bar::BarChain;
use crate::exactlinalg::IntScalar;
use crate::groups::{FiniteField, FiniteGroup, FqMatrix, GroupError};

/// Field value of each formal unit.
pub type Assignment = BTreeMap<String, u32>;

struct Realizer<'a> {
    ambient: &'a Arc<FiniteGroup>,
    field: &'a FiniteField,
    values: Vec<u32>,
    slots: usize,
}

impl<'a> Realizer<'a> {
    fn new(lattice: &UnitLattice, assignment: &Assignment, ambient: &'a Arc<FiniteGroup>) -> Result<Self, TorusError> {
        let labels = ambient.matrices().ok_or(TorusError::NotAMatrixGroup)?;
        let field = &labels.field;
        let mut values = Vec::with_capacity(lattice.names().len());
        for name in lattice.names() {
            let v = *assignment.get(name).ok_or_else(|| TorusError::Unassigned(name.clone()))?;
            if v == 0 || v >= field.order() {
                return Err(GroupError::NotAUnit(v).into());
            }
            values.push(v);
        }
        Ok(Self {
            ambient,
            field,
            values,
            slots: lattice.slots(),
        })
    }

    fn element(&self, diag: &[u32]) -> Result<u32, TorusError> {
        let m = FqMatrix::diagonal(diag);
        self.ambient
            .element_of_matrix(&m)
            .ok_or_else(|| TorusError::NotInAmbient(m.rows()))
    }

    fn basis_element(&self, index: usize) -> Result<u32, TorusError> {
        let mut d = vec![1; self.slots];
        d[index % self.slots] = self.values[index / self.slots];
        self.element(&d)
    }

    fn vector_element(&self, v: &LatticeVector) -> Result<u32, TorusError> {
        let mut d = vec![1; self.slots];
        for (s, entry) in d.iter_mut().enumerate() {
            for (u, &x) in self.values.iter().enumerate() {
                let e = v.exponent(u, s + 1);
                let base = if e < 0 { self.field.inv(x).expect("unit") } else { x };
                let p = self.field.pow(base, e.unsigned_abs());
                *entry = self.field.mul(*entry, p);
            }
        }
        self.element(&d)
    }
}

/// Each monomial `e_{u1,s1} ^ ... ^ e_{uk,sk}` becomes `c(D_1, ..., D_k)`, where
/// `D_i` carries the value of `u_i` in slot `s_i` and `1` elsewhere.
pub fn compile_to_bar<T: IntScalar>(
    w: &WedgeClass<T>,
    assignment: &Assignment,
    ambient: &Arc<FiniteGroup>,
) -> Result<BarChain<T>, TorusError> {
    let r = Realizer::new(w.lattice(), assignment, ambient)?;
    let mut out = BarChain::zero(ambient.clone(), w.degree());
    for (m, v) in w.terms() {
        let elements: Vec<u32> = m.iter().map(|&i| r.basis_element(i)).collect::<Result<_, _>>()?;
        let sym = BarChain::c_symbol(ambient.clone(), &elements)?;
        out = out.add(&sym.scale(v))?;
    }
    Ok(out)
}

/// `c(D_1, ..., D_k)` for the diagonal matrices the vectors describe, without
/// expanding multilinearly first.
pub fn compile_symbol<T: IntScalar>(
    vectors: &[LatticeVector],
    assignment: &Assignment,
    ambient: &Arc<FiniteGroup>,
) -> Result<BarChain<T>, TorusError> {
    let lattice = vectors.first().ok_or(TorusError::DegreeMismatch(1, 0))?.lattice();
    if vectors.iter().any(|v| v.lattice() != lattice) {
        return Err(TorusError::LatticeMismatch);
    }
    let r = Realizer::new(lattice, assignment, ambient)?;
    let elements: Vec<u32> = vectors.iter().map(|v| r.vector_element(v)).collect::<Result<_, _>>()?;
    Ok(BarChain::c_symbol(ambient.clone(), &elements)?)
}

#[cfg(test)]
mod tests {
    use super::super::{l_class, wedge};
    use super::*;
    use crate::groups::from_matrix_generators;
    use num_bigint::BigInt;

    type Chain = BarChain<BigInt>;

    fn torus_swap() -> Arc<FiniteGroup> {
        let gens = vec![
            vec![vec![2, 0], vec![0, 1]],
            vec![vec![1, 0], vec![0, 2]],
            vec![vec![0, 1], vec![1, 0]],
        ];
        Arc::new(from_matrix_generators(5, &gens, 4096).unwrap())
    }

    fn assign(pairs: &[(&str, u32)]) -> Assignment {
        pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    #[test]
    fn zero_class_compiles_to_zero() {
        let g = torus_swap();
        let l = UnitLattice::new(&["a"], 2).unwrap();
        let z = WedgeClass::<BigInt>::zero(l, 3);
        assert!(compile_to_bar(&z, &assign(&[("a", 2)]), &g).unwrap().is_zero());
    }

    #[test]
    fn l_class_is_two_symbols() {
        let g = torus_swap();
        let l = UnitLattice::new(&["a", "b", "c"], 2).unwrap();
        let lw = l_class::<BigInt>(&l, "a", "b", "c").unwrap();
        let chain = compile_to_bar(&lw, &assign(&[("a", 2), ("b", 3), ("c", 4)]), &g).unwrap();
        assert_eq!(chain.len(), 12);
        assert!(chain.is_cycle());
    }

    #[test]
    fn symbol_of_basis_vectors_matches_monomial() {
        let g = torus_swap();
        let l = UnitLattice::new(&["a", "b", "c"], 2).unwrap();
        let vs = [
            LatticeVector::basis(&l, "a", 1).unwrap(),
            LatticeVector::basis(&l, "b", 2).unwrap(),
            LatticeVector::basis(&l, "c", 1).unwrap(),
        ];
        let a = assign(&[("a", 2), ("b", 3), ("c", 4)]);
        let direct: Chain = compile_symbol(&vs, &a, &g).unwrap();
        let via = compile_to_bar(&wedge::<BigInt>(&vs).unwrap(), &a, &g).unwrap();
        assert_eq!(direct, via);
    }

    #[test]
    fn inverse_exponents() {
        let g = torus_swap();
        let l = UnitLattice::new(&["c"], 2).unwrap();
        let v = LatticeVector::diag(&l, &["c", "c^-1"]).unwrap();
        let chain: Chain = compile_symbol(&[v], &assign(&[("c", 2)]), &g).unwrap();
        // 2^-1 = 3 in F5
        let x = g.element_of_matrix(&FqMatrix::diagonal(&[2, 3])).unwrap();
        assert_eq!(chain, Chain::c_symbol(g.clone(), &[x]).unwrap());
    }

    #[test]
    fn errors() {
        let g = torus_swap();
        let l = UnitLattice::new(&["a"], 2).unwrap();
        let x = wedge::<BigInt>(&[LatticeVector::basis(&l, "a", 1).unwrap()]).unwrap();
        assert!(matches!(compile_to_bar(&x, &assign(&[]), &g), Err(TorusError::Unassigned(_))));
        assert!(matches!(compile_to_bar(&x, &assign(&[("a", 0)]), &g), Err(TorusError::Group(_))));
        let l3 = UnitLattice::new(&["a"], 3).unwrap();
        let y = wedge::<BigInt>(&[LatticeVector::basis(&l3, "a", 1).unwrap()]).unwrap();
        assert!(matches!(compile_to_bar(&y, &assign(&[("a", 2)]), &g), Err(TorusError::NotInAmbient(_))));
        let abelian = Arc::new(crate::groups::FiniteAbelianGroup::cyclic(4).to_group());
        assert!(matches!(compile_to_bar(&x, &assign(&[("a", 2)]), &abelian), Err(TorusError::NotAMatrixGroup)));
    }
}
