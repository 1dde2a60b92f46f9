//! Finite groups as Cayley tables.
//!
//! Every group used by the bar complex is a [`FiniteGroup`]: a full
//! multiplication table with the identity at index 0. Abelian groups are
//! built from cyclic factors and enumerated lexicographically by exponent
//! vector; matrix groups are enumerated breadth-first from the identity.

mod abelian;
mod field;
mod hom;
mod matrix;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use abelian::FiniteAbelianGroup;
pub use field::{units_of_field, FieldElement, FiniteField, UnitGroup, SUPPORTED_Q};
pub use hom::GroupHom;
pub use matrix::{from_matrix_generators, FqMatrix};

/// Default cap on the order of groups built from generators.
pub const DEFAULT_CONSTRUCTION_CAP: usize = 4096;

/// Tables of at most this order are checked against the group axioms on construction.
const AXIOM_CHECK_LIMIT: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("unsupported field size q = {0}")]
    UnsupportedField(u32),
    #[error("{0} is not a unit")]
    NotAUnit(u32),
    #[error("group closure exceeds the size cap of {cap} elements")]
    SizeCap { cap: usize },
    #[error("invalid matrix generator: {0}")]
    BadMatrix(String),
    #[error("multiplication table violates the group axioms: {0}")]
    NotAGroup(String),
    #[error("generator images do not extend to a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("cyclic factor orders must be at least 1")]
    ZeroOrder,
}

/// Matrix realization of the elements, when the group came from matrices.
#[derive(Clone, Debug)]
pub struct MatrixLabels {
    pub field: FiniteField,
    pub matrices: Vec<FqMatrix>,
    index: HashMap<FqMatrix, u32>,
}

/// Serializable description of a group, the input format of the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupDescription {
    Abelian { orders: Vec<u64> },
    Matrix { q: u32, gens: Vec<Vec<Vec<u32>>> },
}

impl GroupDescription {
    pub fn build(&self, cap: usize) -> Result<FiniteGroup, GroupError> {
        match self {
            Self::Abelian { orders } => Ok(FiniteAbelianGroup::new(orders.clone())?.to_group()),
            Self::Matrix { q, gens } => from_matrix_generators(*q, gens, cap),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    generators: Vec<u32>,
    matrices: Option<MatrixLabels>,
    description: Option<GroupDescription>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mul == other.mul
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Builds a group from a row-major multiplication table whose identity is element 0.
    pub fn from_table(order: usize, mul: Vec<u32>, generators: Vec<u32>) -> Result<Self, GroupError> {
        if order == 0 || mul.len() != order * order {
            return Err(GroupError::NotAGroup("table size".into()));
        }
        if mul.iter().any(|&x| x as usize >= order) {
            return Err(GroupError::NotAGroup("entry out of range".into()));
        }
        let mut inv = vec![u32::MAX; order];
        for a in 0..order {
            if mul[a] != a as u32 || mul[a * order] != a as u32 {
                return Err(GroupError::NotAGroup("element 0 is not the identity".into()));
            }
            match (0..order).find(|&b| mul[a * order + b] == 0) {
                Some(b) => inv[a] = b as u32,
                None => return Err(GroupError::NotAGroup(format!("element {a} has no inverse"))),
            }
        }
        let g = Self {
            order,
            mul,
            inv,
            generators,
            matrices: None,
            description: None,
        };
        if order <= AXIOM_CHECK_LIMIT {
            g.check_axioms()?;
        }
        Ok(g)
    }

    /// Exhaustive check of associativity and two-sided inverses.
    pub fn check_axioms(&self) -> Result<(), GroupError> {
        let n = self.order as u32;
        for a in 0..n {
            let ai = self.inv(a);
            if self.mul(a, ai) != 0 || self.mul(ai, a) != 0 {
                return Err(GroupError::NotAGroup(format!("inverse of {a} is one-sided")));
            }
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(GroupError::NotAGroup(format!("({a} {b}) {c} != {a} ({b} {c})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn trivial() -> Self {
        Self::from_table(1, vec![0], Vec::new()).expect("trivial group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub const fn identity(&self) -> u32 {
        0
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.order + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn conjugate(&self, w: u32, g: u32) -> u32 {
        self.mul(self.mul(w, g), self.inv(w))
    }

    pub fn commute(&self, a: u32, b: u32) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order as u32;
        (0..n).all(|a| (a + 1..n).all(|b| self.commute(a, b)))
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order as u32
    }

    pub fn element_order(&self, a: u32) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn matrices(&self) -> Option<&MatrixLabels> {
        self.matrices.as_ref()
    }

    /// Index of the element realized by `m`, for matrix groups.
    pub fn element_of_matrix(&self, m: &FqMatrix) -> Option<u32> {
        self.matrices.as_ref()?.index.get(m).copied()
    }

    pub fn description(&self) -> Option<&GroupDescription> {
        self.description.as_ref()
    }

    pub(crate) fn with_description(mut self, d: GroupDescription) -> Self {
        self.description = Some(d);
        self
    }

    pub(crate) fn with_matrices(mut self, field: FiniteField, matrices: Vec<FqMatrix>) -> Self {
        let index = matrices
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i as u32))
            .collect();
        self.matrices = Some(MatrixLabels { field, matrices, index });
        self
    }

    /// `G x H` with `(g, h)` at index `g * |H| + h`.
    pub fn direct_product(&self, other: &Self) -> Self {
        let (n, m) = (self.order, other.order);
        let nm = n * m;
        let mut mul = vec![0u32; nm * nm];
        for a in 0..nm {
            let (a1, a2) = ((a / m) as u32, (a % m) as u32);
            for b in 0..nm {
                let (b1, b2) = ((b / m) as u32, (b % m) as u32);
                mul[a * nm + b] = self.mul(a1, b1) * m as u32 + other.mul(a2, b2);
            }
        }
        let mut gens: Vec<u32> = self.generators.iter().map(|&g| g * m as u32).collect();
        gens.extend(other.generators.iter().copied());
        let inv = (0..nm)
            .map(|a| self.inv((a / m) as u32) * m as u32 + other.inv((a % m) as u32))
            .collect();
        let description = match (&self.description, &other.description) {
            (Some(GroupDescription::Abelian { orders: a }), Some(GroupDescription::Abelian { orders: b })) => {
                Some(GroupDescription::Abelian {
                    orders: a.iter().chain(b).copied().collect(),
                })
            }
            _ => None,
        };
        Self {
            order: nm,
            mul,
            inv,
            generators: gens,
            matrices: None,
            description,
        }
    }

    /// Index of `(g, h)` in `self x other`, matching [`direct_product`](Self::direct_product).
    pub fn pair_index(&self, other: &Self, g: u32, h: u32) -> u32 {
        let _ = self;
        g * other.order as u32 + h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_groups() {
        // {0, 1} with 1 * 1 = 1 has no inverse for 1
        assert!(FiniteGroup::from_table(2, vec![0, 1, 1, 1], vec![]).is_err());
        assert!(FiniteGroup::from_table(2, vec![0, 1], vec![]).is_err());
    }

    #[test]
    fn product_of_cyclics_matches_abelian_product() {
        let a = FiniteAbelianGroup::cyclic(2).to_group();
        let b = FiniteAbelianGroup::cyclic(4).to_group();
        let p = a.direct_product(&b);
        let q = FiniteAbelianGroup::product(&FiniteAbelianGroup::cyclic(2), &FiniteAbelianGroup::cyclic(4)).to_group();
        assert_eq!(p, q);
        assert_eq!(p.description(), q.description());
        p.check_axioms().unwrap();
    }

    #[test]
    fn description_round_trip() {
        let d: GroupDescription = serde_json::from_str(r#"{"kind":"abelian","orders":[2,2]}"#).unwrap();
        assert_eq!(d.build(DEFAULT_CONSTRUCTION_CAP).unwrap().order(), 4);
        let m: GroupDescription = serde_json::from_str(r#"{"kind":"matrix","q":2,"gens":[[[1,1],[0,1]],[[0,1],[1,0]]]}"#).unwrap();
        assert_eq!(m.build(DEFAULT_CONSTRUCTION_CAP).unwrap().order(), 6);
        assert_eq!(serde_json::to_string(&d).unwrap(), r#"{"kind":"abelian","orders":[2,2]}"#);
    }
}
