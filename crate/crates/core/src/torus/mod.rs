//! Wedge calculus for c-symbols of commuting diagonal matrices.
//!
//! A diagonal matrix `diag(x_1, ..., x_n)` whose entries are words in formal
//! units is a vector of the lattice with basis `e_{u,s}` (unit `u`, slot `s`).
//! By multilinearity and antisymmetry of c-symbols, `c(D_1, D_2, D_3)` is
//! modelled by `D_1 ^ D_2 ^ D_3` in the exterior power. Conjugation by
//! permutation matrices acts trivially on homology, so classes are compared
//! modulo the slot-permutation action ([`coinvariant_equal`]).
//!
//! Equality in this quotient is sufficient for the compiled bar chains to be
//! homologous, not necessary: the calculus omits every other relation of
//! `H_3(GL_n)`.
//!
//! Slots are numbered from 1 in the public API.

mod coinvariant;
mod compile;
mod identities;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::bar::BarError;
use crate::exactlinalg::IntScalar;
use crate::groups::GroupError;

pub use coinvariant::{coinvariant_equal, coinvariant_equal_under, CoinvariantProof, WeylRelationLattice};
pub use compile::{compile_symbol, compile_to_bar, Assignment};
pub use identities::{
    inc_class, iota_class, l_class, phi_class, psi_class, remark32_residual, theorem31_residual,
    verify_remark32_identity, verify_theorem31_identity, IdentityReport,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TorusError {
    #[error("unknown unit {0:?}")]
    UnknownUnit(String),
    #[error("duplicate unit name {0:?}")]
    DuplicateUnit(String),
    #[error("invalid unit name {0:?}")]
    BadName(String),
    #[error("cannot parse unit word {0:?}")]
    Parse(String),
    #[error("slot {slot} out of range 1..={slots}")]
    BadSlot { slot: usize, slots: usize },
    #[error("expected {expected} diagonal entries, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("values live in different lattices")]
    LatticeMismatch,
    #[error("wedge degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("unit {0:?} has no assigned value")]
    Unassigned(String),
    #[error("matrix {0:?} is not an element of the ambient group")]
    NotInAmbient(Vec<Vec<u32>>),
    #[error("ambient group carries no matrix labels")]
    NotAMatrixGroup,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Bar(#[from] BarError),
}

/// Formal units `u` and `n` diagonal slots; basis `e_{u,s}` at index `u * n + (s - 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnitLattice {
    names: Vec<String>,
    slots: usize,
}

impl UnitLattice {
    /// Names must be distinct, nonempty, alphabetic-led identifiers other than `"1"`.
    pub fn new<S: AsRef<str>>(names: &[S], slots: usize) -> Result<Arc<Self>, TorusError> {
        if slots == 0 {
            return Err(TorusError::BadSlot { slot: 0, slots });
        }
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            let ok = n.chars().next().is_some_and(char::is_alphabetic)
                && n.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !ok {
                return Err(TorusError::BadName(n.to_string()));
            }
            if out.iter().any(|m| m == n) {
                return Err(TorusError::DuplicateUnit(n.to_string()));
            }
            out.push(n.to_string());
        }
        Ok(Arc::new(Self { names: out, slots }))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn rank(&self) -> usize {
        self.names.len() * self.slots
    }

    pub fn unit_index(&self, name: &str) -> Result<usize, TorusError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| TorusError::UnknownUnit(name.to_string()))
    }

    fn check_slot(&self, slot: usize) -> Result<(), TorusError> {
        if slot == 0 || slot > self.slots {
            return Err(TorusError::BadSlot { slot, slots: self.slots });
        }
        Ok(())
    }

    pub fn basis_index(&self, name: &str, slot: usize) -> Result<usize, TorusError> {
        self.check_slot(slot)?;
        Ok(self.unit_index(name)? * self.slots + slot - 1)
    }

    /// `(unit name, slot)` of a basis index.
    pub fn basis_label(&self, index: usize) -> (&str, usize) {
        (&self.names[index / self.slots], index % self.slots + 1)
    }

    /// Exponent of each unit in a word such as `"a"`, `"ab"`, `"a*b^-1"`, `"c^2"`, or `"1"`.
    /// Names are matched greedily, longest first.
    pub fn parse_word(&self, word: &str) -> Result<Vec<i64>, TorusError> {
        let mut exps = vec![0i64; self.names.len()];
        let w: String = word.chars().filter(|c| !c.is_whitespace()).collect();
        if w == "1" {
            return Ok(exps);
        }
        let err = || TorusError::Parse(word.to_string());
        let mut rest = w.as_str();
        if rest.is_empty() {
            return Err(err());
        }
        while !rest.is_empty() {
            rest = rest.strip_prefix('*').unwrap_or(rest);
            let (u, name_len) = self
                .names
                .iter()
                .enumerate()
                .filter(|(_, n)| rest.starts_with(n.as_str()))
                .max_by_key(|(_, n)| n.len())
                .map(|(i, n)| (i, n.len()))
                .ok_or_else(|| {
                    if !rest.starts_with(char::is_alphabetic) {
                        return err();
                    }
                    let end = rest.find(|c: char| !c.is_alphanumeric() && c != '_').unwrap_or(rest.len());
                    TorusError::UnknownUnit(rest[..end].to_string())
                })?;
            rest = &rest[name_len..];
            let mut e = 1i64;
            if let Some(r) = rest.strip_prefix('^') {
                let end = r
                    .char_indices()
                    .find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && c == '-')))
                    .map_or(r.len(), |(i, _)| i);
                e = r[..end].parse().map_err(|_| err())?;
                rest = &r[end..];
            }
            exps[u] += e;
        }
        Ok(exps)
    }
}

/// A vector of a [`UnitLattice`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeVector {
    lattice: Arc<UnitLattice>,
    coords: Vec<i64>,
}

impl LatticeVector {
    pub fn zero(lattice: Arc<UnitLattice>) -> Self {
        let coords = vec![0; lattice.rank()];
        Self { lattice, coords }
    }

    pub fn basis(lattice: &Arc<UnitLattice>, name: &str, slot: usize) -> Result<Self, TorusError> {
        let mut v = Self::zero(lattice.clone());
        v.coords[lattice.basis_index(name, slot)?] = 1;
        Ok(v)
    }

    /// `diag(w_1, ..., w_n)` for unit words `w_s`, e.g. `["c", "c^-1"]`.
    pub fn diag<S: AsRef<str>>(lattice: &Arc<UnitLattice>, entries: &[S]) -> Result<Self, TorusError> {
        if entries.len() != lattice.slots() {
            return Err(TorusError::WrongLength {
                expected: lattice.slots(),
                got: entries.len(),
            });
        }
        let mut v = Self::zero(lattice.clone());
        let n = lattice.slots();
        for (s, w) in entries.iter().enumerate() {
            for (u, e) in lattice.parse_word(w.as_ref())?.into_iter().enumerate() {
                v.coords[u * n + s] += e;
            }
        }
        Ok(v)
    }

    pub fn lattice(&self) -> &Arc<UnitLattice> {
        &self.lattice
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &Self) -> Result<Self, TorusError> {
        if self.lattice != other.lattice {
            return Err(TorusError::LatticeMismatch);
        }
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(Self {
            lattice: self.lattice.clone(),
            coords,
        })
    }

    pub fn scale(&self, k: i64) -> Self {
        Self {
            lattice: self.lattice.clone(),
            coords: self.coords.iter().map(|x| x * k).collect(),
        }
    }

    /// Exponent of unit `u` in slot `s` (1-based).
    pub fn exponent(&self, unit: usize, slot: usize) -> i64 {
        self.coords[unit * self.lattice.slots() + slot - 1]
    }
}

/// `wedge(v_1, ..., v_k)`, multilinear and alternating.
pub fn wedge<T: IntScalar>(vectors: &[LatticeVector]) -> Result<WedgeClass<T>, TorusError> {
    let lattice = match vectors.first() {
        Some(v) => v.lattice.clone(),
        None => return Err(TorusError::DegreeMismatch(1, 0)),
    };
    if vectors.iter().any(|v| v.lattice != lattice) {
        return Err(TorusError::LatticeMismatch);
    }
    let mut out = WedgeClass::zero(lattice, vectors.len());
    let supports: Vec<Vec<(usize, i64)>> = vectors
        .iter()
        .map(|v| v.coords.iter().copied().enumerate().filter(|e| e.1 != 0).collect())
        .collect();
    let mut choice = Vec::with_capacity(vectors.len());
    expand(&supports, &mut choice, 1, &mut out);
    Ok(out)
}

fn expand<T: IntScalar>(supports: &[Vec<(usize, i64)>], choice: &mut Vec<usize>, coeff: i64, out: &mut WedgeClass<T>) {
    let k = choice.len();
    if k == supports.len() {
        out.add_monomial(choice.clone(), T::from_i64_exact(coeff));
        return;
    }
    for &(i, c) in &supports[k] {
        if choice.contains(&i) {
            continue;
        }
        choice.push(i);
        expand(supports, choice, coeff * c, out);
        choice.pop();
    }
}

/// Sorts in place and returns the sign of the sorting permutation, or `None`
/// if an index repeats.
pub(crate) fn sort_with_sign(m: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..m.len() {
        let mut j = i;
        while j > 0 && m[j - 1] > m[j] {
            m.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if m.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// An element of the exterior power of a [`UnitLattice`], in the monomial
/// basis of strictly increasing index tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeClass<T: IntScalar> {
    lattice: Arc<UnitLattice>,
    degree: usize,
    terms: BTreeMap<Vec<usize>, T>,
}

impl<T: IntScalar> WedgeClass<T> {
    pub fn zero(lattice: Arc<UnitLattice>, degree: usize) -> Self {
        Self {
            lattice,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn lattice(&self) -> &Arc<UnitLattice> {
        &self.lattice
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, T> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Adds `coeff * e_{m_1} ^ ... ^ e_{m_k}` for any index order.
    pub(crate) fn add_monomial(&mut self, mut m: Vec<usize>, coeff: T) {
        let Some(sign) = sort_with_sign(&mut m) else { return };
        let coeff = if sign < 0 { -coeff } else { coeff };
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(T::zero);
        *entry = entry.clone() + coeff;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    fn check(&self, other: &Self) -> Result<(), TorusError> {
        if self.lattice != other.lattice {
            return Err(TorusError::LatticeMismatch);
        }
        if self.degree != other.degree {
            return Err(TorusError::DegreeMismatch(self.degree, other.degree));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, TorusError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_monomial(m.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, TorusError> {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, k: &T) -> Self {
        let mut out = Self::zero(self.lattice.clone(), self.degree);
        if !k.is_zero() {
            out.terms = self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * k.clone())).collect();
        }
        out
    }

    /// Image under the slot permutation `e_{u,s} -> e_{u,perm[s]}` (0-based `perm`).
    pub fn permute_slots(&self, perm: &[usize]) -> Self {
        let n = self.lattice.slots();
        assert_eq!(perm.len(), n, "permutation length");
        let mut out = Self::zero(self.lattice.clone(), self.degree);
        for (m, v) in &self.terms {
            let moved = m.iter().map(|&i| (i / n) * n + perm[i % n]).collect();
            out.add_monomial(moved, v.clone());
        }
        out
    }

    /// Same units and slot pattern in a lattice with more slots.
    pub fn embed(&self, target: &Arc<UnitLattice>) -> Result<Self, TorusError> {
        let (n, m) = (self.lattice.slots(), target.slots());
        if m < n {
            return Err(TorusError::LatticeMismatch);
        }
        let map: Vec<usize> = self
            .lattice
            .names()
            .iter()
            .map(|name| target.unit_index(name))
            .collect::<Result<_, _>>()?;
        let mut out = Self::zero(target.clone(), self.degree);
        for (mono, v) in &self.terms {
            let moved = mono.iter().map(|&i| map[i / n] * m + i % n).collect();
            out.add_monomial(moved, v.clone());
        }
        Ok(out)
    }

    /// Applies the lattice map sending unit `u` to the word `substitution[u]`
    /// (units absent from the map are kept), landing in `target`.
    pub fn substitute(
        &self,
        target: &Arc<UnitLattice>,
        substitution: &BTreeMap<String, String>,
    ) -> Result<Self, TorusError> {
        let n = self.lattice.slots();
        if target.slots() != n {
            return Err(TorusError::LatticeMismatch);
        }
        let images: Vec<Vec<i64>> = self
            .lattice
            .names()
            .iter()
            .map(|name| target.parse_word(substitution.get(name).unwrap_or(name)))
            .collect::<Result<_, _>>()?;
        let mut out = Self::zero(target.clone(), self.degree);
        for (mono, v) in &self.terms {
            let vectors: Vec<LatticeVector> = mono
                .iter()
                .map(|&i| {
                    let mut w = LatticeVector::zero(target.clone());
                    for (u, &e) in images[i / n].iter().enumerate() {
                        w.coords[u * n + i % n] = e;
                    }
                    w
                })
                .collect();
            let image = wedge::<T>(&vectors)?;
            out = out.add(&image.scale(v))?;
        }
        Ok(out)
    }

    /// `[{"monomial": [["a", 1], ...], "coeff": k}, ...]`
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, v)| {
                let mono: Vec<Value> = m
                    .iter()
                    .map(|&i| {
                        let (u, s) = self.lattice.basis_label(i);
                        json!([u, s])
                    })
                    .collect();
                let coeff = v.to_i64().map_or_else(|| json!(v.to_string()), |x| json!(x));
                json!({ "monomial": mono, "coeff": coeff })
            })
            .collect();
        Value::Array(terms)
    }

    pub fn from_json(lattice: &Arc<UnitLattice>, degree: usize, value: &Value) -> Result<Self, TorusError> {
        let bad = || TorusError::Parse(value.to_string());
        let mut out = Self::zero(lattice.clone(), degree);
        for t in value.as_array().ok_or_else(bad)? {
            let mono = t.get("monomial").and_then(Value::as_array).ok_or_else(bad)?;
            if mono.len() != degree {
                return Err(TorusError::DegreeMismatch(degree, mono.len()));
            }
            let mut idx = Vec::with_capacity(degree);
            for e in mono {
                let name = e.get(0).and_then(Value::as_str).ok_or_else(bad)?;
                let slot = e.get(1).and_then(Value::as_u64).ok_or_else(bad)? as usize;
                idx.push(lattice.basis_index(name, slot)?);
            }
            let coeff = match t.get("coeff") {
                Some(Value::Number(n)) => n.as_i64().and_then(T::from_i64),
                Some(Value::String(s)) => T::from_str_radix(s, 10).ok(),
                _ => None,
            }
            .ok_or_else(bad)?;
            out.add_monomial(idx, coeff);
        }
        Ok(out)
    }
}

impl<T: IntScalar> fmt::Display for WedgeClass<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, v)) in self.terms.iter().enumerate() {
            let neg = v.is_negative();
            let abs = v.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            let labels: Vec<String> = m
                .iter()
                .map(|&i| {
                    let (u, s) = self.lattice.basis_label(i);
                    format!("e({u},{s})")
                })
                .collect();
            write!(f, "{}", labels.join("^"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type W = WedgeClass<BigInt>;

    fn gl2() -> Arc<UnitLattice> {
        UnitLattice::new(&["a", "b", "c"], 2).unwrap()
    }

    fn e(l: &Arc<UnitLattice>, u: &str, s: usize) -> LatticeVector {
        LatticeVector::basis(l, u, s).unwrap()
    }

    #[test]
    fn lattice_construction() {
        assert!(UnitLattice::new(&["a", "a"], 2).is_err());
        assert!(UnitLattice::new(&["1"], 2).is_err());
        assert!(UnitLattice::new(&["a"], 0).is_err());
        let l = gl2();
        assert_eq!(l.rank(), 6);
        assert_eq!(l.basis_index("b", 2).unwrap(), 3);
        assert_eq!(l.basis_label(3), ("b", 2));
        assert!(l.basis_index("b", 3).is_err());
    }

    #[test]
    fn diag_vectors() {
        let l = gl2();
        assert_eq!(LatticeVector::diag(&l, &["a", "1"]).unwrap(), e(&l, "a", 1));
        let v = LatticeVector::diag(&l, &["c", "c^-1"]).unwrap();
        assert_eq!(v, e(&l, "c", 1).add(&e(&l, "c", 2).scale(-1)).unwrap());
        let v = LatticeVector::diag(&l, &["ab", "b"]).unwrap();
        let expected = e(&l, "a", 1).add(&e(&l, "b", 1)).unwrap().add(&e(&l, "b", 2)).unwrap();
        assert_eq!(v, expected);
        assert_eq!(LatticeVector::diag(&l, &["a*b^-2", "1"]).unwrap().exponent(1, 1), -2);
        assert!(matches!(LatticeVector::diag(&l, &["d", "1"]), Err(TorusError::UnknownUnit(_))));
        assert!(matches!(LatticeVector::diag(&l, &["a"]), Err(TorusError::WrongLength { .. })));
        assert!(LatticeVector::diag(&l, &["a^", "1"]).is_err());
    }

    #[test]
    fn longest_name_wins() {
        let l = UnitLattice::new(&["a", "ab"], 1).unwrap();
        assert_eq!(l.parse_word("ab").unwrap(), vec![0, 1]);
        assert_eq!(l.parse_word("a*ab").unwrap(), vec![1, 1]);
    }

    #[test]
    fn wedge_examples() {
        let l = gl2();
        let v = e(&l, "a", 1);
        let w = e(&l, "b", 2);
        assert!(wedge::<BigInt>(&[v.clone(), v.clone(), w.clone()]).unwrap().is_zero());
        let c = LatticeVector::diag(&l, &["c", "c^-1"]).unwrap();
        let lw: W = wedge(&[v.clone(), w.clone(), c.clone()]).unwrap();
        assert_eq!(lw.to_string(), "e(a,1)^e(b,2)^e(c,1) - e(a,1)^e(b,2)^e(c,2)");
        let iota: W = wedge(&[v, LatticeVector::diag(&l, &["b", "b^-1"]).unwrap()]).unwrap();
        assert_eq!(iota.to_string(), "e(a,1)^e(b,1) - e(a,1)^e(b,2)");
    }

    #[test]
    fn slot_permutation_and_embedding() {
        let l = gl2();
        let lw: W = wedge(&[e(&l, "a", 1), e(&l, "b", 2), e(&l, "c", 1)]).unwrap();
        assert_eq!(lw.permute_slots(&[1, 0]).to_string(), "e(a,2)^e(b,1)^e(c,2)");
        let l3 = UnitLattice::new(&["a", "b", "c"], 3).unwrap();
        assert_eq!(lw.embed(&l3).unwrap().to_string(), "e(a,1)^e(b,2)^e(c,1)");
    }

    #[test]
    fn substitution() {
        let l = gl2();
        let lw: W = wedge(&[e(&l, "a", 1), e(&l, "b", 1), e(&l, "c", 2)]).unwrap();
        let mut s = BTreeMap::new();
        s.insert("b".to_string(), "a".to_string());
        assert!(lw.substitute(&l, &s).unwrap().is_zero());
        s.insert("b".to_string(), "c".to_string());
        assert_eq!(lw.substitute(&l, &s).unwrap().to_string(), "e(a,1)^e(c,1)^e(c,2)");
        s.insert("b".to_string(), "1".to_string());
        assert!(lw.substitute(&l, &s).unwrap().is_zero());
    }

    #[test]
    fn json_round_trip() {
        let l = gl2();
        let lw: W = wedge(&[e(&l, "a", 1), e(&l, "b", 2), LatticeVector::diag(&l, &["c", "c^-1"]).unwrap()]).unwrap();
        let v = lw.to_json();
        assert_eq!(v[0]["monomial"], json!([["a", 1], ["b", 2], ["c", 1]]));
        assert_eq!(W::from_json(&l, 3, &v).unwrap(), lw);
        assert!(W::from_json(&l, 2, &v).is_err());
    }

    fn small_vector(l: Arc<UnitLattice>) -> impl Strategy<Value = LatticeVector> {
        prop::collection::vec(-2i64..=2, l.rank()).prop_map(move |coords| LatticeVector {
            lattice: l.clone(),
            coords,
        })
    }

    proptest! {
        #[test]
        fn wedge_is_alternating(u in small_vector(gl2()), v in small_vector(gl2()), w in small_vector(gl2())) {
            let a: W = wedge(&[u.clone(), v.clone(), w.clone()]).unwrap();
            let b: W = wedge(&[v.clone(), u.clone(), w.clone()]).unwrap();
            prop_assert_eq!(a.clone(), b.scale(&BigInt::from(-1)));
            let c: W = wedge(&[u.clone(), w.clone(), v.clone()]).unwrap();
            prop_assert_eq!(a, c.scale(&BigInt::from(-1)));
            prop_assert!(wedge::<BigInt>(&[u.clone(), v, u]).unwrap().is_zero());
        }

        #[test]
        fn wedge_is_multilinear(u in small_vector(gl2()), u2 in small_vector(gl2()), v in small_vector(gl2()), w in small_vector(gl2())) {
            let lhs: W = wedge(&[u.add(&u2).unwrap(), v.clone(), w.clone()]).unwrap();
            let rhs = wedge::<BigInt>(&[u, v.clone(), w.clone()]).unwrap().add(&wedge(&[u2, v, w]).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
