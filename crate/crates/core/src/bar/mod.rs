//! The normalized bar complex of a finite group with trivial integer coefficients.
//!
//! A degree-`n` cell is a tuple `[g1|...|gn]` of non-identity elements;
//! cells containing the identity are zero. The boundary is
//!
//! ```text
//! d[g1|...|gn] = [g2|...|gn] + sum_{i=1}^{n-1} (-1)^i [g1|...|gi gi+1|...|gn] + (-1)^n [g1|...|gn-1]
//! ```
//!
//! Chains are sparse maps from cells to nonzero coefficients. Matrix-level
//! questions (homology, boundary membership, class orders) live in
//! [`complex`].

mod complex;
mod shuffle;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::exactlinalg::IntScalar;
use crate::groups::{FiniteGroup, GroupDescription, GroupError, GroupHom};

pub use complex::{
    boundary_columns, cell_count, cell_index, cell_of_index, homology, BoundaryDecision, BoundaryOracle, ClassOrder,
    HomologyReport, OracleStrategy,
};
pub use shuffle::{shuffle_product, shuffle_product_into};

/// Largest number of arguments accepted by [`BarChain::c_symbol`].
pub const MAX_SYMBOL_ARITY: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BarError {
    #[error("elements {0} and {1} do not commute")]
    NotCommuting(u32, u32),
    #[error("c-symbols take at most {MAX_SYMBOL_ARITY} arguments, got {0}")]
    TooManyArguments(usize),
    #[error("element {0} is not in the group")]
    NotAnElement(u32),
    #[error("{cells} cells exceed the cap of {cap}")]
    CellCap { cells: u128, cap: usize },
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("chains live in different groups")]
    GroupMismatch,
    #[error("degree {0} is not supported here")]
    UnsupportedDegree(usize),
    #[error("malformed chain: {0}")]
    Format(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A formal integer combination of normalized bar cells of fixed degree.
#[derive(Clone, Debug)]
pub struct BarChain<T: IntScalar> {
    group: Arc<FiniteGroup>,
    degree: usize,
    terms: BTreeMap<Vec<u32>, T>,
}

impl<T: IntScalar> PartialEq for BarChain<T> {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.terms == other.terms
            && (Arc::ptr_eq(&self.group, &other.group) || self.group == other.group)
    }
}

impl<T: IntScalar> Eq for BarChain<T> {}

impl<T: IntScalar> BarChain<T> {
    pub fn zero(group: Arc<FiniteGroup>, degree: usize) -> Self {
        Self {
            group,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// `coeff * [cell]`; normalizes to zero if the cell contains the identity.
    pub fn cell(group: Arc<FiniteGroup>, cell: &[u32], coeff: T) -> Result<Self, BarError> {
        let mut c = Self::zero(group, cell.len());
        c.add_term(cell.to_vec(), coeff)?;
        Ok(c)
    }

    /// The empty cell `[]` spanning degree 0.
    pub fn unit(group: Arc<FiniteGroup>) -> Self {
        let mut c = Self::zero(group, 0);
        c.terms.insert(Vec::new(), T::one());
        c
    }

    pub fn from_terms(
        group: Arc<FiniteGroup>,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, T)>,
    ) -> Result<Self, BarError> {
        let mut c = Self::zero(group, degree);
        for (cell, coeff) in terms {
            c.add_term(cell, coeff)?;
        }
        Ok(c)
    }

    /// Adds `coeff * [cell]`, dropping degenerate cells and zero sums.
    pub fn add_term(&mut self, cell: Vec<u32>, coeff: T) -> Result<(), BarError> {
        if cell.len() != self.degree {
            return Err(BarError::DegreeMismatch(self.degree, cell.len()));
        }
        if let Some(&g) = cell.iter().find(|&&g| g as usize >= self.group.order()) {
            return Err(BarError::NotAnElement(g));
        }
        self.add_unchecked(cell, coeff);
        Ok(())
    }

    fn add_unchecked(&mut self, cell: Vec<u32>, coeff: T) {
        if coeff.is_zero() || cell.contains(&0) {
            return;
        }
        match self.terms.entry(cell) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().clone() + coeff;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, T> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, cell: &[u32]) -> T {
        self.terms.get(cell).cloned().unwrap_or_else(T::zero)
    }

    fn check_compatible(&self, other: &Self) -> Result<(), BarError> {
        if self.degree != other.degree {
            return Err(BarError::DegreeMismatch(self.degree, other.degree));
        }
        if !Arc::ptr_eq(&self.group, &other.group) && *self.group != *other.group {
            return Err(BarError::GroupMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, BarError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (cell, v) in &other.terms {
            out.add_unchecked(cell.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, BarError> {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, k: &T) -> Self {
        let mut out = Self::zero(self.group.clone(), self.degree);
        if !k.is_zero() {
            out.terms = self
                .terms
                .iter()
                .map(|(c, v)| (c.clone(), v.clone() * k.clone()))
                .collect();
        }
        out
    }

    /// The boundary, a chain of degree `n - 1`. Degree 0 maps to the zero chain of degree 0.
    pub fn boundary(&self) -> Self {
        let n = self.degree;
        if n == 0 {
            return Self::zero(self.group.clone(), 0);
        }
        let mut out = Self::zero(self.group.clone(), n - 1);
        let g = &self.group;
        for (cell, v) in &self.terms {
            out.add_unchecked(cell[1..].to_vec(), v.clone());
            for i in 1..n {
                let mut face = Vec::with_capacity(n - 1);
                face.extend_from_slice(&cell[..i - 1]);
                face.push(g.mul(cell[i - 1], cell[i]));
                face.extend_from_slice(&cell[i + 1..]);
                let c = if i % 2 == 1 { -v.clone() } else { v.clone() };
                out.add_unchecked(face, c);
            }
            let c = if n % 2 == 1 { -v.clone() } else { v.clone() };
            out.add_unchecked(cell[..n - 1].to_vec(), c);
        }
        out
    }

    pub fn is_cycle(&self) -> bool {
        self.boundary().is_zero()
    }

    /// `c(g1, ..., gn) = sum over permutations s of sign(s) [g_s(1)|...|g_s(n)]`,
    /// for pairwise commuting arguments.
    pub fn c_symbol(group: Arc<FiniteGroup>, elements: &[u32]) -> Result<Self, BarError> {
        let n = elements.len();
        if n > MAX_SYMBOL_ARITY {
            return Err(BarError::TooManyArguments(n));
        }
        if let Some(&g) = elements.iter().find(|&&g| g as usize >= group.order()) {
            return Err(BarError::NotAnElement(g));
        }
        for (i, &a) in elements.iter().enumerate() {
            for &b in &elements[i + 1..] {
                if !group.commute(a, b) {
                    return Err(BarError::NotCommuting(a, b));
                }
            }
        }
        let mut out = Self::zero(group, n);
        for (perm, sign) in permutations(n) {
            let cell = perm.iter().map(|&i| elements[i]).collect();
            out.add_unchecked(cell, T::from_i64_exact(sign));
        }
        Ok(out)
    }

    /// Image under a group homomorphism; cells hitting the identity vanish.
    pub fn pushforward(&self, f: &GroupHom) -> Result<Self, BarError> {
        if !Arc::ptr_eq(f.source(), &self.group) && **f.source() != *self.group {
            return Err(BarError::GroupMismatch);
        }
        let mut out = Self::zero(f.target().clone(), self.degree);
        for (cell, v) in &self.terms {
            out.add_unchecked(cell.iter().map(|&g| f.apply(g)).collect(), v.clone());
        }
        Ok(out)
    }

    /// Same chain viewed in an equal group behind a different pointer.
    pub fn rebase(&self, group: Arc<FiniteGroup>) -> Result<Self, BarError> {
        if *group != *self.group {
            return Err(BarError::GroupMismatch);
        }
        Ok(Self {
            group,
            degree: self.degree,
            terms: self.terms.clone(),
        })
    }

    /// `{"group": <descr>, "degree": n, "terms": [{"cells": [...], "coeff": k}]}`.
    /// Coefficients are JSON numbers when they fit in 64 bits, strings otherwise.
    pub fn to_json(&self) -> Result<Value, BarError> {
        let descr = self
            .group
            .description()
            .ok_or_else(|| BarError::Format("group has no description".into()))?;
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(cell, v)| json!({ "cells": cell, "coeff": coeff_json(v) }))
            .collect();
        Ok(json!({ "group": descr, "degree": self.degree, "terms": terms }))
    }

    /// Parses the JSON form, building the group from its description.
    pub fn from_json(value: &Value, cap: usize) -> Result<Self, BarError> {
        let descr: GroupDescription = serde_json::from_value(value.get("group").cloned().unwrap_or(Value::Null))
            .map_err(|e| BarError::Format(e.to_string()))?;
        Self::from_json_in(value, Arc::new(descr.build(cap)?))
    }

    /// Parses the JSON form into an existing group, ignoring the embedded description.
    pub fn from_json_in(value: &Value, group: Arc<FiniteGroup>) -> Result<Self, BarError> {
        let degree = value
            .get("degree")
            .and_then(Value::as_u64)
            .ok_or_else(|| BarError::Format("missing degree".into()))? as usize;
        let terms = value
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| BarError::Format("missing terms".into()))?;
        let mut out = Self::zero(group, degree);
        for t in terms {
            let cell: Vec<u32> = serde_json::from_value(t.get("cells").cloned().unwrap_or(Value::Null))
                .map_err(|e| BarError::Format(e.to_string()))?;
            let coeff = t
                .get("coeff")
                .and_then(parse_coeff::<T>)
                .ok_or_else(|| BarError::Format("bad coefficient".into()))?;
            out.add_term(cell, coeff)?;
        }
        Ok(out)
    }
}

fn coeff_json<T: IntScalar>(v: &T) -> Value {
    match v.to_i64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

fn parse_coeff<T: IntScalar>(v: &Value) -> Option<T> {
    match v {
        Value::Number(n) => T::from_i64(n.as_i64()?),
        Value::String(s) => T::from_str_radix(s, 10).ok(),
        _ => None,
    }
}

/// All permutations of `0..n` with their signs, in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, i64)>) {
        let n = used.len();
        if prefix.len() == n {
            out.push((prefix.clone(), permutation_sign(prefix)));
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub(crate) fn permutation_sign(p: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{from_matrix_generators, FiniteAbelianGroup};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    type Chain = BarChain<BigInt>;

    fn zn(n: u64) -> Arc<FiniteGroup> {
        Arc::new(FiniteAbelianGroup::cyclic(n).to_group())
    }

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(from_matrix_generators(2, &[vec![vec![1, 1], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]], 100).unwrap())
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn boundary_of_two_cell() {
        let g = s3();
        let (a, b) = (1, 2);
        let ab = g.mul(a, b);
        let d = Chain::cell(g.clone(), &[a, b], big(1)).unwrap().boundary();
        let mut expected = Chain::zero(g.clone(), 1);
        expected.add_term(vec![b], big(1)).unwrap();
        expected.add_term(vec![ab], big(-1)).unwrap();
        expected.add_term(vec![a], big(1)).unwrap();
        assert_eq!(d, expected);
    }

    #[test]
    fn degree_one_boundary_vanishes() {
        let g = zn(5);
        assert!(Chain::cell(g, &[3], big(7)).unwrap().boundary().is_zero());
    }

    #[test]
    fn normalization_drops_identity_cells() {
        let g = zn(3);
        assert!(Chain::cell(g.clone(), &[0, 1], big(1)).unwrap().is_zero());
        // d[1|2] in Z/3 has the degenerate face [1+2] = [0]
        let d = Chain::cell(g, &[1, 2], big(1)).unwrap().boundary();
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn c_symbols() {
        let g = zn(6);
        assert_eq!(Chain::c_symbol(g.clone(), &[2]).unwrap(), Chain::cell(g.clone(), &[2], big(1)).unwrap());
        let c2 = Chain::c_symbol(g.clone(), &[1, 2]).unwrap();
        let expected = Chain::from_terms(g.clone(), 2, [(vec![1, 2], big(1)), (vec![2, 1], big(-1))]).unwrap();
        assert_eq!(c2, expected);
        assert!(c2.is_cycle());
        let c3 = Chain::c_symbol(g.clone(), &[1, 2, 3]).unwrap();
        assert_eq!(c3.len(), 6);
        assert!(c3.is_cycle());
        assert!(Chain::c_symbol(g.clone(), &[1, 1, 3]).unwrap().is_zero());
        assert_eq!(
            Chain::c_symbol(g.clone(), &[1, 2, 3, 4, 5]).unwrap_err(),
            BarError::TooManyArguments(5)
        );
        let s = s3();
        let (a, b) = (s.generators()[0], s.generators()[1]);
        assert_eq!(Chain::c_symbol(s, &[a, b]).unwrap_err(), BarError::NotCommuting(a, b));
    }

    #[test]
    fn symbol_sign_rule_is_exact() {
        let g = Arc::new(FiniteAbelianGroup::new(vec![4, 4]).unwrap().to_group());
        let args = [1, 4, 6];
        let base = Chain::c_symbol(g.clone(), &args).unwrap();
        for (perm, sign) in permutations(3) {
            let permuted: Vec<u32> = perm.iter().map(|&i| args[i]).collect();
            assert_eq!(Chain::c_symbol(g.clone(), &permuted).unwrap(), base.scale(&big(sign)));
        }
    }

    #[test]
    fn pushforward_identity_and_projection() {
        let z2 = zn(2);
        let id = GroupHom::identity(z2.clone());
        let c = Chain::cell(z2.clone(), &[1, 1, 1], big(3)).unwrap();
        assert_eq!(c.pushforward(&id).unwrap(), c);

        let p1 = GroupHom::projection(&z2, &z2, 0);
        let v4 = p1.source().clone();
        // (0,1) has index 1, maps to identity
        let c = Chain::cell(v4.clone(), &[1, 2], big(1)).unwrap();
        assert!(c.pushforward(&p1).unwrap().is_zero());
        assert!(Chain::cell(zn(3), &[1], big(1)).unwrap().pushforward(&p1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = Arc::new(FiniteAbelianGroup::new(vec![2, 2]).unwrap().to_group());
        let mut c = Chain::c_symbol(g.clone(), &[1, 2, 3]).unwrap();
        c.add_term(vec![1, 1, 1], "123456789012345678901234567890".parse().unwrap()).unwrap();
        let v = c.to_json().unwrap();
        assert_eq!(v["group"]["kind"], "abelian");
        let back = Chain::from_json(&v, 4096).unwrap();
        assert_eq!(back, c);
        assert!(Chain::from_json(&json!({"degree": 1}), 10).is_err());
    }

    #[test]
    fn arithmetic_checks_compatibility() {
        let a = Chain::cell(zn(3), &[1], big(1)).unwrap();
        let b = Chain::cell(zn(4), &[1], big(1)).unwrap();
        assert_eq!(a.add(&b).unwrap_err(), BarError::GroupMismatch);
        let c = Chain::cell(zn(3), &[1, 1], big(1)).unwrap();
        assert_eq!(a.add(&c).unwrap_err(), BarError::DegreeMismatch(1, 2));
        assert!(a.sub(&a.rebase(zn(3)).unwrap()).unwrap().is_zero());
    }

    fn random_chain(group: Arc<FiniteGroup>, degree: usize) -> impl Strategy<Value = Chain> {
        let order = group.order() as u32;
        prop::collection::vec((prop::collection::vec(0..order, degree), -5i64..=5), 0..8).prop_map(move |terms| {
            Chain::from_terms(group.clone(), degree, terms.into_iter().map(|(c, v)| (c, big(v)))).unwrap()
        })
    }

    proptest! {
        #[test]
        fn boundary_squares_to_zero_s3(c in random_chain(s3(), 4)) {
            prop_assert!(c.boundary().boundary().is_zero());
        }

        #[test]
        fn boundary_squares_to_zero_abelian(c in random_chain(Arc::new(FiniteAbelianGroup::new(vec![2, 3]).unwrap().to_group()), 3)) {
            prop_assert!(c.boundary().boundary().is_zero());
        }

        #[test]
        fn boundary_is_linear(a in random_chain(s3(), 3), b in random_chain(s3(), 3)) {
            let b = b.rebase(a.group().clone()).unwrap();
            prop_assert_eq!(a.add(&b).unwrap().boundary(), a.boundary().add(&b.boundary()).unwrap());
        }

        #[test]
        fn pushforward_commutes_with_boundary(c in random_chain(Arc::new(FiniteAbelianGroup::new(vec![2, 4]).unwrap().to_group()), 3)) {
            let g = c.group().clone();
            let z4 = Arc::new(FiniteAbelianGroup::cyclic(4).to_group());
            let f = GroupHom::from_generators(g, z4, &[2, 1]).unwrap();
            prop_assert_eq!(c.pushforward(&f).unwrap().boundary(), c.boundary().pushforward(&f).unwrap());
        }
    }
}
