//! Third homology of products of finite abelian groups and the explicit
//! cycles `chi_{m,n}` representing the Tor summand of `H_3(Z/m x Z/n)`.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde_json::{json, Value};

use crate::bar::{homology, BarChain, BarError, BoundaryOracle, ClassOrder, OracleStrategy};
use crate::exactlinalg::{AbelianInvariants, IntScalar};
use crate::groups::{FiniteAbelianGroup, FiniteGroup, GroupHom};

/// `H_i(Z/n)`: `Z` for `i = 0`, `Z/n` for odd `i`, `0` otherwise. `n = 0` stands for `Z`.
pub fn cyclic_homology<T: IntScalar>(n: u64, i: usize) -> AbelianInvariants<T> {
    match (n, i) {
        (_, 0) => AbelianInvariants::integers(),
        (0, 1) => AbelianInvariants::integers(),
        (0, _) => AbelianInvariants::trivial(),
        (_, i) if i % 2 == 1 => AbelianInvariants::cyclic(T::from_u64(n).expect("order fits scalar")),
        _ => AbelianInvariants::trivial(),
    }
}

/// `Tor(Z/m, Z/n) = Z/gcd(m, n)`.
pub fn tor_cyclic<T: IntScalar>(m: u64, n: u64) -> AbelianInvariants<T> {
    AbelianInvariants::cyclic(T::from_u64(m.gcd(&n)).expect("order fits scalar"))
}

/// `H_0 .. H_degree` of a finite abelian group, by iterating the Kunneth formula over its cyclic factors.
pub fn abelian_homology<T: IntScalar>(orders: &[u64], degree: usize) -> Vec<AbelianInvariants<T>> {
    let mut acc: Vec<AbelianInvariants<T>> = (0..=degree)
        .map(|i| if i == 0 { AbelianInvariants::integers() } else { AbelianInvariants::trivial() })
        .collect();
    for &n in orders {
        let c: Vec<AbelianInvariants<T>> = (0..=degree).map(|i| cyclic_homology(n, i)).collect();
        acc = kunneth_all(&acc, &c, degree);
    }
    acc
}

fn kunneth_all<T: IntScalar>(a: &[AbelianInvariants<T>], b: &[AbelianInvariants<T>], degree: usize) -> Vec<AbelianInvariants<T>> {
    (0..=degree)
        .map(|k| {
            let mut total = AbelianInvariants::trivial();
            for i in 0..=k {
                total = total.direct_sum(&a[i].tensor(&b[k - i]));
            }
            for i in 0..k {
                total = total.direct_sum(&a[i].tor(&b[k - 1 - i]));
            }
            total
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SummandKind {
    /// `H_i(A) (x) H_j(B)`
    Tensor(usize, usize),
    /// `Tor(A, B)`
    Tor,
}

impl fmt::Display for SummandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Tensor(i, j) => write!(f, "H{i}(A) (x) H{j}(B)"),
            Self::Tor => write!(f, "Tor(A, B)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KunnethSummand<T> {
    pub kind: SummandKind,
    pub invariants: AbelianInvariants<T>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KunnethDecomposition<T> {
    pub summands: Vec<KunnethSummand<T>>,
    pub total: AbelianInvariants<T>,
}

impl<T: IntScalar> KunnethDecomposition<T> {
    pub fn to_json(&self) -> Value {
        json!({
            "summands": self.summands.iter().map(|s| json!({
                "kind": s.kind.to_string(),
                "invariants": s.invariants.to_string(),
                "torsion": s.invariants.torsion.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "free_rank": s.invariants.free_rank,
            })).collect::<Vec<_>>(),
            "total": self.total.to_string(),
            "total_torsion": self.total.torsion.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "total_free_rank": self.total.free_rank,
        })
    }
}

/// `H_3(A x B) = sum_{i+j=3} H_i(A) (x) H_j(B) + Tor(A, B)`.
pub fn h3_product_decomposition<T: IntScalar>(a: &FiniteAbelianGroup, b: &FiniteAbelianGroup) -> KunnethDecomposition<T> {
    let ha = abelian_homology::<T>(a.orders(), 3);
    let hb = abelian_homology::<T>(b.orders(), 3);
    let mut summands: Vec<KunnethSummand<T>> = (0..=3)
        .rev()
        .map(|i| KunnethSummand {
            kind: SummandKind::Tensor(i, 3 - i),
            invariants: ha[i].tensor(&hb[3 - i]),
        })
        .collect();
    summands.push(KunnethSummand {
        kind: SummandKind::Tor,
        invariants: ha[1].tor(&hb[1]),
    });
    let total = summands
        .iter()
        .fold(AbelianInvariants::trivial(), |acc, s| acc.direct_sum(&s.invariants));
    KunnethDecomposition { summands, total }
}

/// Summation range of the chi display.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChiVariant {
    /// `i = 1 .. gcd(m, n)`
    Gcd,
    /// `i = 1 .. n`, the bound as printed
    Literal,
}

#[derive(Clone, Debug)]
pub struct ChiChain<T: IntScalar> {
    pub m: u64,
    pub n: u64,
    pub d: u64,
    pub variant: ChiVariant,
    pub chain: BarChain<T>,
}

/// `Z/m x Z/n` with `(x, y)` at index `x * n + y`.
pub fn cyclic_pair(m: u64, n: u64) -> (Arc<FiniteGroup>, Arc<FiniteGroup>, Arc<FiniteGroup>) {
    let a = Arc::new(FiniteAbelianGroup::cyclic(m).to_group());
    let b = Arc::new(FiniteAbelianGroup::cyclic(n).to_group());
    let ab = Arc::new(a.direct_product(&b));
    (a, b, ab)
}

/// The six-term sum over `i` with `x = (m/d, 0)`, `y = (0, n/d)`:
/// `[x|y|iy] - [y|x|iy] + [y|iy|x] + [x|ix|y] - [x|y|ix] + [y|x|ix]`.
/// Cells containing the identity vanish in the normalized complex.
pub fn chi_chain<T: IntScalar>(m: u64, n: u64, variant: ChiVariant) -> Result<ChiChain<T>, BarError> {
    assert!(m >= 1 && n >= 1, "moduli must be positive");
    let (_, _, g) = cyclic_pair(m, n);
    let d = m.gcd(&n);
    let (sm, sn) = (m / d, n / d);
    let el = |a: u64, b: u64| ((a % m) * n + (b % n)) as u32;
    let x = el(sm, 0);
    let y = el(0, sn);
    let bound = match variant {
        ChiVariant::Gcd => d,
        ChiVariant::Literal => n,
    };
    let mut chain = BarChain::zero(g.clone(), 3);
    let one = T::one();
    for i in 1..=bound {
        let ix = el(i * sm, 0);
        let iy = el(0, i * sn);
        for (cell, sign) in [
            ([x, y, iy], 1),
            ([y, x, iy], -1),
            ([y, iy, x], 1),
            ([x, ix, y], 1),
            ([x, y, ix], -1),
            ([y, x, ix], 1),
        ] {
            let c = if sign > 0 { one.clone() } else { -one.clone() };
            chain.add_term(cell.to_vec(), c)?;
        }
    }
    Ok(ChiChain {
        m,
        n,
        d,
        variant,
        chain,
    })
}

/// Outcome of checking that `chi_{m,n}` realizes the splitting of the Tor summand.
#[derive(Clone, Debug)]
pub struct ThetaReport<T: IntScalar> {
    pub m: u64,
    pub n: u64,
    pub d: u64,
    pub chi: ChiChain<T>,
    pub is_cycle: bool,
    pub class_order: ClassOrder,
    /// `p_1*(chi)` and `p_2*(chi)` are boundaries
    pub projections_bound: (bool, bool),
    /// `d chi` bounds and, for `d > 1`, `(d - 1) chi` does not
    pub sharp_order: bool,
    pub h3_direct: AbelianInvariants<T>,
    pub h3_closed_form: AbelianInvariants<T>,
    pub literal_class_order: ClassOrder,
    pub backend: &'static str,
}

impl<T: IntScalar> ThetaReport<T> {
    pub fn class_order_ok(&self) -> bool {
        self.class_order == ClassOrder::Finite(self.d)
    }

    pub fn h3_ok(&self) -> bool {
        self.h3_direct == self.h3_closed_form
    }

    /// Whether the literal `i = 1..n` chain also has class order `d`.
    pub fn literal_ok(&self) -> bool {
        self.literal_class_order == ClassOrder::Finite(self.d)
    }

    pub fn passed(&self) -> bool {
        self.is_cycle
            && self.class_order_ok()
            && self.projections_bound.0
            && self.projections_bound.1
            && self.sharp_order
            && self.h3_ok()
    }

    pub fn to_json(&self) -> Result<Value, BarError> {
        let order = |c: ClassOrder| match c {
            ClassOrder::Finite(k) => json!(k),
            ClassOrder::Infinite => json!("infinite"),
        };
        Ok(json!({
            "m": self.m,
            "n": self.n,
            "d": self.d,
            "chi": self.chi.chain.to_json()?,
            "chi_cells": self.chi.chain.len(),
            "checks": {
                "is_cycle": self.is_cycle,
                "class_order": order(self.class_order),
                "class_order_equals_gcd": self.class_order_ok(),
                "p1_image_is_boundary": self.projections_bound.0,
                "p2_image_is_boundary": self.projections_bound.1,
                "order_is_sharp": self.sharp_order,
                "h3_direct": self.h3_direct.to_string(),
                "h3_closed_form": self.h3_closed_form.to_string(),
                "h3_matches": self.h3_ok(),
            },
            "literal_variant": {
                "class_order": order(self.literal_class_order),
                "class_order_equals_gcd": self.literal_ok(),
            },
            "backend": self.backend,
            "passed": self.passed(),
        }))
    }
}

/// Verifies cycle-hood, class order `gcd(m, n)`, vanishing of both projections,
/// and the order of `H_3(Z/m x Z/n)` against the closed form.
pub fn verify_theta_splitting<T: IntScalar>(m: u64, n: u64, cap: usize) -> Result<ThetaReport<T>, BarError> {
    let (a, b, g) = cyclic_pair(m, n);
    let chi = chi_chain::<T>(m, n, ChiVariant::Gcd)?;
    let literal = chi_chain::<T>(m, n, ChiVariant::Literal)?;
    let d = chi.d;
    let is_cycle = chi.chain.is_cycle();
    let oracle = BoundaryOracle::<T>::new(g.clone(), 3, cap, OracleStrategy::Auto)?;
    let class_order = oracle.class_order(&chi.chain)?;
    let literal_class_order = oracle.class_order(&literal.chain)?;
    let dt = T::from_u64(d).expect("order fits scalar");
    let sharp_order = oracle.is_boundary(&chi.chain.scale(&dt))?.is_boundary
        && (d == 1 || !oracle.is_boundary(&chi.chain.scale(&(dt - T::one())))?.is_boundary);
    let mut projections = [false; 2];
    for (k, target) in [&a, &b].into_iter().enumerate() {
        let p = GroupHom::projection(&a, &b, k);
        let image = chi.chain.pushforward(&p)?;
        let o = BoundaryOracle::<T>::new(target.clone(), 3, cap, OracleStrategy::Auto)?;
        projections[k] = o.is_boundary(&image)?.is_boundary;
    }
    let h3_direct = homology::<T>(&g, 3, cap)?.invariants;
    let h3_closed_form = h3_product_decomposition::<T>(&FiniteAbelianGroup::cyclic(m), &FiniteAbelianGroup::cyclic(n)).total;
    Ok(ThetaReport {
        m,
        n,
        d,
        chi,
        is_cycle,
        class_order,
        projections_bound: (projections[0], projections[1]),
        sharp_order,
        h3_direct,
        h3_closed_form,
        literal_class_order,
        backend: oracle.backend_name(),
    })
}
