use std::fmt;

use serde::{Deserialize, Serialize};

use super::{cokernel_invariants, IntScalar, SparseIntMatrix};

/// Isomorphism type of a finitely generated abelian group:
/// `Z/t_1 + ... + Z/t_k + Z^free_rank` with `1 < t_1 | t_2 | ... | t_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants<T> {
    pub torsion: Vec<T>,
    pub free_rank: usize,
}

impl<T: IntScalar> AbelianInvariants<T> {
    /// Panics if `torsion` is not a divisibility chain of factors > 1.
    pub fn new(torsion: Vec<T>, free_rank: usize) -> Self {
        assert!(torsion.iter().all(|t| t > &T::one()), "invariant factors must exceed 1");
        assert!(
            torsion.windows(2).all(|w| w[1].is_multiple_of(&w[0])),
            "invariant factors must form a divisibility chain"
        );
        Self { torsion, free_rank }
    }

    pub fn trivial() -> Self {
        Self::new(Vec::new(), 0)
    }

    pub fn integers() -> Self {
        Self::new(Vec::new(), 1)
    }

    /// `Z/n`; `n = 0` gives `Z`, `n = 1` the trivial group.
    pub fn cyclic(n: T) -> Self {
        Self::from_cyclic_orders([n])
    }

    /// Normalizes an arbitrary direct sum of cyclic groups `Z/n_i` (`n_i = 0` meaning `Z`).
    pub fn from_cyclic_orders(orders: impl IntoIterator<Item = T>) -> Self {
        let orders: Vec<T> = orders.into_iter().map(|n| n.abs()).collect();
        let k = orders.len();
        let diag = SparseIntMatrix::from_triplets(k, k, orders.into_iter().enumerate().map(|(i, n)| (i, i, n)))
            .expect("diagonal in range");
        cokernel_invariants(&diag)
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, or `None` when the group is infinite.
    pub fn order(&self) -> Option<T> {
        self.is_finite()
            .then(|| self.torsion.iter().fold(T::one(), |acc, t| acc * t.clone()))
    }

    /// Exponent of the torsion subgroup.
    pub fn exponent(&self) -> T {
        self.torsion.last().cloned().unwrap_or_else(T::one)
    }

    /// Cyclic orders with `0` standing for each free summand.
    fn cyclic_parts(&self) -> Vec<T> {
        let mut v = self.torsion.clone();
        v.extend(std::iter::repeat_n(T::zero(), self.free_rank));
        v
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut parts = self.cyclic_parts();
        parts.extend(other.cyclic_parts());
        Self::from_cyclic_orders(parts)
    }

    /// `Z/a (x) Z/b = Z/gcd(a, b)`, with `gcd(a, 0) = a`.
    pub fn tensor(&self, other: &Self) -> Self {
        let (a, b) = (self.cyclic_parts(), other.cyclic_parts());
        Self::from_cyclic_orders(a.iter().flat_map(|x| b.iter().map(move |y| x.gcd(y))))
    }

    /// `Tor(Z/a, Z/b) = Z/gcd(a, b)`; free summands contribute nothing.
    pub fn tor(&self, other: &Self) -> Self {
        Self::from_cyclic_orders(
            self.torsion
                .iter()
                .flat_map(|x| other.torsion.iter().map(move |y| x.gcd(y))),
        )
    }
}

impl<T: IntScalar> fmt::Display for AbelianInvariants<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|t| format!("Z/{t}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Inv = AbelianInvariants<i64>;

    #[test]
    fn normalization_combines_coprime_parts() {
        assert_eq!(Inv::from_cyclic_orders([2, 3]).torsion, vec![6]);
        assert_eq!(Inv::from_cyclic_orders([4, 2, 1]).torsion, vec![2, 4]);
        let z = Inv::from_cyclic_orders([0, 6, 4]);
        assert_eq!((z.torsion.clone(), z.free_rank), (vec![2, 12], 1));
        assert!(Inv::cyclic(1).is_trivial());
    }

    #[test]
    fn tensor_and_tor_of_cyclics() {
        assert_eq!(Inv::cyclic(4).tensor(&Inv::cyclic(6)).torsion, vec![2]);
        assert_eq!(Inv::cyclic(4).tor(&Inv::cyclic(6)).torsion, vec![2]);
        assert_eq!(Inv::integers().tensor(&Inv::cyclic(5)).torsion, vec![5]);
        assert!(Inv::integers().tor(&Inv::cyclic(5)).is_trivial());
    }

    #[test]
    fn order_and_display() {
        let g = Inv::from_cyclic_orders([2, 2, 2]);
        assert_eq!(g.order(), Some(8));
        assert_eq!(g.to_string(), "Z/2 + Z/2 + Z/2");
        assert_eq!(Inv::integers().order(), None);
        assert_eq!(Inv::trivial().to_string(), "0");
    }
}
