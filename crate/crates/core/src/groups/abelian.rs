use super::{FiniteGroup, GroupDescription, GroupError};

/// `Z/m_1 x ... x Z/m_r`, elements being exponent vectors.
///
/// Elements are indexed lexicographically with the first coordinate most
/// significant, so the zero vector is index 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self, GroupError> {
        if orders.contains(&0) {
            return Err(GroupError::ZeroOrder);
        }
        Ok(Self { orders })
    }

    /// Panics for `n = 0`.
    pub fn cyclic(n: u64) -> Self {
        Self::new(vec![n]).expect("cyclic order must be positive")
    }

    pub fn product(a: &Self, b: &Self) -> Self {
        Self {
            orders: a.orders.iter().chain(&b.orders).copied().collect(),
        }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn index_of(&self, v: &[u64]) -> u64 {
        assert_eq!(v.len(), self.orders.len(), "exponent vector length");
        v.iter()
            .zip(&self.orders)
            .fold(0, |acc, (x, m)| acc * m + x % m)
    }

    pub fn element(&self, mut index: u64) -> Vec<u64> {
        let mut v = vec![0; self.orders.len()];
        for (slot, m) in v.iter_mut().zip(&self.orders).rev() {
            *slot = index % m;
            index /= m;
        }
        v
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((x, y), m)| (x + y) % m)
            .collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.orders).map(|(x, m)| (m - x % m) % m).collect()
    }

    /// Multiplication table form. Generators are the unit vectors of nontrivial factors.
    pub fn to_group(&self) -> FiniteGroup {
        let n = self.order() as usize;
        let elems: Vec<Vec<u64>> = (0..n as u64).map(|i| self.element(i)).collect();
        let mut mul = vec![0u32; n * n];
        for (a, ea) in elems.iter().enumerate() {
            for (b, eb) in elems.iter().enumerate() {
                mul[a * n + b] = self.index_of(&self.add(ea, eb)) as u32;
            }
        }
        let generators = (0..self.orders.len())
            .filter(|&i| self.orders[i] > 1)
            .map(|i| {
                let mut e = vec![0; self.orders.len()];
                e[i] = 1;
                self.index_of(&e) as u32
            })
            .collect();
        FiniteGroup::from_table(n, mul, generators)
            .expect("abelian table is a group")
            .with_description(GroupDescription::Abelian {
                orders: self.orders.clone(),
            })
    }
}
