//! Small finite fields `F_q` and their unit groups.
//!
//! Fixed defining polynomials (coefficients listed from the constant term up):
//!
//! | q  | model               |
//! |----|---------------------|
//! | 4  | F_2[x]/(x^2+x+1)    |
//! | 8  | F_2[x]/(x^3+x+1)    |
//! | 9  | F_3[x]/(x^2+1)      |
//! | 16 | F_2[x]/(x^4+x+1)    |
//! | 25 | F_5[x]/(x^2+2)      |
//! | 27 | F_3[x]/(x^3-x+1)    |
//!
//! An element is encoded as the integer `sum c_i p^i` of its coefficient
//! vector, so `0` and `1` are the field's zero and one, and for prime `q`
//! the encoding is the usual residue.

use serde::{Deserialize, Serialize};

use super::{FiniteAbelianGroup, GroupError};

pub const SUPPORTED_Q: [u32; 12] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27];

fn field_model(q: u32) -> Option<(u32, Vec<u32>)> {
    Some(match q {
        2 | 3 | 5 | 7 | 11 | 13 => (q, vec![0, 1]),
        4 => (2, vec![1, 1, 1]),
        8 => (2, vec![1, 1, 0, 1]),
        9 => (3, vec![1, 0, 1]),
        16 => (2, vec![1, 1, 0, 0, 1]),
        25 => (5, vec![2, 0, 1]),
        27 => (3, vec![1, 2, 0, 1]),
        _ => return None,
    })
}

/// An element of `F_q`, tagged with its field size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElement {
    pub q: u32,
    pub value: u32,
}

#[derive(Clone, Debug)]
pub struct FiniteField {
    q: u32,
    p: u32,
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl FiniteField {
    pub fn new(q: u32) -> Result<Self, GroupError> {
        let (p, modulus) = field_model(q).ok_or(GroupError::UnsupportedField(q))?;
        let deg = modulus.len() - 1;
        let digits = |mut v: u32| -> Vec<u32> {
            (0..deg)
                .map(|_| {
                    let d = v % p;
                    v /= p;
                    d
                })
                .collect()
        };
        let encode = |c: &[u32]| c.iter().rev().fold(0, |acc, &d| acc * p + d);
        let qs = q as usize;
        let mut add = vec![0; qs * qs];
        let mut mul = vec![0; qs * qs];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = encode(&sum);

                let mut prod = vec![0u32; 2 * deg];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                // reduce by the monic modulus from the top degree down
                for k in (deg..2 * deg).rev() {
                    let c = prod[k];
                    if c == 0 {
                        continue;
                    }
                    for (i, m) in modulus.iter().enumerate() {
                        let idx = k - deg + i;
                        prod[idx] = (prod[idx] + (p - c) * m) % p;
                    }
                }
                mul[(a * q + b) as usize] = encode(&prod[..deg]);
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[(a * q + b) as usize] == 0).expect("additive inverse"))
            .collect();
        let mut inv = vec![0; qs];
        for a in 1..q {
            inv[a as usize] = (1..q)
                .find(|&b| mul[(a * q + b) as usize] == 1)
                .ok_or(GroupError::UnsupportedField(q))?;
        }
        Ok(Self {
            q,
            p,
            modulus,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn element(&self, value: u32) -> FieldElement {
        assert!(value < self.q, "value out of range");
        FieldElement { q: self.q, value }
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.inv[a as usize])
    }

    pub fn pow(&self, a: u32, mut k: u64) -> u32 {
        let (mut base, mut acc) = (a, 1);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    fn multiplicative_order(&self, a: u32) -> u32 {
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}

/// `F_q^*` as a cyclic group, with exact discrete logarithms.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    field: FiniteField,
    generator: u32,
    /// `dlog[x]` for nonzero `x`; entry 0 unused
    dlog: Vec<u32>,
    /// `exp[k] = generator^k`
    exp: Vec<u32>,
}

impl UnitGroup {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    /// Smallest encoded element generating `F_q^*`.
    pub fn primitive_root(&self) -> u32 {
        self.generator
    }

    /// Order `q - 1`.
    pub fn order(&self) -> u64 {
        u64::from(self.field.q - 1)
    }

    pub fn as_abelian(&self) -> FiniteAbelianGroup {
        FiniteAbelianGroup::cyclic(self.order())
    }

    pub fn discrete_log(&self, x: u32) -> Result<u32, GroupError> {
        if x == 0 || x >= self.field.q {
            return Err(GroupError::NotAUnit(x));
        }
        Ok(self.dlog[x as usize])
    }

    pub fn exp(&self, k: u64) -> u32 {
        self.exp[(k % self.order()) as usize]
    }

    /// Nonzero elements in encoding order.
    pub fn units(&self) -> impl Iterator<Item = u32> {
        1..self.field.q
    }
}

pub fn units_of_field(q: u32) -> Result<UnitGroup, GroupError> {
    let field = FiniteField::new(q)?;
    let generator = (1..q)
        .find(|&a| field.multiplicative_order(a) == q - 1)
        .expect("finite fields have primitive roots");
    let mut exp = Vec::with_capacity((q - 1) as usize);
    let mut dlog = vec![0; q as usize];
    let mut x = 1;
    for k in 0..q - 1 {
        exp.push(x);
        dlog[x as usize] = k;
        x = field.mul(x, generator);
    }
    Ok(UnitGroup {
        field,
        generator,
        dlog,
        exp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_supported_fields_are_fields() {
        for q in SUPPORTED_Q {
            let f = FiniteField::new(q).unwrap();
            for a in 1..q {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "q={q} a={a}");
            }
            // distributivity on a sample
            for a in 0..q.min(6) {
                for b in 0..q.min(6) {
                    for c in 0..q.min(6) {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn unsupported_q() {
        assert!(matches!(FiniteField::new(6), Err(GroupError::UnsupportedField(6))));
        assert!(units_of_field(32).is_err());
    }

    #[test]
    fn units_examples() {
        let u = units_of_field(2).unwrap();
        assert_eq!(u.order(), 1);
        assert_eq!(u.as_abelian().order(), 1);

        let u = units_of_field(5).unwrap();
        assert_eq!(u.primitive_root(), 2);
        assert_eq!((1..=4).map(|k| u.exp(k)).collect::<Vec<_>>(), vec![2, 4, 3, 1]);

        let u = units_of_field(9).unwrap();
        assert_eq!(u.order(), 8);
        assert_eq!(u.field().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn discrete_log_is_a_homomorphism() {
        for q in SUPPORTED_Q {
            let u = units_of_field(q).unwrap();
            let f = u.field();
            for x in u.units() {
                for y in u.units() {
                    let lhs = u.discrete_log(f.mul(x, y)).unwrap() as u64;
                    let rhs = (u.discrete_log(x).unwrap() + u.discrete_log(y).unwrap()) as u64 % u.order();
                    assert_eq!(lhs, rhs);
                }
            }
            assert!(u.discrete_log(0).is_err());
        }
    }
}
