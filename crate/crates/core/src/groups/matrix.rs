use std::collections::{HashMap, VecDeque};

use super::{FiniteField, FiniteGroup, GroupDescription, GroupError};

/// Square matrix over `F_q`, row-major, entries in the field's integer encoding.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqMatrix {
    n: usize,
    entries: Vec<u32>,
}

impl FqMatrix {
    pub fn new(rows: &[Vec<u32>]) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(GroupError::BadMatrix("matrix must be square and nonempty".into()));
        }
        Ok(Self {
            n,
            entries: rows.concat(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Self { n, entries }
    }

    pub fn diagonal(d: &[u32]) -> Self {
        let n = d.len();
        let mut m = Self {
            n,
            entries: vec![0; n * n],
        };
        for (i, &x) in d.iter().enumerate() {
            m.entries[i * n + i] = x;
        }
        m
    }

    /// Permutation matrix sending basis vector `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self {
            n,
            entries: vec![0; n * n],
        };
        for (j, &i) in perm.iter().enumerate() {
            m.entries[i * n + j] = 1;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.n).map(<[u32]>::to_vec).collect()
    }

    pub fn mul(&self, other: &Self, f: &FiniteField) -> Self {
        let n = self.n;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0;
                for k in 0..n {
                    acc = f.add(acc, f.mul(self.get(i, k), other.get(k, j)));
                }
                entries[i * n + j] = acc;
            }
        }
        Self { n, entries }
    }

    pub fn determinant(&self, f: &FiniteField) -> u32 {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = 1;
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| a[r * n + c] != 0) else {
                return 0;
            };
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                det = f.neg(det);
            }
            let pv = a[c * n + c];
            det = f.mul(det, pv);
            let pinv = f.inv(pv).expect("nonzero pivot");
            for r in c + 1..n {
                let factor = f.mul(a[r * n + c], pinv);
                if factor == 0 {
                    continue;
                }
                for j in c..n {
                    a[r * n + j] = f.sub(a[r * n + j], f.mul(factor, a[c * n + j]));
                }
            }
        }
        det
    }
}

/// Closure of a set of invertible matrices over `F_q`, by breadth-first
/// search from the identity (right multiplication by generators).
/// Elements keep their matrix labels; the order is capped by `cap`.
pub fn from_matrix_generators(q: u32, gens: &[Vec<Vec<u32>>], cap: usize) -> Result<FiniteGroup, GroupError> {
    let field = FiniteField::new(q)?;
    let mats: Vec<FqMatrix> = gens.iter().map(|g| FqMatrix::new(g)).collect::<Result<_, _>>()?;
    let n = match mats.first() {
        Some(m) => m.size(),
        None => return Err(GroupError::BadMatrix("need at least one generator".into())),
    };
    for m in &mats {
        if m.size() != n {
            return Err(GroupError::BadMatrix("generators differ in size".into()));
        }
        if m.entries.iter().any(|&x| x >= q) {
            return Err(GroupError::BadMatrix(format!("entry not in F_{q}")));
        }
        if m.determinant(&field) == 0 {
            return Err(GroupError::BadMatrix(format!("{:?} is singular", m.rows())));
        }
    }

    let mut elements = vec![FqMatrix::identity(n)];
    let mut index: HashMap<FqMatrix, u32> = HashMap::from([(FqMatrix::identity(n), 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for g in &mats {
            let y = elements[x].mul(g, &field);
            if !index.contains_key(&y) {
                if elements.len() == cap {
                    return Err(GroupError::SizeCap { cap });
                }
                index.insert(y.clone(), elements.len() as u32);
                queue.push_back(elements.len());
                elements.push(y);
            }
        }
    }

    let order = elements.len();
    let mut mul = vec![0u32; order * order];
    for (a, ma) in elements.iter().enumerate() {
        for (b, mb) in elements.iter().enumerate() {
            mul[a * order + b] = index[&ma.mul(mb, &field)];
        }
    }
    let generators = mats.iter().map(|m| index[m]).collect();
    let group = FiniteGroup::from_table(order, mul, generators)?;
    Ok(group
        .with_matrices(field, elements)
        .with_description(GroupDescription::Matrix {
            q,
            gens: gens.to_vec(),
        }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gl_order(n: u32, q: u64) -> u64 {
        (0..n).map(|i| q.pow(n) - q.pow(i)).product()
    }

    #[test]
    fn identity_generates_trivial_group() {
        let g = from_matrix_generators(5, &[vec![vec![1, 0], vec![0, 1]]], 4096).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn gl2_f2_has_order_six() {
        let g = from_matrix_generators(2, &[vec![vec![1, 1], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]], 4096).unwrap();
        assert_eq!(g.order() as u64, gl_order(2, 2));
        assert!(!g.is_abelian());
    }

    #[test]
    fn torus_plus_swap_over_f5() {
        let gens = [
            vec![vec![2, 0], vec![0, 1]],
            vec![vec![1, 0], vec![0, 2]],
            vec![vec![0, 1], vec![1, 0]],
        ];
        let g = from_matrix_generators(5, &gens, 4096).unwrap();
        assert_eq!(g.order(), 32);
        assert_eq!(gl_order(2, 5) % 32, 0);
        // labels are a faithful representation
        let labels = g.matrices().unwrap();
        for a in g.elements() {
            for b in g.elements() {
                let prod = labels.matrices[a as usize].mul(&labels.matrices[b as usize], &labels.field);
                assert_eq!(g.element_of_matrix(&prod), Some(g.mul(a, b)));
            }
        }
    }

    #[test]
    fn size_cap_and_bad_input() {
        let gens = [vec![vec![1, 1], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]];
        assert_eq!(from_matrix_generators(2, &gens, 5), Err(GroupError::SizeCap { cap: 5 }));
        assert!(matches!(
            from_matrix_generators(5, &[vec![vec![1, 1], vec![1, 1]]], 100),
            Err(GroupError::BadMatrix(_))
        ));
        assert!(matches!(
            from_matrix_generators(5, &[vec![vec![1, 0]]], 100),
            Err(GroupError::BadMatrix(_))
        ));
        assert!(matches!(from_matrix_generators(6, &[vec![vec![1]]], 100), Err(GroupError::UnsupportedField(6))));
    }

    #[test]
    fn permutation_and_diagonal_helpers() {
        let f = FiniteField::new(5).unwrap();
        let w = FqMatrix::permutation(&[1, 0]);
        let d = FqMatrix::diagonal(&[2, 3]);
        let conj = w.mul(&d, &f).mul(&w, &f);
        assert_eq!(conj, FqMatrix::diagonal(&[3, 2]));
    }
}
