
use super::{IntScalar, SparseIntMatrix};

/// Row-major dense integer matrix. Used for transforms and for the small
/// residual blocks left over after sparse elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: IntScalar> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_sparse(a: &SparseIntMatrix<T>) -> Self {
        let mut m = Self::zeros(a.rows(), a.cols());
        for (i, j, v) in a.entries() {
            m.data[i * a.cols() + j] = v.clone();
        }
        m
    }

    pub fn to_sparse(&self) -> SparseIntMatrix<T> {
        let trip = (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.get(i, j).is_zero())
            .map(|(i, j)| (i, j, self.get(i, j).clone()));
        SparseIntMatrix::from_triplets(self.rows, self.cols, trip).expect("in range")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j).clone();
                        out.set(i, j, cur + a.clone() * b.clone());
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &T) {
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let v = s.clone() * k.clone();
                let d = &mut self.data[dst * self.cols + j];
                *d = d.clone() + v;
            }
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &T) {
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let v = s.clone() * k.clone();
                let d = &mut self.data[i * self.cols + dst];
                *d = d.clone() + v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let d = &mut self.data[i * self.cols + j];
            *d = -d.clone();
        }
    }
}

/// Output of [`smith_dense`]: `U * A * V = D` when transforms were requested.
#[derive(Clone, Debug)]
pub struct SnfResult<T> {
    pub d: DenseMatrix<T>,
    pub u: Option<DenseMatrix<T>>,
    pub v: Option<DenseMatrix<T>>,
}

impl<T: IntScalar> SnfResult<T> {
    /// Diagonal entries `d_1 | d_2 | ...`, followed by zeros.
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }

    /// Recomputes every invariant of the decomposition against the input.
    pub fn check(&self, a: &SparseIntMatrix<T>) -> Result<(), String> {
        let diag = self.diagonal();
        for i in 0..self.d.rows {
            for j in 0..self.d.cols {
                if i != j && !self.d.get(i, j).is_zero() {
                    return Err(format!("off-diagonal entry at ({i}, {j})"));
                }
            }
        }
        let r = self.rank();
        if diag[..r].iter().any(|x| x.is_zero() || x.is_negative()) || diag[r..].iter().any(|x| !x.is_zero()) {
            return Err("diagonal not of the form d_1..d_r, 0..".into());
        }
        for w in diag[..r].windows(2) {
            if !w[1].is_multiple_of(&w[0]) {
                return Err(format!("{} does not divide {}", w[0], w[1]));
            }
        }
        if let (Some(u), Some(v)) = (&self.u, &self.v) {
            if u.mul(&DenseMatrix::from_sparse(a)).mul(v) != self.d {
                return Err("U * A * V != D".into());
            }
            for (name, t) in [("U", u), ("V", v)] {
                if !determinant(t).abs().is_one() {
                    return Err(format!("{name} is not unimodular"));
                }
            }
        }
        Ok(())
    }
}

/// Position of the next pivot in the trailing block starting at `(t, t)`:
/// smallest absolute value, then fewest nonzeros in its row and column,
/// then lowest `(row, col)`.
fn choose_pivot<T: IntScalar>(a: &DenseMatrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut row_nz = vec![0usize; a.rows];
    let mut col_nz = vec![0usize; a.cols];
    for i in t..a.rows {
        for j in t..a.cols {
            if !a.get(i, j).is_zero() {
                row_nz[i] += 1;
                col_nz[j] += 1;
            }
        }
    }
    let mut best: Option<(T, usize, usize, usize)> = None;
    for i in t..a.rows {
        if row_nz[i] == 0 {
            continue;
        }
        for j in t..a.cols {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            let key = (v.abs(), row_nz[i] + col_nz[j]);
            let better = match &best {
                None => true,
                Some((bv, bc, _, _)) => key.0 < *bv || (key.0 == *bv && key.1 < *bc),
            };
            if better {
                best = Some((key.0, key.1, i, j));
            }
        }
    }
    best.map(|(_, _, i, j)| (i, j))
}

/// Smith normal form of a dense matrix. Transforms are only built when `track` is set.
pub fn smith_dense<T: IntScalar>(input: &DenseMatrix<T>, track: bool) -> SnfResult<T> {
    let (m, n) = (input.rows, input.cols);
    let mut a = input.clone();
    let mut u = track.then(|| DenseMatrix::identity(m));
    let mut v = track.then(|| DenseMatrix::identity(n));

    let mut t = 0;
    while t < m.min(n) {
        let Some((pi, pj)) = choose_pivot(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        if let Some(u) = u.as_mut() {
            u.swap_rows(t, pi);
        }
        if let Some(v) = v.as_mut() {
            v.swap_cols(t, pj);
        }

        loop {
            let p = a.get(t, t).clone();
            let mut residue = false;
            for i in t + 1..m {
                let x = a.get(i, t);
                if x.is_zero() {
                    continue;
                }
                let q = -x.div_floor(&p);
                a.add_row(i, t, &q);
                if let Some(u) = u.as_mut() {
                    u.add_row(i, t, &q);
                }
                residue |= !a.get(i, t).is_zero();
            }
            for j in t + 1..n {
                let x = a.get(t, j);
                if x.is_zero() {
                    continue;
                }
                let q = -x.div_floor(&p);
                a.add_col(j, t, &q);
                if let Some(v) = v.as_mut() {
                    v.add_col(j, t, &q);
                }
                residue |= !a.get(t, j).is_zero();
            }
            if residue {
                // a remainder smaller than the pivot survived; move it to (t, t)
                let mut best: Option<(T, usize, usize)> = None;
                for i in t..m {
                    let x = a.get(i, t);
                    if !x.is_zero() && best.as_ref().is_none_or(|b| x.abs() < b.0) {
                        best = Some((x.abs(), i, t));
                    }
                }
                for j in t + 1..n {
                    let x = a.get(t, j);
                    if !x.is_zero() && best.as_ref().is_none_or(|b| x.abs() < b.0) {
                        best = Some((x.abs(), t, j));
                    }
                }
                let (_, bi, bj) = best.expect("pivot row/col nonzero");
                a.swap_rows(t, bi);
                a.swap_cols(t, bj);
                if let Some(u) = u.as_mut() {
                    u.swap_rows(t, bi);
                }
                if let Some(v) = v.as_mut() {
                    v.swap_cols(t, bj);
                }
                continue;
            }
            // divisibility: every trailing entry must be a multiple of the pivot
            let offender = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a.get(i, j).is_multiple_of(&p));
            match offender {
                Some((i, _)) => {
                    let one = T::one();
                    a.add_row(t, i, &one);
                    if let Some(u) = u.as_mut() {
                        u.add_row(t, i, &one);
                    }
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            if let Some(u) = u.as_mut() {
                u.negate_row(t);
            }
        }
        t += 1;
    }
    SnfResult { d: a, u, v }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant<T: IntScalar>(m: &DenseMatrix<T>) -> T {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return T::one();
    }
    let mut a = m.clone();
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a.get(i, j).clone() * a.get(k, k).clone() - a.get(i, k).clone() * a.get(k, j).clone();
                a.set(i, j, num / prev.clone());
            }
        }
        prev = a.get(k, k).clone();
    }
    sign * a.get(n - 1, n - 1).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use num_traits::{One, Zero};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    /// Brute-force oracle: determinantal divisors d_k = gcd of all k x k minors,
    /// invariant factors are d_k / d_{k-1}.
    fn invariant_factors_by_minors(a: &DenseMatrix<BigInt>) -> Vec<BigInt> {
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        let mut factors = Vec::new();
        let mut prev = BigInt::one();
        for k in 1..=a.rows().min(a.cols()) {
            let mut g = BigInt::zero();
            for rs in subsets(a.rows(), k) {
                for cs in subsets(a.cols(), k) {
                    let mut sub = DenseMatrix::zeros(k, k);
                    for (x, &r) in rs.iter().enumerate() {
                        for (y, &c) in cs.iter().enumerate() {
                            sub.set(x, y, a.get(r, c).clone());
                        }
                    }
                    g = g.gcd(&determinant(&sub));
                }
            }
            if g.is_zero() {
                break;
            }
            factors.push(&g / &prev);
            prev = g;
        }
        factors
    }

    #[test]
    fn determinant_small() {
        let m = DenseMatrix::from_sparse(&SparseIntMatrix::<BigInt>::from_rows(&[&[2, 4], &[6, 8]]));
        assert_eq!(determinant(&m), BigInt::from(-8));
        let m = DenseMatrix::from_sparse(&SparseIntMatrix::<BigInt>::from_rows(&[
            &[0, 1, 2],
            &[3, 0, 1],
            &[1, 1, 0],
        ]));
        assert_eq!(determinant(&m), BigInt::from(7));
    }

    fn small_dense() -> impl Strategy<Value = SparseIntMatrix<BigInt>> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(prop_oneof![3 => Just(0i64), 4 => -9i64..10], r * c).prop_map(move |vals| {
                let trip = vals
                    .into_iter()
                    .enumerate()
                    .map(|(k, v)| (k / c, k % c, BigInt::from(v)));
                SparseIntMatrix::from_triplets(r, c, trip).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn snf_invariants_hold(a in small_dense()) {
            let res = smith_dense(&DenseMatrix::from_sparse(&a), true);
            prop_assert!(res.check(&a).is_ok(), "{:?}", res.check(&a));
        }

        #[test]
        fn snf_matches_minor_oracle(a in small_dense()) {
            let res = smith_dense(&DenseMatrix::from_sparse(&a), false);
            let nonzero: Vec<BigInt> = res.diagonal().into_iter().filter(|d| !d.is_zero()).collect();
            prop_assert_eq!(nonzero, invariant_factors_by_minors(&DenseMatrix::from_sparse(&a)));
        }
    }
}
