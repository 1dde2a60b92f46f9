//! Linear algebra over `Z/N`, split into prime-power factors `Z/p^e`.
//!
//! Over a local ring `Z/p^e` an entry of minimal `p`-adic valuation divides
//! every other entry, so elimination never needs gcd steps and coefficients
//! stay bounded by `p^e`. This is what makes very large boundary matrices
//! tractable: a cycle `z` of a finite group `G` is an integral boundary iff
//! `z` lies in `image + |G| * C`, because `|G|` annihilates `H_n(G)` for
//! `n >= 1`. The bar complex code relies on that reduction.

use super::sparse::{EliminationRing, UnitElimination};

/// `Z/p^e` with elements stored as reduced `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimePowerRing {
    p: u64,
    e: u32,
    modulus: u64,
}

impl PrimePowerRing {
    pub fn new(p: u64, e: u32) -> Self {
        assert!(p >= 2 && e >= 1, "need a prime power");
        let modulus = p.checked_pow(e).expect("modulus overflow");
        assert!(modulus < (1 << 31), "modulus too large for u64 products");
        Self { p, e, modulus }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.modulus as i64) as u64
    }

    /// `p`-adic valuation, capped at `e` for zero.
    pub fn valuation(&self, mut a: u64) -> u32 {
        if a == 0 {
            return self.e;
        }
        let mut v = 0;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }

    fn inverse(&self, a: u64) -> u64 {
        let (mut old_r, mut r) = (a as i64, self.modulus as i64);
        let (mut old_s, mut s) = (1i64, 0i64);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        debug_assert_eq!(old_r, 1, "not a unit");
        old_s.rem_euclid(self.modulus as i64) as u64
    }
}

impl EliminationRing for PrimePowerRing {
    type Elem = u64;
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_unit(&self, a: &u64) -> bool {
        a % self.p != 0
    }
    fn unit_inverse(&self, a: &u64) -> u64 {
        self.inverse(*a)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.modulus
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.modulus - b) % self.modulus
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.modulus - a) % self.modulus
    }
}

/// A matrix factored over `Z/p^e`.
#[derive(Clone, Debug)]
pub struct LocalSystem {
    elim: UnitElimination<PrimePowerRing>,
    residual_rows: Vec<usize>,
    empty_rows: Vec<usize>,
    /// row transform of the residual block
    u: Vec<Vec<u64>>,
    /// valuation of each diagonal entry of the reduced residual block
    diag_val: Vec<u32>,
}

impl LocalSystem {
    pub fn factor(ring: PrimePowerRing, nrows: usize, columns: &[Vec<(u32, i64)>]) -> Self {
        let cols: Vec<Vec<(u32, u64)>> = columns
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&(i, v)| (i, ring.reduce_i64(v)))
                    .filter(|e| e.1 != 0)
                    .collect()
            })
            .collect();
        let elim = UnitElimination::run(ring, nrows, &cols);

        let mut residual_rows = Vec::new();
        let mut empty_rows = Vec::new();
        let mut col_ids = Vec::new();
        for (i, row) in elim.residual_rows() {
            if row.is_empty() {
                empty_rows.push(i);
            } else {
                residual_rows.push(i);
                col_ids.extend(row.iter().map(|e| e.0));
            }
        }
        col_ids.sort_unstable();
        col_ids.dedup();
        let (r, c) = (residual_rows.len(), col_ids.len());
        let mut a = vec![vec![0u64; c]; r];
        for (ri, (_, row)) in elim.residual_rows().filter(|(_, row)| !row.is_empty()).enumerate() {
            for (j, v) in row {
                a[ri][col_ids.binary_search(j).expect("collected")] = *v;
            }
        }
        let (u, diag_val) = local_smith(&ring, a, c);
        Self {
            elim,
            residual_rows,
            empty_rows,
            u,
            diag_val,
        }
    }

    pub fn ring(&self) -> &PrimePowerRing {
        self.elim.ring()
    }

    /// Residual dimensions after unit elimination.
    pub fn residual_rows(&self) -> usize {
        self.residual_rows.len()
    }

    /// Smallest `k <= e` such that `p^k b` lies in `image + p^e Z^rows`.
    pub fn required_exponent(&self, b: &[i64]) -> u32 {
        let ring = *self.ring();
        let mut rhs: Vec<u64> = b.iter().map(|&v| ring.reduce_i64(v)).collect();
        self.elim.replay(&mut rhs);
        let e = ring.exponent();
        let mut need = 0;
        for &i in &self.empty_rows {
            need = need.max(e - ring.valuation(rhs[i]));
        }
        let y: Vec<u64> = self.residual_rows.iter().map(|&i| rhs[i]).collect();
        for (i, urow) in self.u.iter().enumerate() {
            let z = urow
                .iter()
                .zip(&y)
                .fold(0u64, |acc, (a, b)| (acc + a * b) % ring.modulus());
            let target = self.diag_val.get(i).copied().unwrap_or(e);
            need = need.max(target.saturating_sub(ring.valuation(z)));
        }
        need
    }

    pub fn contains(&self, b: &[i64]) -> bool {
        self.required_exponent(b) == 0
    }

    /// Valuations of the nonunit diagonal entries `p^v`, `0 < v < e`.
    pub fn nonunit_valuations(&self) -> Vec<u32> {
        let e = self.ring().exponent();
        self.diag_val.iter().copied().filter(|&v| v > 0 && v < e).collect()
    }

    /// Number of unit diagonal entries overall (unit pivots plus residual units).
    pub fn unit_rank(&self) -> usize {
        self.elim.pivot_count() + self.diag_val.iter().filter(|&&v| v == 0).count()
    }
}

/// Smith reduction of a dense block over `Z/p^e`, returning the row
/// transform and the valuations of the diagonal (entries equal to `e` are zero).
fn local_smith(ring: &PrimePowerRing, mut a: Vec<Vec<u64>>, ncols: usize) -> (Vec<Vec<u64>>, Vec<u32>) {
    let n = a.len();
    let m = ring.modulus();
    let mut u: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut diag = Vec::new();
    let mut colperm: Vec<usize> = (0..ncols).collect();
    for t in 0..n.min(ncols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for &j in &colperm[t..] {
                if row[j] != 0 {
                    let v = ring.valuation(row[j]);
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, bi, bj)) = best else { break };
        a.swap(t, bi);
        u.swap(t, bi);
        let pos = colperm.iter().position(|&c| c == bj).expect("column present");
        colperm.swap(t, pos);
        let pc = colperm[t];
        let pv = a[t][pc];
        let scale = ring.pow_p(v);
        let unit_inv = ring.inverse(pv / scale);
        for i in t + 1..n {
            if a[i][pc] == 0 {
                continue;
            }
            let f = (a[i][pc] / scale) % m * unit_inv % m;
            for j in 0..ncols {
                a[i][j] = (a[i][j] + m - f * a[t][j] % m) % m;
            }
            for j in 0..n {
                u[i][j] = (u[i][j] + m - f * u[t][j] % m) % m;
            }
        }
        // column operations only touch row t from here on, and are not recorded
        for &j in &colperm[t + 1..] {
            a[t][j] = 0;
        }
        diag.push(v);
    }
    (u, diag)
}

impl PrimePowerRing {
    fn pow_p(&self, k: u32) -> u64 {
        self.p.pow(k)
    }
}

/// Prime factorization by trial division; inputs here are group orders.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// A matrix factored over `Z/N` through its prime-power components.
#[derive(Clone, Debug)]
pub struct ModularSystem {
    modulus: u64,
    locals: Vec<LocalSystem>,
}

impl ModularSystem {
    pub fn factor(modulus: u64, nrows: usize, columns: &[Vec<(u32, i64)>]) -> Self {
        let locals = factorize(modulus)
            .into_iter()
            .map(|(p, e)| LocalSystem::factor(PrimePowerRing::new(p, e), nrows, columns))
            .collect();
        Self { modulus, locals }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn locals(&self) -> &[LocalSystem] {
        &self.locals
    }

    /// Whether `b` lies in `image + N Z^rows`.
    pub fn contains(&self, b: &[i64]) -> bool {
        self.locals.iter().all(|l| l.contains(b))
    }

    /// Order of `b` in `Z^rows / (image + N Z^rows)`.
    pub fn annihilator(&self, b: &[i64]) -> u64 {
        self.locals
            .iter()
            .map(|l| l.ring().prime().pow(l.required_exponent(b)))
            .product()
    }
}
