//! Exact homological algebra for small finite groups.
//!
//! - [`exactlinalg`]: sparse integer matrices, Smith normal form, integer solving.
//! - [`groups`]: finite fields, abelian groups and matrix groups as Cayley tables.
//! - [`bar`]: the normalized bar complex, c-symbols, homology and boundary tests.
//! - [`kunneth`]: `H_3` of products of cyclic groups and the `chi_{m,n}` cycles.
//! - [`torus`]: wedge calculus for c-symbols of diagonal matrices.
//! - [`milnor`]: presented Milnor K-groups and kernel elements `sum l_{a,b,c}`.
//!
//! Everything is generic over an [`exactlinalg::IntScalar`]; the aliases below
//! fix it to [`num_bigint::BigInt`].

pub mod bar;
pub mod exactlinalg;
pub mod groups;
pub mod kunneth;
pub mod milnor;
pub mod suite;
pub mod torus;

pub use num_bigint::BigInt;

pub type Int = BigInt;
pub type IntMatrix = exactlinalg::SparseIntMatrix<Int>;
pub type Invariants = exactlinalg::AbelianInvariants<Int>;
pub type Chain = bar::BarChain<Int>;
pub type Oracle = bar::BoundaryOracle<Int>;
pub type Wedge = torus::WedgeClass<Int>;

/// Default limit on normalized bar cells in a single boundary matrix.
pub const DEFAULT_CELL_CAP: usize = 1_000_000;

/// Environment variable overriding [`Caps::cells`].
pub const CELL_CAP_ENV: &str = "HOMFORGE_CAP";

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Caps {
    /// largest group built by closure
    pub construction: usize,
    /// largest number of cells in one boundary matrix
    pub cells: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            construction: groups::DEFAULT_CONSTRUCTION_CAP,
            cells: DEFAULT_CELL_CAP,
        }
    }
}

impl Caps {
    /// Defaults, with the cell cap taken from `HOMFORGE_CAP` when set to a positive integer.
    pub fn from_env() -> Self {
        let mut caps = Self::default();
        if let Some(c) = std::env::var(CELL_CAP_ENV).ok().and_then(|v| v.trim().parse().ok()).filter(|&c| c > 0) {
            caps.cells = c;
        }
        caps
    }
}

/// The order-32 subgroup of `GL_2(F_5)` generated by the diagonal torus and the swap.
pub fn torus_swap_gl2_f5() -> groups::FiniteGroup {
    let gens = vec![
        vec![vec![2, 0], vec![0, 1]],
        vec![vec![1, 0], vec![0, 2]],
        vec![vec![0, 1], vec![1, 0]],
    ];
    groups::from_matrix_generators(5, &gens, groups::DEFAULT_CONSTRUCTION_CAP).expect("order 32")
}

/// The order-16 subgroup of `GL_3(F_3)` generated by the diagonal torus and the
/// transposition of the first two coordinates.
pub fn torus_swap_gl3_f3() -> groups::FiniteGroup {
    let gens = vec![
        vec![vec![2, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        vec![vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 1]],
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 2]],
        vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]],
    ];
    groups::from_matrix_generators(3, &gens, groups::DEFAULT_CONSTRUCTION_CAP).expect("order 16")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_caps() {
        let c = Caps::default();
        assert_eq!(c.construction, 4096);
        assert_eq!(c.cells, 1_000_000);
    }

    #[test]
    fn verification_group() {
        let g = torus_swap_gl2_f5();
        assert_eq!(g.order(), 32);
        assert!(!g.is_abelian());
        let h = torus_swap_gl3_f3();
        assert_eq!(h.order(), 16);
        assert!(!h.is_abelian());
    }
}
