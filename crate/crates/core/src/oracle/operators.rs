//! Site operators on the `2^N` product basis.
//!
//! Basis index `b` encodes the configuration bitwise: bit `j` set means atom
//! `j` is excited. Dense operators are built by Kronecker-lifting the
//! single-site lowering operator; the matrix-free kernels act on the same
//! convention directly through bit manipulation.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Single-site lowering operator `|g⟩⟨e|` (index 0 = ground).
pub fn sigma_minus() -> CMatrix {
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 1)] = ONE;
    m
}

/// Kronecker product of `factors`, first factor most significant.
pub fn kron_all(factors: &[CMatrix]) -> CMatrix {
    factors
        .iter()
        .fold(CMatrix::identity(1, 1), |acc, f| acc.kronecker(f))
}

/// `s_j` lifted to `N` sites. Site `j` is bit `j`, i.e. factor `N − 1 − j`.
pub fn site_lowering(n_atoms: usize, site: usize) -> CMatrix {
    assert!(site < n_atoms);
    let factors: Vec<CMatrix> = (0..n_atoms)
        .rev()
        .map(|k| if k == site { sigma_minus() } else { CMatrix::identity(2, 2) })
        .collect();
    kron_all(&factors)
}

/// Collective lowering operator `S = Σ_j s_j`.
pub fn collective_lowering(n_atoms: usize) -> CMatrix {
    (0..n_atoms).fold(CMatrix::zeros(1 << n_atoms, 1 << n_atoms), |acc, j| {
        acc + site_lowering(n_atoms, j)
    })
}

/// A single ladder operator in an operator product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Lower(usize),
    Raise(usize),
}

/// Applies the product `ops[0] ops[1] … ops[k]` to basis state `b`
/// (rightmost first). Ladder operators map basis states to basis states with
/// unit amplitude, or annihilate them.
pub fn apply_product(ops: &[Ladder], mut b: usize) -> Option<usize> {
    for op in ops.iter().rev() {
        match *op {
            Ladder::Lower(j) => {
                if b & (1 << j) == 0 {
                    return None;
                }
                b &= !(1 << j);
            }
            Ladder::Raise(j) => {
                if b & (1 << j) != 0 {
                    return None;
                }
                b |= 1 << j;
            }
        }
    }
    Some(b)
}

/// `Tr{ρ A}` for a ladder-operator product `A`.
pub fn trace_with(rho: &CMatrix, ops: &[Ladder]) -> Complex64 {
    (0..rho.nrows())
        .filter_map(|b| apply_product(ops, b).map(|c| rho[(b, c)]))
        .sum()
}
