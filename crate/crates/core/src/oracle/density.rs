use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::operators::CMatrix;

/// `2^N × 2^N` density matrix on the bitwise product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_atoms: usize,
    matrix: CMatrix,
}

/// Deviations from the density-matrix invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub trace_error: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

impl Diagnostics {
    pub fn is_physical(&self, tol: f64, eig_floor: f64) -> bool {
        self.trace_error < tol && self.hermiticity_error < tol && self.min_eigenvalue >= eig_floor
    }

    /// Elementwise worst of two reports.
    pub fn worst(self, other: Self) -> Self {
        Self {
            trace_error: self.trace_error.max(other.trace_error),
            hermiticity_error: self.hermiticity_error.max(other.hermiticity_error),
            min_eigenvalue: self.min_eigenvalue.min(other.min_eigenvalue),
        }
    }
}

impl DensityMatrix {
    /// Wraps `matrix` without checks; see [`DensityMatrix::diagnostics`].
    pub fn from_matrix(n_atoms: usize, matrix: CMatrix) -> Self {
        assert_eq!(matrix.nrows(), 1 << n_atoms);
        assert_eq!(matrix.ncols(), 1 << n_atoms);
        Self { n_atoms, matrix }
    }

    pub fn pure(n_atoms: usize, psi: &[Complex64]) -> Self {
        let v = nalgebra::DVector::from_column_slice(psi);
        let m = &v * v.adjoint();
        Self::from_matrix(n_atoms, m)
    }

    pub fn basis_state(n_atoms: usize, index: usize) -> Self {
        let dim = 1 << n_atoms;
        let mut m = CMatrix::zeros(dim, dim);
        m[(index, index)] = Complex64::new(1.0, 0.0);
        Self::from_matrix(n_atoms, m)
    }

    pub fn ground(n_atoms: usize) -> Self {
        Self::basis_state(n_atoms, 0)
    }

    pub fn fully_excited(n_atoms: usize) -> Self {
        Self::basis_state(n_atoms, (1 << n_atoms) - 1)
    }

    /// Symmetric single-excitation state `Σ_j |j⟩ / √N`.
    pub fn w_state(n_atoms: usize) -> Self {
        let dim = 1 << n_atoms;
        let amp = Complex64::new(1.0 / (n_atoms as f64).sqrt(), 0.0);
        let mut psi = vec![Complex64::new(0.0, 0.0); dim];
        for j in 0..n_atoms {
            psi[1 << j] = amp;
        }
        Self::pure(n_atoms, &psi)
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Replaces the matrix by its Hermitian part.
    pub fn hermitize(&mut self) {
        let h = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        self.matrix = h;
    }

    /// Mean number of excited atoms.
    pub fn excitation(&self) -> f64 {
        (0..self.dim())
            .map(|b| b.count_ones() as f64 * self.matrix[(b, b)].re)
            .sum()
    }

    pub fn diagnostics(&self) -> Diagnostics {
        let trace_error = (self.matrix.trace() - Complex64::new(1.0, 0.0)).norm();
        let hermiticity_error = (&self.matrix - self.matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let herm = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(herm);
        let min_eigenvalue = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        Diagnostics {
            trace_error,
            hermiticity_error,
            min_eigenvalue,
        }
    }
}
