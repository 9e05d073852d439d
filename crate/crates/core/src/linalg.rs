//! Dense complex matrices and the Hermitian operator wrapper.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Maximum entrywise deviation from Hermiticity accepted on construction.
pub const TOL_HERM: f64 = 1e-12;

/// A dense Hermitian matrix. Hermiticity is checked when the value is built
/// and the stored matrix is symmetrized exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        let dev = hermiticity_deviation(&matrix);
        if dev > TOL_HERM {
            return Err(Error::NotHermitian(dev));
        }
        let adj = matrix.adjoint();
        Ok(HermitianOperator {
            matrix: (matrix + adj).unscale(2.0),
        })
    }

    /// Builds from a real symmetric matrix.
    pub fn from_real(matrix: &DMatrix<f64>) -> Result<Self> {
        Self::new(matrix.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn identity(dim: usize) -> Self {
        HermitianOperator {
            matrix: CMatrix::identity(dim, dim),
        }
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

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    /// `Re tr(self · other)`; the imaginary part vanishes for Hermitian pairs.
    pub fn trace_product(&self, other: &HermitianOperator) -> f64 {
        trace_product(&self.matrix, &other.matrix).re
    }

    /// `<v|self|v>` (real for Hermitian operators).
    pub fn expectation(&self, v: &CVector) -> f64 {
        v.dotc(&(&self.matrix * v)).re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.matrix.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Eigenvalues ascending and the matching orthonormal eigenvectors as columns.
    pub fn eigh(&self) -> (Vec<f64>, CMatrix) {
        let eig = SymmetricEigen::new(self.matrix.clone());
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = CMatrix::from_fn(self.dim(), self.dim(), |r, c| eig.eigenvectors[(r, order[c])]);
        (values, vectors)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(f64::NAN)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(f64::NAN)
    }

    /// `exp(-i·angle·self)`, the unitary generated by this operator.
    pub fn exp_i(&self, angle: f64) -> CMatrix {
        let (values, vectors) = self.eigh();
        let phases = CMatrix::from_diagonal(&CVector::from_iterator(
            values.len(),
            values.iter().map(|&e| Complex64::from_polar(1.0, -angle * e)),
        ));
        &vectors * phases * vectors.adjoint()
    }

    pub fn scale(&self, s: f64) -> HermitianOperator {
        HermitianOperator {
            matrix: self.matrix.scale(s),
        }
    }
}

impl std::ops::Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator {
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// `tr(a · b)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn real_matrix_to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}
