//! Truncated oscillator-basis numerics for the mode-1 Hamiltonian, with a
//! real-space spectral discretisation kept as an independent check.

mod bands;
mod displacement;
mod eigen;
mod hamiltonian;
mod operators;
mod pde;
mod zak;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::{cabs, Cplx, Real};

pub use bands::{band_grid, band_grids, BandGrid, CellFailure, DEFAULT_TRUNCATION};
pub use displacement::{displacement_element, displacement_matrix};
pub use eigen::{eigensolve, EigenSystem};
pub use hamiltonian::{build_hamiltonian, build_hamiltonian_with, lowest_eigenvalues, ModeOneSpec};
pub use operators::{build_operators, FockOperators};
pub use pde::{pde_oracle, PdeGrid};
pub use zak::{ho_zak_wavefunction, zak_image_sum};

/// Dense complex square matrix over the lowest `dim` number states.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator<T: Real> {
    m: DMatrix<Cplx<T>>,
}

impl<T: Real> TruncatedOperator<T> {
    pub fn new(m: DMatrix<Cplx<T>>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidInput("operator dimension must be positive".into()));
        }
        Ok(Self { m })
    }

    pub(crate) fn from_matrix_unchecked(m: DMatrix<Cplx<T>>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self { m }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { m: DMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { m: DMatrix::identity(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Cplx<T>> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<Cplx<T>> {
        self.m
    }

    pub fn adjoint(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    pub fn trace(&self) -> Cplx<T> {
        self.m.trace()
    }

    /// Largest entry modulus, used as the matrix scale in tolerances.
    pub fn max_abs(&self) -> T {
        self.m.iter().fold(T::zero(), |acc, z| acc.max(cabs(*z)))
    }

    /// max |M − M†| over entries.
    pub fn hermiticity_deviation(&self) -> T {
        let n = self.dim();
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                worst = worst.max(cabs(self.m[(i, j)] - self.m[(j, i)].conj()));
            }
        }
        worst
    }

    /// AB − BA.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            m: &self.m * &other.m - &other.m * &self.m,
        })
    }

    /// Leading `n × n` block.
    pub fn leading_block(&self, n: usize) -> Self {
        let n = n.min(self.dim());
        Self {
            m: self.m.view((0, 0), (n, n)).into_owned(),
        }
    }

    /// Deviation of U†U from the identity on the leading `n × n` block.
    pub fn unitarity_deviation(&self, n: usize) -> T {
        let p = self.m.adjoint() * &self.m;
        let n = n.min(self.dim());
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { Cplx::new(T::one(), T::zero()) } else { Cplx::new(T::zero(), T::zero()) };
                worst = worst.max(cabs(p[(i, j)] - target));
            }
        }
        worst
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> T {
        self.m.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    pub(crate) fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            })
        }
    }
}
