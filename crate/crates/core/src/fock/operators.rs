//! Ladder, charge, flux and exponential operators of the mode-1 oscillator.
//!
//! n̂ = i(a† − a)/√(2z), φ̂ = √(z/2)(a + a†). The quadratic forms n̂² and
//! φ̂² are the exact projections of the infinite operators, not products
//! of truncated matrices, so the harmonic part of the Hamiltonian is exactly
//! diagonal at any truncation.

use nalgebra::DMatrix;

use super::displacement::displacement_matrix;
use super::TruncatedOperator;
use crate::error::{Error, Result};
use crate::scalar::{cplx, creal, Cplx, Real};

/// Smallest truncation accepted anywhere in the engine.
pub(crate) const MIN_TRUNCATION: usize = 8;

#[derive(Debug, Clone)]
pub struct FockOperators<T: Real> {
    pub z: T,
    pub a: TruncatedOperator<T>,
    pub a_dag: TruncatedOperator<T>,
    pub n: TruncatedOperator<T>,
    pub phi: TruncatedOperator<T>,
    pub n_sq: TruncatedOperator<T>,
    pub phi_sq: TruncatedOperator<T>,
    /// exp(iφ̂).
    pub exp_i_phi: TruncatedOperator<T>,
    /// exp(i2πn̂).
    pub exp_i2pi_n: TruncatedOperator<T>,
}

impl<T: Real> FockOperators<T> {
    pub fn dim(&self) -> usize {
        self.a.dim()
    }
}

/// Displacement parameter with β a† − β* a = iφ̂.
pub(crate) fn beta_phi<T: Real>(z: T) -> Cplx<T> {
    cplx(T::zero(), (z / T::lit(2.0)).sqrt())
}

/// Displacement parameter with β a† − β* a = i2πn̂.
pub(crate) fn beta_n<T: Real>(z: T) -> Cplx<T> {
    creal(-T::two_pi() / (T::lit(2.0) * z).sqrt())
}

pub fn build_operators<T: Real>(z: T, dim: usize) -> Result<FockOperators<T>> {
    if dim < MIN_TRUNCATION {
        return Err(Error::InvalidParameter(format!(
            "truncation must be at least {MIN_TRUNCATION}, got {dim}"
        )));
    }
    if !(z > T::zero()) || !z.finite() {
        return Err(Error::InvalidParameter(format!("impedance must be positive, got {z}")));
    }
    let two = T::lit(2.0);
    let sq = |n: usize| T::from_usize_lossy(n).sqrt();

    let a = DMatrix::from_fn(dim, dim, |i, j| if j == i + 1 { creal(sq(j)) } else { creal(T::zero()) });
    let a_dag = a.adjoint();

    let cn = T::one() / (two * z).sqrt();
    let cp = (z / two).sqrt();
    let i_unit = cplx(T::zero(), T::one());
    let n = (&a_dag - &a) * (i_unit * creal(cn));
    let phi = (&a + &a_dag) * creal(cp);

    // (a + a†)² and −(a† − a)² share the diagonal 2m + 1 and differ in the
    // sign of the ±2 off-diagonals √((m+1)(m+2)).
    let quad = |off_sign: T| {
        DMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                creal(two * T::from_usize_lossy(i) + T::one())
            } else if j == i + 2 || i == j + 2 {
                let lo = i.min(j);
                creal(off_sign * (sq(lo + 1) * sq(lo + 2)))
            } else {
                creal(T::zero())
            }
        })
    };
    let n_sq = quad(-T::one()) * creal(T::one() / (two * z));
    let phi_sq = quad(T::one()) * creal(z / two);

    Ok(FockOperators {
        z,
        a: TruncatedOperator::from_matrix_unchecked(a),
        a_dag: TruncatedOperator::from_matrix_unchecked(a_dag),
        n: TruncatedOperator::from_matrix_unchecked(n),
        phi: TruncatedOperator::from_matrix_unchecked(phi),
        n_sq: TruncatedOperator::from_matrix_unchecked(n_sq),
        phi_sq: TruncatedOperator::from_matrix_unchecked(phi_sq),
        exp_i_phi: TruncatedOperator::from_matrix_unchecked(displacement_matrix(beta_phi(z), dim)),
        exp_i2pi_n: TruncatedOperator::from_matrix_unchecked(displacement_matrix(beta_n(z), dim)),
    })
}
