use nalgebra::{DMatrix, SymmetricEigen};

use super::TruncatedOperator;
use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

/// Ascending eigenvalues with matching orthonormal eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct EigenSystem<T: Real> {
    pub values: Vec<T>,
    pub vectors: DMatrix<Cplx<T>>,
    /// Largest ‖Hv − λv‖ / ‖H‖ over the requested pairs.
    pub residual: T,
}

impl<T: Real> EigenSystem<T> {
    pub fn vector(&self, i: usize) -> nalgebra::DVector<Cplx<T>> {
        self.vectors.column(i).into_owned()
    }
}

pub(crate) fn hermitian_tolerance<T: Real>() -> T {
    T::lit(1e-12).max(T::eps() * T::lit(100.0))
}

fn residual_tolerance<T: Real>() -> T {
    T::lit(1e-9).max(T::eps() * T::lit(1e3))
}

/// Dense Hermitian diagonalisation; checks the input is Hermitian and the
/// lowest `count` pairs satisfy ‖Hv − λv‖ < 1e−9 ‖H‖.
pub fn eigensolve<T: Real>(h: &TruncatedOperator<T>, count: usize) -> Result<EigenSystem<T>> {
    let scale = h.max_abs().max(T::one());
    let dev = h.hermiticity_deviation();
    if !(dev <= hermitian_tolerance::<T>() * scale) {
        return Err(Error::NonHermitian { deviation: dev.as_f64() });
    }
    let n = h.dim();
    let count = count.min(n);
    let eig = SymmetricEigen::new(h.matrix().clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values: Vec<T> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    if values.iter().any(|v| !v.finite()) {
        return Err(Error::Convergence("eigenvalues are not finite".into()));
    }
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);

    let norm = h.frobenius().max(T::eps());
    let mut residual = T::zero();
    for (c, &val) in values.iter().enumerate().take(count) {
        let v = vectors.column(c);
        let lam = Cplx::new(val, T::zero());
        let r = h.matrix() * v - v * lam;
        residual = residual.max(r.norm() / norm);
    }
    if !(residual < residual_tolerance::<T>()) {
        return Err(Error::Convergence(format!(
            "eigen residual {residual:e} exceeds tolerance"
        )));
    }
    Ok(EigenSystem { values, vectors, residual })
}
