//! Markovian open-system dynamics: the Lindblad generator, its steady state,
//! adaptive time integration, and the rate models built on them.

mod integrate;
mod models;
mod steady;
mod thermal;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fock::TruncatedOperator;
use crate::scalar::{creal, Cplx, Real};

pub use integrate::{evolve, fit_decay, DecayFit, EvolveOptions};
pub use models::{
    elementary_dephasing_model, four_level_model, ground_manifold_dephasing, two_level_dephasing,
    two_level_model, FourLevel, SuperpositionSpec,
};
pub use steady::{liouvillian, steady_state, SteadyState};
pub use thermal::{
    bose_occupation, eigenoperator_rates, thermal_weight, waveguide_pure_dephasing, RateEntry,
    ThermalEnvironment,
};

/// Hamiltonian plus weighted collapse operators, D[A]ρ = AρA† − ½{A†A, ρ}.
#[derive(Debug, Clone)]
pub struct LindbladModel<T: Real> {
    h: TruncatedOperator<T>,
    collapse: Vec<(TruncatedOperator<T>, T)>,
}

impl<T: Real> LindbladModel<T> {
    pub fn new(h: TruncatedOperator<T>, collapse: Vec<(TruncatedOperator<T>, T)>) -> Result<Self> {
        let scale = h.max_abs().max(T::one());
        let dev = h.hermiticity_deviation();
        if !(dev <= T::lit(1e-12).max(T::eps() * T::lit(100.0)) * scale) {
            return Err(Error::NonHermitian { deviation: dev.as_f64() });
        }
        for (a, r) in &collapse {
            h.check_dim(a)?;
            if !(*r >= T::zero()) || !r.finite() {
                return Err(Error::InvalidParameter(format!("collapse rate must be non-negative, got {r}")));
            }
        }
        Ok(Self { h, collapse })
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    pub fn hamiltonian(&self) -> &TruncatedOperator<T> {
        &self.h
    }

    pub fn collapse(&self) -> &[(TruncatedOperator<T>, T)] {
        &self.collapse
    }

    /// Replaces the rate of collapse term `i`.
    pub fn with_rate(mut self, i: usize, rate: T) -> Result<Self> {
        if i >= self.collapse.len() {
            return Err(Error::InvalidInput(format!("no collapse term {i}")));
        }
        self.collapse[i].1 = rate;
        let LindbladModel { h, collapse } = self;
        Self::new(h, collapse)
    }

    pub(crate) fn rhs_matrix(&self, rho: &DMatrix<Cplx<T>>) -> DMatrix<Cplx<T>> {
        let h = self.h.matrix();
        let minus_i = Cplx::new(T::zero(), -T::one());
        let mut out = (h * rho - rho * h) * minus_i;
        let half = creal(T::lit(0.5));
        for (a, r) in &self.collapse {
            if *r == T::zero() {
                continue;
            }
            let a = a.matrix();
            let ad = a.adjoint();
            let ada = &ad * a;
            out += (a * rho * &ad - (&ada * rho + rho * &ada) * half) * creal(*r);
        }
        out
    }
}

/// dρ/dt = −i[H, ρ] + Σ r D[A]ρ.
pub fn lindblad_rhs<T: Real>(model: &LindbladModel<T>, rho: &TruncatedOperator<T>) -> Result<TruncatedOperator<T>> {
    model.h.check_dim(rho)?;
    Ok(TruncatedOperator::from_matrix_unchecked(model.rhs_matrix(rho.matrix())))
}

/// |ψ⟩⟨ψ| for a state vector.
pub fn pure_state<T: Real>(psi: &[Cplx<T>]) -> Result<TruncatedOperator<T>> {
    if psi.is_empty() {
        return Err(Error::InvalidInput("empty state".into()));
    }
    let v = nalgebra::DVector::from_column_slice(psi);
    TruncatedOperator::new(&v * v.adjoint())
}

/// Checks trace, Hermiticity and positivity of a density matrix; returns the
/// smallest eigenvalue.
pub fn check_density<T: Real>(rho: &TruncatedOperator<T>, tol: T) -> Result<T> {
    let tr = rho.trace();
    if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
        return Err(Error::InvalidInput(format!("density matrix trace is {} + {}i", tr.re, tr.im)));
    }
    if rho.hermiticity_deviation() > tol {
        return Err(Error::NonHermitian {
            deviation: rho.hermiticity_deviation().as_f64(),
        });
    }
    let herm = (rho.matrix() + rho.matrix().adjoint()) * creal(T::lit(0.5));
    let min = nalgebra::SymmetricEigen::new(herm)
        .eigenvalues
        .iter()
        .fold(T::lit(f64::INFINITY), |acc, &v| acc.min(v));
    if min < -tol {
        return Err(Error::InvalidInput(format!("density matrix has eigenvalue {min:e}")));
    }
    Ok(min)
}

/// |i⟩⟨j| in dimension `dim`.
pub fn ket_bra<T: Real>(dim: usize, i: usize, j: usize) -> TruncatedOperator<T> {
    let mut m = DMatrix::zeros(dim, dim);
    m[(i, j)] = creal(T::one());
    TruncatedOperator::from_matrix_unchecked(m)
}
