use nalgebra::{DMatrix, DVector};

use super::{check_density, LindbladModel};
use crate::error::{Error, Result};
use crate::fock::TruncatedOperator;
use crate::scalar::{creal, Cplx, Real};

/// Steady state together with the diagnostics of the null-space solve.
#[derive(Debug, Clone)]
pub struct SteadyState<T: Real> {
    pub rho: TruncatedOperator<T>,
    /// ‖L vec(ρ)‖ with the final, symmetrised ρ.
    pub residual: T,
    /// Second-smallest singular value of the Liouvillian over the largest.
    pub gap_ratio: T,
}

/// Liouvillian superoperator acting on column-stacked vec(ρ).
pub fn liouvillian<T: Real>(model: &LindbladModel<T>) -> DMatrix<Cplx<T>> {
    let d = model.dim();
    let id = DMatrix::<Cplx<T>>::identity(d, d);
    let h = model.hamiltonian().matrix();
    let minus_i = Cplx::new(T::zero(), -T::one());
    // vec(AXB) = (Bᵀ ⊗ A) vec(X).
    let mut l = (id.kronecker(h) - h.transpose().kronecker(&id)) * minus_i;
    let half = creal(T::lit(0.5));
    for (a, r) in model.collapse() {
        if *r == T::zero() {
            continue;
        }
        let a = a.matrix();
        let ada = a.adjoint() * a;
        let term = a.conjugate().kronecker(a) - (id.kronecker(&ada) + ada.transpose().kronecker(&id)) * half;
        l += term * creal(*r);
    }
    l
}

/// Unique null vector of the Liouvillian, normalised to unit trace.
pub fn steady_state<T: Real>(model: &LindbladModel<T>) -> Result<SteadyState<T>> {
    let d = model.dim();
    let l = liouvillian(model);
    let sv = l.clone().singular_values();
    let mut s: Vec<T> = sv.iter().copied().collect();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let smax = *s.last().expect("non-empty");
    let second = if s.len() > 1 { s[1] } else { smax };
    let threshold = T::eps().sqrt() * smax.max(T::eps());
    if s.len() > 1 && !(second > threshold) {
        return Err(Error::NonUniqueSteadyState {
            second: second.as_f64(),
            scale: smax.as_f64(),
        });
    }

    // Replace one equation by the trace condition.
    let mut a = l.clone();
    for c in 0..d * d {
        a[(0, c)] = creal(T::zero());
    }
    for i in 0..d {
        a[(0, i * d + i)] = creal(T::one());
    }
    let mut b = DVector::<Cplx<T>>::zeros(d * d);
    b[0] = creal(T::one());
    let x = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::Convergence("steady-state system is singular".into()))?;

    let rho = DMatrix::from_fn(d, d, |i, j| x[j * d + i]);
    let rho = (&rho + rho.adjoint()) * creal(T::lit(0.5));
    let tr = rho.trace();
    let rho = rho / tr;
    let v = DVector::from_iterator(d * d, rho.iter().copied());
    let r = &l * v;
    let residual = r.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
    let scale = smax.max(T::one());
    if !(residual < T::lit(1e-10).max(T::eps() * T::lit(1e4)) * scale) {
        return Err(Error::Convergence(format!("steady-state residual {residual:e}")));
    }
    let rho = TruncatedOperator::from_matrix_unchecked(rho);
    check_density(&rho, T::lit(1e-10).max(T::eps() * T::lit(1e3)))?;
    Ok(SteadyState {
        rho,
        residual,
        gap_ratio: second / smax,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::open_system::{ket_bra, lindblad_rhs};

    fn c(x: f64) -> Cplx<f64> {
        Cplx::new(x, 0.0)
    }

    #[test]
    fn pure_decay_relaxes_to_ground() {
        let h = TruncatedOperator::new(DMatrix::from_diagonal(&DVector::from_vec(vec![c(0.0), c(2.0)]))).unwrap();
        let model = LindbladModel::new(h, vec![(ket_bra(2, 0, 1), 0.3)]).unwrap();
        let ss = steady_state(&model).unwrap();
        let m = ss.rho.matrix();
        assert!((m[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!(m[(1, 1)].norm() < 1e-12);
        assert!(lindblad_rhs(&model, &ss.rho).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn driven_two_level_matches_optical_bloch() {
        // H = Δ|e⟩⟨e| + (Ω/2)σx with decay γ: ρ_ee = (Ω²/4) / (Δ² + γ²/4 + Ω²/2).
        for (delta, omega, gamma) in [(0.0, 0.3, 1.0), (0.7, 1.1, 0.4), (-2.0, 0.2, 0.05)] {
            let mut h = DMatrix::zeros(2, 2);
            h[(1, 1)] = c(delta);
            h[(0, 1)] = c(omega / 2.0);
            h[(1, 0)] = c(omega / 2.0);
            let model = LindbladModel::new(TruncatedOperator::new(h).unwrap(), vec![(ket_bra(2, 0, 1), gamma)]).unwrap();
            let ss = steady_state(&model).unwrap();
            let ree = ss.rho.matrix()[(1, 1)].re;
            let expected = (omega * omega / 4.0) / (delta * delta + gamma * gamma / 4.0 + omega * omega / 2.0);
            assert!((ree - expected).abs() < 1e-8, "{ree} vs {expected}");
        }
    }

    #[test]
    fn degenerate_null_space_rejected() {
        let a = TruncatedOperator::new(DMatrix::from_diagonal(&DVector::from_vec(vec![c(1.0), c(-1.0)]))).unwrap();
        let model = LindbladModel::new(TruncatedOperator::zeros(2), vec![(a, 1.0)]).unwrap();
        assert!(matches!(steady_state(&model), Err(Error::NonUniqueSteadyState { .. })));
    }

    #[test]
    fn liouvillian_matches_rhs() {
        let mut h = DMatrix::zeros(3, 3);
        h[(0, 2)] = Cplx::new(0.2, 0.1);
        h[(2, 0)] = Cplx::new(0.2, -0.1);
        h[(1, 1)] = c(0.5);
        let model = LindbladModel::new(
            TruncatedOperator::new(h).unwrap(),
            vec![(ket_bra(3, 0, 1), 0.4), (ket_bra(3, 1, 2), 1.2)],
        )
        .unwrap();
        let rho = DMatrix::from_fn(3, 3, |i, j| Cplx::new((i + 2 * j) as f64 * 0.1, i as f64 - j as f64));
        let l = liouvillian(&model);
        let v = DVector::from_iterator(9, rho.iter().copied());
        let lv = l * v;
        let direct = model.rhs_matrix(&rho);
        for i in 0..3 {
            for j in 0..3 {
                assert!((lv[j * 3 + i] - direct[(i, j)]).norm() < 1e-14);
            }
        }
    }
}
