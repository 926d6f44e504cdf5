use super::eigen::eigensolve;
use super::operators::{build_operators, FockOperators, MIN_TRUNCATION};
use super::TruncatedOperator;
use crate::circuit::{BiasPoint, CircuitParams, ZakPoint};
use crate::error::{Error, Result};
use crate::scalar::{cis, creal, Real};

/// Everything needed to build Ĥ₁(k, φ) in the number basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeOneSpec<T> {
    pub params: CircuitParams<T>,
    pub p: ZakPoint<T>,
    pub bias: BiasPoint<T>,
    pub truncation: usize,
}

impl<T: Real> ModeOneSpec<T> {
    pub fn new(params: CircuitParams<T>, p: ZakPoint<T>, bias: BiasPoint<T>, truncation: usize) -> Result<Self> {
        if truncation < MIN_TRUNCATION {
            return Err(Error::InvalidParameter(format!(
                "truncation must be at least {MIN_TRUNCATION}, got {truncation}"
            )));
        }
        params.impedance()?;
        Ok(Self { params, p, bias, truncation })
    }

    pub fn unbiased(params: CircuitParams<T>, p: ZakPoint<T>, truncation: usize) -> Result<Self> {
        Self::new(params, p, BiasPoint::zero(), truncation)
    }

    pub fn with_truncation(&self, truncation: usize) -> Result<Self> {
        Self::new(self.params, self.p, self.bias, truncation)
    }
}

pub fn build_hamiltonian<T: Real>(spec: &ModeOneSpec<T>) -> Result<TruncatedOperator<T>> {
    let ops = build_operators(spec.params.impedance()?, spec.truncation)?;
    build_hamiltonian_with(&ops, &spec.params, &spec.p, &spec.bias)
}

/// Same as [`build_hamiltonian`] with precomputed operators, for sweeps at a
/// fixed impedance and truncation.
pub fn build_hamiltonian_with<T: Real>(
    ops: &FockOperators<T>,
    params: &CircuitParams<T>,
    p: &ZakPoint<T>,
    bias: &BiasPoint<T>,
) -> Result<TruncatedOperator<T>> {
    let z = params.impedance()?;
    if (z - ops.z).abs() > T::eps() * T::lit(16.0) * z {
        return Err(Error::InvalidInput(format!(
            "operators were built for z = {}, circuit has z = {z}",
            ops.z
        )));
    }
    let two = T::lit(2.0);
    let e_c = params.e_c();
    let e_l = params.e_l();
    let (nx, px) = (bias.n_x, bias.phi_x);
    let id = nalgebra::DMatrix::<crate::scalar::Cplx<T>>::identity(ops.dim(), ops.dim());

    let mut h = ops.n_sq.matrix() * creal(e_c) + ops.phi_sq.matrix() * creal(e_l);
    if !bias.is_zero() {
        h += ops.n.matrix() * creal(two * e_c * nx) - ops.phi.matrix() * creal(two * e_l * px);
        h += &id * creal(e_c * nx * nx + e_l * px * px);
    }
    let qps = ops.exp_i2pi_n.matrix() * cis(-T::two_pi() * p.k());
    let jj = ops.exp_i_phi.matrix() * cis(p.phi());
    let half = creal(T::lit(0.5));
    h -= (&qps + qps.adjoint()) * (half * creal(params.e_q()));
    h -= (&jj + jj.adjoint()) * (half * creal(params.e_j()));
    Ok(TruncatedOperator::from_matrix_unchecked(h))
}

/// Lowest `count` eigenvalues of Ĥ₁ for `spec`.
pub fn lowest_eigenvalues<T: Real>(spec: &ModeOneSpec<T>, count: usize) -> Result<Vec<T>> {
    let h = build_hamiltonian(spec)?;
    let mut v = eigensolve(&h, count)?.values;
    v.truncate(count);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::wrap;
    use crate::perturbation::first_order_energy;
    use std::f64::consts::PI;

    fn fig3() -> CircuitParams<f64> {
        CircuitParams::reference_realistic()
    }

    fn spec(params: CircuitParams<f64>, k: f64, phi: f64, n: usize) -> ModeOneSpec<f64> {
        ModeOneSpec::unbiased(params, wrap(k, phi).unwrap(), n).unwrap()
    }

    #[test]
    fn harmonic_limit() {
        let params = fig3().with_nonlinear(0.0, 0.0).unwrap();
        let w = params.oscillator_gap().unwrap();
        let ev = lowest_eigenvalues(&spec(params, 0.2, 1.0, 40), 10).unwrap();
        for (m, e) in ev.iter().enumerate() {
            assert!((e - (m as f64 + 0.5) * w).abs() < 1e-9 * w);
        }
    }

    #[test]
    fn ground_energy_near_first_order_at_origin() {
        let params = fig3();
        let w = params.oscillator_gap().unwrap();
        let p = wrap(0.0, 0.0).unwrap();
        let e0 = lowest_eigenvalues(&spec(params, 0.0, 0.0, 40), 1).unwrap()[0];
        let pert = w / 2.0 + first_order_energy(&params, &p).unwrap();
        assert!((e0 - pert).abs() < 0.005, "{e0} vs {pert}");
    }

    #[test]
    fn hermitian_by_construction() {
        let b = BiasPoint::new(0.37, -2.1).unwrap();
        let s = ModeOneSpec::new(fig3(), wrap(0.1, 0.3).unwrap(), b, 24).unwrap();
        let h = build_hamiltonian(&s).unwrap();
        assert!(h.hermiticity_deviation() < 1e-12);
    }

    #[test]
    fn truncation_convergence_at_default() {
        let params = fig3();
        let w = params.oscillator_gap().unwrap();
        for (k, phi) in [(0.0, 0.0), (0.1, 0.3), (0.5, PI), (-0.3, 2.0)] {
            let a = lowest_eigenvalues(&spec(params, k, phi, 40), 2).unwrap();
            let b = lowest_eigenvalues(&spec(params, k, phi, 56), 2).unwrap();
            for i in 0..2 {
                assert!((a[i] - b[i]).abs() < 1e-8 * w, "({k},{phi}) level {i}");
            }
        }
    }

    #[test]
    fn spectrum_even_in_each_coordinate() {
        let params = fig3();
        let a = lowest_eigenvalues(&spec(params, 0.17, 0.9, 32), 3).unwrap();
        let b = lowest_eigenvalues(&spec(params, -0.17, 0.9, 32), 3).unwrap();
        let c = lowest_eigenvalues(&spec(params, 0.17, -0.9, 32), 3).unwrap();
        for i in 0..3 {
            assert!((a[i] - b[i]).abs() < 1e-9 && (a[i] - c[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_elementary_params() {
        let p = wrap(0.0, 0.0).unwrap();
        assert!(ModeOneSpec::unbiased(CircuitParams::elementary(1.0, 1.0).unwrap(), p, 40).is_err());
        assert!(ModeOneSpec::unbiased(fig3(), p, 4).is_err());
    }
}
