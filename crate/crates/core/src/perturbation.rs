//! First-order perturbation theory of the realistic circuit about the
//! harmonic oscillator, and the noise operators projected onto the lowest
//! oscillator manifold.

use crate::circuit::{CircuitParams, ZakPoint};
use crate::elementary::{dephasing_rate_with, NoiseChannel, NoiseSpec};
use crate::error::{Error, Result};
use crate::fock::{FockOperators, TruncatedOperator};
use crate::scalar::{cis, cplx, creal, Cplx, Real};

/// E_0 − ħΩ/2 to first order: −E′_Q cos 2πk − E′_J cos φ.
pub fn first_order_energy<T: Real>(params: &CircuitParams<T>, p: &ZakPoint<T>) -> Result<T> {
    let r = params.renormalized_energies(0)?;
    Ok(-r.e_q * (T::two_pi() * p.k()).cos() - r.e_j * p.phi().cos())
}

/// Absolute first-order energy of band 0 or 1, including (m + 1/2)ħΩ.
pub fn band_energy_first_order<T: Real>(params: &CircuitParams<T>, band: u32, p: &ZakPoint<T>) -> Result<T> {
    let r = params.renormalized_energies(band)?;
    let w = params.oscillator_gap()?;
    let level = T::lit(band as f64) + T::lit(0.5);
    Ok(level * w - r.e_q * (T::two_pi() * p.k()).cos() - r.e_j * p.phi().cos())
}

/// ⟦V⟧₁₀ = ⟨1|V|0⟩ in closed form.
pub fn v_matrix_element_10<T: Real>(params: &CircuitParams<T>, p: &ZakPoint<T>) -> Result<Cplx<T>> {
    let z = params.impedance()?;
    let r = params.renormalized_energies(0)?;
    let two = T::lit(2.0);
    let re = (z / two).sqrt() * r.e_j * p.phi().sin();
    let im = -T::PI() * (two / z).sqrt() * r.e_q * (T::two_pi() * p.k()).sin();
    Ok(cplx(re, im))
}

/// Noise operator projected onto the ground manifold.
pub fn projected_noise<T: Real>(params: &CircuitParams<T>, which: NoiseChannel, p: &ZakPoint<T>) -> Result<T> {
    let r = params.renormalized_energies(0)?;
    let dressed = CircuitParams::elementary(r.e_q, r.e_j)?;
    Ok(crate::elementary::noise_operator_action(&dressed, which, p))
}

/// Pure dephasing rate in the ground manifold: the elementary rate with
/// E_Q, E_J replaced by their dressed values.
pub fn realistic_dephasing_rate<T: Real>(
    params: &CircuitParams<T>,
    noise: &NoiseSpec<T>,
    p: &ZakPoint<T>,
    p2: &ZakPoint<T>,
) -> Result<T> {
    let r = params.renormalized_energies(0)?;
    Ok(dephasing_rate_with(r.e_q, r.e_j, noise, p, p2))
}

/// First-order state of oscillator band `band`:
/// |Ψ_m⟩ ≈ |m⟩ + Σ_{j≠m} c_j |j⟩ with c_j = ⟦V⟧_{jm} / (E_m − E_j).
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedState<T: Real> {
    pub band: usize,
    /// Indexed by oscillator level; `coefficients[band]` is zero.
    pub coefficients: Vec<Cplx<T>>,
}

impl<T: Real> PerturbedState<T> {
    /// Ground state keeping only the single-quantum admixture, from the
    /// closed-form ⟦V⟧₁₀.
    pub fn ground(params: &CircuitParams<T>, p: &ZakPoint<T>) -> Result<Self> {
        let v10 = v_matrix_element_10(params, p)?;
        let w = params.oscillator_gap()?;
        Ok(Self {
            band: 0,
            coefficients: vec![creal(T::zero()), v10 / creal(-w)],
        })
    }

    /// All admixtures below the truncation, using number-basis matrix
    /// elements of V.
    pub fn from_operators(
        ops: &FockOperators<T>,
        params: &CircuitParams<T>,
        p: &ZakPoint<T>,
        band: usize,
    ) -> Result<Self> {
        if band >= ops.dim() {
            return Err(Error::InvalidParameter(format!(
                "band {band} outside a truncation of {}",
                ops.dim()
            )));
        }
        let v = nonlinear_part(ops, params, p);
        let w = params.oscillator_gap()?;
        let coefficients = (0..ops.dim())
            .map(|j| {
                if j == band {
                    creal(T::zero())
                } else {
                    let de = (T::from_usize_lossy(band) - T::from_usize_lossy(j)) * w;
                    v.matrix()[(j, band)] / creal(de)
                }
            })
            .collect();
        Ok(Self { band, coefficients })
    }

    /// Normalised state vector of length `dim`.
    pub fn vector(&self, dim: usize) -> nalgebra::DVector<Cplx<T>> {
        let mut v = nalgebra::DVector::from_element(dim, creal(T::zero()));
        for (j, c) in self.coefficients.iter().enumerate().take(dim) {
            v[j] = *c;
        }
        if self.band < dim {
            v[self.band] = creal(T::one());
        }
        let n = v.norm();
        v / creal(n)
    }
}

/// Number-basis V = Ĥ₁ − Ĥ_HO at zero bias.
pub fn nonlinear_part<T: Real>(ops: &FockOperators<T>, params: &CircuitParams<T>, p: &ZakPoint<T>) -> TruncatedOperator<T> {
    let half = creal(T::lit(0.5));
    let qps = ops.exp_i2pi_n.matrix() * cis(-T::two_pi() * p.k());
    let jj = ops.exp_i_phi.matrix() * cis(p.phi());
    let v = -(&qps + qps.adjoint()) * (half * creal(params.e_q())) - (&jj + jj.adjoint()) * (half * creal(params.e_j()));
    TruncatedOperator::new(v).expect("square by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::wrap;
    use crate::elementary::{critical_points, dephasing_rate};
    use crate::fock::{build_operators, eigensolve, build_hamiltonian, ModeOneSpec};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn fig3() -> CircuitParams<f64> {
        CircuitParams::reference_realistic()
    }

    fn pt(k: f64, phi: f64) -> ZakPoint<f64> {
        wrap(k, phi).unwrap()
    }

    #[test]
    fn first_order_examples() {
        let p = fig3();
        let r = p.renormalized_energies(0).unwrap();
        assert_relative_eq!(first_order_energy(&p, &pt(0.0, 0.0)).unwrap(), -r.e_q - r.e_j, max_relative = 1e-15);
        let huge = CircuitParams::<f64>::new(1.0, 1.0, 1e8, 1e-2).unwrap();
        let r = huge.renormalized_energies(0).unwrap();
        assert!(r.e_j < 1e-100);
        assert!((r.e_q - 1.0).abs() < 1e-4);
    }

    #[test]
    fn v10_examples_against_number_basis() {
        let params = fig3();
        let z = params.impedance().unwrap();
        let ops = build_operators(z, 40).unwrap();
        assert_eq!(v_matrix_element_10(&params, &pt(0.0, 0.0)).unwrap().norm(), 0.0);
        let a = v_matrix_element_10(&params, &pt(0.0, PI / 2.0)).unwrap();
        assert_relative_eq!(a.re, (-z / 4.0).exp() * (z / 2.0).sqrt(), max_relative = 1e-14);
        let b = v_matrix_element_10(&params, &pt(0.25, 0.0)).unwrap();
        assert_relative_eq!(b.im, -PI * (-PI * PI / z).exp() * (2.0 / z).sqrt(), max_relative = 1e-14);
        for (k, phi) in [(0.0, PI / 2.0), (0.25, 0.0), (0.13, -2.2), (-0.4, 0.9)] {
            let closed = v_matrix_element_10(&params, &pt(k, phi)).unwrap();
            let numeric = nonlinear_part(&ops, &params, &pt(k, phi)).matrix()[(1, 0)];
            assert!((closed - numeric).norm() < 1e-10, "({k},{phi}): {closed} vs {numeric}");
        }
    }

    #[test]
    fn charge_selection_rule() {
        let z = 20f64.sqrt();
        let ops = build_operators(z, 30).unwrap();
        for m in 0..30 {
            let v = ops.n.matrix()[(0, m)];
            if m == 1 {
                assert!((v - Cplx::new(0.0, -1.0 / (2.0 * z).sqrt())).norm() < 1e-15);
            } else {
                assert_eq!(v.norm(), 0.0);
            }
        }
    }

    #[test]
    fn projected_noise_examples() {
        let params = fig3();
        let r = params.renormalized_energies(0).unwrap();
        for c in critical_points::<f64>() {
            assert!(projected_noise(&params, NoiseChannel::Charge, &c.point).unwrap().abs() < 1e-15);
            assert!(projected_noise(&params, NoiseChannel::Flux, &c.point).unwrap().abs() < 1e-15);
        }
        let p = pt(0.25, PI / 2.0);
        assert_relative_eq!(projected_noise(&params, NoiseChannel::Charge, &p).unwrap(), 2.0 * PI * r.e_q, max_relative = 1e-15);
        assert_relative_eq!(projected_noise(&params, NoiseChannel::Flux, &p).unwrap(), r.e_j, max_relative = 1e-15);
    }

    #[test]
    fn first_order_state_reproduces_projected_charge_noise() {
        let params = fig3();
        let ec = params.e_c();
        let ops = build_operators(params.impedance().unwrap(), 8).unwrap();
        for (k, phi) in [(0.1, 0.4), (0.25, -1.0), (-0.37, 2.5)] {
            let p = pt(k, phi);
            let psi = PerturbedState::ground(&params, &p).unwrap();
            let c1 = psi.coefficients[1];
            // Unnormalised first-order expectation 2 Re(c₁ ⟨0|n̂|1⟩).
            let expect = 2.0 * (c1 * ops.n.matrix()[(0, 1)]).re * 2.0 * ec;
            let target = projected_noise(&params, NoiseChannel::Charge, &p).unwrap();
            assert_relative_eq!(expect, target, max_relative = 1e-12);
        }
    }

    #[test]
    fn projected_charge_noise_from_exact_ground_state() {
        let params = fig3();
        let ec = params.e_c();
        let ops = build_operators(params.impedance().unwrap(), 40).unwrap();
        for (k, phi) in [(0.1, 0.4), (0.25, PI / 2.0), (-0.2, 2.5)] {
            let p = pt(k, phi);
            let h = build_hamiltonian(&ModeOneSpec::unbiased(params, p, 40).unwrap()).unwrap();
            let v = eigensolve(&h, 1).unwrap().vector(0);
            let val = (v.adjoint() * ops.n.matrix() * &v)[(0, 0)].re * 2.0 * ec;
            let target = projected_noise(&params, NoiseChannel::Charge, &p).unwrap();
            assert!(((val - target) / target).abs() < 0.02, "({k},{phi}): {val} vs {target}");
        }
    }

    #[test]
    fn perturbed_state_coefficients_agree() {
        let params = fig3();
        let p = pt(0.2, 1.1);
        let ops = build_operators(params.impedance().unwrap(), 20).unwrap();
        let full = PerturbedState::from_operators(&ops, &params, &p, 0).unwrap();
        let single = PerturbedState::ground(&params, &p).unwrap();
        assert_eq!(full.coefficients[0].norm(), 0.0);
        assert!((full.coefficients[1] - single.coefficients[1]).norm() < 1e-12);
        assert!(full.coefficients.iter().all(|c| c.norm() < 0.1));
        assert_eq!(PerturbedState::ground(&params, &p).unwrap().vector(4).len(), 4);
    }

    #[test]
    fn realistic_rate_examples() {
        let params = fig3();
        let r = params.renormalized_energies(0).unwrap();
        let eps = 0.02;
        let noise = NoiseSpec::symmetric(eps).unwrap();
        let cps = critical_points::<f64>();
        for a in &cps {
            for b in &cps {
                assert_eq!(realistic_dephasing_rate(&params, &noise, &a.point, &b.point).unwrap(), 0.0);
            }
        }
        let (pa, pb) = (pt(0.0, 0.0), pt(0.25, PI / 2.0));
        let g = realistic_dephasing_rate(&params, &noise, &pa, &pb).unwrap();
        assert_relative_eq!(g, (2.0 * PI * eps).powi(2) * (r.e_q.powi(2) + r.e_j.powi(2)), max_relative = 1e-13);

        let charge_only = NoiseSpec::new(eps, 0.0).unwrap();
        let (pa, pb) = (pt(0.1, 0.3), pt(-0.3, 2.0));
        let ratio = realistic_dephasing_rate(&params, &charge_only, &pa, &pb).unwrap()
            / dephasing_rate(&params, &charge_only, &pa, &pb);
        assert_relative_eq!(ratio, (r.e_q / params.e_q()).powi(2), max_relative = 1e-13);
        // The closed-form factors quoted for this impedance.
        assert_relative_eq!(r.e_q, 0.110, epsilon = 5e-4);
        assert_relative_eq!(r.e_j, 0.327, epsilon = 5e-4);
    }

    #[test]
    fn first_order_error_shrinks_with_nonlinearity() {
        let base = fig3();
        let w = base.oscillator_gap().unwrap();
        let mut errs = Vec::new();
        for ratio in [1.0 / 50.0, 1.0 / 100.0, 1.0 / 200.0] {
            let e = ratio * w;
            let params = base.with_nonlinear(e, e).unwrap();
            let mut worst: f64 = 0.0;
            for (k, phi) in [(0.0, 0.0), (0.25, PI / 2.0), (0.5, PI), (0.1, -0.7)] {
                let p = pt(k, phi);
                let h = build_hamiltonian(&ModeOneSpec::unbiased(params, p, 40).unwrap()).unwrap();
                let e0 = eigensolve(&h, 1).unwrap().values[0];
                worst = worst.max((e0 - w / 2.0 - first_order_energy(&params, &p).unwrap()).abs());
            }
            errs.push(worst);
        }
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    }

    proptest! {
        #[test]
        fn projected_noise_parity(k in -0.49f64..0.49, phi in -3.1f64..3.1, phi2 in -3.1f64..3.1, k2 in -0.49f64..0.49) {
            let params = fig3();
            let q = |k, phi| projected_noise(&params, NoiseChannel::Charge, &pt(k, phi)).unwrap();
            let f = |k, phi| projected_noise(&params, NoiseChannel::Flux, &pt(k, phi)).unwrap();
            prop_assert!((q(k, phi) + q(-k, phi)).abs() < 1e-14);
            prop_assert_eq!(q(k, phi), q(k, phi2));
            prop_assert!((f(k, phi) + f(k, -phi)).abs() < 1e-15);
            prop_assert_eq!(f(k, phi), f(k2, phi));
        }
    }
}
