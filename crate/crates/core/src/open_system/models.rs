//! Few-level dephasing models: the elementary circuit under white bias noise,
//! and the two-level vs ground-manifold comparison.

use nalgebra::{DMatrix, DVector};

use super::{ket_bra, pure_state, LindbladModel};
use crate::circuit::{CircuitParams, ZakPoint};
use crate::elementary::{energy, noise_operator_action, NoiseChannel, NoiseSpec};
use crate::error::{Error, Result};
use crate::fock::TruncatedOperator;
use crate::scalar::{creal, Cplx, Real};

/// μ|p⟩ + μ′|p′⟩ of two Zak eigenstates.
#[derive(Debug, Clone, Copy)]
pub struct SuperpositionSpec<T> {
    p: ZakPoint<T>,
    p2: ZakPoint<T>,
    mu: Cplx<T>,
    mu2: Cplx<T>,
}

impl<T: Real> SuperpositionSpec<T> {
    pub fn new(p: ZakPoint<T>, p2: ZakPoint<T>, mu: Cplx<T>, mu2: Cplx<T>) -> Result<Self> {
        let norm = mu.norm_sqr() + mu2.norm_sqr();
        if !((norm - T::one()).abs() <= T::lit(1e-12).max(T::eps() * T::lit(10.0))) {
            return Err(Error::InvalidParameter(format!("amplitudes must satisfy |μ|² + |μ′|² = 1, got {norm}")));
        }
        Ok(Self { p, p2, mu, mu2 })
    }

    /// Equal-weight superposition (|p⟩ + |p′⟩)/√2.
    pub fn balanced(p: ZakPoint<T>, p2: ZakPoint<T>) -> Self {
        let a = creal(T::lit(0.5).sqrt());
        Self { p, p2, mu: a, mu2: a }
    }

    pub fn points(&self) -> (ZakPoint<T>, ZakPoint<T>) {
        (self.p, self.p2)
    }

    pub fn amplitudes(&self) -> (Cplx<T>, Cplx<T>) {
        (self.mu, self.mu2)
    }

    /// Initial density matrix in the two-state basis {|p⟩, |p′⟩}.
    pub fn density(&self) -> TruncatedOperator<T> {
        pure_state(&[self.mu, self.mu2]).expect("two amplitudes")
    }
}

fn diag<T: Real>(v: &[T]) -> TruncatedOperator<T> {
    let d = DVector::from_iterator(v.len(), v.iter().map(|x| creal(*x)));
    TruncatedOperator::from_matrix_unchecked(DMatrix::from_diagonal(&d))
}

fn check_rate<T: Real>(name: &str, r: T) -> Result<()> {
    if !(r >= T::zero()) || !r.finite() {
        return Err(Error::InvalidParameter(format!("{name} must be non-negative, got {r}")));
    }
    Ok(())
}

/// Elementary circuit restricted to {|p⟩, |p′⟩}, with dissipators
/// 2ε_n² D[A_n] and 2(2πε_φ)² D[A_φ]. Both noise operators are diagonal in
/// the Zak basis, so the restriction is exact.
pub fn elementary_dephasing_model<T: Real>(
    params: &CircuitParams<T>,
    noise: &NoiseSpec<T>,
    sup: &SuperpositionSpec<T>,
) -> LindbladModel<T> {
    let (p, p2) = sup.points();
    let h = diag(&[energy(params, &p), energy(params, &p2)]);
    let an = diag(&[
        noise_operator_action(params, NoiseChannel::Charge, &p),
        noise_operator_action(params, NoiseChannel::Charge, &p2),
    ]);
    let aphi = diag(&[
        noise_operator_action(params, NoiseChannel::Flux, &p),
        noise_operator_action(params, NoiseChannel::Flux, &p2),
    ]);
    let two = T::lit(2.0);
    let r_n = two * noise.eps_n * noise.eps_n;
    let f = T::two_pi() * noise.eps_phi;
    let r_phi = two * f * f;
    LindbladModel::new(h, vec![(an, r_n), (aphi, r_phi)]).expect("diagonal model is valid")
}

/// H = ½ω(|e⟩⟨e| − |g⟩⟨g|) with relaxation γ₋ σ⁻ and excitation γ₊ σ⁺.
/// Basis order (g, e).
pub fn two_level_model<T: Real>(omega: T, gamma_minus: T, gamma_plus: T) -> Result<LindbladModel<T>> {
    check_rate("γ₋", gamma_minus)?;
    check_rate("γ₊", gamma_plus)?;
    let half = T::lit(0.5) * omega;
    let h = diag(&[-half, half]);
    LindbladModel::new(h, vec![(ket_bra(2, 0, 1), gamma_minus), (ket_bra(2, 1, 0), gamma_plus)])
}

/// Decay rate of ρ_eg in [`two_level_model`].
pub fn two_level_dephasing<T: Real>(gamma_minus: T, gamma_plus: T) -> Result<T> {
    check_rate("γ₋", gamma_minus)?;
    check_rate("γ₊", gamma_plus)?;
    Ok(T::lit(0.5) * (gamma_minus + gamma_plus))
}

/// Two ground states |g_j⟩, each coupled only to its own excited partner |e_j⟩.
#[derive(Debug, Clone, Copy)]
pub struct FourLevel<T> {
    pub omega1: T,
    pub omega2: T,
    pub gamma_minus1: T,
    pub gamma_minus2: T,
    pub gamma_plus1: T,
    pub gamma_plus2: T,
}

/// Basis order (g₁, g₂, e₁, e₂); H = Σ_j ½ω_j(|e_j⟩⟨e_j| − |g_j⟩⟨g_j|).
pub fn four_level_model<T: Real>(m: &FourLevel<T>) -> Result<LindbladModel<T>> {
    check_rate("γ₋⁽¹⁾", m.gamma_minus1)?;
    check_rate("γ₋⁽²⁾", m.gamma_minus2)?;
    check_rate("γ₊⁽¹⁾", m.gamma_plus1)?;
    check_rate("γ₊⁽²⁾", m.gamma_plus2)?;
    let h1 = T::lit(0.5) * m.omega1;
    let h2 = T::lit(0.5) * m.omega2;
    let h = diag(&[-h1, -h2, h1, h2]);
    LindbladModel::new(
        h,
        vec![
            (ket_bra(4, 0, 2), m.gamma_minus1),
            (ket_bra(4, 1, 3), m.gamma_minus2),
            (ket_bra(4, 2, 0), m.gamma_plus1),
            (ket_bra(4, 3, 1), m.gamma_plus2),
        ],
    )
}

/// Decay rate of ρ_{g₁g₂} in [`four_level_model`]; relaxation rates drop out.
pub fn ground_manifold_dephasing<T: Real>(gamma_plus1: T, gamma_plus2: T) -> Result<T> {
    check_rate("γ₊⁽¹⁾", gamma_plus1)?;
    check_rate("γ₊⁽²⁾", gamma_plus2)?;
    Ok(T::lit(0.5) * (gamma_plus1 + gamma_plus2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elementary::dephasing_rate;
    use crate::open_system::{evolve, fit_decay, EvolveOptions};

    fn element_series(model: &LindbladModel<f64>, rho0: &TruncatedOperator<f64>, times: &[f64], i: usize, j: usize) -> Vec<Cplx<f64>> {
        evolve(model, rho0, times, EvolveOptions::default())
            .unwrap()
            .iter()
            .map(|r| r.matrix()[(i, j)])
            .collect()
    }

    #[test]
    fn elementary_dissipators_reproduce_gamma() {
        let params = CircuitParams::<f64>::elementary(1.0, 0.7).unwrap();
        let noise = NoiseSpec::new(0.05, 0.03).unwrap();
        for (p, p2) in [((0.0, 0.0), (0.2, 1.1)), ((0.1, -0.4), (0.37, 2.9)), ((0.25, 0.0), (0.0, 0.5))] {
            let p = ZakPoint::new(p.0, p.1).unwrap();
            let p2 = ZakPoint::new(p2.0, p2.1).unwrap();
            let sup = SuperpositionSpec::balanced(p, p2);
            let model = elementary_dephasing_model(&params, &noise, &sup);
            let gamma = dephasing_rate(&params, &noise, &p, &p2);
            let t_end = 2.0 / gamma;
            let times: Vec<f64> = (0..=40).map(|i| t_end * i as f64 / 40.0).collect();
            let series = element_series(&model, &sup.density(), &times, 0, 1);
            let fit = fit_decay(&times, &series).unwrap();
            assert!(((fit.rate - gamma) / gamma).abs() < 1e-6, "{} vs {gamma}", fit.rate);
        }
    }

    #[test]
    fn critical_superposition_is_a_fixed_point() {
        let params = CircuitParams::<f64>::elementary(1.0, 1.0).unwrap();
        let noise = NoiseSpec::symmetric(0.1).unwrap();
        let sup = SuperpositionSpec::balanced(ZakPoint::new(0.0, 0.0).unwrap(), ZakPoint::new(0.5, std::f64::consts::PI).unwrap());
        let model = elementary_dephasing_model(&params, &noise, &sup);
        let out = evolve(&model, &sup.density(), &[50.0], EvolveOptions::default()).unwrap();
        let c01 = out[0].matrix()[(0, 1)].norm();
        assert!((c01 - 0.5).abs() < 1e-8, "{c01}");
        // The dissipative part vanishes identically.
        let rho = sup.density();
        let free = LindbladModel::new(model.hamiltonian().clone(), vec![]).unwrap();
        let d = crate::open_system::lindblad_rhs(&model, &rho).unwrap().into_matrix()
            - crate::open_system::lindblad_rhs(&free, &rho).unwrap().into_matrix();
        assert_eq!(d.iter().map(|z| z.norm()).fold(0.0, f64::max), 0.0);
    }

    #[test]
    fn amplitude_normalisation_checked() {
        let p = ZakPoint::new(0.0, 0.0).unwrap();
        assert!(SuperpositionSpec::new(p, p, Cplx::new(1.0, 0.0), Cplx::new(0.1, 0.0)).is_err());
        assert!(SuperpositionSpec::new(p, p, Cplx::new(0.6, 0.0), Cplx::new(0.0, 0.8)).is_ok());
    }

    #[test]
    fn two_level_coherence_rate() {
        assert_eq!(two_level_dephasing(0.4, 0.0).unwrap(), 0.2);
        assert_eq!(two_level_dephasing(0.0, 0.0).unwrap(), 0.0);
        assert!(two_level_dephasing(-1.0, 0.0).is_err());
        for (gm, gp) in [(0.4, 0.0), (0.3, 0.1), (0.05, 0.2)] {
            let model = two_level_model(3.0, gm, gp).unwrap();
            let rho0 = pure_state(&[Cplx::new(0.6, 0.0), Cplx::new(0.8, 0.0)]).unwrap();
            let times: Vec<f64> = (0..=30).map(|i| 0.2 * i as f64).collect();
            let fit = fit_decay(&times, &element_series(&model, &rho0, &times, 1, 0)).unwrap();
            assert!((fit.rate - two_level_dephasing(gm, gp).unwrap()).abs() < 1e-8);
            assert!((fit.frequency + 3.0).abs() < 1e-8);
        }
    }

    #[test]
    fn ground_manifold_coherence_ignores_relaxation() {
        assert_eq!(ground_manifold_dephasing(0.3, 0.3).unwrap(), 0.3);
        let base = FourLevel {
            omega1: 5.0,
            omega2: 4.2,
            gamma_minus1: 0.0,
            gamma_minus2: 0.0,
            gamma_plus1: 0.07,
            gamma_plus2: 0.13,
        };
        let rho0 = pure_state(&[Cplx::new(0.5f64.sqrt(), 0.0), Cplx::new(0.5f64.sqrt(), 0.0), Cplx::new(0.0, 0.0), Cplx::new(0.0, 0.0)]).unwrap();
        let times: Vec<f64> = (0..=30).map(|i| 0.25 * i as f64).collect();
        let expected = ground_manifold_dephasing(base.gamma_plus1, base.gamma_plus2).unwrap();
        for (gm1, gm2) in [(0.0, 0.0), (0.9, 0.1), (3.0, 7.0)] {
            let m = FourLevel { gamma_minus1: gm1, gamma_minus2: gm2, ..base };
            let series = element_series(&four_level_model(&m).unwrap(), &rho0, &times, 0, 1);
            let fit = fit_decay(&times, &series).unwrap();
            assert!((fit.rate - expected).abs() < 1e-8, "{} vs {expected}", fit.rate);
            assert!((fit.frequency - 0.5 * (m.omega1 - m.omega2)).abs() < 1e-8);
        }
    }
}
