//! Closed-form analytics of the ideal JJ + QPS circuit.
//!
//! In the Zak basis the Hamiltonian and both linear noise operators are
//! diagonal, so everything here is a function of (k, φ) alone.

use crate::circuit::{sin_reduced, wrap, BiasPoint, CircuitParams, ZakPoint};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::scalar::Real;

/// White-noise amplitudes of the charge and flux biases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec<T> {
    pub eps_n: T,
    pub eps_phi: T,
}

impl<T: Real> NoiseSpec<T> {
    pub fn new(eps_n: T, eps_phi: T) -> Result<Self> {
        if !(eps_n >= T::zero()) || !(eps_phi >= T::zero()) || !eps_n.finite() || !eps_phi.finite() {
            return Err(Error::InvalidParameter(format!(
                "noise amplitudes must be finite and non-negative, got ({eps_n}, {eps_phi})"
            )));
        }
        Ok(Self { eps_n, eps_phi })
    }

    pub fn symmetric(eps: T) -> Result<Self> {
        Self::new(eps, eps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CriticalKind {
    Minimum,
    Saddle,
    Maximum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint<T> {
    pub point: ZakPoint<T>,
    pub kind: CriticalKind,
}

/// Which bias the noise couples to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseChannel {
    Charge,
    Flux,
}

/// E(k, φ) = −E_Q cos 2πk − E_J cos φ.
pub fn energy<T: Real>(params: &CircuitParams<T>, p: &ZakPoint<T>) -> T {
    -params.e_q() * (T::two_pi() * p.k()).cos() - params.e_j() * p.phi().cos()
}

/// (∂E/∂k, ∂E/∂φ).
pub fn gradient<T: Real>(params: &CircuitParams<T>, p: &ZakPoint<T>) -> (T, T) {
    (
        T::two_pi() * params.e_q() * sin_reduced(T::two_pi() * p.k()),
        params.e_j() * sin_reduced(p.phi()),
    )
}

/// Diagonal of the Hessian; the mixed derivative vanishes identically.
pub fn hessian_diagonal<T: Real>(params: &CircuitParams<T>, p: &ZakPoint<T>) -> (T, T) {
    let w = T::two_pi();
    (
        w * w * params.e_q() * (w * p.k()).cos(),
        params.e_j() * p.phi().cos(),
    )
}

/// The four stationary points of the band: ground, two saddles, maximum.
pub fn critical_points<T: Real>() -> [CriticalPoint<T>; 4] {
    let half = T::lit(0.5);
    let at = |k: T, phi: T, kind| CriticalPoint {
        point: wrap(k, phi).expect("finite literals"),
        kind,
    };
    [
        at(T::zero(), T::zero(), CriticalKind::Minimum),
        at(T::zero(), T::PI(), CriticalKind::Saddle),
        at(half, T::zero(), CriticalKind::Saddle),
        at(half, T::PI(), CriticalKind::Maximum),
    ]
}

/// Energy with external biases: −E_Q cos 2π(k+n_x) − E_J cos(φ+φ_x).
pub fn biased_energy<T: Real>(params: &CircuitParams<T>, p: &ZakPoint<T>, b: &BiasPoint<T>) -> T {
    -params.e_q() * (T::two_pi() * (p.k() + b.n_x)).cos() - params.e_j() * (p.phi() + b.phi_x).cos()
}

/// γ(y, y′) = (sin y − sin y′)².
///
/// Exactly zero whenever both arguments are multiples of π.
pub fn gamma_kernel<T: Real>(y: T, y2: T) -> T {
    let d = sin_reduced(y) - sin_reduced(y2);
    d * d
}

/// Pure dephasing rate of a superposition of |k,φ⟩ and |k′,φ′⟩ (ħ = 1).
pub fn dephasing_rate<T: Real>(
    params: &CircuitParams<T>,
    noise: &NoiseSpec<T>,
    p: &ZakPoint<T>,
    p2: &ZakPoint<T>,
) -> T {
    dephasing_rate_with(params.e_q(), params.e_j(), noise, p, p2)
}

pub(crate) fn dephasing_rate_with<T: Real>(
    e_q: T,
    e_j: T,
    noise: &NoiseSpec<T>,
    p: &ZakPoint<T>,
    p2: &ZakPoint<T>,
) -> T {
    let w = T::two_pi();
    let cq = w * noise.eps_n * e_q;
    let cj = w * noise.eps_phi * e_j;
    cq * cq * gamma_kernel(w * p.k(), w * p2.k()) + cj * cj * gamma_kernel(p.phi(), p2.phi())
}

/// Eigenvalue of the linear noise operator A_n or A_φ on |k,φ⟩.
pub fn noise_operator_action<T: Real>(params: &CircuitParams<T>, which: NoiseChannel, p: &ZakPoint<T>) -> T {
    match which {
        NoiseChannel::Charge => T::two_pi() * params.e_q() * sin_reduced(T::two_pi() * p.k()),
        NoiseChannel::Flux => params.e_j() * sin_reduced(p.phi()),
    }
}

/// One grid cell of the elementary sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementarySample<T> {
    pub k: T,
    pub phi: T,
    pub energy: T,
    pub de_dk: T,
    pub de_dphi: T,
    pub gamma_vs_ground: T,
}

/// Energy, gradient and dephasing rate against the ground state (0,0) over
/// a closed grid, k slowest.
pub fn sweep<T: Real>(
    params: &CircuitParams<T>,
    noise: &NoiseSpec<T>,
    grid: GridSpec,
) -> Vec<ElementarySample<T>> {
    let ground = critical_points::<T>()[0].point;
    let ks = grid.k_samples::<T>();
    let phis = grid.phi_samples::<T>();
    let mut out = Vec::with_capacity(grid.len());
    for &k in &ks {
        for &phi in &phis {
            // Sample coordinates are kept as-is in the output; the physics
            // is periodic so the edge rows are evaluated unwrapped.
            let p = ZakPoint::new(k, phi).expect("grid samples are finite");
            let (de_dk, de_dphi) = gradient(params, &p);
            out.push(ElementarySample {
                k,
                phi,
                energy: energy(params, &p),
                de_dk,
                de_dphi,
                gamma_vs_ground: dephasing_rate(params, noise, &p, &ground),
            });
        }
    }
    out
}
