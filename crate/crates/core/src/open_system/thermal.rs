//! Thermal waveguide bath with linear spectral density J(ω) = νω.

use crate::circuit::{BiasPoint, CircuitParams, ZakPoint};
use crate::elementary::gamma_kernel;
use crate::error::{Error, Result};
use crate::fock::{build_hamiltonian_with, build_operators, eigensolve};
use crate::scalar::Real;

/// Bands with an independent cross-check of their Fock-engine eigenvectors.
const VALIDATED_BANDS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalEnvironment<T> {
    nu: T,
    kt: T,
}

impl<T: Real> ThermalEnvironment<T> {
    pub fn new(nu: T, kt: T) -> Result<Self> {
        if !(nu >= T::zero()) || !nu.finite() {
            return Err(Error::InvalidParameter(format!("spectral slope must be non-negative, got {nu}")));
        }
        if !(kt >= T::zero()) || !kt.finite() {
            return Err(Error::InvalidParameter(format!("temperature must be non-negative, got {kt}")));
        }
        Ok(Self { nu, kt })
    }

    pub fn nu(&self) -> T {
        self.nu
    }

    pub fn kt(&self) -> T {
        self.kt
    }

    /// J(ω) = νω.
    pub fn spectral_density(&self, omega: T) -> T {
        self.nu * omega
    }

    /// Low-frequency limit of J(ω)(2N(ω) + 1).
    pub fn zero_frequency_noise(&self) -> T {
        T::lit(2.0) * self.nu * self.kt
    }
}

fn check_frequency<T: Real>(omega: T) -> Result<()> {
    if !(omega > T::zero()) || !omega.finite() {
        return Err(Error::InvalidParameter(format!("frequency must be positive, got {omega}")));
    }
    Ok(())
}

/// N(ω) = 1/(e^{ω/k_BT} − 1), zero at T = 0.
pub fn bose_occupation<T: Real>(env: &ThermalEnvironment<T>, omega: T) -> Result<T> {
    check_frequency(omega)?;
    if env.kt == T::zero() {
        return Ok(T::zero());
    }
    let x = omega / env.kt;
    Ok(T::one() / x.exp_m1())
}

/// J(ω)N(ω).
pub fn thermal_weight<T: Real>(env: &ThermalEnvironment<T>, omega: T) -> Result<T> {
    Ok(env.spectral_density(omega) * bose_occupation(env, omega)?)
}

/// Pure dephasing of μ|0;k,φ⟩ + μ′|0;k′,φ′⟩ from low-frequency waveguide
/// noise. `j0n0` defaults to [`ThermalEnvironment::zero_frequency_noise`].
pub fn waveguide_pure_dephasing<T: Real>(
    params: &CircuitParams<T>,
    env: &ThermalEnvironment<T>,
    j0n0: Option<T>,
    k: T,
    k2: T,
) -> Result<T> {
    let j0n0 = j0n0.unwrap_or_else(|| env.zero_frequency_noise());
    if !(j0n0 >= T::zero()) || !j0n0.finite() {
        return Err(Error::InvalidParameter(format!("J0N0 must be non-negative, got {j0n0}")));
    }
    let eq = params.renormalized_energies(0)?.e_q;
    let pi = T::PI();
    Ok(pi * pi * eq / params.e_c() * j0n0 * gamma_kernel(T::two_pi() * k, T::two_pi() * k2))
}

/// One eigenoperator n̂₁^{(m,n)} + h.c. at fixed (k, φ), with m above n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEntry<T> {
    pub m: usize,
    pub n: usize,
    /// Ω⁽ᵐⁿ⁾ = E_m − E_n.
    pub frequency: T,
    /// πJ(Ω)N(Ω), for |n⟩ → |m⟩.
    pub up_rate: T,
    /// πJ(Ω)(N(Ω) + 1), for |m⟩ → |n⟩.
    pub down_rate: T,
    /// |⟨Ψ_m|n̂₁|Ψ_n⟩|².
    pub matrix_element_sq: T,
}

/// Thermal transition rates among the lowest `bands` manifolds at `p`.
pub fn eigenoperator_rates<T: Real>(
    params: &CircuitParams<T>,
    env: &ThermalEnvironment<T>,
    p: &ZakPoint<T>,
    bands: usize,
    truncation: usize,
) -> Result<Vec<RateEntry<T>>> {
    if bands > VALIDATED_BANDS {
        return Err(Error::UnsupportedBand(bands as u32 - 1));
    }
    rates_unchecked(params, env, p, bands, truncation)
}

pub(crate) fn rates_unchecked<T: Real>(
    params: &CircuitParams<T>,
    env: &ThermalEnvironment<T>,
    p: &ZakPoint<T>,
    bands: usize,
    truncation: usize,
) -> Result<Vec<RateEntry<T>>> {
    if bands < 2 {
        return Err(Error::InvalidParameter(format!("need at least two manifolds, got {bands}")));
    }
    if bands > truncation / 2 {
        return Err(Error::InvalidParameter(format!(
            "{bands} manifolds need a truncation of at least {}",
            2 * bands
        )));
    }
    let ops = build_operators(params.impedance()?, truncation)?;
    let h = build_hamiltonian_with(&ops, params, p, &BiasPoint::zero())?;
    let es = eigensolve(&h, bands)?;
    let n_op = ops.n.matrix();
    let pi = T::PI();
    let mut out = Vec::with_capacity(bands * (bands - 1) / 2);
    for m in 1..bands {
        let vm = es.vector(m);
        for n in 0..m {
            let vn = es.vector(n);
            let elem = (vm.adjoint() * n_op * &vn)[(0, 0)];
            let omega = es.values[m] - es.values[n];
            check_frequency(omega)?;
            let occ = bose_occupation(env, omega)?;
            let j = env.spectral_density(omega);
            let up = pi * j * occ;
            let down = pi * j * (occ + T::one());
            debug_assert!(
                env.kt == T::zero() || (up - down * (-omega / env.kt).exp()).abs() <= T::lit(1e-12) * down.max(T::eps()),
                "detailed balance"
            );
            out.push(RateEntry {
                m,
                n,
                frequency: omega,
                up_rate: up,
                down_rate: down,
                matrix_element_sq: elem.norm_sqr(),
            });
        }
    }
    Ok(out)
}
