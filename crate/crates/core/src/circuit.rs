//! Circuit parameters, derived oscillator scales and double-Brillouin-zone
//! geometry.
//!
//! Energies are stored in units of a caller-chosen reference energy, with
//! ħ = 1 so that frequencies and energies share units.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// The four circuit energies of the dualmon.
///
/// `e_c` and `e_l` are zero for the elementary (parasitic-free) circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitParams<T> {
    e_q: T,
    e_j: T,
    e_c: T,
    e_l: T,
}

/// Renormalised phase-slip and Josephson energies of one oscillator band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Renormalized<T> {
    pub e_q: T,
    pub e_j: T,
}

impl<T: Real> CircuitParams<T> {
    pub fn new(e_q: T, e_j: T, e_c: T, e_l: T) -> Result<Self> {
        for (name, v) in [("E_Q", e_q), ("E_J", e_j), ("E_C", e_c), ("E_L", e_l)] {
            if !v.finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite")));
            }
            if v < T::zero() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        Ok(Self { e_q, e_j, e_c, e_l })
    }

    /// Ideal JJ + QPS circuit without parasitic inductance or capacitance.
    pub fn elementary(e_q: T, e_j: T) -> Result<Self> {
        Self::new(e_q, e_j, T::zero(), T::zero())
    }

    /// The parameter set used for the band-structure and transition plots:
    /// E_Q = E_J = 1, E_C = 200, E_L = 10.
    pub fn reference_realistic() -> Self {
        Self {
            e_q: T::one(),
            e_j: T::one(),
            e_c: T::lit(200.0),
            e_l: T::lit(10.0),
        }
    }

    pub fn e_q(&self) -> T {
        self.e_q
    }

    pub fn e_j(&self) -> T {
        self.e_j
    }

    pub fn e_c(&self) -> T {
        self.e_c
    }

    pub fn e_l(&self) -> T {
        self.e_l
    }

    /// Same circuit with the nonlinear energies replaced.
    pub fn with_nonlinear(&self, e_q: T, e_j: T) -> Result<Self> {
        Self::new(e_q, e_j, self.e_c, self.e_l)
    }

    fn require_oscillator(&self) -> Result<()> {
        if self.e_c > T::zero() && self.e_l > T::zero() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "E_C and E_L must be positive for the realistic circuit (E_C={}, E_L={})",
                self.e_c, self.e_l
            )))
        }
    }

    /// Dimensionless oscillator impedance z = sqrt(E_C / E_L).
    pub fn impedance(&self) -> Result<T> {
        self.require_oscillator()?;
        Ok((self.e_c / self.e_l).sqrt())
    }

    /// Oscillator gap ħΩ = 2 sqrt(E_C E_L).
    pub fn oscillator_gap(&self) -> Result<T> {
        self.require_oscillator()?;
        Ok(T::lit(2.0) * (self.e_c * self.e_l).sqrt())
    }

    /// Renormalised (E_Q, E_J) in oscillator band 0 or 1.
    pub fn renormalized_energies(&self, band: u32) -> Result<Renormalized<T>> {
        let (fq, fj) = renormalization_factors(self.impedance()?, band)?;
        Ok(Renormalized {
            e_q: fq * self.e_q,
            e_j: fj * self.e_j,
        })
    }

    /// Perturbative regime indicator: min(E_C, E_L) >= 10 max(E_Q, E_J).
    ///
    /// Only used to emit warnings; nothing refuses to compute outside it.
    pub fn regime_ok(&self) -> bool {
        let soft = if self.e_q > self.e_j { self.e_q } else { self.e_j };
        let stiff = if self.e_c < self.e_l { self.e_c } else { self.e_l };
        stiff >= T::lit(10.0) * soft
    }

    /// Parses a TOML key-value file with keys `E_Q`, `E_J`, `E_C`, `E_L`.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawParams = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        Self::new(
            T::lit(raw.e_q),
            T::lit(raw.e_j),
            T::lit(raw.e_c),
            T::lit(raw.e_l),
        )
        .map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| {
            Error::Config(format!("cannot read {}: {e}", path.as_ref().display()))
        })?;
        Self::from_toml_str(&text)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    #[serde(rename = "E_Q")]
    e_q: f64,
    #[serde(rename = "E_J")]
    e_j: f64,
    #[serde(rename = "E_C", default)]
    e_c: f64,
    #[serde(rename = "E_L", default)]
    e_l: f64,
}

/// Multiplicative dressing factors (E_Q'/E_Q, E_J'/E_J) of band 0, or the
/// band-1 factors (E_Q''/E_Q, E_J''/E_J), as functions of the impedance.
pub fn renormalization_factors<T: Real>(z: T, band: u32) -> Result<(T, T)> {
    if !(z > T::zero()) || !z.finite() {
        return Err(Error::InvalidParameter(format!(
            "impedance must be positive and finite, got {z}"
        )));
    }
    let pi2 = T::PI() * T::PI();
    let q0 = (-pi2 / z).exp();
    let j0 = (-z / T::lit(4.0)).exp();
    match band {
        0 => Ok((q0, j0)),
        1 => Ok((
            (T::one() - T::lit(2.0) * pi2 / z) * q0,
            (T::one() - z / T::lit(2.0)) * j0,
        )),
        m => Err(Error::UnsupportedBand(m)),
    }
}

/// A point (k, φ) of the double Brillouin zone, always in canonical form
/// k ∈ (−1/2, 1/2], φ ∈ (−π, π].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZakPoint<T> {
    k: T,
    phi: T,
}

impl<T: Real> ZakPoint<T> {
    /// Canonicalises an arbitrary (k, φ).
    pub fn new(raw_k: T, raw_phi: T) -> Result<Self> {
        wrap(raw_k, raw_phi)
    }

    pub fn k(&self) -> T {
        self.k
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    /// Distance on the torus, measuring k in units of the zone and φ/2π.
    pub fn torus_distance(&self, other: &Self) -> T {
        let dk = wrap_centered(self.k - other.k, T::one()).abs();
        let dp = wrap_centered(self.phi - other.phi, T::two_pi()).abs() / T::two_pi();
        (dk * dk + dp * dp).sqrt()
    }

    /// The point reached by adding a bias (n_x, φ_x).
    pub fn shifted(&self, bias: &BiasPoint<T>) -> Self {
        Self {
            k: wrap_centered(self.k + bias.n_x, T::one()),
            phi: wrap_centered(self.phi + bias.phi_x, T::two_pi()),
        }
    }
}

/// Maps (k, φ) to its canonical representative.
pub fn wrap<T: Real>(raw_k: T, raw_phi: T) -> Result<ZakPoint<T>> {
    if !raw_k.finite() || !raw_phi.finite() {
        return Err(Error::InvalidInput(format!(
            "Zak coordinates must be finite, got ({raw_k}, {raw_phi})"
        )));
    }
    Ok(ZakPoint {
        k: wrap_centered(raw_k, T::one()),
        phi: wrap_centered(raw_phi, T::two_pi()),
    })
}

/// Reduces `x` into (−period/2, period/2]; the lower edge maps to the upper.
pub(crate) fn wrap_centered<T: Real>(x: T, period: T) -> T {
    let half = period / T::lit(2.0);
    let mut y = x - period * ((x - half) / period).ceil();
    // ceil() can land one period off when x - half rounds across an integer.
    if y > half {
        y -= period;
    }
    if y <= -half {
        y += period;
    }
    y
}

/// sin y evaluated after reducing y to (−π, π] and reflecting into
/// [−π/2, π/2], so that multiples of the floating-point π give exact zeros.
pub(crate) fn sin_reduced<T: Real>(y: T) -> T {
    let r = wrap_centered(y, T::two_pi());
    let quarter = T::PI() / T::lit(2.0);
    if r > quarter {
        (T::PI() - r).sin()
    } else if r < -quarter {
        -(T::PI() + r).sin()
    } else {
        r.sin()
    }
}

/// External charge and flux bias (n_x, φ_x); unrestricted reals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasPoint<T> {
    pub n_x: T,
    pub phi_x: T,
}

impl<T: Real> BiasPoint<T> {
    pub fn new(n_x: T, phi_x: T) -> Result<Self> {
        if !n_x.finite() || !phi_x.finite() {
            return Err(Error::InvalidInput("bias must be finite".into()));
        }
        Ok(Self { n_x, phi_x })
    }

    pub fn zero() -> Self {
        Self {
            n_x: T::zero(),
            phi_x: T::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.n_x == T::zero() && self.phi_x == T::zero()
    }
}
