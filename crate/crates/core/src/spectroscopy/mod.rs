//! Waveguide spectroscopy of the realistic circuit: interband transition
//! frequencies, driven transmission, bias scans and state localisation.

mod bias;
mod localize;
mod transition;
mod transmission;

pub use bias::{bias_scan, bias_shift_check, BiasScan, BiasShiftCheck};
pub use localize::{localize_state, Localization};
pub use transition::{transition_frequency, transition_map, TransitionMap};
pub use transmission::{transmission_trace, TransitionSource, TransmissionTrace, WaveguideParams};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// g(ω), ν and J(ω) for a capacitive waveguide coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling<T> {
    pub g: T,
    pub nu: T,
    pub j: T,
}

/// `impedance` is the waveguide impedance in units that absorb 8e²/(πħ²),
/// so that ν = (C_c/C)²·impedance and J(ω) = νω.
pub fn coupling_constants<T: Real>(coupling_ratio: T, impedance: T, omega: T) -> Result<Coupling<T>> {
    if !(coupling_ratio >= T::zero()) || !coupling_ratio.finite() {
        return Err(Error::InvalidParameter(format!("C_c/C must be non-negative, got {coupling_ratio}")));
    }
    if !(impedance >= T::zero()) || !impedance.finite() {
        return Err(Error::InvalidParameter(format!("waveguide impedance must be non-negative, got {impedance}")));
    }
    if !(omega > T::zero()) || !omega.finite() {
        return Err(Error::InvalidParameter(format!("frequency must be positive, got {omega}")));
    }
    let nu = coupling_ratio * coupling_ratio * impedance;
    let j = nu * omega;
    let g = j.sqrt();
    debug_assert!((g * g - j).abs() <= T::lit(1e-12) * j.max(T::eps()));
    Ok(Coupling { g, nu, j })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coupling_scalings() {
        let a = coupling_constants(0.05f64, 3.0, 2.0).unwrap();
        let b = coupling_constants(0.05f64, 3.0, 4.0).unwrap();
        let c = coupling_constants(0.05f64, 3.0, 8.0).unwrap();
        assert!((b.j / a.j - 2.0).abs() < 1e-15);
        assert!((c.g / a.g - 2.0).abs() < 1e-15);
        let d = coupling_constants(0.1f64, 3.0, 2.0).unwrap();
        assert!((d.nu / a.nu - 4.0).abs() < 1e-14);
        assert!((a.g * a.g - a.j).abs() < 1e-16);
        assert!(coupling_constants(0.1f64, 3.0, 0.0).is_err());
        assert!(coupling_constants(-0.1f64, 3.0, 1.0).is_err());
    }
}
