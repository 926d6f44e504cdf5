use nalgebra::DMatrix;
use rayon::prelude::*;

use super::transition_frequency;
use crate::circuit::{BiasPoint, CircuitParams, ZakPoint};
use crate::error::{Error, Result};
use crate::fock::{build_hamiltonian_with, build_operators, eigensolve, TruncatedOperator};
use crate::open_system::{ket_bra, steady_state, LindbladModel};
use crate::scalar::{cabs, cplx, creal, Cplx, Real};

/// How Ω⁽¹⁰⁾(k, φ) is obtained for the two-level reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransitionSource {
    /// First-order closed form.
    FirstOrder,
    /// Fock-engine eigenvalues at the given truncation.
    Numeric(usize),
}

/// Drive and coupling of the transmission measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveguideParams<T> {
    /// C_c/C.
    pub coupling_ratio: T,
    /// ν, with 8e²Z/(πħ²) folded in.
    pub nu: T,
    /// Observed linewidth; absorbs |⟨Ψ₁|n̂₁|Ψ₀⟩|².
    pub gamma: T,
    /// Drive amplitude α (square root of a rate).
    pub alpha: T,
    /// Reference point whose Ω⁽¹⁰⁾ is the zero of the detuning axis.
    pub reference: ZakPoint<T>,
    pub source: TransitionSource,
}

impl<T: Real> WaveguideParams<T> {
    /// γ = 0.01 Ω⁽¹⁰⁾(0, π) and α² = 0.1 E_J, referenced to (0, π).
    pub fn weak_drive_defaults(params: &CircuitParams<T>) -> Result<Self> {
        let reference = ZakPoint::new(T::zero(), T::PI())?;
        let w = transition_frequency(params, &reference)?;
        Ok(Self {
            coupling_ratio: T::zero(),
            nu: T::zero(),
            gamma: T::lit(0.01) * w,
            alpha: (T::lit(0.1) * params.e_j()).sqrt(),
            reference,
            source: TransitionSource::FirstOrder,
        })
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("γ", self.gamma), ("ν", self.nu), ("C_c/C", self.coupling_ratio)] {
            if !(v >= T::zero()) || !v.finite() {
                return Err(Error::InvalidParameter(format!("{name} must be non-negative, got {v}")));
            }
        }
        if !(self.alpha > T::zero()) || !self.alpha.finite() {
            return Err(Error::InvalidParameter(format!("drive amplitude must be positive, got {}", self.alpha)));
        }
        Ok(())
    }
}

/// Steady-state transmission against detuning from the reference transition.
#[derive(Debug, Clone)]
pub struct TransmissionTrace<T: Real> {
    pub state: ZakPoint<T>,
    pub detunings: Vec<T>,
    pub transmission: Vec<T>,
    /// Ω⁽¹⁰⁾ at the reference point.
    pub reference_frequency: T,
    /// Ω⁽¹⁰⁾ at `state`.
    pub state_frequency: T,
    /// Largest steady-state residual over the sweep.
    pub max_residual: T,
    /// α² ≤ E_J.
    pub weak_drive: bool,
}

impl<T: Real> TransmissionTrace<T> {
    /// Detuning of the smallest sample, refined by a parabola through its
    /// neighbours when they exist.
    pub fn dip(&self) -> Option<(T, T)> {
        let (i, &t) = self
            .transmission
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))?;
        if i == 0 || i + 1 == self.transmission.len() {
            return Some((self.detunings[i], t));
        }
        let (x0, x1, x2) = (self.detunings[i - 1], self.detunings[i], self.detunings[i + 1]);
        let (y0, y1, y2) = (self.transmission[i - 1], t, self.transmission[i + 1]);
        let h = x1 - x0;
        let denom = y0 - T::lit(2.0) * y1 + y2;
        if (x2 - x1 - h).abs() > T::lit(1e-9) * h.abs() || denom <= T::zero() {
            return Some((x1, y1));
        }
        let shift = h * (y0 - y2) / (T::lit(2.0) * denom);
        Some((x1 + shift, y1 - (y0 - y2) * shift / (T::lit(4.0) * h)))
    }
}

fn frequency<T: Real>(params: &CircuitParams<T>, p: &ZakPoint<T>, source: TransitionSource) -> Result<T> {
    match source {
        TransitionSource::FirstOrder => transition_frequency(params, p),
        TransitionSource::Numeric(n) => {
            let ops = build_operators(params.impedance()?, n)?;
            let h = build_hamiltonian_with(&ops, params, p, &BiasPoint::zero())?;
            let v = eigensolve(&h, 2)?.values;
            Ok(v[1] - v[0])
        }
    }
}

/// Rotating-frame two-level model at drive detuning `delta` from the
/// transition, and the output-field operator b = √γ σ⁻ + α.
pub(crate) fn driven_two_level<T: Real>(delta: T, gamma: T, alpha: T) -> Result<(LindbladModel<T>, TruncatedOperator<T>)> {
    let sg = gamma.sqrt();
    let sigma_m = ket_bra::<T>(2, 0, 1);
    let sigma_p = ket_bra::<T>(2, 1, 0);
    let diff = sigma_p.matrix() - sigma_m.matrix();
    let mut h = DMatrix::<Cplx<T>>::zeros(2, 2);
    h[(1, 1)] = creal(-delta);
    // −(i/2)√γ α(σ⁺ − σ⁻) from the drive, plus the same again from the
    // coherent part of D[√γσ⁻ + α].
    h += &diff * cplx(T::zero(), -sg * alpha);
    let model = LindbladModel::new(TruncatedOperator::new(h)?, vec![(sigma_m.clone(), gamma)])?;
    let b = sigma_m.matrix() * creal(sg) + DMatrix::identity(2, 2) * creal(alpha);
    Ok((model, TruncatedOperator::new(b)?))
}

/// T(Δ) = |⟨b⟩/α|² for a system prepared in |Ψ₀;p⟩.
pub fn transmission_trace<T: Real>(
    params: &CircuitParams<T>,
    wg: &WaveguideParams<T>,
    p: &ZakPoint<T>,
    detunings: &[T],
) -> Result<TransmissionTrace<T>> {
    wg.validate()?;
    let w_ref = frequency(params, &wg.reference, wg.source)?;
    let w_state = frequency(params, p, wg.source)?;
    let offset = w_state - w_ref;
    let results: Vec<(T, T)> = detunings
        .par_iter()
        .map(|&d| {
            let (model, b) = driven_two_level(d - offset, wg.gamma, wg.alpha)?;
            let ss = steady_state(&model)?;
            let mean = (b.matrix() * ss.rho.matrix()).trace();
            let t = cabs(mean / creal(wg.alpha));
            Ok((t * t, ss.residual))
        })
        .collect::<Result<_>>()?;
    Ok(TransmissionTrace {
        state: *p,
        detunings: detunings.to_vec(),
        transmission: results.iter().map(|r| r.0).collect(),
        reference_frequency: w_ref,
        state_frequency: w_state,
        max_residual: results.iter().fold(T::zero(), |m, r| m.max(r.1)),
        weak_drive: wg.alpha * wg.alpha <= params.e_j(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::open_system::{evolve, EvolveOptions};
    use std::f64::consts::PI;

    fn fig4() -> (CircuitParams<f64>, WaveguideParams<f64>) {
        let params = CircuitParams::reference_realistic();
        let wg = WaveguideParams::weak_drive_defaults(&params).unwrap();
        (params, wg)
    }

    fn sweep(centre: f64, half: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| centre - half + 2.0 * half * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn dips_sit_at_transition_frequencies() {
        let (params, wg) = fig4();
        let g = wg.gamma;
        let pi_state = ZakPoint::new(0.0, PI).unwrap();
        let tr = transmission_trace(&params, &wg, &pi_state, &sweep(0.0, 5.0 * g, 201)).unwrap();
        let (d, depth) = tr.dip().unwrap();
        assert!(d.abs() < g / 10.0, "{d}");
        assert!(depth < 0.99);
        assert!(tr.weak_drive);

        let zero_state = ZakPoint::new(0.0, 0.0).unwrap();
        let split = tr.reference_frequency - tr.state_frequency;
        let tr0 = transmission_trace(&params, &wg, &zero_state, &sweep(1.462, 5.0 * g, 201)).unwrap();
        let (d0, _) = tr0.dip().unwrap();
        assert!((d0 - 1.462).abs() < g / 10.0, "{d0}");
        assert!(split.abs() < 1e-12);
    }

    #[test]
    fn bounded_symmetric_and_transparent_far_away() {
        let (params, wg) = fig4();
        let p = ZakPoint::new(0.0, PI).unwrap();
        let det = sweep(0.0, 100.0 * wg.gamma, 401);
        let tr = transmission_trace(&params, &wg, &p, &det).unwrap();
        for (i, t) in tr.transmission.iter().enumerate() {
            assert!(*t >= 0.0 && *t <= 1.0 + 1e-9, "{t}");
            let mirror = tr.transmission[det.len() - 1 - i];
            assert!((t - mirror).abs() < 1e-6);
        }
        assert!((tr.transmission[0] - 1.0).abs() < 1e-3);
        assert!((tr.transmission[400] - 1.0).abs() < 1e-3);
        assert!(tr.max_residual < 1e-10);
    }

    #[test]
    fn steady_state_matches_long_time_integration() {
        let (_, wg) = fig4();
        for delta in [0.0, 0.5 * wg.gamma, -2.0 * wg.gamma] {
            let (model, b) = driven_two_level(delta, wg.gamma, wg.alpha).unwrap();
            let ss = steady_state(&model).unwrap();
            let t_end = 60.0 / wg.gamma;
            let rho = evolve(&model, &ket_bra(2, 0, 0), &[t_end], EvolveOptions::default()).unwrap();
            let t_ss = ((b.matrix() * ss.rho.matrix()).trace() / wg.alpha).norm_sqr();
            let t_ev = ((b.matrix() * rho[0].matrix()).trace() / wg.alpha).norm_sqr();
            assert!((t_ss - t_ev).abs() < 1e-6, "{t_ss} vs {t_ev}");
        }
    }

    #[test]
    fn numeric_source_agrees_with_first_order() {
        let (params, mut wg) = fig4();
        wg.source = TransitionSource::Numeric(40);
        let p = ZakPoint::new(0.0, 0.0).unwrap();
        let tr = transmission_trace(&params, &wg, &p, &[0.0]).unwrap();
        let first = transition_frequency(&params, &p).unwrap();
        assert!((tr.state_frequency - first).abs() < 0.01);
    }

    #[test]
    fn rejects_bad_drive() {
        let (params, mut wg) = fig4();
        wg.alpha = 0.0;
        assert!(transmission_trace(&params, &wg, &ZakPoint::new(0.0, 0.0).unwrap(), &[0.0]).is_err());
    }
}
