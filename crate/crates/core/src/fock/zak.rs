//! Oscillator ground state in the Zak basis.

use crate::circuit::ZakPoint;
use crate::error::{Error, Result};
use crate::scalar::{cabs, Cplx, Real};

/// ϑ₃(u, q) = 1 + 2 Σ_{j≥1} q^{j²} cos(2ju) for complex u = a + ib,
/// with ln q = `log_q` < 0. Summation stops once the terms, past their
/// peak, fall below 1e−16 of the partial sum.
fn theta3<T: Real>(a: T, b: T, log_q: T) -> Cplx<T> {
    let mut sum = Cplx::new(T::one(), T::zero());
    let tiny = T::lit(1e-16).max(T::eps());
    let two = T::lit(2.0);
    let mut j = 1usize;
    let mut prev_mag = T::zero();
    loop {
        let jj = T::from_usize_lossy(j);
        let arg_re = two * jj * a;
        let arg_im = two * jj * b;
        // q^{j²} cos(x + iy) = q^{j²}(cos x cosh y − i sin x sinh y), with the
        // hyperbolic growth folded into the exponent.
        let lg = log_q * jj * jj;
        let ch = (lg + arg_im).exp() / two + (lg - arg_im).exp() / two;
        let sh = (lg + arg_im).exp() / two - (lg - arg_im).exp() / two;
        let term = Cplx::new(two * arg_re.cos() * ch, -two * arg_re.sin() * sh);
        sum += term;
        let mag = (lg + arg_im.abs()).exp();
        if mag < prev_mag && mag < tiny * cabs(sum) {
            break;
        }
        prev_mag = mag;
        j += 1;
        if j > 100_000 {
            break;
        }
    }
    sum
}

/// ψ(k, φ) = (πz)^{−1/4} e^{−φ²/2z} ϑ₃(πk + iπφ/z, e^{−2π²/z}).
pub fn ho_zak_wavefunction<T: Real>(z: T, p: &ZakPoint<T>) -> Result<Cplx<T>> {
    if !(z > T::zero()) || !z.finite() {
        return Err(Error::InvalidParameter(format!("impedance must be positive, got {z}")));
    }
    let pi = T::PI();
    let (k, phi) = (p.k(), p.phi());
    let pref = (pi * z).powf(-T::lit(0.25)) * (-phi * phi / (T::lit(2.0) * z)).exp();
    let th = theta3(pi * k, pi * phi / z, -T::lit(2.0) * pi * pi / z);
    Ok(th * pref)
}

/// Σ_{|j| ≤ images} e^{−2πijk} ψ₀(φ − 2πj) with ψ₀ the real-line oscillator
/// ground state of impedance z. The brute-force counterpart of
/// [`ho_zak_wavefunction`].
pub fn zak_image_sum<T: Real>(z: T, k: T, phi: T, images: usize) -> Cplx<T> {
    let pi = T::PI();
    let norm = (pi * z).powf(-T::lit(0.25));
    let mut acc = Cplx::new(T::zero(), T::zero());
    let n = images as i64;
    for j in -n..=n {
        let jf = T::lit(j as f64);
        let x = phi - T::two_pi() * jf;
        let g = norm * (-x * x / (T::lit(2.0) * z)).exp();
        let ph = -T::two_pi() * jf * k;
        acc += Cplx::new(ph.cos(), ph.sin()) * g;
    }
    acc
}
