//! Number-basis matrix elements of the displacement operator
//! D(β) = exp(β a† − β* a), evaluated in log space.

use nalgebra::DMatrix;

use crate::scalar::{carg, Cplx, Real};

/// ln n! for n = 0..len.
pub(crate) fn ln_factorials<T: Real>(len: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(len.max(1));
    out.push(T::zero());
    for n in 1..len {
        let prev = out[n - 1];
        out.push(prev + T::from_usize_lossy(n).ln());
    }
    out
}

/// Associated Laguerre L_n^{(α)}(x) as (mantissa, ln scale): the value is
/// `mantissa · e^{scale}`. The recurrence rescales whenever the iterates
/// grow past 1e30 so large orders cannot overflow.
fn laguerre_scaled<T: Real>(n: usize, alpha: usize, x: T) -> (T, T) {
    let a = T::from_usize_lossy(alpha);
    let mut prev = T::one();
    if n == 0 {
        return (prev, T::zero());
    }
    let mut cur = T::one() + a - x;
    let mut log_scale = T::zero();
    let big = T::lit(1e30);
    for k in 1..n {
        let kk = T::from_usize_lossy(k);
        let next = ((T::lit(2.0) * kk + T::one() + a - x) * cur - (kk + a) * prev) / (kk + T::one());
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > big {
            prev /= mag;
            cur /= mag;
            log_scale += mag.ln();
        }
    }
    (cur, log_scale)
}

fn element_with_table<T: Real>(m: usize, n: usize, beta: Cplx<T>, lnf: &[T]) -> Cplx<T> {
    let x = beta.norm_sqr();
    // For m < n the element equals that of the transposed index pair with
    // β replaced by −β*.
    let (hi, lo, b) = if m >= n { (m, n, beta) } else { (n, m, -beta.conj()) };
    let d = hi - lo;
    if x == T::zero() {
        return if d == 0 { Cplx::new(T::one(), T::zero()) } else { Cplx::new(T::zero(), T::zero()) };
    }
    let (lag, lag_scale) = laguerre_scaled(lo, d, x);
    if lag == T::zero() {
        return Cplx::new(T::zero(), T::zero());
    }
    let half = T::lit(0.5);
    let log_mag = half * (lnf[lo] - lnf[hi]) + T::from_usize_lossy(d) * x.sqrt().ln() - half * x
        + lag.abs().ln()
        + lag_scale;
    let phase = T::from_usize_lossy(d) * carg(b);
    let sign = if lag < T::zero() { -T::one() } else { T::one() };
    let mag = sign * log_mag.exp();
    Cplx::new(mag * phase.cos(), mag * phase.sin())
}

/// ⟨m| D(β) |n⟩.
pub fn displacement_element<T: Real>(m: usize, n: usize, beta: Cplx<T>) -> Cplx<T> {
    let lnf = ln_factorials::<T>(m.max(n) + 1);
    element_with_table(m, n, beta, &lnf)
}

/// The `dim × dim` block of D(β) in the number basis.
pub fn displacement_matrix<T: Real>(beta: Cplx<T>, dim: usize) -> DMatrix<Cplx<T>> {
    let lnf = ln_factorials::<T>(dim + 1);
    DMatrix::from_fn(dim, dim, |m, n| element_with_table(m, n, beta, &lnf))
}
