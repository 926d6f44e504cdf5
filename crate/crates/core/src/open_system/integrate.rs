//! Adaptive Dormand–Prince 5(4) integration of the Lindblad equation.

use nalgebra::DMatrix;

use super::LindbladModel;
use crate::error::{Error, Result};
use crate::fock::TruncatedOperator;
use crate::scalar::{cabs, carg, creal, Cplx, Real};

#[derive(Debug, Clone, Copy)]
pub struct EvolveOptions<T> {
    pub rtol: T,
    pub atol: T,
    pub max_steps: usize,
}

impl<T: Real> Default for EvolveOptions<T> {
    fn default() -> Self {
        Self {
            rtol: T::lit(1e-11).max(T::eps() * T::lit(100.0)),
            atol: T::lit(1e-13).max(T::eps()),
            max_steps: 2_000_000,
        }
    }
}

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];

/// Fifth-minus-fourth order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

type Mat<T> = DMatrix<Cplx<T>>;

/// States at each of `times` (ascending, ≥ 0), starting from ρ(0) = `rho0`.
pub fn evolve<T: Real>(
    model: &LindbladModel<T>,
    rho0: &TruncatedOperator<T>,
    times: &[T],
    opts: EvolveOptions<T>,
) -> Result<Vec<TruncatedOperator<T>>> {
    model.hamiltonian().check_dim(rho0)?;
    if times.windows(2).any(|w| !(w[1] >= w[0])) || times.first().is_some_and(|t| *t < T::zero()) {
        return Err(Error::InvalidInput("sample times must be ascending and non-negative".into()));
    }
    let f = |y: &Mat<T>| model.rhs_matrix(y);
    let mut y = rho0.matrix().clone();
    let mut t = T::zero();
    let scale = model
        .collapse()
        .iter()
        .fold(model.hamiltonian().max_abs(), |acc, (a, r)| acc.max(*r * a.max_abs() * a.max_abs()))
        .max(T::eps());
    let mut h = T::lit(1e-3) / scale;
    let mut k1 = f(&y);
    let mut out = Vec::with_capacity(times.len());
    let mut steps = 0usize;

    for &target in times {
        while t < target {
            steps += 1;
            if steps > opts.max_steps {
                return Err(Error::Convergence(format!("integrator exceeded {} steps", opts.max_steps)));
            }
            let last = target - t <= h;
            let step = if last { target - t } else { h };
            let (y_new, k7, err) = dp_step(&f, &y, &k1, step, &opts);
            if !err.finite() {
                return Err(Error::Convergence("integrator produced non-finite values".into()));
            }
            if err <= T::one() {
                t = if last { target } else { t + step };
                y = y_new;
                k1 = k7;
            }
            let fac = if err == T::zero() {
                T::lit(5.0)
            } else {
                (T::lit(0.9) * err.powf(-T::lit(0.2))).clamp(T::lit(0.2), T::lit(5.0))
            };
            h = step * fac;
            if h < T::eps() * (t.abs() + T::one()) {
                return Err(Error::Convergence("integrator step size underflow".into()));
            }
        }
        out.push(TruncatedOperator::from_matrix_unchecked(y.clone()));
    }
    Ok(out)
}

fn dp_step<T: Real, F: Fn(&Mat<T>) -> Mat<T>>(
    f: &F,
    y: &Mat<T>,
    k1: &Mat<T>,
    h: T,
    opts: &EvolveOptions<T>,
) -> (Mat<T>, Mat<T>, T) {
    let mut ks: Vec<Mat<T>> = Vec::with_capacity(7);
    ks.push(k1.clone());
    for row in A.iter().take(5) {
        let mut acc = y.clone();
        for (kj, &a) in ks.iter().zip(row.iter()) {
            if a != 0.0 {
                acc += kj * creal(h * T::lit(a));
            }
        }
        ks.push(f(&acc));
    }
    let mut y_new = y.clone();
    for (kj, &b) in ks.iter().zip(A[5].iter()) {
        if b != 0.0 {
            y_new += kj * creal(h * T::lit(b));
        }
    }
    let k7 = f(&y_new);
    ks.push(k7.clone());
    let mut err_m = Mat::<T>::zeros(y.nrows(), y.ncols());
    for (kj, &e) in ks.iter().zip(E.iter()) {
        if e != 0.0 {
            err_m += kj * creal(h * T::lit(e));
        }
    }
    let mut sum = T::zero();
    for ((e, a), b) in err_m.iter().zip(y.iter()).zip(y_new.iter()) {
        let sc = opts.atol + opts.rtol * cabs(*a).max(cabs(*b));
        let r = cabs(*e) / sc;
        sum += r * r;
    }
    let n = T::from_usize_lossy(err_m.len());
    (y_new, k7, (sum / n).sqrt())
}

/// Exponential fit v(t) ≈ v₀ e^{(−rate + i·frequency) t}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit<T> {
    pub rate: T,
    pub frequency: T,
    /// Largest deviation of ln|v| or unwrapped arg v from the fitted lines.
    pub max_residual: T,
}

/// Least-squares straight lines through ln|v| and the unwrapped phase.
pub fn fit_decay<T: Real>(times: &[T], values: &[Cplx<T>]) -> Result<DecayFit<T>> {
    if times.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: times.len(),
            found: values.len(),
        });
    }
    if times.len() < 2 {
        return Err(Error::InvalidInput("need at least two samples to fit".into()));
    }
    if values.iter().any(|v| cabs(*v) == T::zero()) {
        return Err(Error::InvalidInput("cannot fit a decay through zeros".into()));
    }
    let logs: Vec<T> = values.iter().map(|v| cabs(*v).ln()).collect();
    let mut phases = Vec::with_capacity(values.len());
    let mut offset = T::zero();
    let mut prev = carg(values[0]);
    for v in values {
        let a = carg(*v);
        let mut d = a - prev;
        while d > T::PI() {
            d -= T::two_pi();
            offset -= T::two_pi();
        }
        while d < -T::PI() {
            d += T::two_pi();
            offset += T::two_pi();
        }
        phases.push(a + offset);
        prev = a;
    }
    let (s_log, r_log) = line_fit(times, &logs);
    let (s_ph, r_ph) = line_fit(times, &phases);
    Ok(DecayFit {
        rate: -s_log,
        frequency: s_ph,
        max_residual: r_log.max(r_ph),
    })
}

/// Slope and maximum residual of the least-squares line.
fn line_fit<T: Real>(x: &[T], y: &[T]) -> (T, T) {
    let n = T::from_usize_lossy(x.len());
    let mx = x.iter().fold(T::zero(), |a, &b| a + b) / n;
    let my = y.iter().fold(T::zero(), |a, &b| a + b) / n;
    let mut sxy = T::zero();
    let mut sxx = T::zero();
    for (&a, &b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
    }
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let res = x
        .iter()
        .zip(y)
        .fold(T::zero(), |acc, (&a, &b)| acc.max((b - icpt - slope * a).abs()));
    (slope, res)
}
