//! Real-space spectral discretisation of Ĥ₁(k, φ), independent of the
//! number-basis route.
//!
//! A Zak function on the (l, θ) torus with the twisted boundary condition is
//! the same object as one function f on the real line, via
//! ψ(l, θ) = Σ_p e^{2πipl} f(θ + 2πp). Unrolling an nl × nθ torus grid along
//! that identification gives a cyclic line of nl·nθ points and length 2π·nl
//! on which the operator is discretised in a plane-wave (sinc) basis. The
//! QPS term is diagonal in momentum and the JJ and inductive terms are
//! diagonal in position.

use nalgebra::DMatrix;

use super::eigen::eigensolve;
use super::hamiltonian::ModeOneSpec;
use super::TruncatedOperator;
use crate::error::{Error, Result};
use crate::scalar::{cis, creal, Real};

/// Resolution of the torus grid: points along l and along θ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PdeGrid {
    pub nl: usize,
    pub ntheta: usize,
}

impl PdeGrid {
    pub const MIN: usize = 16;

    pub fn new(nl: usize, ntheta: usize) -> Result<Self> {
        if nl < Self::MIN || ntheta < Self::MIN {
            return Err(Error::Convergence(format!(
                "resolution {nl}x{ntheta} is below the {0}x{0} minimum",
                Self::MIN
            )));
        }
        Ok(Self { nl, ntheta })
    }
}

/// Weight allowed in the outer tenth of the box or of the momentum range.
const TAIL_TOLERANCE: f64 = 1e-10;

/// Lowest `count` eigenvalues of the discretised operator.
pub fn pde_oracle<T: Real>(spec: &ModeOneSpec<T>, grid: PdeGrid, count: usize) -> Result<Vec<T>> {
    let params = &spec.params;
    let (e_q, e_j, e_c, e_l) = (params.e_q(), params.e_j(), params.e_c(), params.e_l());
    params.impedance()?;
    let (k, phi) = (spec.p.k(), spec.p.phi());
    let (nx, px) = (spec.bias.n_x, spec.bias.phi_x);

    let m = grid.nl * grid.ntheta;
    let nl = T::from_usize_lossy(grid.nl);
    let length = T::two_pi() * nl;
    let dx = length / T::from_usize_lossy(m);
    let half = T::lit(0.5);
    let x: Vec<T> = (0..m)
        .map(|j| -length * half + dx * (T::from_usize_lossy(j) + half))
        .collect();
    let signed: Vec<i64> = (0..m)
        .map(|i| if 2 * i < m { i as i64 } else { i as i64 - m as i64 })
        .collect();
    let kappa: Vec<T> = signed.iter().map(|&s| T::lit(s as f64) / nl).collect();

    let kinetic: Vec<T> = kappa
        .iter()
        .map(|&q| {
            let s = q + nx;
            e_c * s * s - e_q * (T::two_pi() * (q - k)).cos()
        })
        .collect();
    let potential: Vec<T> = x
        .iter()
        .map(|&xj| {
            let d = xj - px;
            e_l * d * d - e_j * (xj + phi).cos()
        })
        .collect();

    let inv_m = T::one() / T::from_usize_lossy(m);
    // F_{qj} = e^{−iκ_q x_j}/√M; H = F† diag(kinetic) F + diag(potential).
    let f = DMatrix::from_fn(m, m, |q, j| cis(-kappa[q] * x[j]) * creal(inv_m.sqrt()));
    let mut scaled = f.clone();
    for (q, &kq) in kinetic.iter().enumerate() {
        let s = creal(kq);
        scaled.row_mut(q).iter_mut().for_each(|v| *v *= s);
    }
    let mut h = f.adjoint() * scaled;
    for j in 0..m {
        h[(j, j)] += creal(potential[j]);
    }
    // Round-off leaves an asymmetry at the 1e−13 level; symmetrise.
    let h = (&h + h.adjoint()) * creal(half);

    let op = TruncatedOperator::from_matrix_unchecked(h);
    let es = eigensolve(&op, count)?;

    let edge = m / 10;
    let tol = T::lit(TAIL_TOLERANCE);
    for c in 0..count.min(m) {
        let v = es.vectors.column(c);
        let pos_tail: T = (0..edge)
            .chain(m - edge..m)
            .fold(T::zero(), |acc, j| acc + v[j].norm_sqr());
        let vk = &f * v;
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&q| signed[q].unsigned_abs());
        let mom_tail: T = order[m - edge..]
            .iter()
            .fold(T::zero(), |acc, &q| acc + vk[q].norm_sqr());
        if pos_tail > tol || mom_tail > tol {
            return Err(Error::Convergence(format!(
                "state {c} is not resolved on the {}x{} grid (position tail {:e}, momentum tail {:e})",
                grid.nl,
                grid.ntheta,
                pos_tail.as_f64(),
                mom_tail.as_f64()
            )));
        }
    }
    Ok(es.values.into_iter().take(count).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{wrap, BiasPoint, CircuitParams};
    use crate::fock::lowest_eigenvalues;

    fn spec(params: CircuitParams<f64>, k: f64, phi: f64) -> ModeOneSpec<f64> {
        ModeOneSpec::unbiased(params, wrap(k, phi).unwrap(), 40).unwrap()
    }

    #[test]
    fn harmonic_levels() {
        let params = CircuitParams::reference_realistic().with_nonlinear(0.0, 0.0).unwrap();
        let w = params.oscillator_gap().unwrap();
        let ev = pde_oracle(&spec(params, 0.3, -1.0), PdeGrid::new(16, 16).unwrap(), 4).unwrap();
        for (m, e) in ev.iter().enumerate() {
            assert!((e - (m as f64 + 0.5) * w).abs() < 1e-6 * w, "level {m}: {e}");
        }
    }

    #[test]
    fn matches_number_basis() {
        let params = CircuitParams::<f64>::reference_realistic();
        let w = params.oscillator_gap().unwrap();
        let g = PdeGrid::new(16, 16).unwrap();
        let s = spec(params, 0.1, 0.3);
        let a = pde_oracle(&s, g, 2).unwrap();
        let b = lowest_eigenvalues(&s, 2).unwrap();
        for i in 0..2 {
            assert!((a[i] - b[i]).abs() < 1e-6 * w);
        }
    }

    #[test]
    fn k_independent_without_phase_slips() {
        let params = CircuitParams::reference_realistic().with_nonlinear(0.0, 1.0).unwrap();
        let g = PdeGrid::new(16, 16).unwrap();
        let a = pde_oracle(&spec(params, 0.0, 0.7), g, 2).unwrap();
        let b = pde_oracle(&spec(params, 0.37, 0.7), g, 2).unwrap();
        for i in 0..2 {
            assert!((a[i] - b[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn biased_operator_matches_number_basis() {
        let params = CircuitParams::<f64>::reference_realistic();
        let b = BiasPoint::new(0.21, 0.8).unwrap();
        let s = ModeOneSpec::new(params, wrap(-0.1, 1.2).unwrap(), b, 40).unwrap();
        let a = pde_oracle(&s, PdeGrid::new(16, 16).unwrap(), 1).unwrap();
        let f = lowest_eigenvalues(&s, 1).unwrap();
        assert!((a[0] - f[0]).abs() < 1e-6 * params.oscillator_gap().unwrap());
    }

    #[test]
    fn under_resolved_grids_are_reported() {
        assert!(matches!(PdeGrid::new(8, 16), Err(Error::Convergence(_))));
        // A very wide ground state leaks out of a 32π box.
        let params = CircuitParams::new(1.0, 1.0, 20000.0, 1.0).unwrap();
        let r = pde_oracle(&spec(params, 0.0, 0.0), PdeGrid::new(16, 16).unwrap(), 1);
        assert!(matches!(r, Err(Error::Convergence(_))), "{r:?}");
    }
}
