use rayon::prelude::*;

use crate::circuit::{BiasPoint, CircuitParams, ZakPoint};
use crate::error::{Error, Result};
use crate::fock::{build_hamiltonian_with, build_operators, eigensolve, FockOperators};
use crate::grid::GridSpec;
use crate::scalar::Real;

/// Levels compared by [`bias_shift_check`].
const LEVELS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasShiftCheck<T> {
    pub passed: bool,
    pub max_deviation: T,
}

fn levels<T: Real>(ops: &FockOperators<T>, params: &CircuitParams<T>, p: &ZakPoint<T>, b: &BiasPoint<T>) -> Result<Vec<T>> {
    let h = build_hamiltonian_with(ops, params, p, b)?;
    let mut v = eigensolve(&h, LEVELS)?.values;
    v.truncate(LEVELS);
    Ok(v)
}

/// Compares the lowest levels of Ĥ₁(p; b) with those of Ĥ₁(p + b; 0).
pub fn bias_shift_check<T: Real>(
    params: &CircuitParams<T>,
    p: &ZakPoint<T>,
    b: &BiasPoint<T>,
    tol: T,
    truncation: usize,
) -> Result<BiasShiftCheck<T>> {
    if !(tol >= T::zero()) {
        return Err(Error::InvalidParameter(format!("tolerance must be non-negative, got {tol}")));
    }
    let ops = build_operators(params.impedance()?, truncation)?;
    let biased = levels(&ops, params, p, b)?;
    let shifted = levels(&ops, params, &p.shifted(b), &BiasPoint::zero())?;
    let max_deviation = biased
        .iter()
        .zip(&shifted)
        .fold(T::zero(), |m, (a, c)| m.max((*a - *c).abs()));
    Ok(BiasShiftCheck {
        passed: max_deviation <= tol,
        max_deviation,
    })
}

/// Ground level of Ĥ₁(p₀; b) with b swept over the fundamental cell
/// n_x ∈ [−1/2, 1/2], φ_x ∈ [−π, π].
#[derive(Debug, Clone)]
pub struct BiasScan<T> {
    pub origin: ZakPoint<T>,
    pub grid: GridSpec,
    pub n_x: Vec<T>,
    pub phi_x: Vec<T>,
    /// Row-major, n_x slowest.
    pub energies: Vec<T>,
    /// Largest difference from the unbiased band at the shifted point.
    pub max_deviation: T,
}

pub fn bias_scan<T: Real>(
    params: &CircuitParams<T>,
    origin: &ZakPoint<T>,
    grid: GridSpec,
    truncation: usize,
) -> Result<BiasScan<T>> {
    let ops = build_operators(params.impedance()?, truncation)?;
    let n_x: Vec<T> = grid.k_samples();
    let phi_x: Vec<T> = grid.phi_samples();
    let cells: Vec<(usize, usize)> = (0..grid.nk).flat_map(|i| (0..grid.nphi).map(move |j| (i, j))).collect();
    let out: Vec<(T, T)> = cells
        .par_iter()
        .map(|&(i, j)| {
            let b = BiasPoint::new(n_x[i], phi_x[j])?;
            let e = levels(&ops, params, origin, &b)?[0];
            let reference = levels(&ops, params, &origin.shifted(&b), &BiasPoint::zero())?[0];
            Ok((e, (e - reference).abs()))
        })
        .collect::<Result<_>>()?;
    Ok(BiasScan {
        origin: *origin,
        grid,
        n_x,
        phi_x,
        energies: out.iter().map(|r| r.0).collect(),
        max_deviation: out.iter().fold(T::zero(), |m, r| m.max(r.1)),
    })
}
