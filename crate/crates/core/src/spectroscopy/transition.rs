use crate::circuit::{CircuitParams, ZakPoint};
use crate::error::Result;
use crate::grid::GridSpec;
use crate::scalar::Real;

/// Ω⁽¹⁰⁾(k, φ) to first order in the nonlinear energies.
pub fn transition_frequency<T: Real>(params: &CircuitParams<T>, p: &ZakPoint<T>) -> Result<T> {
    let z = params.impedance()?;
    let w = params.oscillator_gap()?;
    let r = params.renormalized_energies(0)?;
    let two = T::lit(2.0);
    let a = two * T::PI() * T::PI() / z * r.e_q;
    let b = z / two * r.e_j;
    Ok(w + a * (T::two_pi() * p.k()).cos() + b * p.phi().cos())
}

/// Ω⁽¹⁰⁾ sampled on a closed grid, row-major with k slowest.
#[derive(Debug, Clone)]
pub struct TransitionMap<T> {
    pub grid: GridSpec,
    pub k_samples: Vec<T>,
    pub phi_samples: Vec<T>,
    pub values: Vec<T>,
}

pub fn transition_map<T: Real>(params: &CircuitParams<T>, grid: GridSpec) -> Result<TransitionMap<T>> {
    let k_samples: Vec<T> = grid.k_samples();
    let phi_samples: Vec<T> = grid.phi_samples();
    let mut values = Vec::with_capacity(grid.len());
    for &k in &k_samples {
        for &phi in &phi_samples {
            values.push(transition_frequency(params, &ZakPoint::new(k, phi)?)?);
        }
    }
    Ok(TransitionMap {
        grid,
        k_samples,
        phi_samples,
        values,
    })
}

impl<T: Real> TransitionMap<T> {
    pub fn at(&self, i: usize, j: usize) -> T {
        self.values[self.grid.flat(i, j)]
    }

    /// Cells of the identified torus lattice, as (i, j) with i < nk − 1.
    pub(crate) fn torus_cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let (nk, np) = self.grid.torus_dims();
        (0..nk).flat_map(move |i| (0..np).map(move |j| (i, j)))
    }

    /// Number of torus cells with |Ω − target| ≤ delta.
    pub fn level_set_count(&self, target: T, delta: T) -> usize {
        self.torus_cells().filter(|&(i, j)| (self.at(i, j) - target).abs() <= delta).count()
    }

    /// Torus cells attaining the maximum within `tol`.
    pub fn argmax_cells(&self, tol: T) -> Vec<(usize, usize)> {
        let max = self.torus_cells().fold(T::lit(f64::NEG_INFINITY), |m, (i, j)| m.max(self.at(i, j)));
        self.torus_cells().filter(|&(i, j)| self.at(i, j) >= max - tol).collect()
    }

    /// Torus cells attaining the minimum within `tol`.
    pub fn argmin_cells(&self, tol: T) -> Vec<(usize, usize)> {
        let min = self.torus_cells().fold(T::lit(f64::INFINITY), |m, (i, j)| m.min(self.at(i, j)));
        self.torus_cells().filter(|&(i, j)| self.at(i, j) <= min + tol).collect()
    }

    /// Largest change of Ω⁽¹⁰⁾ between neighbouring samples: the narrowest
    /// window whose level sets are not broken up by the sampling.
    pub fn resolution(&self) -> T {
        let mut r = T::zero();
        for i in 0..self.grid.nk {
            for j in 0..self.grid.nphi {
                let v = self.at(i, j);
                if i + 1 < self.grid.nk {
                    r = r.max((self.at(i + 1, j) - v).abs());
                }
                if j + 1 < self.grid.nphi {
                    r = r.max((self.at(i, j + 1) - v).abs());
                }
            }
        }
        r
    }

    pub fn point(&self, i: usize, j: usize) -> ZakPoint<T> {
        ZakPoint::new(self.k_samples[i], self.phi_samples[j]).expect("grid samples are finite")
    }
}
