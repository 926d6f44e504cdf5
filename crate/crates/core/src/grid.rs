//! Rectangular sampling of the double Brillouin zone.
//!
//! Grids are closed: both edges of each axis are sampled, so an `n`-point
//! axis has spacing `period / (n - 1)` and its last sample is the periodic
//! image of the first. With odd `n` the axis contains the zone centre and
//! the zone edge, which is where the critical points sit.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Number of samples along k and along φ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub nk: usize,
    pub nphi: usize,
}

impl GridSpec {
    pub fn new(nk: usize, nphi: usize) -> Result<Self> {
        if nk < 2 || nphi < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 2 samples per axis, got {nk}x{nphi}"
            )));
        }
        Ok(Self { nk, nphi })
    }

    pub fn len(&self) -> usize {
        self.nk * self.nphi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// k-samples from −1/2 to 1/2 inclusive.
    pub fn k_samples<T: Real>(&self) -> Vec<T> {
        closed_axis(self.nk, -T::lit(0.5), T::one())
    }

    /// φ-samples from −π to π inclusive.
    pub fn phi_samples<T: Real>(&self) -> Vec<T> {
        closed_axis(self.nphi, -T::PI(), T::two_pi())
    }

    /// Row-major flat index, k slowest.
    pub fn flat(&self, i: usize, j: usize) -> usize {
        i * self.nphi + j
    }

    /// Representative of cell (i, j) after identifying the last sample of
    /// each axis with the first.
    pub fn torus_cell(&self, i: usize, j: usize) -> (usize, usize) {
        (i % (self.nk - 1), j % (self.nphi - 1))
    }

    /// Size of the identified (torus) lattice.
    pub fn torus_dims(&self) -> (usize, usize) {
        (self.nk - 1, self.nphi - 1)
    }
}

fn closed_axis<T: Real>(n: usize, lo: T, period: T) -> Vec<T> {
    let last = T::from_usize_lossy(n - 1);
    (0..n)
        .map(|i| {
            if i + 1 == n {
                lo + period
            } else {
                lo + period * T::from_usize_lossy(i) / last
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn odd_axis_hits_centre_and_edge() {
        let g = GridSpec::new(41, 41).unwrap();
        let k: Vec<f64> = g.k_samples();
        let phi: Vec<f64> = g.phi_samples();
        assert_eq!(k[0], -0.5);
        assert_eq!(k[20], 0.0);
        assert_eq!(k[40], 0.5);
        assert_eq!(phi[20], 0.0);
        assert_eq!(phi[40], PI);
        assert!(k.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn torus_identification() {
        let g = GridSpec::new(5, 9).unwrap();
        assert_eq!(g.torus_cell(4, 8), (0, 0));
        assert_eq!(g.torus_cell(2, 3), (2, 3));
        assert_eq!(g.torus_dims(), (4, 8));
        assert!(GridSpec::new(1, 5).is_err());
    }
}
