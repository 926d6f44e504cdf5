use std::collections::{BTreeSet, VecDeque};

use super::TransitionMap;
use crate::circuit::ZakPoint;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Torus cells consistent with a measured transition frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct Localization {
    pub cells: BTreeSet<(usize, usize)>,
    /// 4-neighbour connected components on the torus.
    pub components: usize,
    dims: (usize, usize),
}

impl Localization {
    /// No grid cell is compatible with the measurement.
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: (usize, usize)) -> bool {
        self.cells.contains(&cell)
    }

    /// Component count after removing cells within `radius` lattice steps
    /// (torus Chebyshev distance) of `centre`.
    pub fn components_excluding(&self, centre: (usize, usize), radius: usize) -> usize {
        let (nk, np) = self.dims;
        let dist = |a: usize, b: usize, n: usize| {
            let d = a.abs_diff(b);
            d.min(n - d)
        };
        let kept: BTreeSet<_> = self
            .cells
            .iter()
            .copied()
            .filter(|&(i, j)| dist(i, centre.0, nk).max(dist(j, centre.1, np)) > radius)
            .collect();
        count_components(&kept, self.dims)
    }
}

fn count_components(cells: &BTreeSet<(usize, usize)>, (nk, np): (usize, usize)) -> usize {
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for &start in cells {
        if !seen.insert(start) {
            continue;
        }
        count += 1;
        let mut queue = VecDeque::from([start]);
        while let Some((i, j)) = queue.pop_front() {
            for next in [((i + 1) % nk, j), ((i + nk - 1) % nk, j), (i, (j + 1) % np), (i, (j + np - 1) % np)] {
                if cells.contains(&next) && seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
    }
    count
}

/// Cells of `map` with |Ω⁽¹⁰⁾ − omega| ≤ delta. An empty result means no
/// state is consistent with the measurement; degenerate frequencies show up
/// as several components and are not resolved here.
pub fn localize_state<T: Real>(map: &TransitionMap<T>, omega: T, delta: T) -> Result<Localization> {
    if !(delta > T::zero()) {
        return Err(Error::InvalidParameter(format!("frequency window must be positive, got {delta}")));
    }
    if !omega.finite() {
        return Err(Error::InvalidInput("measured frequency must be finite".into()));
    }
    let cells: BTreeSet<_> = map
        .torus_cells()
        .filter(|&(i, j)| (map.at(i, j) - omega).abs() <= delta)
        .collect();
    let dims = map.grid.torus_dims();
    let components = count_components(&cells, dims);
    Ok(Localization { cells, components, dims })
}

impl<T: Real> TransitionMap<T> {
    /// Torus cell containing the grid sample closest to `p`.
    pub fn nearest_cell(&self, p: &ZakPoint<T>) -> (usize, usize) {
        let (nk, np) = self.grid.torus_dims();
        let fi = (p.k() + T::lit(0.5)) * T::from_usize_lossy(nk);
        let fj = (p.phi() + T::PI()) / T::two_pi() * T::from_usize_lossy(np);
        let i = fi.round().to_usize().unwrap_or(0) % nk;
        let j = fj.round().to_usize().unwrap_or(0) % np;
        (i, j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitParams;
    use crate::grid::GridSpec;
    use crate::spectroscopy::{transition_frequency, transition_map};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn map() -> TransitionMap<f64> {
        transition_map(&CircuitParams::reference_realistic(), GridSpec::new(101, 101).unwrap()).unwrap()
    }

    #[test]
    fn ground_state_frequency_is_unique() {
        let m = map();
        let max = m.at(50, 50);
        let loc = localize_state(&m, max, 1e-3).unwrap();
        assert_eq!(loc.components, 1);
        assert!(loc.contains((50, 50)));
        assert!(loc.cells.iter().all(|&(i, j)| m.point(i, j).torus_distance(&ZakPoint::new(0.0, 0.0).unwrap()) < 0.05));
    }

    #[test]
    fn saddle_frequency_is_degenerate() {
        let m = map();
        let saddle = ZakPoint::new(0.0, PI).unwrap();
        let target = transition_frequency(&CircuitParams::reference_realistic(), &saddle).unwrap();
        let loc = localize_state(&m, target, m.resolution()).unwrap();
        let centre = m.nearest_cell(&saddle);
        assert!(loc.contains(centre));
        // The two branches cross at the saddle itself.
        assert_eq!(loc.components, 1);
        assert_eq!(loc.components_excluding(centre, 10), 2);
        assert!(loc.cells.iter().any(|&(i, j)| m.point(i, j).torus_distance(&saddle) > 0.3));
    }

    #[test]
    fn wide_window_covers_everything_and_empty_is_not_an_error() {
        let m = map();
        let loc = localize_state(&m, m.at(50, 50), 100.0).unwrap();
        assert_eq!(loc.cells.len(), 100 * 100);
        assert_eq!(loc.components, 1);
        let none = localize_state(&m, 0.0, 1e-3).unwrap();
        assert!(none.is_empty());
        assert!(localize_state(&m, 1.0, 0.0).is_err());
    }

    #[test]
    fn nearest_cell_round_trip() {
        let m = map();
        assert_eq!(m.nearest_cell(&ZakPoint::new(0.0, 0.0).unwrap()), (50, 50));
        assert_eq!(m.nearest_cell(&ZakPoint::new(0.5, PI).unwrap()), (0, 0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn region_shrinks_with_window(frac in 0.0f64..1.0, d1 in 1e-3f64..0.5, shrink in 0.0f64..1.0) {
            let m = map();
            let lo = m.argmin_cells(0.0)[0];
            let hi = m.argmax_cells(0.0)[0];
            let omega = m.at(lo.0, lo.1) + frac * (m.at(hi.0, hi.1) - m.at(lo.0, lo.1));
            let big = localize_state(&m, omega, d1).unwrap();
            let small = localize_state(&m, omega, d1 * shrink.max(1e-6)).unwrap();
            prop_assert!(small.cells.is_subset(&big.cells));
        }
    }
}
