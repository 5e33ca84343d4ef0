use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Regular grid discretising the flat base manifold, with open boundaries.
///
/// Sites are numbered with axis 0 varying fastest. A site is interior when
/// it has both neighbours along every axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    sizes: Vec<usize>,
    spacing: Vec<f64>,
    origin: Vec<f64>,
}

pub const MAX_DIM: usize = 4;
pub const MIN_SIZE: usize = 4;

pub fn build_lattice(dim: usize, sizes: &[usize], spacing: &[f64]) -> Result<Lattice> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::InvalidLattice(format!(
            "dimension must be between 1 and {MAX_DIM}, got {dim}"
        )));
    }
    if sizes.len() != dim || spacing.len() != dim {
        return Err(Error::InvalidLattice(format!(
            "expected {dim} sizes and spacings, got {} and {}",
            sizes.len(),
            spacing.len()
        )));
    }
    if let Some(n) = sizes.iter().find(|&&n| n < MIN_SIZE) {
        return Err(Error::InvalidLattice(format!(
            "every axis needs at least {MIN_SIZE} sites, got {n}"
        )));
    }
    if let Some(h) = spacing.iter().find(|h| !(h.is_finite() && **h > 0.0)) {
        return Err(Error::InvalidLattice(format!("spacing must be positive, got {h}")));
    }
    Ok(Lattice {
        sizes: sizes.to_vec(),
        spacing: spacing.to_vec(),
        origin: vec![0.0; dim],
    })
}

impl Lattice {
    /// Moves the coordinates of site 0 to `origin`.
    pub fn with_origin(mut self, origin: &[f64]) -> Result<Self> {
        if origin.len() != self.dim() || origin.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidLattice(format!(
                "origin must hold {} finite coordinates",
                self.dim()
            )));
        }
        self.origin = origin.to_vec();
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn spacing(&self, mu: usize) -> f64 {
        self.spacing[mu]
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn n_sites(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn index(&self, multi: &[usize]) -> usize {
        debug_assert_eq!(multi.len(), self.dim());
        multi
            .iter()
            .zip(&self.sizes)
            .rev()
            .fold(0, |acc, (&i, &n)| acc * n + i)
    }

    pub fn multi_index(&self, site: usize) -> Vec<usize> {
        let mut rest = site;
        self.sizes
            .iter()
            .map(|&n| {
                let i = rest % n;
                rest /= n;
                i
            })
            .collect()
    }

    pub fn coords(&self, site: usize) -> Vec<f64> {
        self.multi_index(site)
            .iter()
            .enumerate()
            .map(|(mu, &i)| self.origin[mu] + i as f64 * self.spacing[mu])
            .collect()
    }

    pub fn is_interior(&self, site: usize) -> bool {
        self.multi_index(site)
            .iter()
            .zip(&self.sizes)
            .all(|(&i, &n)| i > 0 && i + 1 < n)
    }

    /// Sites at least `margin` steps away from every boundary.
    pub fn sites_with_margin(&self, margin: usize) -> Vec<usize> {
        (0..self.n_sites())
            .filter(|&site| {
                self.multi_index(site)
                    .iter()
                    .zip(&self.sizes)
                    .all(|(&i, &n)| i >= margin && i + margin < n)
            })
            .collect()
    }

    pub fn interior_sites(&self) -> Vec<usize> {
        self.sites_with_margin(1)
    }

    /// The site `step` positions away along axis `mu`, if it exists.
    pub fn neighbor(&self, site: usize, mu: usize, step: isize) -> Option<usize> {
        let mut multi = self.multi_index(site);
        let moved = multi[mu] as isize + step;
        if moved < 0 || moved >= self.sizes[mu] as isize {
            return None;
        }
        multi[mu] = moved as usize;
        Some(self.index(&multi))
    }

    /// Evaluates `f` at every site coordinate.
    pub fn sample<T>(&self, mut f: impl FnMut(&[f64]) -> T) -> Vec<T> {
        (0..self.n_sites()).map(|site| f(&self.coords(site))).collect()
    }

    pub(crate) fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.n_sites() {
            return Err(Error::InvalidLattice(format!(
                "site {site} out of range for {} sites",
                self.n_sites()
            )));
        }
        Ok(())
    }

    pub(crate) fn require_interior(&self, site: usize) -> Result<()> {
        self.check_site(site)?;
        if !self.is_interior(site) {
            return Err(Error::NotInterior { site });
        }
        Ok(())
    }

    pub(crate) fn check_direction(&self, mu: usize) -> Result<()> {
        if mu >= self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: mu + 1,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional() {
        let l = build_lattice(1, &[8], &[0.1]).unwrap();
        assert_eq!(l.n_sites(), 8);
        assert_eq!(l.interior_sites().len(), 6);
    }

    #[test]
    fn two_dimensional() {
        let l = build_lattice(2, &[4, 4], &[1.0, 1.0]).unwrap();
        assert_eq!(l.n_sites(), 16);
        assert_eq!(l.interior_sites(), vec![5, 6, 9, 10]);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(build_lattice(0, &[], &[]).is_err());
        assert!(build_lattice(5, &[4; 5], &[1.0; 5]).is_err());
        assert!(build_lattice(1, &[3], &[1.0]).is_err());
        assert!(build_lattice(1, &[8], &[0.0]).is_err());
        assert!(build_lattice(2, &[8], &[0.1]).is_err());
    }

    #[test]
    fn index_round_trip_and_neighbors() {
        let l = build_lattice(3, &[4, 5, 6], &[0.1, 0.2, 0.3]).unwrap();
        for site in 0..l.n_sites() {
            assert_eq!(l.index(&l.multi_index(site)), site);
        }
        let site = l.index(&[1, 2, 3]);
        assert_eq!(l.neighbor(site, 1, 1), Some(l.index(&[1, 3, 3])));
        assert_eq!(l.neighbor(l.index(&[0, 0, 0]), 0, -1), None);
        let x = l.coords(site);
        assert!((x[2] - 0.9).abs() < 1e-15);
    }

    #[test]
    fn origin_shifts_coordinates() {
        let l = build_lattice(1, &[4], &[0.5]).unwrap().with_origin(&[-1.0]).unwrap();
        assert_eq!(l.coords(3), vec![0.5]);
    }

    #[test]
    fn sample_linear() {
        let l = build_lattice(1, &[5], &[0.1]).unwrap();
        let grid = l.sample(|x| 0.3 * x[0]);
        let expected = [0.0, 0.03, 0.06, 0.09, 0.12];
        for (g, e) in grid.iter().zip(expected) {
            assert!((g - e).abs() < 1e-15);
        }
    }
}
