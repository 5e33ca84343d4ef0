//! Lattice model of the bundle: fiber levels assigned by a scaling field,
//! connection fields between neighbouring sites, and structure-valued
//! sections.

mod catalog;
mod lattice;

pub use catalog::{
    ComplexField, RealField, ScalarSource, VectorField, VectorSource, COMPLEX_FIELD_NAMES,
    REAL_FIELD_NAMES,
};
pub use lattice::{build_lattice, Lattice, MAX_DIM, MIN_SIZE};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scaled_scalars::{Kind, RelStructure};
use crate::tol::bits_eq;

/// Pointwise evaluation of an analytic field on the lattice sites.
pub fn sample_field<T>(lattice: &Lattice, field: impl Fn(&[f64]) -> T) -> Vec<T> {
    lattice.sample(field)
}

/// The scaling field `f = exp(γ + iφ)` assigning a fiber level to each site.
///
/// When built from catalog fields the exact gradients of `γ` and `φ` are
/// kept; otherwise log-gradients fall back to central differences.
#[derive(Clone, Debug)]
pub struct ScalingField {
    lattice: Lattice,
    gamma: Vec<f64>,
    phi: Vec<f64>,
    // [mu][site]
    exact_grad: Option<(Vec<Vec<f64>>, Vec<Vec<f64>>)>,
    kind: Kind,
}

impl ScalingField {
    pub fn from_grids(lattice: &Lattice, gamma: Vec<f64>, phi: Vec<f64>, kind: Kind) -> Result<Self> {
        for grid in [&gamma, &phi] {
            if grid.len() != lattice.n_sites() {
                return Err(Error::DimensionMismatch {
                    expected: lattice.n_sites(),
                    found: grid.len(),
                });
            }
            if grid.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidField("scaling field must be finite".into()));
            }
        }
        if kind == Kind::Real && phi.iter().any(|&p| p != 0.0) {
            return Err(Error::InvalidField("real-kind scaling fields need phi = 0".into()));
        }
        Ok(Self {
            lattice: lattice.clone(),
            gamma,
            phi,
            exact_grad: None,
            kind,
        })
    }

    /// Samples catalog fields and keeps their exact gradients.
    pub fn sample(lattice: &Lattice, gamma: &RealField, phi: &RealField, kind: Kind) -> Result<Self> {
        gamma.validate(lattice.dim())?;
        phi.validate(lattice.dim())?;
        let mut sf = Self::from_grids(
            lattice,
            lattice.sample(|x| gamma.value(x)),
            lattice.sample(|x| phi.value(x)),
            kind,
        )?;
        let grads = |f: &RealField| -> Vec<Vec<f64>> {
            (0..lattice.dim())
                .map(|mu| lattice.sample(|x| f.grad(x, mu)))
                .collect()
        };
        sf.exact_grad = Some((grads(gamma), grads(phi)));
        Ok(sf)
    }

    /// `f ≡ 1`.
    pub fn unit(lattice: &Lattice, kind: Kind) -> Self {
        Self::sample(lattice, &RealField::zero(), &RealField::zero(), kind)
            .expect("zero fields are valid")
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn has_exact_gradients(&self) -> bool {
        self.exact_grad.is_some()
    }

    /// `f(x) = exp(γ(x) + iφ(x))`.
    pub fn level(&self, site: usize) -> Complex64 {
        Complex64::new(self.gamma[site], self.phi[site]).exp()
    }

    /// `Γ_μ + iΔ_μ = ∂_μ f / f` at `site`.
    pub fn log_gradient(&self, site: usize, mu: usize) -> Result<Complex64> {
        self.lattice.check_site(site)?;
        self.lattice.check_direction(mu)?;
        if let Some((dg, dp)) = &self.exact_grad {
            return Ok(Complex64::new(dg[mu][site], dp[mu][site]));
        }
        let (Some(up), Some(down)) = (
            self.lattice.neighbor(site, mu, 1),
            self.lattice.neighbor(site, mu, -1),
        ) else {
            return Err(Error::NotInterior { site });
        };
        let two_h = 2.0 * self.lattice.spacing(mu);
        Ok(Complex64::new(
            (self.gamma[up] - self.gamma[down]) / two_h,
            (self.phi[up] - self.phi[down]) / two_h,
        ))
    }

    /// Γ (real part) or Δ (imaginary part) along every direction, as grids.
    pub fn log_gradient_grids(&self) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
        let d = self.lattice.dim();
        let n = self.lattice.n_sites();
        let mut gam = vec![vec![0.0; n]; d];
        let mut del = vec![vec![0.0; n]; d];
        for mu in 0..d {
            for site in 0..n {
                let sites_ok = self.exact_grad.is_some() || self.lattice.is_interior(site);
                if sites_ok {
                    let g = self.log_gradient(site, mu)?;
                    gam[mu][site] = g.re;
                    del[mu][site] = g.im;
                }
            }
        }
        Ok((gam, del))
    }

    pub fn is_constant(&self) -> bool {
        let first = (self.gamma[0], self.phi[0]);
        self.gamma.iter().zip(&self.phi).all(|(&g, &p)| (g, p) == first)
    }
}

/// Connection fields `A_μ`, `B_μ`; the transport factor between `x` and its
/// neighbour along `μ` is `exp((A_μ + iB_μ)·h)`.
#[derive(Clone, Debug)]
pub struct ConnectionField {
    lattice: Lattice,
    a: Vec<Vec<f64>>,
    b: Vec<Vec<f64>>,
    kind: Kind,
}

impl ConnectionField {
    pub fn from_grids(lattice: &Lattice, a: Vec<Vec<f64>>, b: Vec<Vec<f64>>, kind: Kind) -> Result<Self> {
        for grids in [&a, &b] {
            if grids.len() != lattice.dim() {
                return Err(Error::DimensionMismatch {
                    expected: lattice.dim(),
                    found: grids.len(),
                });
            }
            for g in grids {
                if g.len() != lattice.n_sites() {
                    return Err(Error::DimensionMismatch {
                        expected: lattice.n_sites(),
                        found: g.len(),
                    });
                }
                if g.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidField("connection field must be finite".into()));
                }
            }
        }
        if kind == Kind::Real && b.iter().flatten().any(|&v| v != 0.0) {
            return Err(Error::InvalidField("real-kind connections need B = 0".into()));
        }
        Ok(Self {
            lattice: lattice.clone(),
            a,
            b,
            kind,
        })
    }

    /// Samples one catalog field per direction for each of `A` and `B`.
    pub fn sample(lattice: &Lattice, a: &[RealField], b: &[RealField], kind: Kind) -> Result<Self> {
        let grids = |fields: &[RealField]| -> Result<Vec<Vec<f64>>> {
            fields
                .iter()
                .map(|f| {
                    f.validate(lattice.dim())?;
                    Ok(lattice.sample(|x| f.value(x)))
                })
                .collect()
        };
        Self::from_grids(lattice, grids(a)?, grids(b)?, kind)
    }

    pub fn zero(lattice: &Lattice, kind: Kind) -> Self {
        let z = vec![vec![0.0; lattice.n_sites()]; lattice.dim()];
        Self {
            lattice: lattice.clone(),
            a: z.clone(),
            b: z,
            kind,
        }
    }

    /// Constant `A_μ = a[μ]`, `B_μ = b[μ]` everywhere.
    pub fn constant(lattice: &Lattice, a: &[f64], b: &[f64], kind: Kind) -> Result<Self> {
        let fill = |v: &[f64]| v.iter().map(|&c| vec![c; lattice.n_sites()]).collect();
        Self::from_grids(lattice, fill(a), fill(b), kind)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().chain(&self.b).flatten().all(|&v| v == 0.0)
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self, mu: usize, site: usize) -> f64 {
        self.a[mu][site]
    }

    pub fn b(&self, mu: usize, site: usize) -> f64 {
        self.b[mu][site]
    }

    /// `A_μ(x) + iB_μ(x)`.
    pub fn coefficient(&self, mu: usize, site: usize) -> Complex64 {
        Complex64::new(self.a[mu][site], self.b[mu][site])
    }

    pub fn a_grids(&self) -> &[Vec<f64>] {
        &self.a
    }

    pub fn b_grids(&self) -> &[Vec<f64>] {
        &self.b
    }
}

/// A scalar-structure valued section: the structure at level `f(x)` in the
/// fiber over each site, referenced to itself.
#[derive(Clone, Debug, PartialEq)]
pub struct Section {
    levels: Vec<Complex64>,
    kind: Kind,
}

impl Section {
    pub fn from_scaling(sf: &ScalingField) -> Self {
        Self {
            levels: (0..sf.lattice().n_sites()).map(|s| sf.level(s)).collect(),
            kind: sf.kind(),
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn n_sites(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Complex64] {
        &self.levels
    }

    pub fn level_of(&self, site: usize) -> Complex64 {
        self.levels[site]
    }

    /// `S^{f(x)}_{f(x)}` at `site`.
    pub fn value(&self, site: usize) -> Result<RelStructure> {
        let f = self.levels[site];
        RelStructure::new(f, f, self.kind)
    }

    /// True when both sections sit at bitwise identical levels.
    pub fn shares_levels(&self, other: &Section) -> bool {
        self.kind == other.kind
            && self.levels.len() == other.levels.len()
            && self.levels.iter().zip(&other.levels).all(|(a, b)| bits_eq(*a, *b))
    }
}

/// Level of the section at `site`: `f(x)`.
pub fn level_of(sec: &Section, site: usize) -> Complex64 {
    sec.level_of(site)
}

/// Structure-group action: every level is multiplied by `u`.
pub fn group_act(u: Complex64, sec: &Section) -> Result<Section> {
    if u == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroGroupElement);
    }
    if sec.kind == Kind::Real && (u.im != 0.0 || u.re < 0.0) {
        return Err(Error::NotReal { what: "group element", value: u });
    }
    Ok(Section {
        levels: sec.levels.iter().map(|f| f * u).collect(),
        kind: sec.kind,
    })
}

/// The unique group element carrying level `from` to level `to`.
pub fn transition_element(from: Complex64, to: Complex64) -> Result<Complex64> {
    if from == Complex64::new(0.0, 0.0) || to == Complex64::new(0.0, 0.0) {
        return Err(Error::EmptyStructure);
    }
    Ok(to / from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol::close;
    use std::f64::consts::{FRAC_PI_2, LN_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn line() -> Lattice {
        build_lattice(1, &[8], &[0.1]).unwrap()
    }

    #[test]
    fn level_examples() {
        let l = line();
        let sec = Section::from_scaling(&ScalingField::unit(&l, Kind::Complex));
        assert!(sec.levels().iter().all(|&f| f == c(1.0, 0.0)));

        let sf = ScalingField::sample(&l, &RealField::constant(LN_2), &RealField::zero(), Kind::Real)
            .unwrap();
        assert!((0..8).all(|s| close(level_of(&Section::from_scaling(&sf), s), c(2.0, 0.0), 0.0)));

        let sf = ScalingField::sample(
            &l,
            &RealField::zero(),
            &RealField::constant(FRAC_PI_2),
            Kind::Complex,
        )
        .unwrap();
        let f = sf.level(3);
        assert!((f - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn real_kind_rejects_phase_and_b() {
        let l = line();
        assert!(ScalingField::sample(&l, &RealField::zero(), &RealField::constant(0.1), Kind::Real)
            .is_err());
        assert!(ConnectionField::constant(&l, &[0.0], &[0.2], Kind::Real).is_err());
        assert!(ConnectionField::constant(&l, &[0.3], &[0.0], Kind::Real).is_ok());
    }

    #[test]
    fn group_action_examples() {
        let l = line();
        let sf = ScalingField::sample(
            &l,
            &RealField::Linear { coeffs: vec![0.4], offset: 0.0 },
            &RealField::Wave { amp: 0.3, k: vec![2.0], phase: 0.0 },
            Kind::Complex,
        )
        .unwrap();
        let sec = Section::from_scaling(&sf);
        assert_eq!(group_act(c(1.0, 0.0), &sec).unwrap(), sec);

        let u = c(0.3, -1.7);
        let back = group_act(u.inv(), &group_act(u, &sec).unwrap()).unwrap();
        for (a, b) in back.levels().iter().zip(sec.levels()) {
            assert!(close(*a, *b, 0.0));
        }

        let two_step = group_act(c(0.0, 3.0), &group_act(c(2.0, 0.0), &sec).unwrap()).unwrap();
        for (a, b) in two_step.levels().iter().zip(sec.levels()) {
            assert!(close(*a, b * c(0.0, 6.0), 0.0));
        }

        assert_eq!(group_act(c(0.0, 0.0), &sec), Err(Error::ZeroGroupElement));
    }

    #[test]
    fn transition_element_is_unique_and_correct() {
        let (s, s2) = (c(0.5, 2.0), c(-1.0, 0.25));
        let u = transition_element(s, s2).unwrap();
        assert!(close(s * u, s2, 0.0));
    }

    #[test]
    fn section_value_has_sup_f() {
        let l = line();
        let sf = ScalingField::sample(
            &l,
            &RealField::Linear { coeffs: vec![0.3], offset: 0.0 },
            &RealField::zero(),
            Kind::Real,
        )
        .unwrap();
        let sec = Section::from_scaling(&sf);
        for site in 0..l.n_sites() {
            let v = sec.value(site).unwrap();
            assert_eq!(v.sup(), sf.level(site));
            assert_eq!(v.sub(), sf.level(site));
        }
    }

    #[test]
    fn log_gradient_falls_back_to_central_differences() {
        let l = line();
        let gamma = l.sample(|x| 0.3 * x[0]);
        let sf = ScalingField::from_grids(&l, gamma, vec![0.0; 8], Kind::Real).unwrap();
        assert!(!sf.has_exact_gradients());
        let g = sf.log_gradient(4, 0).unwrap();
        assert!((g.re - 0.3).abs() < 1e-13);
        assert_eq!(g.im, 0.0);
        assert_eq!(sf.log_gradient(0, 0), Err(Error::NotInterior { site: 0 }));
    }

    #[test]
    fn constant_detection() {
        let l = line();
        assert!(ScalingField::unit(&l, Kind::Complex).is_constant());
        let sf = ScalingField::sample(
            &l,
            &RealField::Linear { coeffs: vec![0.3], offset: 0.0 },
            &RealField::zero(),
            Kind::Complex,
        )
        .unwrap();
        assert!(!sf.is_constant());
    }
}
