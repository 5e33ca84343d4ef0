//! SU(2) and U(1) gauge layer on top of the scaled covariant derivative.
//!
//! The full derivative acting on a two-component field is
//! `(∂_μ + g_a A_μ + i g_b B_μ + g_g Γ_μ + i g_d Δ_μ [+ i g_1 E_μ] + (ig/2) α^j_μ τ_j) ψ`.
//! The scalar terms are multiples of the identity and commute with every
//! gauge transformation; only the `α` fields transform under SU(2).

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bundle_fields::{ConnectionField, Lattice, RealField, ScalingField, VectorSource};
use crate::covariant_derivatives::connection_sum;
use crate::error::{Error, Result};

pub type CMatrix2 = Matrix2<Complex64>;
pub type CVector2 = Vector2<Complex64>;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Tolerance on unitarity of gauge maps.
pub const UNITARITY_TOL: f64 = 1e-12;

/// Tolerance on hermiticity and tracelessness of a transformed gauge field.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// The Pauli matrices `τ_1, τ_2, τ_3`.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliBasis {
    tau: [CMatrix2; 3],
}

impl Default for PauliBasis {
    fn default() -> Self {
        Self::new()
    }
}

impl PauliBasis {
    pub fn new() -> Self {
        let z = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        Self {
            tau: [
                CMatrix2::new(z, one, one, z),
                CMatrix2::new(z, -I, I, z),
                CMatrix2::new(one, z, z, -one),
            ],
        }
    }

    pub fn tau(&self, j: usize) -> &CMatrix2 {
        &self.tau[j]
    }

    /// `α · τ`.
    pub fn combine(&self, alpha: [f64; 3]) -> CMatrix2 {
        self.tau
            .iter()
            .zip(alpha)
            .fold(CMatrix2::zeros(), |acc, (t, a)| acc + t * c(a, 0.0))
    }

    /// Components `½ tr(τ_j M)`.
    pub fn components(&self, m: &CMatrix2) -> [Complex64; 3] {
        let half = c(0.5, 0.0);
        [0, 1, 2].map(|j| (self.tau[j] * m).trace() * half)
    }
}

/// Coupling constants for the four scaling fields and the gauge bosons.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Couplings {
    pub g_a: f64,
    pub g_b: f64,
    pub g_g: f64,
    pub g_d: f64,
    pub g: f64,
    pub g_1: f64,
}

impl Default for Couplings {
    fn default() -> Self {
        Self {
            g_a: 1.0,
            g_b: 1.0,
            g_g: 1.0,
            g_d: 1.0,
            g: 1.0,
            g_1: 1.0,
        }
    }
}

impl Couplings {
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("g_a", self.g_a),
            ("g_b", self.g_b),
            ("g_g", self.g_g),
            ("g_d", self.g_d),
            ("g", self.g),
            ("g_1", self.g_1),
        ];
        for (name, v) in all {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidField(format!("coupling {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut g = || rng.gen_range(0.5..2.0);
        Self {
            g_a: g(),
            g_b: g(),
            g_g: g(),
            g_d: g(),
            g: g(),
            g_1: g(),
        }
    }
}

/// Gauge fields on the lattice: `α^j_μ` and the optional separate `E_μ`.
#[derive(Clone, Debug)]
pub struct GaugeConfig {
    lattice: Lattice,
    // [j][mu][site]
    alpha: [Vec<Vec<f64>>; 3],
    // [mu][site]; complex because the U(1) law can shift it off the real axis
    e: Option<Vec<Vec<Complex64>>>,
    couplings: Couplings,
}

impl GaugeConfig {
    pub fn from_grids(
        lattice: &Lattice,
        alpha: [Vec<Vec<f64>>; 3],
        e: Option<Vec<Vec<Complex64>>>,
        couplings: Couplings,
    ) -> Result<Self> {
        couplings.validate()?;
        let d = lattice.dim();
        let n = lattice.n_sites();
        let shape_ok = |g: &Vec<Vec<f64>>| g.len() == d && g.iter().all(|v| v.len() == n);
        if !alpha.iter().all(shape_ok) {
            return Err(Error::DimensionMismatch { expected: d, found: alpha[0].len() });
        }
        if alpha.iter().flatten().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidField("alpha must be finite".into()));
        }
        if let Some(e) = &e {
            if e.len() != d || e.iter().any(|v| v.len() != n) {
                return Err(Error::DimensionMismatch { expected: d, found: e.len() });
            }
        }
        Ok(Self {
            lattice: lattice.clone(),
            alpha,
            e,
            couplings,
        })
    }

    /// Samples `alpha[j][μ]` and, when given, `e[μ]` from catalog fields.
    pub fn sample(
        lattice: &Lattice,
        alpha: &[Vec<RealField>; 3],
        e: Option<&[RealField]>,
        couplings: Couplings,
    ) -> Result<Self> {
        let grids = |fields: &[RealField]| -> Result<Vec<Vec<f64>>> {
            if fields.len() != lattice.dim() {
                return Err(Error::DimensionMismatch {
                    expected: lattice.dim(),
                    found: fields.len(),
                });
            }
            fields
                .iter()
                .map(|f| {
                    f.validate(lattice.dim())?;
                    Ok(lattice.sample(|x| f.value(x)))
                })
                .collect()
        };
        let alpha = [grids(&alpha[0])?, grids(&alpha[1])?, grids(&alpha[2])?];
        let e = match e {
            Some(fields) => Some(
                grids(fields)?
                    .into_iter()
                    .map(|g| g.into_iter().map(|v| c(v, 0.0)).collect())
                    .collect(),
            ),
            None => None,
        };
        Self::from_grids(lattice, alpha, e, couplings)
    }

    pub fn zero(lattice: &Lattice, couplings: Couplings) -> Result<Self> {
        let z = vec![vec![0.0; lattice.n_sites()]; lattice.dim()];
        Self::from_grids(lattice, [z.clone(), z.clone(), z], None, couplings)
    }

    pub fn with_couplings(mut self, couplings: Couplings) -> Result<Self> {
        couplings.validate()?;
        self.couplings = couplings;
        Ok(self)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn couplings(&self) -> &Couplings {
        &self.couplings
    }

    pub fn has_e(&self) -> bool {
        self.e.is_some()
    }

    pub fn alpha(&self, site: usize, mu: usize) -> [f64; 3] {
        [0, 1, 2].map(|j| self.alpha[j][mu][site])
    }

    pub fn e(&self, site: usize, mu: usize) -> Option<Complex64> {
        self.e.as_ref().map(|e| e[mu][site])
    }

    /// All `α` fields replaced by their SU(2) transforms under `map`.
    pub fn transformed_su2(&self, map: &dyn GaugeMap) -> Result<Self> {
        let mut out = self.clone();
        for site in 0..self.lattice.n_sites() {
            let x = self.lattice.coords(site);
            let u = map.value(&x);
            for mu in 0..self.lattice.dim() {
                let a = su2_transform(self.alpha(site, mu), &u, &map.grad(&x, mu), self.couplings.g)?;
                for (j, aj) in a.into_iter().enumerate() {
                    out.alpha[j][mu][site] = aj;
                }
            }
        }
        Ok(out)
    }

    /// The `E` field replaced by its U(1) transform under `map`.
    pub fn transformed_u1(&self, map: &U1Map) -> Result<Self> {
        let Some(e) = &self.e else {
            return Err(Error::InvalidField("configuration has no E field".into()));
        };
        let mut out_e = e.clone();
        for site in 0..self.lattice.n_sites() {
            let x = self.lattice.coords(site);
            for (mu, row) in out_e.iter_mut().enumerate() {
                row[site] = u1_transform(e[mu][site], map.value(&x), map.grad(&x, mu), self.couplings.g_1)?;
            }
        }
        Ok(Self {
            e: Some(out_e),
            ..self.clone()
        })
    }
}

/// A gauge transformation with exact derivatives.
pub trait GaugeMap: Sync {
    fn value(&self, x: &[f64]) -> CMatrix2;
    fn grad(&self, x: &[f64], mu: usize) -> CMatrix2;
}

fn unit_axis(axis: [f64; 3]) -> Result<[f64; 3]> {
    let n = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
    if !(n.is_finite() && n > 0.0) {
        return Err(Error::InvalidField("rotation axis must be nonzero".into()));
    }
    Ok(axis.map(|a| a / n))
}

/// Analytic SU(2) maps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum Su2Map {
    Identity,
    /// `exp(iθ n·τ)` with constant `θ`.
    Constant { angle: f64, axis: [f64; 3] },
    /// `exp(iθ(x) n·τ)` about a fixed axis.
    Rotation { angle: RealField, axis: [f64; 3] },
    /// Pointwise product `L(x)R(x)`.
    Product { left: Box<Su2Map>, right: Box<Su2Map> },
}

impl Su2Map {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::Constant { .. } => "constant",
            Self::Rotation { .. } => "rotation",
            Self::Product { .. } => "product",
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            Self::Identity => Ok(()),
            Self::Constant { angle, axis } => {
                unit_axis(*axis)?;
                if !angle.is_finite() {
                    return Err(Error::InvalidField("angle must be finite".into()));
                }
                Ok(())
            }
            Self::Rotation { angle, axis } => {
                unit_axis(*axis)?;
                angle.validate(dim)
            }
            Self::Product { left, right } => {
                left.validate(dim)?;
                right.validate(dim)
            }
        }
    }

    /// The fixed catalog used by the covariance checks.
    pub fn catalog(dim: usize) -> Vec<(String, Su2Map)> {
        let lin = |k: f64| {
            let mut coeffs = vec![0.0; dim];
            coeffs[0] = k;
            RealField::Linear { coeffs, offset: 0.0 }
        };
        let gauss = RealField::Gaussian {
            amp: 1.3,
            center: vec![0.1; dim],
            sigma: 0.8,
        };
        let wave = RealField::Wave {
            amp: 0.9,
            k: (0..dim).map(|m| 1.1 - 0.4 * m as f64).collect(),
            phase: 0.2,
        };
        let axis3 = Self::Rotation { angle: lin(0.5), axis: [0.0, 0.0, 1.0] };
        let gauss_axis1 = Self::Rotation { angle: gauss, axis: [1.0, 0.0, 0.0] };
        let wave_tilted = Self::Rotation { angle: wave, axis: [0.3, -0.5, 0.8] };
        vec![
            ("identity".into(), Self::Identity),
            ("constant".into(), Self::Constant { angle: 0.7, axis: [0.2, 0.9, -0.4] }),
            ("axis3_linear".into(), axis3),
            ("axis1_gaussian".into(), gauss_axis1.clone()),
            ("tilted_wave".into(), wave_tilted.clone()),
            (
                "product".into(),
                Self::Product {
                    left: Box::new(gauss_axis1),
                    right: Box::new(wave_tilted),
                },
            ),
        ]
    }

    fn rotation(theta: f64, axis: [f64; 3]) -> (CMatrix2, CMatrix2) {
        let n = unit_axis(axis).expect("validated axis");
        let ntau = PauliBasis::new().combine(n);
        let (s, co) = theta.sin_cos();
        let value = CMatrix2::identity() * c(co, 0.0) + ntau * c(0.0, s);
        // d/dθ
        let deriv = CMatrix2::identity() * c(-s, 0.0) + ntau * c(0.0, co);
        (value, deriv)
    }
}

impl GaugeMap for Su2Map {
    fn value(&self, x: &[f64]) -> CMatrix2 {
        match self {
            Self::Identity => CMatrix2::identity(),
            Self::Constant { angle, axis } => Self::rotation(*angle, *axis).0,
            Self::Rotation { angle, axis } => Self::rotation(angle.value(x), *axis).0,
            Self::Product { left, right } => left.value(x) * right.value(x),
        }
    }

    fn grad(&self, x: &[f64], mu: usize) -> CMatrix2 {
        match self {
            Self::Identity | Self::Constant { .. } => CMatrix2::zeros(),
            Self::Rotation { angle, axis } => {
                Self::rotation(angle.value(x), *axis).1 * c(angle.grad(x, mu), 0.0)
            }
            Self::Product { left, right } => {
                left.grad(x, mu) * right.value(x) + left.value(x) * right.grad(x, mu)
            }
        }
    }
}

/// U(1) map `exp(iθ(x))`, or its conjugate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct U1Map {
    pub theta: RealField,
    #[serde(default)]
    pub conjugate: bool,
}

impl U1Map {
    pub fn new(theta: RealField) -> Self {
        Self { theta, conjugate: false }
    }

    /// `U†`.
    pub fn dagger(&self) -> Self {
        Self {
            theta: self.theta.clone(),
            conjugate: !self.conjugate,
        }
    }

    fn sign(&self) -> f64 {
        if self.conjugate {
            -1.0
        } else {
            1.0
        }
    }

    pub fn value(&self, x: &[f64]) -> Complex64 {
        Complex64::from_polar(1.0, self.sign() * self.theta.value(x))
    }

    pub fn grad(&self, x: &[f64], mu: usize) -> Complex64 {
        c(0.0, self.sign() * self.theta.grad(x, mu)) * self.value(x)
    }
}

/// `E' = U† E U + (1/g) U† ∂_μ U` for a unit-modulus `U`.
pub fn u1_transform(e: Complex64, u: Complex64, du: Complex64, g: f64) -> Result<Complex64> {
    let dev = (u.norm() - 1.0).abs();
    if !(dev <= UNITARITY_TOL) {
        return Err(Error::NotUnitary(dev));
    }
    Ok(u.conj() * e * u + u.conj() * du / g)
}

fn unitarity_deviation(u: &CMatrix2) -> f64 {
    (u * u.adjoint() - CMatrix2::identity()).norm()
}

/// SU(2) transform of `α_μ` at one site.
///
/// Forms `M = U(α·τ)U† + (2i/g)(∂_μU)U†`, checks that `M` is hermitian and
/// traceless, and returns `α'_j = ½ tr(τ_j M)`.
pub fn su2_transform(alpha: [f64; 3], u: &CMatrix2, du: &CMatrix2, g: f64) -> Result<[f64; 3]> {
    let dev = unitarity_deviation(u).max((u.determinant() - c(1.0, 0.0)).norm());
    if !(dev <= UNITARITY_TOL) {
        return Err(Error::NotUnitary(dev));
    }
    let pauli = PauliBasis::new();
    let m = u * pauli.combine(alpha) * u.adjoint() + du * u.adjoint() * c(0.0, 2.0 / g);
    let herm = (m - m.adjoint()).norm();
    let trace = m.trace().norm();
    let bad = herm.max(trace);
    if !(bad <= HERMITICITY_TOL) {
        return Err(Error::GaugeInconsistency(bad));
    }
    Ok(pauli.components(&m).map(|z| z.re))
}

fn to_vec2(v: &[Complex64]) -> Result<CVector2> {
    if v.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: v.len() });
    }
    Ok(CVector2::new(v[0], v[1]))
}

/// Scalar (identity-proportional) part of the full derivative at a site.
pub fn scalar_coupling_term(
    sf: &ScalingField,
    cf: &ConnectionField,
    gc: &GaugeConfig,
    site: usize,
    mu: usize,
) -> Result<Complex64> {
    if sf.lattice() != gc.lattice() {
        return Err(Error::LatticeMismatch);
    }
    // validates lattice, kind and interior site
    connection_sum(sf, cf, site, mu)?;
    let k = gc.couplings;
    let gamma_delta = sf.log_gradient(site, mu)?;
    let mut term = c(k.g_a * cf.a(mu, site), k.g_b * cf.b(mu, site))
        + c(k.g_g * gamma_delta.re, k.g_d * gamma_delta.im);
    if let Some(e) = gc.e(site, mu) {
        term += I * k.g_1 * e;
    }
    Ok(term)
}

/// `∂ψ + sψ + (ig/2)(α·τ)ψ`.
fn apply_covariant(psi: CVector2, dpsi: CVector2, scalar: Complex64, alpha: [f64; 3], g: f64) -> CVector2 {
    let gauge = PauliBasis::new().combine(alpha) * c(0.0, g / 2.0);
    dpsi + psi * scalar + gauge * psi
}

/// The full covariant derivative of a two-component field at `site`.
pub fn full_covariant_derivative(
    psi: &dyn VectorSource,
    sf: &ScalingField,
    cf: &ConnectionField,
    gc: &GaugeConfig,
    site: usize,
    mu: usize,
) -> Result<CVector2> {
    let scalar = scalar_coupling_term(sf, cf, gc, site, mu)?;
    let x = sf.lattice().coords(site);
    Ok(apply_covariant(
        to_vec2(&psi.value(&x))?,
        to_vec2(&psi.grad(&x, mu))?,
        scalar,
        gc.alpha(site, mu),
        gc.couplings.g,
    ))
}

/// The field `ψ' = Uψ`, differentiated with the product rule.
pub struct GaugeTransformed<'a> {
    pub map: &'a dyn GaugeMap,
    pub psi: &'a dyn VectorSource,
}

impl VectorSource for GaugeTransformed<'_> {
    fn len(&self) -> usize {
        2
    }

    fn value(&self, x: &[f64]) -> Vec<Complex64> {
        let psi = to_vec2(&self.psi.value(x)).expect("two-component field");
        let v = self.map.value(x) * psi;
        vec![v[0], v[1]]
    }

    fn grad(&self, x: &[f64], mu: usize) -> Vec<Complex64> {
        let psi = to_vec2(&self.psi.value(x)).expect("two-component field");
        let dpsi = to_vec2(&self.psi.grad(x, mu)).expect("two-component field");
        let v = self.map.grad(x, mu) * psi + self.map.value(x) * dpsi;
        vec![v[0], v[1]]
    }
}

/// `‖D'_μψ' − U D_μψ‖` at `site`, with `α'` from [`su2_transform`] and the
/// scaling connections held fixed.
pub fn covariance_residual(
    psi: &dyn VectorSource,
    sf: &ScalingField,
    cf: &ConnectionField,
    gc: &GaugeConfig,
    map: &dyn GaugeMap,
    site: usize,
    mu: usize,
) -> Result<f64> {
    let original = full_covariant_derivative(psi, sf, cf, gc, site, mu)?;
    let x = sf.lattice().coords(site);
    let u = map.value(&x);
    let alpha_t = su2_transform(gc.alpha(site, mu), &u, &map.grad(&x, mu), gc.couplings.g)?;
    let moved = GaugeTransformed { map, psi };
    let transformed = apply_covariant(
        to_vec2(&moved.value(&x))?,
        to_vec2(&moved.grad(&x, mu))?,
        scalar_coupling_term(sf, cf, gc, site, mu)?,
        alpha_t,
        gc.couplings.g,
    );
    Ok((transformed - u * original).norm())
}

/// The standard form `(∂_μ + i g_1 E_μ + (ig/2) α^j_μ τ_j) ψ`, written out
/// component by component.
pub fn standard_covariant_derivative(
    psi: &dyn VectorSource,
    gc: &GaugeConfig,
    site: usize,
    mu: usize,
) -> Result<CVector2> {
    gc.lattice.require_interior(site)?;
    gc.lattice.check_direction(mu)?;
    let x = gc.lattice.coords(site);
    let p = to_vec2(&psi.value(&x))?;
    let dp = to_vec2(&psi.grad(&x, mu))?;
    let [a1, a2, a3] = gc.alpha(site, mu);
    let k = gc.couplings;
    let em = gc.e(site, mu).map_or(c(0.0, 0.0), |e| I * k.g_1 * e);
    let half_g = I * (k.g / 2.0);
    // α·τ = [[α3, α1 − iα2], [α1 + iα2, −α3]]
    let top = dp[0] + em * p[0] + half_g * (c(a3, 0.0) * p[0] + c(a1, -a2) * p[1]);
    let bottom = dp[1] + em * p[1] + half_g * (c(a1, a2) * p[0] - c(a3, 0.0) * p[1]);
    Ok(CVector2::new(top, bottom))
}

/// Largest gap between the full and the standard derivative at a site, for
/// a configuration with `f ≡ 1` and `A = B = 0`.
pub fn reduce_to_standard(
    psi: &dyn VectorSource,
    sf: &ScalingField,
    cf: &ConnectionField,
    gc: &GaugeConfig,
    site: usize,
    mu: usize,
) -> Result<f64> {
    let trivial_level = sf.is_constant() && sf.level(0) == c(1.0, 0.0);
    if !trivial_level || !cf.is_zero() {
        return Err(Error::InvalidField(
            "reduction requires f = 1 and A = B = 0 everywhere".into(),
        ));
    }
    let full = full_covariant_derivative(psi, sf, cf, gc, site, mu)?;
    let standard = standard_covariant_derivative(psi, gc, site, mu)?;
    Ok((0..2).map(|i| (full[i] - standard[i]).norm()).fold(0.0, f64::max))
}
