//! Reusable numerical studies: identity sweeps over random levels,
//! discrete-to-continuum convergence, gradient integrability and gauge
//! checks over seeded random configurations.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bundle_fields::{
    build_lattice, ComplexField, ConnectionField, Lattice, RealField, ScalarSource, ScalingField, Section,
    VectorField,
};
use crate::covariant_derivatives::{
    curl_check, d_scalar_continuum, d_scalar_discrete, d_section_pos_continuum, d_section_pos_discrete,
};
use crate::error::{Error, Result};
use crate::gauge::{Couplings, GaugeConfig};
use crate::scaled_scalars::{
    canonical, conjugate_then_scale_mismatch, rel_ops, revaluate, scale_then_multiply_mismatch, w_map,
    BaseNumber, FieldOps, Kind, Level, RelOps, RelStructure, ScaledValue,
};
use crate::tol::{bits_eq, rel_err};

/// Level with `|log f| ≤ max_log`, uniform over the disk in the log plane.
pub fn random_level<R: Rng + ?Sized>(rng: &mut R, kind: Kind, max_log: f64) -> Level {
    match kind {
        Kind::Complex => {
            let r = max_log * rng.gen::<f64>().sqrt();
            let th = rng.gen_range(-PI..PI);
            Level::complex(Complex64::from_polar(r, th).exp()).expect("nonzero level")
        }
        Kind::Real => Level::real(rng.gen_range(-max_log..max_log).exp()).expect("positive level"),
    }
}

/// Complex value with modulus in `[e^-3, e^3]` and uniform phase.
pub fn random_value<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(rng.gen_range(-3.0_f64..3.0).exp(), rng.gen_range(-PI..PI))
}

/// Names of the identities checked by [`axiom_errors`], in order.
pub const AXIOM_IDENTITIES: [&str; 12] = [
    "add_associative",
    "add_commutative",
    "add_identity",
    "add_inverse",
    "mul_associative",
    "mul_commutative",
    "distributive",
    "unit_is_ratio",
    "mul_identity",
    "mul_inverse",
    "conj_multiplicative",
    "homomorphism",
];

/// Relative error of each field identity for one triple of representatives.
pub fn axiom_errors(ops: &RelOps, x: Complex64, y: Complex64, z: Complex64) -> Result<[f64; 12]> {
    let q = ops.factor();
    let qn = q.norm();
    let (nx, ny, nz) = (x.norm(), y.norm(), z.norm());
    let zero = ops.zero();
    let unit = ops.unit();
    let ratio = ops.sup().ratio(&ops.sub());
    let product = ops.value_of(x)?.mul(&ops.value_of(y)?)?;
    Ok([
        rel_err(ops.add(ops.add(x, y), z), ops.add(x, ops.add(y, z)), nx + ny + nz),
        rel_err(ops.add(x, y), ops.add(y, x), nx + ny),
        rel_err(ops.add(x, zero), x, nx),
        rel_err(ops.add(x, ops.neg(x)), zero, nx),
        rel_err(ops.mul(ops.mul(x, y), z), ops.mul(x, ops.mul(y, z)), nx * ny * nz / (qn * qn)),
        rel_err(ops.mul(x, y), ops.mul(y, x), nx * ny / qn),
        rel_err(
            ops.mul(x, ops.add(y, z)),
            ops.add(ops.mul(x, y), ops.mul(x, z)),
            nx * (ny + nz) / qn,
        ),
        rel_err(unit, ratio, qn),
        rel_err(ops.mul(unit, x), x, nx),
        rel_err(ops.mul(x, ops.inv(x)?), unit, qn),
        rel_err(ops.conj(ops.mul(x, y)), ops.mul(ops.conj(x), ops.conj(y)), nx * ny / qn),
        rel_err(ops.value_of(ops.mul(x, y))?.v(), product.v(), nx * ny / (qn * qn)),
    ])
}

/// Worst error per identity over `triples` random triples at one random
/// `(s, t)` pair.
pub fn axiom_case<R: Rng + ?Sized>(rng: &mut R, kind: Kind, triples: usize) -> Result<[f64; 12]> {
    let s = random_level(rng, kind, 3.0);
    let t = random_level(rng, kind, 3.0);
    let ops = rel_ops(s, t)?;
    let mut worst = [0.0_f64; 12];
    for _ in 0..triples {
        let mut draw = || match kind {
            Kind::Complex => random_value(rng),
            Kind::Real => Complex64::new(random_value(rng).re, 0.0),
        };
        let (x, y, z) = (draw(), draw(), draw());
        if x == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (w, e) in worst.iter_mut().zip(axiom_errors(&ops, x, y, z)?) {
            *w = w.max(e);
        }
    }
    Ok(worst)
}

/// Names of the map laws checked by [`map_law_errors`].
pub const MAP_LAWS: [&str; 3] = ["z_transitive", "w_transitive", "w_invertible"];

/// `Z(s,t)∘Z(t,u) = Z(s,u)`, `W(t,u)∘W(s,t) = W(s,u)` and
/// `W(t,s)∘W(s,t) = id` at one random triple of levels.
pub fn map_law_errors<R: Rng + ?Sized>(rng: &mut R) -> Result<[f64; 3]> {
    let s = random_level(rng, Kind::Complex, 3.0);
    let t = random_level(rng, Kind::Complex, 3.0);
    let u = random_level(rng, Kind::Complex, 3.0);
    let a_u = ScaledValue::new(random_value(rng), u)?;
    let b = BaseNumber::new(random_value(rng));

    let direct = revaluate(s, u, &a_u)?;
    let chained = revaluate(s, t, &revaluate(t, u, &a_u)?)?;
    if direct.level() != chained.level() {
        return Err(Error::LevelMismatch {
            expected: direct.level().value(),
            found: chained.level().value(),
        });
    }
    let w_direct = w_map(s, u, b)?.label();
    let w_chained = w_map(t, u, w_map(s, t, b)?)?.label();
    let round_trip = w_map(t, s, w_map(s, t, b)?)?.label();
    Ok([
        rel_err(direct.v(), chained.v(), 0.0),
        rel_err(w_direct, w_chained, 0.0),
        rel_err(round_trip, b.label(), 0.0),
    ])
}

/// Outcome of one relativization-invariance case.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelativizationCase {
    /// `canonical(S^{αt}_{αs})` and `canonical(S^t_s)` have identical bits.
    pub exact: bool,
    /// Relative gap when `S^{αt}_{αs}` is instead rebuilt from rounded
    /// products `αt`, `αs`.
    pub rebuilt_rel_err: f64,
}

pub fn relativization_case<R: Rng + ?Sized>(rng: &mut R) -> Result<RelativizationCase> {
    let alpha = random_level(rng, Kind::Complex, 3.0).value();
    let t = random_value(rng);
    let s = random_level(rng, Kind::Complex, 3.0).value();
    let base = RelStructure::new(t, s, Kind::Complex)?;
    let moved = base.relevel(alpha)?;
    let rebuilt = RelStructure::new(alpha * t, alpha * s, Kind::Complex)?;
    Ok(RelativizationCase {
        exact: bits_eq(canonical(&moved), canonical(&base)),
        rebuilt_rel_err: rel_err(canonical(&rebuilt), canonical(&base), 0.0),
    })
}

/// Outcome of one order-of-operations witness.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WitnessCase {
    /// Relative gap between `scale_first / operate_first` and `t/s`.
    pub ratio_err: f64,
    pub conj_paths_differ: bool,
    pub ratio_is_complex: bool,
}

impl WitnessCase {
    pub fn passes(&self, tol: f64) -> bool {
        self.ratio_err <= tol && self.conj_paths_differ == self.ratio_is_complex
    }
}

/// One multiplication and one conjugation witness. A third of the cases use
/// levels on the real axis, so both branches of the conjugation rule occur.
pub fn witness_case<R: Rng + ?Sized>(rng: &mut R) -> Result<WitnessCase> {
    let (s, t) = if rng.gen_bool(1.0 / 3.0) {
        let sign = |rng: &mut R| if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let s = sign(rng) * rng.gen_range(-3.0_f64..3.0).exp();
        let t = sign(rng) * rng.gen_range(-3.0_f64..3.0).exp();
        (
            Level::complex(Complex64::new(s, 0.0))?,
            Level::complex(Complex64::new(t, 0.0))?,
        )
    } else {
        (
            random_level(rng, Kind::Complex, 3.0),
            random_level(rng, Kind::Complex, 3.0),
        )
    };
    let a = ScaledValue::new(random_value(rng), t)?;
    let b = ScaledValue::new(random_value(rng), t)?;
    let q = t.ratio(&s);
    let (operate_first, scale_first) = scale_then_multiply_mismatch(s, t, &a, &b)?;
    let (conj_first, conj_after) = conjugate_then_scale_mismatch(s, t, &a)?;
    Ok(WitnessCase {
        ratio_err: rel_err(scale_first / operate_first, q, 0.0),
        conj_paths_differ: conj_first != conj_after,
        ratio_is_complex: q.im != 0.0,
    })
}

/// What a convergence case differentiates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum Target {
    /// A scalar field; compares `d_scalar_discrete` with `d_scalar_continuum`.
    Scalar { psi: ComplexField },
    /// The section `x ↦ S^{f(x)}`; compares the canonical ratio of the
    /// discrete position derivative with `A_μ + iB_μ`.
    SectionPosition,
}

/// A configuration for the discrete-to-continuum convergence study.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceCase {
    pub name: String,
    pub point: Vec<f64>,
    pub mu: usize,
    #[serde(default = "complex_kind")]
    pub kind: Kind,
    pub gamma: RealField,
    pub phi: RealField,
    pub a: Vec<RealField>,
    pub b: Vec<RealField>,
    pub target: Target,
}

fn complex_kind() -> Kind {
    Kind::Complex
}

/// Steps used by the convergence study.
pub const CONVERGENCE_STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// Sites per axis of the small lattice built around the evaluation point.
const PATCH: usize = 7;

impl ConvergenceCase {
    pub fn dim(&self) -> usize {
        self.point.len()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim();
        if d == 0 || d > crate::bundle_fields::MAX_DIM {
            return Err(Error::InvalidLattice(format!("point has {d} coordinates")));
        }
        if self.mu >= d {
            return Err(Error::DimensionMismatch { expected: d, found: self.mu + 1 });
        }
        if self.a.len() != d || self.b.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: self.a.len().min(self.b.len()) });
        }
        self.gamma.validate(d)?;
        self.phi.validate(d)?;
        for f in self.a.iter().chain(&self.b) {
            f.validate(d)?;
        }
        if let Target::Scalar { psi } = &self.target {
            psi.validate(d)?;
        }
        Ok(())
    }

    /// `(discrete, continuum)` at step `h`, on a lattice whose centre site
    /// sits exactly on `point`.
    pub fn evaluate(&self, h: f64) -> Result<(Complex64, Complex64)> {
        self.validate()?;
        let d = self.dim();
        let origin: Vec<f64> = self.point.iter().map(|x| x - (PATCH / 2) as f64 * h).collect();
        let lattice = build_lattice(d, &vec![PATCH; d], &vec![h; d])?.with_origin(&origin)?;
        let site = lattice.index(&vec![PATCH / 2; d]);
        let sf = ScalingField::sample(&lattice, &self.gamma, &self.phi, self.kind)?;
        let cf = ConnectionField::sample(&lattice, &self.a, &self.b, self.kind)?;
        match &self.target {
            Target::Scalar { psi } => Ok((
                d_scalar_discrete(psi, &sf, &cf, site, self.mu)?,
                d_scalar_continuum(psi, &sf, &cf, site, self.mu)?.value,
            )),
            Target::SectionPosition => {
                let sec = Section::from_scaling(&sf);
                Ok((
                    canonical(&d_section_pos_discrete(&sec, &cf, site, self.mu, h)?),
                    d_section_pos_continuum(&sec, &cf, site, self.mu)?.value,
                ))
            }
        }
    }
}

/// One row of a convergence report.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub h: f64,
    pub discrete: Complex64,
    pub continuum: Complex64,
    pub abs_error: f64,
}

/// Result of a convergence study on one case.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceResult {
    pub rows: Vec<ConvergenceRow>,
    pub order: f64,
    /// `C` in the through-origin least-squares model `e = C·h`.
    pub linear_coeff: f64,
}

impl ConvergenceResult {
    /// Error at the finest step over the linear-model prediction there.
    pub fn model_ratio(&self) -> f64 {
        let last = self.rows.last().expect("non-empty study");
        last.abs_error / (self.linear_coeff * last.h)
    }

    pub fn passes(&self) -> bool {
        (0.9..=1.1).contains(&self.order) && self.model_ratio() <= 10.0
    }
}

/// Least-squares slope of `log e` against `log h`.
pub fn fit_order(hs: &[f64], errors: &[f64]) -> f64 {
    let n = hs.len() as f64;
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

pub fn convergence_study(case: &ConvergenceCase, steps: &[f64]) -> Result<ConvergenceResult> {
    if steps.len() < 2 {
        return Err(Error::InvalidField("convergence needs at least two steps".into()));
    }
    let rows = steps
        .iter()
        .map(|&h| {
            let (discrete, continuum) = case.evaluate(h)?;
            Ok(ConvergenceRow {
                h,
                discrete,
                continuum,
                abs_error: (discrete - continuum).norm(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let hs: Vec<f64> = rows.iter().map(|r| r.h).collect();
    let es: Vec<f64> = rows.iter().map(|r| r.abs_error).collect();
    let linear_coeff = hs.iter().zip(&es).map(|(h, e)| h * e).sum::<f64>() / hs.iter().map(|h| h * h).sum::<f64>();
    Ok(ConvergenceResult {
        order: fit_order(&hs, &es),
        linear_coeff,
        rows,
    })
}

fn lin(coeffs: &[f64], offset: f64) -> RealField {
    RealField::Linear { coeffs: coeffs.to_vec(), offset }
}

fn konst(v: f64) -> RealField {
    RealField::constant(v)
}

/// The built-in convergence configurations, in one and two dimensions.
pub fn convergence_catalog() -> Vec<ConvergenceCase> {
    vec![
        ConvergenceCase {
            name: "plane_wave_1d".into(),
            point: vec![0.4],
            mu: 0,
            kind: Kind::Complex,
            gamma: lin(&[0.3], 0.0),
            phi: RealField::zero(),
            a: vec![konst(0.1)],
            b: vec![konst(0.2)],
            target: Target::Scalar {
                psi: ComplexField::PlaneWave { amp: 1.0, k: vec![2.0] },
            },
        },
        ConvergenceCase {
            name: "gaussian_level_1d".into(),
            point: vec![-0.3],
            mu: 0,
            kind: Kind::Complex,
            gamma: RealField::Gaussian { amp: 0.8, center: vec![0.1], sigma: 0.6 },
            phi: RealField::Wave { amp: 0.5, k: vec![1.5], phase: 0.3 },
            a: vec![lin(&[0.4], -0.1)],
            b: vec![RealField::Wave { amp: 0.3, k: vec![2.0], phase: 0.0 }],
            target: Target::Scalar {
                psi: ComplexField::Parts {
                    re: RealField::Gaussian { amp: 1.0, center: vec![0.0], sigma: 0.7 },
                    im: lin(&[0.5], 0.2),
                },
            },
        },
        ConvergenceCase {
            name: "real_kind_1d".into(),
            point: vec![0.7],
            mu: 0,
            kind: Kind::Real,
            gamma: RealField::Quadratic { diag: vec![0.6], cross: 0.0 },
            phi: RealField::zero(),
            a: vec![RealField::Wave { amp: 0.4, k: vec![1.0], phase: 0.5 }],
            b: vec![RealField::zero()],
            target: Target::Scalar {
                psi: ComplexField::Exp {
                    re: RealField::Wave { amp: 0.5, k: vec![1.3], phase: 0.0 },
                    im: RealField::zero(),
                },
            },
        },
        ConvergenceCase {
            name: "section_constant_connection_1d".into(),
            point: vec![0.0],
            mu: 0,
            kind: Kind::Complex,
            gamma: lin(&[-0.2], 0.0),
            phi: lin(&[0.7], 0.0),
            a: vec![konst(0.4)],
            b: vec![konst(-0.3)],
            target: Target::SectionPosition,
        },
        ConvergenceCase {
            name: "plane_wave_2d_x".into(),
            point: vec![0.2, -0.1],
            mu: 0,
            kind: Kind::Complex,
            gamma: RealField::Gaussian { amp: 0.5, center: vec![0.0, 0.3], sigma: 0.8 },
            phi: RealField::Quadratic { diag: vec![0.3, -0.2], cross: 0.4 },
            a: vec![lin(&[0.2, 0.1], 0.05), konst(-0.1)],
            b: vec![RealField::Wave { amp: 0.3, k: vec![1.0, 0.5], phase: 0.2 }, konst(0.25)],
            target: Target::Scalar {
                psi: ComplexField::PlaneWave { amp: 0.8, k: vec![1.5, -0.7] },
            },
        },
        ConvergenceCase {
            name: "plane_wave_2d_y".into(),
            point: vec![0.2, -0.1],
            mu: 1,
            kind: Kind::Complex,
            gamma: RealField::Gaussian { amp: 0.5, center: vec![0.0, 0.3], sigma: 0.8 },
            phi: RealField::Quadratic { diag: vec![0.3, -0.2], cross: 0.4 },
            a: vec![konst(0.15), lin(&[-0.3, 0.2], 0.1)],
            b: vec![konst(0.0), RealField::Gaussian { amp: 0.4, center: vec![0.2, 0.0], sigma: 0.5 }],
            target: Target::Scalar {
                psi: ComplexField::PlaneWave { amp: 0.8, k: vec![1.5, -0.7] },
            },
        },
        ConvergenceCase {
            name: "section_wave_connection_2d".into(),
            point: vec![-0.25, 0.35],
            mu: 1,
            kind: Kind::Complex,
            gamma: RealField::Wave { amp: 0.4, k: vec![0.8, 1.2], phase: 0.0 },
            phi: lin(&[0.1, -0.3], 0.0),
            a: vec![konst(0.0), RealField::Wave { amp: 0.6, k: vec![1.0, 2.0], phase: 0.4 }],
            b: vec![konst(0.0), RealField::Gaussian { amp: 0.5, center: vec![0.0, 0.0], sigma: 0.9 }],
            target: Target::SectionPosition,
        },
        ConvergenceCase {
            name: "complex_parts_2d".into(),
            point: vec![0.5, 0.5],
            mu: 0,
            kind: Kind::Complex,
            gamma: RealField::zero(),
            phi: RealField::Wave { amp: 0.7, k: vec![2.0, -1.0], phase: 1.0 },
            a: vec![konst(-0.2), konst(0.3)],
            b: vec![lin(&[0.0, 0.4], 0.1), konst(0.0)],
            target: Target::Scalar {
                psi: ComplexField::Parts {
                    re: RealField::Wave { amp: 1.0, k: vec![0.5, 1.5], phase: 0.0 },
                    im: RealField::Gaussian { amp: 0.6, center: vec![0.3, 0.6], sigma: 0.5 },
                },
            },
        },
    ]
}

/// A scaling-field pair for the integrability study.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurlCase {
    pub name: String,
    pub gamma: RealField,
    pub phi: RealField,
}

/// Side length and spacing of the integrability lattice.
pub const CURL_SIZE: usize = 64;
pub const CURL_SPACING: f64 = 0.05;

/// Outcome of the integrability study for one case.
#[derive(Clone, Debug, PartialEq)]
pub struct CurlResult {
    pub max_curl_gamma: f64,
    pub max_curl_delta: f64,
    pub bound_gamma: f64,
    pub bound_delta: f64,
}

impl CurlResult {
    pub fn passes(&self) -> bool {
        self.max_curl_gamma <= self.bound_gamma && self.max_curl_delta <= self.bound_delta
    }
}

/// The square lattice used by the integrability study, centred on the origin.
pub fn curl_lattice(size: usize, h: f64) -> Result<Lattice> {
    let half = (size - 1) as f64 * h / 2.0;
    build_lattice(2, &[size, size], &[h, h])?.with_origin(&[-half, -half])
}

fn max_curl(lattice: &Lattice, v: &[Vec<f64>]) -> Result<(f64, f64)> {
    let mut worst: f64 = 0.0;
    for site in lattice.interior_sites() {
        worst = worst.max(curl_check(lattice, v, site, 0, 1)?.abs());
    }
    let vmax = v.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()));
    Ok((worst, vmax))
}

/// Largest `|curl Γ|`, `|curl Δ|` over interior sites, with the allowance
/// `5h²·M + 8ε·max|v|/h`. `M` bounds the third derivatives of the gradient
/// field and the second term is the rounding floor of the central
/// difference.
pub fn curl_study(case: &CurlCase, size: usize, h: f64) -> Result<CurlResult> {
    let lattice = curl_lattice(size, h)?;
    let sf = ScalingField::sample(&lattice, &case.gamma, &case.phi, Kind::Complex)?;
    let (gam, del) = sf.log_gradient_grids()?;
    let (cg, vg) = max_curl(&lattice, &gam)?;
    let (cd, vd) = max_curl(&lattice, &del)?;
    let allowance = |m: f64, vmax: f64| 5.0 * h * h * m + 8.0 * f64::EPSILON * vmax / h;
    Ok(CurlResult {
        max_curl_gamma: cg,
        max_curl_delta: cd,
        bound_gamma: allowance(case.gamma.fourth_derivative_bound(), vg),
        bound_delta: allowance(case.phi.fourth_derivative_bound(), vd),
    })
}

/// Scaling fields covering every real catalog entry.
pub fn curl_catalog() -> Vec<CurlCase> {
    vec![
        CurlCase {
            name: "constant_linear".into(),
            gamma: konst(0.3),
            phi: lin(&[0.5, -0.2], 0.1),
        },
        CurlCase {
            name: "quadratic_cross".into(),
            gamma: RealField::Quadratic { diag: vec![0.4, -0.3], cross: 0.7 },
            phi: RealField::Quadratic { diag: vec![-0.1, 0.2], cross: -0.5 },
        },
        CurlCase {
            name: "gaussian_wave".into(),
            gamma: RealField::Gaussian { amp: 0.9, center: vec![0.2, -0.3], sigma: 0.5 },
            phi: RealField::Wave { amp: 0.6, k: vec![1.5, -2.5], phase: 0.4 },
        },
        CurlCase {
            name: "narrow_gaussian".into(),
            gamma: RealField::Gaussian { amp: -1.2, center: vec![0.0, 0.0], sigma: 0.25 },
            phi: RealField::Gaussian { amp: 0.5, center: vec![-0.4, 0.6], sigma: 0.35 },
        },
        CurlCase {
            name: "short_waves".into(),
            gamma: RealField::Wave { amp: 0.3, k: vec![4.0, 3.0], phase: 0.0 },
            phi: RealField::Wave { amp: 0.8, k: vec![-2.0, 5.0], phase: 1.1 },
        },
    ]
}

/// `B = (−y, x)` sampled on `lattice`; its curl is 2 everywhere.
pub fn rotational_field(lattice: &Lattice) -> Vec<Vec<f64>> {
    vec![lattice.sample(|x| -x[1]), lattice.sample(|x| x[0])]
}

/// A random configuration for the gauge checks: two-component field,
/// scaling field, connections and gauge fields, all smooth catalog entries.
pub struct GaugeSetup {
    pub psi: VectorField,
    pub scaling: ScalingField,
    pub connection: ConnectionField,
    pub gauge: GaugeConfig,
}

fn random_fields<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<RealField> {
    (0..dim).map(|_| RealField::random(rng, dim)).collect()
}

fn random_gauge_fields<R: Rng + ?Sized>(
    rng: &mut R,
    lattice: &Lattice,
    with_e: bool,
) -> Result<GaugeConfig> {
    let d = lattice.dim();
    let alpha = [random_fields(rng, d), random_fields(rng, d), random_fields(rng, d)];
    let e = with_e.then(|| random_fields(rng, d));
    GaugeConfig::sample(lattice, &alpha, e.as_deref(), Couplings::random(rng))
}

/// Fully random setup with nontrivial scaling and connection fields.
pub fn random_gauge_setup<R: Rng + ?Sized>(rng: &mut R, lattice: &Lattice) -> Result<GaugeSetup> {
    let d = lattice.dim();
    let psi = VectorField::random(rng, d, 2);
    let scaling = ScalingField::sample(
        lattice,
        &RealField::random(rng, d),
        &RealField::random(rng, d),
        Kind::Complex,
    )?;
    let connection = ConnectionField::sample(lattice, &random_fields(rng, d), &random_fields(rng, d), Kind::Complex)?;
    let with_e = rng.gen_bool(0.5);
    let gauge = random_gauge_fields(rng, lattice, with_e)?;
    Ok(GaugeSetup { psi, scaling, connection, gauge })
}

/// Random setup with `f ≡ 1` and `A = B = 0`, for the reduction check.
pub fn random_reduction_setup<R: Rng + ?Sized>(rng: &mut R, lattice: &Lattice) -> Result<GaugeSetup> {
    let d = lattice.dim();
    let psi = VectorField::random(rng, d, 2);
    let with_e = rng.gen_bool(0.5);
    let gauge = random_gauge_fields(rng, lattice, with_e)?;
    Ok(GaugeSetup {
        psi,
        scaling: ScalingField::unit(lattice, Kind::Complex),
        connection: ConnectionField::zero(lattice, Kind::Complex),
        gauge,
    })
}

/// Plain derivative check used by the scale demo: the value of a catalog
/// scalar and its continuum covariant derivative at a site.
pub fn scalar_probe(
    psi: &dyn ScalarSource,
    sf: &ScalingField,
    cf: &ConnectionField,
    site: usize,
    mu: usize,
) -> Result<(Complex64, Complex64)> {
    let x = sf.lattice().coords(site);
    Ok((psi.value(&x), d_scalar_continuum(psi, sf, cf, site, mu)?.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_levels_respect_log_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let l = random_level(&mut rng, Kind::Complex, 3.0);
            assert!(l.value().ln().norm() <= 3.0 + 1e-12);
            let r = random_level(&mut rng, Kind::Real, 3.0);
            assert!(r.value().im == 0.0 && r.value().re > 0.0);
        }
    }

    #[test]
    fn axioms_hold_on_a_few_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for kind in [Kind::Complex, Kind::Real] {
            for _ in 0..20 {
                let worst = axiom_case(&mut rng, kind, 50).unwrap();
                for (name, e) in AXIOM_IDENTITIES.iter().zip(worst) {
                    assert!(e <= 1e-12, "{name}: {e}");
                }
            }
        }
    }

    #[test]
    fn axiom_errors_detect_a_wrong_unit() {
        // a table whose product forgets the 1/q factor breaks the unit law
        let s = Level::complex(Complex64::new(1.0, 0.0)).unwrap();
        let t = Level::complex(Complex64::new(0.0, 2.0)).unwrap();
        let ops = rel_ops(s, t).unwrap();
        let x = Complex64::new(1.0, 1.0);
        assert!(ops.mul(ops.unit(), x) == x);
        assert!(rel_err(ops.unit() * x, x, 0.0) > 0.5);
    }

    #[test]
    fn fit_order_recovers_powers() {
        let hs = [1e-2, 5e-3, 2.5e-3];
        let e1: Vec<f64> = hs.iter().map(|h| 3.0 * h).collect();
        let e2: Vec<f64> = hs.iter().map(|h| 0.5 * h * h).collect();
        assert!((fit_order(&hs, &e1) - 1.0).abs() < 1e-12);
        assert!((fit_order(&hs, &e2) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn section_case_matches_exponential_oracle() {
        let case = &convergence_catalog()[3];
        let h = 1e-3;
        let (disc, cont) = case.evaluate(h).unwrap();
        let c = Complex64::new(0.4, -0.3);
        let oracle = ((c * h).exp() - 1.0) / h;
        assert!((disc - oracle).norm() < 1e-12);
        assert_eq!(cont, c);
    }

    #[test]
    fn evaluation_point_is_the_centre_site() {
        let case = &convergence_catalog()[0];
        for h in CONVERGENCE_STEPS {
            let (_, cont) = case.evaluate(h).unwrap();
            // (ik + 0.1 + 0.2i + 0.3)ψ at x = 0.4
            let psi = Complex64::from_polar(1.0, 0.8);
            let oracle = Complex64::new(0.4, 2.2) * psi;
            assert!((cont - oracle).norm() < 1e-12, "h={h}");
        }
    }

    #[test]
    fn catalog_cases_are_valid_and_cover_both_dimensions() {
        let cases = convergence_catalog();
        assert!(cases.len() >= 6);
        assert!(cases.iter().any(|c| c.dim() == 1) && cases.iter().any(|c| c.dim() == 2));
        for c in &cases {
            c.validate().unwrap();
        }
    }

    #[test]
    fn rotational_field_has_curl_two() {
        let l = curl_lattice(16, 0.1).unwrap();
        let v = rotational_field(&l);
        for site in l.interior_sites() {
            assert!((curl_check(&l, &v, site, 0, 1).unwrap() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn random_setups_are_reproducible() {
        let l = build_lattice(2, &[6, 6], &[0.2, 0.2]).unwrap();
        let a = random_gauge_setup(&mut ChaCha8Rng::seed_from_u64(9), &l).unwrap();
        let b = random_gauge_setup(&mut ChaCha8Rng::seed_from_u64(9), &l).unwrap();
        assert_eq!(a.psi, b.psi);
        assert_eq!(a.gauge.alpha(14, 1), b.gauge.alpha(14, 1));
        let r = random_reduction_setup(&mut ChaCha8Rng::seed_from_u64(3), &l).unwrap();
        assert!(r.connection.is_zero() && r.scaling.is_constant());
    }

    #[test]
    fn convergence_case_serde_round_trip() {
        for case in convergence_catalog() {
            let text = serde_json::to_string(&case).unwrap();
            let back: ConvergenceCase = serde_json::from_str(&text).unwrap();
            assert_eq!(back, case);
        }
    }
}
