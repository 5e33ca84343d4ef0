//! Analytic test fields with hand-coded exact gradients.
//!
//! These serve as references for the convergence and covariance studies:
//! every entry knows its value and its exact partial derivatives, and the
//! real entries also carry a bound on their third derivatives.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Names accepted for real catalog fields.
pub const REAL_FIELD_NAMES: &[&str] = &["constant", "linear", "quadratic", "gaussian", "wave"];

/// Names accepted for complex catalog fields.
pub const COMPLEX_FIELD_NAMES: &[&str] = &["constant", "plane_wave", "parts", "exp"];

/// A real scalar field on the lattice coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum RealField {
    Constant {
        value: f64,
    },
    /// `offset + coeffs · x`
    Linear {
        coeffs: Vec<f64>,
        #[serde(default)]
        offset: f64,
    },
    /// `Σ diag_μ x_μ² + cross·x_0·x_1`
    Quadratic {
        diag: Vec<f64>,
        #[serde(default)]
        cross: f64,
    },
    /// `amp · exp(-|x - center|² / (2 sigma²))`
    Gaussian {
        amp: f64,
        center: Vec<f64>,
        sigma: f64,
    },
    /// `amp · sin(k · x + phase)`
    Wave {
        amp: f64,
        k: Vec<f64>,
        #[serde(default)]
        phase: f64,
    },
}

fn dot(a: &[f64], x: &[f64]) -> f64 {
    a.iter().zip(x).map(|(a, x)| a * x).sum()
}

fn check_len(what: &str, v: &[f64], dim: usize) -> Result<()> {
    if v.len() != dim {
        return Err(Error::InvalidField(format!(
            "{what} has {} entries, lattice dimension is {dim}",
            v.len()
        )));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidField(format!("{what} must be finite")));
    }
    Ok(())
}

fn check_finite(what: &str, x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::InvalidField(format!("{what} must be finite")));
    }
    Ok(())
}

impl RealField {
    pub fn constant(value: f64) -> Self {
        Self::Constant { value }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Constant { .. } => "constant",
            Self::Linear { .. } => "linear",
            Self::Quadratic { .. } => "quadratic",
            Self::Gaussian { .. } => "gaussian",
            Self::Wave { .. } => "wave",
        }
    }

    /// Checks that vector parameters match the lattice dimension.
    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            Self::Constant { value } => check_finite("value", *value),
            Self::Linear { coeffs, offset } => {
                check_len("coeffs", coeffs, dim)?;
                check_finite("offset", *offset)
            }
            Self::Quadratic { diag, cross } => {
                check_len("diag", diag, dim)?;
                check_finite("cross", *cross)?;
                if dim < 2 && *cross != 0.0 {
                    return Err(Error::InvalidField("cross term needs dimension >= 2".into()));
                }
                Ok(())
            }
            Self::Gaussian { amp, center, sigma } => {
                check_finite("amp", *amp)?;
                check_len("center", center, dim)?;
                if !(sigma.is_finite() && *sigma > 0.0) {
                    return Err(Error::InvalidField("sigma must be positive".into()));
                }
                Ok(())
            }
            Self::Wave { amp, k, phase } => {
                check_finite("amp", *amp)?;
                check_len("k", k, dim)?;
                check_finite("phase", *phase)
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Self::Constant { .. } => true,
            Self::Linear { coeffs, .. } => coeffs.iter().all(|&c| c == 0.0),
            Self::Quadratic { diag, cross } => *cross == 0.0 && diag.iter().all(|&c| c == 0.0),
            Self::Gaussian { amp, .. } => *amp == 0.0,
            Self::Wave { amp, k, .. } => *amp == 0.0 || k.iter().all(|&c| c == 0.0),
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            Self::Constant { value } => *value,
            Self::Linear { coeffs, offset } => offset + dot(coeffs, x),
            Self::Quadratic { diag, cross } => {
                let sq: f64 = diag.iter().zip(x).map(|(d, x)| d * x * x).sum();
                if x.len() >= 2 {
                    sq + cross * x[0] * x[1]
                } else {
                    sq
                }
            }
            Self::Gaussian { amp, center, sigma } => {
                let r2: f64 = x.iter().zip(center).map(|(x, c)| (x - c).powi(2)).sum();
                amp * (-r2 / (2.0 * sigma * sigma)).exp()
            }
            Self::Wave { amp, k, phase } => amp * (dot(k, x) + phase).sin(),
        }
    }

    /// Exact partial derivative along axis `mu`.
    pub fn grad(&self, x: &[f64], mu: usize) -> f64 {
        match self {
            Self::Constant { .. } => 0.0,
            Self::Linear { coeffs, .. } => coeffs[mu],
            Self::Quadratic { diag, cross } => {
                let mixed = match (x.len() >= 2, mu) {
                    (true, 0) => cross * x[1],
                    (true, 1) => cross * x[0],
                    _ => 0.0,
                };
                2.0 * diag[mu] * x[mu] + mixed
            }
            Self::Gaussian { center, sigma, .. } => {
                -(x[mu] - center[mu]) / (sigma * sigma) * self.value(x)
            }
            Self::Wave { amp, k, phase } => amp * k[mu] * (dot(k, x) + phase).cos(),
        }
    }

    /// Upper bound on the magnitude of every third partial derivative.
    pub fn third_derivative_bound(&self) -> f64 {
        match self {
            Self::Constant { .. } | Self::Linear { .. } | Self::Quadratic { .. } => 0.0,
            // max |d³/du³ e^{-u²/2}| ≈ 1.38; mixed partials are smaller
            Self::Gaussian { amp, sigma, .. } => amp.abs() * 1.5 / sigma.powi(3),
            Self::Wave { amp, k, .. } => {
                let kmax = k.iter().fold(0.0_f64, |m, k| m.max(k.abs()));
                amp.abs() * kmax.powi(3)
            }
        }
    }

    /// Upper bound on the magnitude of every fourth partial derivative, which
    /// is the third-derivative bound of the gradient field.
    pub fn fourth_derivative_bound(&self) -> f64 {
        match self {
            Self::Constant { .. } | Self::Linear { .. } | Self::Quadratic { .. } => 0.0,
            // products of Hermite factors He_a(u)He_b(v)e^{-(u²+v²)/2} with
            // a + b = 4 peak at 3, reached by He_4 at the origin
            Self::Gaussian { amp, sigma, .. } => amp.abs() * 3.0 / sigma.powi(4),
            Self::Wave { amp, k, .. } => {
                let kmax = k.iter().fold(0.0_f64, |m, k| m.max(k.abs()));
                amp.abs() * kmax.powi(4)
            }
        }
    }

    /// A smooth random field (Gaussian bump or wave) with moderate slopes.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Self {
        if rng.gen_bool(0.5) {
            Self::Gaussian {
                amp: rng.gen_range(-1.0..1.0),
                center: (0..dim).map(|_| rng.gen_range(-0.5..0.5)).collect(),
                sigma: rng.gen_range(0.4..1.2),
            }
        } else {
            Self::Wave {
                amp: rng.gen_range(-1.0..1.0),
                k: (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect(),
                phase: rng.gen_range(0.0..std::f64::consts::TAU),
            }
        }
    }
}

/// A complex scalar field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum ComplexField {
    Constant {
        re: f64,
        #[serde(default)]
        im: f64,
    },
    /// `amp · exp(i k·x)`
    PlaneWave { amp: f64, k: Vec<f64> },
    /// `re(x) + i·im(x)`
    Parts { re: RealField, im: RealField },
    /// `exp(re(x) + i·im(x))`
    Exp { re: RealField, im: RealField },
}

impl ComplexField {
    pub fn constant(z: Complex64) -> Self {
        Self::Constant { re: z.re, im: z.im }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Constant { .. } => "constant",
            Self::PlaneWave { .. } => "plane_wave",
            Self::Parts { .. } => "parts",
            Self::Exp { .. } => "exp",
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            Self::Constant { re, im } => {
                check_finite("re", *re)?;
                check_finite("im", *im)
            }
            Self::PlaneWave { amp, k } => {
                check_finite("amp", *amp)?;
                check_len("k", k, dim)
            }
            Self::Parts { re, im } | Self::Exp { re, im } => {
                re.validate(dim)?;
                im.validate(dim)
            }
        }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Self {
        Self::Parts {
            re: RealField::random(rng, dim),
            im: RealField::random(rng, dim),
        }
    }
}

/// A complex scalar field with exact partial derivatives.
pub trait ScalarSource: Sync {
    fn value(&self, x: &[f64]) -> Complex64;
    fn grad(&self, x: &[f64], mu: usize) -> Complex64;
}

/// A complex N-component field with exact partial derivatives.
pub trait VectorSource: Sync {
    fn len(&self) -> usize;
    fn value(&self, x: &[f64]) -> Vec<Complex64>;
    fn grad(&self, x: &[f64], mu: usize) -> Vec<Complex64>;
}

impl ScalarSource for ComplexField {
    fn value(&self, x: &[f64]) -> Complex64 {
        match self {
            Self::Constant { re, im } => Complex64::new(*re, *im),
            Self::PlaneWave { amp, k } => Complex64::from_polar(*amp, dot(k, x)),
            Self::Parts { re, im } => Complex64::new(re.value(x), im.value(x)),
            Self::Exp { re, im } => Complex64::new(re.value(x), im.value(x)).exp(),
        }
    }

    fn grad(&self, x: &[f64], mu: usize) -> Complex64 {
        match self {
            Self::Constant { .. } => Complex64::new(0.0, 0.0),
            Self::PlaneWave { k, .. } => Complex64::new(0.0, k[mu]) * self.value(x),
            Self::Parts { re, im } => Complex64::new(re.grad(x, mu), im.grad(x, mu)),
            Self::Exp { re, im } => {
                Complex64::new(re.grad(x, mu), im.grad(x, mu)) * self.value(x)
            }
        }
    }
}

/// Componentwise vector field built from complex catalog entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VectorField(pub Vec<ComplexField>);

impl VectorField {
    pub fn validate(&self, dim: usize) -> Result<()> {
        self.0.iter().try_for_each(|c| c.validate(dim))
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, dim: usize, n: usize) -> Self {
        Self((0..n).map(|_| ComplexField::random(rng, dim)).collect())
    }
}

impl VectorSource for VectorField {
    fn len(&self) -> usize {
        self.0.len()
    }

    fn value(&self, x: &[f64]) -> Vec<Complex64> {
        self.0.iter().map(|c| c.value(x)).collect()
    }

    fn grad(&self, x: &[f64], mu: usize) -> Vec<Complex64> {
        self.0.iter().map(|c| c.grad(x, mu)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn central<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], mu: usize, h: f64) -> f64 {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[mu] += h;
        xm[mu] -= h;
        (f(&xp) - f(&xm)) / (2.0 * h)
    }

    fn catalog_2d() -> Vec<RealField> {
        vec![
            RealField::constant(1.5),
            RealField::Linear { coeffs: vec![0.3, -0.2], offset: 0.1 },
            RealField::Quadratic { diag: vec![0.5, -0.25], cross: 0.7 },
            RealField::Gaussian { amp: 0.8, center: vec![0.1, -0.2], sigma: 0.6 },
            RealField::Wave { amp: 0.5, k: vec![1.3, -0.7], phase: 0.4 },
        ]
    }

    /// Observed order of the central difference against the exact gradient.
    #[test]
    fn exact_gradients_match_central_differences_at_second_order() {
        let x = [0.37, -0.21];
        for field in catalog_2d() {
            for mu in 0..2 {
                let exact = field.grad(&x, mu);
                let e1 = (central(|p| field.value(p), &x, mu, 0.02) - exact).abs();
                let e2 = (central(|p| field.value(p), &x, mu, 0.01) - exact).abs();
                if e1 < 1e-12 {
                    // polynomial of degree <= 2: central differences are exact
                    assert!(e2 < 1e-12, "{field:?}");
                    continue;
                }
                let order = (e1 / e2).log2();
                assert!(order >= 1.9, "{field:?} mu={mu} order={order}");
            }
        }
    }

    #[test]
    fn complex_gradients_match_central_differences() {
        let x = [0.2, 0.9];
        let fields = vec![
            ComplexField::PlaneWave { amp: 1.2, k: vec![2.0, -1.0] },
            ComplexField::Exp { re: catalog_2d()[3].clone(), im: catalog_2d()[4].clone() },
            ComplexField::Parts { re: catalog_2d()[2].clone(), im: catalog_2d()[1].clone() },
        ];
        for field in fields {
            for mu in 0..2 {
                let h = 1e-4;
                let mut xp = x.to_vec();
                let mut xm = x.to_vec();
                xp[mu] += h;
                xm[mu] -= h;
                let fd = (field.value(&xp) - field.value(&xm)) / (2.0 * h);
                assert!((fd - field.grad(&x, mu)).norm() < 1e-7, "{field:?}");
            }
        }
    }

    #[test]
    fn plane_wave_has_unit_modulus() {
        let f = ComplexField::PlaneWave { amp: 1.0, k: vec![3.0] };
        for i in 0..10 {
            assert!((f.value(&[0.1 * i as f64]).norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn validate_catches_dimension_errors() {
        let f = RealField::Linear { coeffs: vec![1.0], offset: 0.0 };
        assert!(f.validate(1).is_ok());
        assert!(f.validate(2).is_err());
        assert!(RealField::Gaussian { amp: 1.0, center: vec![0.0], sigma: 0.0 }
            .validate(1)
            .is_err());
        assert!(RealField::Quadratic { diag: vec![1.0], cross: 1.0 }.validate(1).is_err());
    }

    #[test]
    fn serde_tags() {
        let f: RealField =
            serde_json::from_str(r#"{"name":"gaussian","amp":1.0,"center":[0.0],"sigma":0.5}"#)
                .unwrap();
        assert_eq!(f.name(), "gaussian");
        assert!(serde_json::from_str::<RealField>(r#"{"name":"gausian"}"#).is_err());
    }

    #[test]
    fn random_fields_are_valid_and_reproducible() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let f = RealField::random(&mut a, 2);
            f.validate(2).unwrap();
            assert_eq!(f, RealField::random(&mut b, 2));
        }
    }

    #[test]
    fn third_derivative_bound_holds_for_gaussian() {
        let g = RealField::Gaussian { amp: 2.0, center: vec![0.0], sigma: 0.5 };
        let bound = g.third_derivative_bound();
        let h = 1e-3;
        for i in -300..300 {
            let x = i as f64 * 0.005;
            let d3 = (g.value(&[x + 2.0 * h]) - 2.0 * g.value(&[x + h]) + 2.0 * g.value(&[x - h])
                - g.value(&[x - 2.0 * h]))
                / (2.0 * h * h * h);
            assert!(d3.abs() <= bound, "x={x} d3={d3} bound={bound}");
        }
    }

    #[test]
    fn fourth_derivative_bound_holds_for_gaussian_partials() {
        let g = RealField::Gaussian { amp: -1.5, center: vec![0.1, -0.2], sigma: 0.6 };
        let bound = g.fourth_derivative_bound();
        // ∂⁴/∂x⁴ and ∂³/∂x³∂y from exact first derivatives and central differences
        let h = 2e-3;
        let dx3 = |y: &dyn Fn(f64) -> f64, x: f64| {
            (y(x + 2.0 * h) - 2.0 * y(x + h) + 2.0 * y(x - h) - y(x - 2.0 * h)) / (2.0 * h * h * h)
        };
        let mut peak: f64 = 0.0;
        for i in -40..40 {
            for j in -40..40 {
                let (x, y) = (i as f64 * 0.05, j as f64 * 0.05);
                let gx = |t: f64| g.grad(&[t, y], 0);
                let gy = |t: f64| g.grad(&[t, y], 1);
                peak = peak.max(dx3(&gx, x).abs()).max(dx3(&gy, x).abs());
            }
        }
        assert!(peak <= bound, "peak={peak} bound={bound}");
        assert!(peak >= 0.9 * bound, "bound is loose: peak={peak} bound={bound}");
        let w = RealField::Wave { amp: 0.5, k: vec![2.0, -1.0], phase: 0.0 };
        assert_eq!(w.fourth_derivative_bound(), 8.0);
    }
}
