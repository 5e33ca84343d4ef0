//! Covariant derivatives of structure-valued sections and of scalar and
//! vector valued fields.
//!
//! Discrete forms follow the limit definitions with a forward step and the
//! transport factor, so they are first-order accurate. Continuum forms use
//! exact gradients and read off the connection terms directly.

use num_complex::Complex64;

use crate::bundle_fields::{ConnectionField, Lattice, ScalarSource, ScalingField, Section, VectorSource};
use crate::error::{Error, Result};
use crate::scaled_scalars::{struct_add, struct_scale, struct_sub, RelStructure};

/// Parallel-transport factor between a site and its neighbour along `μ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConnCoeff(Complex64);

impl ConnCoeff {
    pub fn w(&self) -> Complex64 {
        self.0
    }
}

/// Which piece of a covariant derivative a result holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Position,
    Level,
    Total,
}

/// A derivative coefficient or value housed in the structure at `f(x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovariantResult {
    pub value: Complex64,
    pub site: usize,
    pub level: Complex64,
    pub part: Part,
}

fn check_fields(sf: &ScalingField, cf: &ConnectionField) -> Result<()> {
    if sf.lattice() != cf.lattice() {
        return Err(Error::LatticeMismatch);
    }
    if sf.kind() != cf.kind() {
        return Err(Error::KindMismatch);
    }
    Ok(())
}

fn check_point(lattice: &Lattice, site: usize, mu: usize) -> Result<()> {
    lattice.require_interior(site)?;
    lattice.check_direction(mu)
}

/// `w = exp((A_μ(x) + iB_μ(x))·h)`.
pub fn conn_coeff(cf: &ConnectionField, site: usize, mu: usize, h: f64) -> Result<ConnCoeff> {
    check_point(cf.lattice(), site, mu)?;
    Ok(ConnCoeff((cf.coefficient(mu, site) * h).exp()))
}

/// Position derivative of a section from its difference definition.
///
/// The neighbouring structure is carried back to `x` by `w`, the original is
/// subtracted, and the result is divided by `h`: `S^{f(x)(w-1)/h}_{f(x)}`.
pub fn d_section_pos_discrete(
    sec: &Section,
    cf: &ConnectionField,
    site: usize,
    mu: usize,
    h: f64,
) -> Result<RelStructure> {
    if sec.n_sites() != cf.lattice().n_sites() {
        return Err(Error::LatticeMismatch);
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidField(format!("step must be positive, got {h}")));
    }
    let w = conn_coeff(cf, site, mu, h)?.w();
    let here = sec.value(site)?;
    let transported = struct_scale(w, &here)?;
    let diff = struct_sub(&transported, &here)?;
    if diff.is_empty() {
        return Ok(diff);
    }
    struct_scale(Complex64::new(1.0 / h, 0.0), &diff)
}

/// Position derivative coefficient `A_μ + iB_μ` at level `f(x)`.
pub fn d_section_pos_continuum(
    sec: &Section,
    cf: &ConnectionField,
    site: usize,
    mu: usize,
) -> Result<CovariantResult> {
    check_point(cf.lattice(), site, mu)?;
    Ok(CovariantResult {
        value: cf.coefficient(mu, site),
        site,
        level: sec.level_of(site),
        part: Part::Position,
    })
}

/// Level derivative coefficient `Γ_μ + iΔ_μ = ∂_μ f / f` at level `f(x)`.
pub fn d_section_level_continuum(sf: &ScalingField, site: usize, mu: usize) -> Result<CovariantResult> {
    check_point(sf.lattice(), site, mu)?;
    Ok(CovariantResult {
        value: sf.log_gradient(site, mu)?,
        site,
        level: sf.level(site),
        part: Part::Level,
    })
}

/// Full section derivative `(D_x + D_{x,f})Ψ` as a structure at `f(x)`.
pub fn d_section_total(
    sec: &Section,
    sf: &ScalingField,
    cf: &ConnectionField,
    site: usize,
    mu: usize,
) -> Result<RelStructure> {
    check_fields(sf, cf)?;
    let f = sec.level_of(site);
    let pos = d_section_pos_continuum(sec, cf, site, mu)?.value;
    let lev = d_section_level_continuum(sf, site, mu)?.value;
    struct_add(
        &RelStructure::new(f * pos, f, sec.kind())?,
        &RelStructure::new(f * lev, f, sec.kind())?,
    )
}

/// Transport factor `t/s` carrying the neighbour's value into the structure
/// at `x`, with `t = w·f(x + h e_μ)` and `s = f(x)`.
fn neighbor_transport(sf: &ScalingField, cf: &ConnectionField, site: usize, mu: usize) -> Result<(usize, f64, Complex64)> {
    check_fields(sf, cf)?;
    let lattice = sf.lattice();
    check_point(lattice, site, mu)?;
    let next = lattice.neighbor(site, mu, 1).ok_or(Error::NotInterior { site })?;
    let h = lattice.spacing(mu);
    let w = conn_coeff(cf, site, mu, h)?.w();
    Ok((next, h, w * sf.level(next) / sf.level(site)))
}

/// `[(t/s)·ψ(x + h e_μ) − ψ(x)] / h` with `h` the lattice spacing along `μ`.
pub fn d_scalar_discrete(
    psi: &dyn ScalarSource,
    sf: &ScalingField,
    cf: &ConnectionField,
    site: usize,
    mu: usize,
) -> Result<Complex64> {
    let (next, h, ratio) = neighbor_transport(sf, cf, site, mu)?;
    let lattice = sf.lattice();
    let ahead = psi.value(&lattice.coords(next));
    let here = psi.value(&lattice.coords(site));
    Ok((ratio * ahead - here) / h)
}

/// Componentwise discrete derivative of a vector field.
pub fn d_vector_discrete(
    psi: &dyn VectorSource,
    sf: &ScalingField,
    cf: &ConnectionField,
    site: usize,
    mu: usize,
) -> Result<Vec<Complex64>> {
    let (next, h, ratio) = neighbor_transport(sf, cf, site, mu)?;
    let lattice = sf.lattice();
    let ahead = psi.value(&lattice.coords(next));
    let here = psi.value(&lattice.coords(site));
    Ok(ahead.iter().zip(&here).map(|(a, b)| (ratio * a - b) / h).collect())
}

/// `A_μ + iB_μ + Γ_μ + iΔ_μ` at `site`.
pub fn connection_sum(sf: &ScalingField, cf: &ConnectionField, site: usize, mu: usize) -> Result<Complex64> {
    check_fields(sf, cf)?;
    check_point(sf.lattice(), site, mu)?;
    Ok(cf.coefficient(mu, site) + sf.log_gradient(site, mu)?)
}

/// `(∂_μ + A_μ + iB_μ + Γ_μ + iΔ_μ)ψ` at `site`, housed at level `f(x)`.
pub fn d_scalar_continuum(
    psi: &dyn ScalarSource,
    sf: &ScalingField,
    cf: &ConnectionField,
    site: usize,
    mu: usize,
) -> Result<CovariantResult> {
    let coeff = connection_sum(sf, cf, site, mu)?;
    let x = sf.lattice().coords(site);
    Ok(CovariantResult {
        value: psi.grad(&x, mu) + coeff * psi.value(&x),
        site,
        level: sf.level(site),
        part: Part::Total,
    })
}

/// Componentwise continuum derivative of a vector field.
pub fn d_vector_continuum(
    psi: &dyn VectorSource,
    sf: &ScalingField,
    cf: &ConnectionField,
    site: usize,
    mu: usize,
) -> Result<Vec<CovariantResult>> {
    let coeff = connection_sum(sf, cf, site, mu)?;
    let x = sf.lattice().coords(site);
    let level = sf.level(site);
    Ok(psi
        .value(&x)
        .iter()
        .zip(psi.grad(&x, mu))
        .map(|(v, d)| CovariantResult {
            value: d + coeff * v,
            site,
            level,
            part: Part::Total,
        })
        .collect())
}

/// Leibniz pair for a product section `Ψ_S × Ψ_V`.
#[derive(Clone, Copy, Debug)]
pub struct ProductDerivative {
    /// `D_{μ,S}Ψ_S`, multiplying `Ψ_V` in the first Leibniz term.
    pub scalar: RelStructure,
    /// `D_{μ,V}Ψ_V`, multiplied by `Ψ_S` in the second term.
    pub vector: RelStructure,
}

pub fn d_product_section(
    sec_s: &Section,
    sec_v: &Section,
    sf: &ScalingField,
    cf: &ConnectionField,
    site: usize,
    mu: usize,
) -> Result<ProductDerivative> {
    let own = Section::from_scaling(sf);
    if !sec_s.shares_levels(sec_v) || !sec_s.shares_levels(&own) {
        return Err(Error::ScalingFieldMismatch);
    }
    Ok(ProductDerivative {
        scalar: d_section_total(sec_s, sf, cf, site, mu)?,
        vector: d_section_total(sec_v, sf, cf, site, mu)?,
    })
}

/// `∂_μ v_ν − ∂_ν v_μ` by central differences at an interior site.
pub fn curl_check(lattice: &Lattice, v: &[Vec<f64>], site: usize, mu: usize, nu: usize) -> Result<f64> {
    if v.len() != lattice.dim() {
        return Err(Error::DimensionMismatch {
            expected: lattice.dim(),
            found: v.len(),
        });
    }
    check_point(lattice, site, mu)?;
    lattice.check_direction(nu)?;
    if mu == nu {
        return Err(Error::InvalidField("curl needs two distinct directions".into()));
    }
    let central = |comp: &[f64], axis: usize| -> f64 {
        let up = lattice.neighbor(site, axis, 1).expect("interior");
        let down = lattice.neighbor(site, axis, -1).expect("interior");
        (comp[up] - comp[down]) / (2.0 * lattice.spacing(axis))
    };
    Ok(central(&v[nu], mu) - central(&v[mu], nu))
}
