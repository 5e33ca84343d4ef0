//! Scaled real and complex number structures.
//!
//! A base-set element is a bare number with no meaning of its own. Inside the
//! structure at level `s` the element `s·a` carries the value `a_s`. Elements
//! are named by their value at level 1 (see [`BaseNumber`]).
//!
//! Two families of maps connect levels:
//!
//! * the number-preserving relativization `Z(s, t)`, which re-expresses the
//!   values and operations of level `t` through those of level `s`
//!   ([`revaluate`], [`RelOps`], [`Transported`]);
//! * the value-preserving map `W(s, t)`, which sends `t·a` to `s·a`
//!   ([`w_map`]).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::bits_eq;

/// Whether a structure is built on the reals or on the complex numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Real,
    Complex,
}

fn normalize_zero(c: Complex64) -> Complex64 {
    // -0.0 and 0.0 must compare bit-equal as level tags
    Complex64::new(c.re + 0.0, c.im + 0.0)
}

fn require_real(what: &'static str, value: Complex64) -> Result<()> {
    if value.im != 0.0 {
        return Err(Error::NotReal { what, value });
    }
    Ok(())
}

/// The scaling parameter labelling a structure.
///
/// Zero is the empty structure and cannot be used as a level. Real-kind
/// levels are positive reals.
#[derive(Clone, Copy, Debug)]
pub struct Level {
    value: Complex64,
    kind: Kind,
}

impl Level {
    pub fn new(value: Complex64, kind: Kind) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::InvalidField(format!("non-finite level {value}")));
        }
        if value == Complex64::new(0.0, 0.0) {
            return Err(Error::EmptyStructure);
        }
        if kind == Kind::Real && (value.im != 0.0 || value.re < 0.0) {
            return Err(Error::NotReal { what: "level", value });
        }
        Ok(Self {
            value: normalize_zero(value),
            kind,
        })
    }

    pub fn real(value: f64) -> Result<Self> {
        Self::new(Complex64::new(value, 0.0), Kind::Real)
    }

    pub fn complex(value: Complex64) -> Result<Self> {
        Self::new(value, Kind::Complex)
    }

    /// The identity level, where numbers and their values coincide.
    pub fn one(kind: Kind) -> Self {
        Self {
            value: Complex64::new(1.0, 0.0),
            kind,
        }
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    /// `self / other`, the factor carrying level-`self` values into
    /// level-`other` representatives.
    pub fn ratio(&self, other: &Level) -> Complex64 {
        self.value / other.value
    }

    fn check_same_kind(&self, other: &Level) -> Result<()> {
        if self.kind != other.kind {
            return Err(Error::KindMismatch);
        }
        Ok(())
    }
}

/// Levels compare bitwise: they are configuration, never computed.
impl PartialEq for Level {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && bits_eq(self.value, other.value)
    }
}

/// A number value `a_s` tagged with the structure it lives in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledValue {
    v: Complex64,
    level: Level,
}

impl ScaledValue {
    pub fn new(v: Complex64, level: Level) -> Result<Self> {
        if level.kind == Kind::Real {
            require_real("value", v)?;
        }
        Ok(Self { v, level })
    }

    pub fn real(v: f64, level: Level) -> Result<Self> {
        Self::new(Complex64::new(v, 0.0), level)
    }

    pub fn zero(level: Level) -> Self {
        Self {
            v: Complex64::new(0.0, 0.0),
            level,
        }
    }

    pub fn one(level: Level) -> Self {
        Self {
            v: Complex64::new(1.0, 0.0),
            level,
        }
    }

    pub fn v(&self) -> Complex64 {
        self.v
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn kind(&self) -> Kind {
        self.level.kind
    }

    fn same_level(&self, other: &Self) -> Result<()> {
        if self.level != other.level {
            return Err(Error::LevelMismatch {
                expected: self.level.value,
                found: other.level.value,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_level(other)?;
        Ok(Self { v: self.v + other.v, level: self.level })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_level(other)?;
        Ok(Self { v: self.v - other.v, level: self.level })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_level(other)?;
        Ok(Self { v: self.v * other.v, level: self.level })
    }

    pub fn neg(&self) -> Self {
        Self { v: -self.v, level: self.level }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.v == Complex64::new(0.0, 0.0) {
            return Err(Error::DivisionByZero);
        }
        Ok(Self { v: self.v.inv(), level: self.level })
    }

    pub fn conj(&self) -> Self {
        Self { v: self.v.conj(), level: self.level }
    }
}

/// An element of the base set, named by its value at level 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BaseNumber {
    label: Complex64,
}

impl BaseNumber {
    pub fn new(label: Complex64) -> Self {
        Self { label }
    }

    pub fn real(label: f64) -> Self {
        Self::new(Complex64::new(label, 0.0))
    }

    pub fn label(&self) -> Complex64 {
        self.label
    }
}

/// Value of the base element `b` in the structure at level `s`.
///
/// ```
/// use scalefield::scaled_scalars::{valuate, BaseNumber, Level};
/// // "6" is 3 among the even naturals
/// let v = valuate(Level::real(2.0).unwrap(), BaseNumber::real(6.0)).unwrap();
/// assert_eq!(v.v().re, 3.0);
/// ```
pub fn valuate(s: Level, b: BaseNumber) -> Result<ScaledValue> {
    if s.kind == Kind::Real {
        require_real("base number", b.label)?;
    }
    ScaledValue::new(b.label / s.value, s)
}

/// Re-expresses the level-`t` value `a_t` as a level-`s` value: `(t/s)·a`.
pub fn revaluate(s: Level, t: Level, a_t: &ScaledValue) -> Result<ScaledValue> {
    s.check_same_kind(&t)?;
    if a_t.level != t {
        return Err(Error::LevelMismatch {
            expected: t.value,
            found: a_t.level.value,
        });
    }
    ScaledValue::new(t.ratio(&s) * a_t.v, s)
}

/// Value-preserving map between levels: the base element `t·a` goes to `s·a`.
pub fn w_map(s: Level, t: Level, b: BaseNumber) -> Result<BaseNumber> {
    s.check_same_kind(&t)?;
    Ok(BaseNumber::new(s.ratio(&t) * b.label))
}

/// Field operations acting on representatives.
pub trait FieldOps {
    fn zero(&self) -> Complex64;
    fn unit(&self) -> Complex64;
    fn add(&self, x: Complex64, y: Complex64) -> Complex64;
    fn neg(&self, x: Complex64) -> Complex64;
    fn mul(&self, x: Complex64, y: Complex64) -> Complex64;
    fn inv(&self, x: Complex64) -> Result<Complex64>;
    fn conj(&self, x: Complex64) -> Complex64;

    fn sub(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.add(x, self.neg(y))
    }
}

/// Operation table of the level-`t` structure written in level-`s`
/// representatives.
///
/// With `q = t/s`: addition is unchanged, multiplication is `x·y/q`, the
/// unit is `q`, the inverse is `q²/x`, conjugation is `(q/q̄)·x̄` and the
/// real order is the order of representatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelOps {
    sup: Level,
    sub: Level,
    q: Complex64,
}

pub fn rel_ops(s: Level, t: Level) -> Result<RelOps> {
    s.check_same_kind(&t)?;
    Ok(RelOps {
        sup: t,
        sub: s,
        q: t.ratio(&s),
    })
}

impl RelOps {
    pub fn sup(&self) -> Level {
        self.sup
    }

    pub fn sub(&self) -> Level {
        self.sub
    }

    pub fn kind(&self) -> Kind {
        self.sub.kind
    }

    /// The factor `t/s`.
    pub fn factor(&self) -> Complex64 {
        self.q
    }

    /// Representative of a level-`t` value.
    pub fn rep(&self, a_t: &ScaledValue) -> Result<Complex64> {
        Ok(revaluate(self.sub, self.sup, a_t)?.v)
    }

    /// Level-`t` value whose representative is `x`.
    pub fn value_of(&self, x: Complex64) -> Result<ScaledValue> {
        ScaledValue::new(x / self.q, self.sup)
    }

    /// Relativized `<`; only defined for real structures.
    pub fn less(&self, x: f64, y: f64) -> Result<bool> {
        if self.kind() != Kind::Real {
            return Err(Error::KindMismatch);
        }
        Ok(x < y)
    }
}

impl FieldOps for RelOps {
    fn zero(&self) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    fn unit(&self) -> Complex64 {
        self.q
    }

    fn add(&self, x: Complex64, y: Complex64) -> Complex64 {
        x + y
    }

    fn neg(&self, x: Complex64) -> Complex64 {
        -x
    }

    fn mul(&self, x: Complex64, y: Complex64) -> Complex64 {
        x * y / self.q
    }

    fn inv(&self, x: Complex64) -> Result<Complex64> {
        if x == Complex64::new(0.0, 0.0) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.q * self.q / x)
    }

    fn conj(&self, x: Complex64) -> Complex64 {
        self.q / self.q.conj() * x.conj()
    }
}

/// An operation table pushed one level further down by `Z(s, t)`.
///
/// If `inner` acts on level-`t` representatives, the transported table acts
/// on level-`s` representatives `X = (t/s)·x` by conjugating every operation
/// with the factor `t/s`.
#[derive(Clone, Copy, Debug)]
pub struct Transported<O> {
    inner: O,
    k: Complex64,
}

impl<O: FieldOps> Transported<O> {
    pub fn new(inner: O, s: Level, t: Level) -> Result<Self> {
        s.check_same_kind(&t)?;
        Ok(Self {
            inner,
            k: t.ratio(&s),
        })
    }
}

impl<O: FieldOps> FieldOps for Transported<O> {
    fn zero(&self) -> Complex64 {
        self.k * self.inner.zero()
    }

    fn unit(&self) -> Complex64 {
        self.k * self.inner.unit()
    }

    fn add(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.k * self.inner.add(x / self.k, y / self.k)
    }

    fn neg(&self, x: Complex64) -> Complex64 {
        self.k * self.inner.neg(x / self.k)
    }

    fn mul(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.k * self.inner.mul(x / self.k, y / self.k)
    }

    fn inv(&self, x: Complex64) -> Result<Complex64> {
        Ok(self.k * self.inner.inv(x / self.k)?)
    }

    fn conj(&self, x: Complex64) -> Complex64 {
        self.k * self.inner.conj(x / self.k)
    }
}

/// Multiplying before and after rescaling from `t` to `s`.
///
/// Returns `(revaluate(a ×_t b), revaluate(a) ×_s revaluate(b))`. The second
/// entry is `t/s` times the first.
pub fn scale_then_multiply_mismatch(
    s: Level,
    t: Level,
    a_t: &ScaledValue,
    b_t: &ScaledValue,
) -> Result<(Complex64, Complex64)> {
    let operate_first = revaluate(s, t, &a_t.mul(b_t)?)?.v;
    let scale_first = revaluate(s, t, a_t)?.mul(&revaluate(s, t, b_t)?)?.v;
    Ok((operate_first, scale_first))
}

/// Conjugating before and after rescaling from `t` to `s`.
///
/// Returns `(revaluate(a*), revaluate(a)*)`; they agree iff `t/s` is real.
pub fn conjugate_then_scale_mismatch(
    s: Level,
    t: Level,
    a_t: &ScaledValue,
) -> Result<(Complex64, Complex64)> {
    let operate_first = revaluate(s, t, &a_t.conj())?.v;
    let scale_first = revaluate(s, t, a_t)?.v.conj();
    Ok((operate_first, scale_first))
}

/// The relativized structure `S^t_s`: level-`t` components written through
/// level-`s` ones. A zero superscript is the empty structure.
#[derive(Clone, Copy, Debug)]
pub struct RelStructure {
    sup: Complex64,
    sub: Complex64,
    // sup/sub, fixed when the class is first built so releveling keeps it
    ratio: Complex64,
    kind: Kind,
}

fn ratio_of(sup: Complex64, sub: Complex64) -> Complex64 {
    if sup == Complex64::new(0.0, 0.0) {
        Complex64::new(0.0, 0.0)
    } else {
        sup / sub
    }
}

impl RelStructure {
    pub fn new(sup: Complex64, sub: Complex64, kind: Kind) -> Result<Self> {
        if sub == Complex64::new(0.0, 0.0) {
            return Err(Error::EmptyStructure);
        }
        if kind == Kind::Real {
            require_real("structure superscript", sup)?;
            if sub.im != 0.0 || sub.re < 0.0 {
                return Err(Error::NotReal {
                    what: "structure subscript",
                    value: sub,
                });
            }
        }
        let (sup, sub) = (normalize_zero(sup), normalize_zero(sub));
        Ok(Self {
            sup,
            sub,
            ratio: ratio_of(sup, sub),
            kind,
        })
    }

    /// `S^t = S^t_t`.
    pub fn at_level(level: Level) -> Self {
        Self {
            sup: level.value,
            sub: level.value,
            ratio: Complex64::new(1.0, 0.0),
            kind: level.kind,
        }
    }

    pub fn empty(sub: Level) -> Self {
        Self {
            sup: Complex64::new(0.0, 0.0),
            sub: sub.value,
            ratio: Complex64::new(0.0, 0.0),
            kind: sub.kind,
        }
    }

    /// `S^{αt}_{αs}` from `S^t_s`. Both parameters move, the class does not,
    /// so the canonical ratio is carried over unchanged.
    pub fn relevel(&self, alpha: Complex64) -> Result<Self> {
        if alpha == Complex64::new(0.0, 0.0) {
            return Err(Error::DivisionByZero);
        }
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::InvalidField(format!("relevel factor {alpha} is not finite")));
        }
        if self.kind == Kind::Real && (alpha.im != 0.0 || alpha.re < 0.0) {
            return Err(Error::NotReal {
                what: "relevel factor",
                value: alpha,
            });
        }
        Ok(Self {
            sup: normalize_zero(self.sup * alpha),
            sub: normalize_zero(self.sub * alpha),
            ratio: self.ratio,
            kind: self.kind,
        })
    }

    pub fn sup(&self) -> Complex64 {
        self.sup
    }

    pub fn sub(&self) -> Complex64 {
        self.sub
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn is_empty(&self) -> bool {
        self.sup == Complex64::new(0.0, 0.0)
    }

    /// Equality by canonical ratio, within the shared relative tolerance.
    pub fn is_equivalent(&self, other: &Self) -> bool {
        self.kind == other.kind && crate::tol::close(canonical(self), canonical(other), 0.0)
    }

    fn combinable(&self, other: &Self) -> Result<()> {
        if self.kind != other.kind {
            return Err(Error::KindMismatch);
        }
        if !bits_eq(self.sub, other.sub) {
            return Err(Error::SubscriptMismatch {
                left: self.sub,
                right: other.sub,
            });
        }
        Ok(())
    }
}

/// `S^t_s + S^u_s = S^{t+u}_s`; the subscripts must match exactly.
pub fn struct_add(a: &RelStructure, b: &RelStructure) -> Result<RelStructure> {
    a.combinable(b)?;
    RelStructure::new(a.sup + b.sup, a.sub, a.kind)
}

/// `S^t_s - S^u_s = S^{t-u}_s`; equal superscripts give the empty structure.
pub fn struct_sub(a: &RelStructure, b: &RelStructure) -> Result<RelStructure> {
    a.combinable(b)?;
    RelStructure::new(a.sup - b.sup, a.sub, a.kind)
}

/// `w·S^t_s = S^{tw}_s`.
pub fn struct_scale(w: Complex64, a: &RelStructure) -> Result<RelStructure> {
    if a.is_empty() {
        return Err(Error::EmptyStructure);
    }
    if a.kind == Kind::Real {
        require_real("structure multiplier", w)?;
    }
    RelStructure::new(a.sup * w, a.sub, a.kind)
}

/// Canonical ratio `sup/sub`, invariant under common rescaling of both
/// parameters. The empty structure has canonical value 0.
pub fn canonical(a: &RelStructure) -> Complex64 {
    a.ratio
}
