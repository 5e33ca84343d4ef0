//! Scaled normed vector-space structures.
//!
//! The scalars of the vector structure at level `s` are the scalars at the
//! same level; a scalar and a vector only combine when their levels agree.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scaled_scalars::{rel_ops, Kind, Level, RelOps, ScaledValue};

#[derive(Clone, Debug, PartialEq)]
pub struct ScaledVector {
    comps: Vec<Complex64>,
    level: Level,
}

impl ScaledVector {
    pub fn new(comps: Vec<Complex64>, level: Level) -> Result<Self> {
        if level.kind() == Kind::Real {
            if let Some(bad) = comps.iter().find(|z| z.im != 0.0) {
                return Err(Error::NotReal {
                    what: "vector component",
                    value: *bad,
                });
            }
        }
        Ok(Self { comps, level })
    }

    pub fn zeros(dim: usize, level: Level) -> Self {
        Self {
            comps: vec![Complex64::new(0.0, 0.0); dim],
            level,
        }
    }

    pub fn comps(&self) -> &[Complex64] {
        &self.comps
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    fn same_level(&self, level: Level) -> Result<()> {
        if self.level != level {
            return Err(Error::LevelMismatch {
                expected: self.level.value(),
                found: level.value(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_level(other.level)?;
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect();
        Ok(Self { comps, level: self.level })
    }
}

/// `a ·_s v`, componentwise at the shared level.
pub fn v_scalar_mul(a: &ScaledValue, v: &ScaledVector) -> Result<ScaledVector> {
    v.same_level(a.level())?;
    Ok(ScaledVector {
        comps: v.comps.iter().map(|z| a.v() * z).collect(),
        level: v.level,
    })
}

fn euclidean(comps: &[Complex64]) -> f64 {
    comps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Euclidean norm, returned as a real value at the vector's level.
pub fn v_norm(v: &ScaledVector) -> ScaledValue {
    let level = v.level;
    let norm = euclidean(&v.comps);
    match level.kind() {
        Kind::Real => ScaledValue::real(norm, level),
        Kind::Complex => ScaledValue::new(Complex64::new(norm, 0.0), level),
    }
    .expect("a norm is real")
}

/// Vector operations of level `t` written in level-`s` representatives.
///
/// A vector `v_t` is represented by `(t/s)·v`, scalar multiplication is
/// `(s/t)·a·v`, and the norm of a representative is the representative of
/// `|v|_t`, namely `(t/s)·|v|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelVectorOps {
    scalars: RelOps,
    dim: usize,
}

pub fn rel_vector_ops(s: Level, t: Level, dim: usize) -> Result<RelVectorOps> {
    Ok(RelVectorOps {
        scalars: rel_ops(s, t)?,
        dim,
    })
}

impl RelVectorOps {
    /// The matching scalar table.
    pub fn scalars(&self) -> &RelOps {
        &self.scalars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: len,
            });
        }
        Ok(())
    }

    /// Representative of a level-`t` vector.
    pub fn rep(&self, v: &ScaledVector) -> Result<Vec<Complex64>> {
        v.same_level(self.scalars.sup())?;
        self.check_dim(v.dim())?;
        let q = self.scalars.factor();
        Ok(v.comps.iter().map(|z| q * z).collect())
    }

    pub fn add(&self, x: &[Complex64], y: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_dim(x.len())?;
        self.check_dim(y.len())?;
        Ok(x.iter().zip(y).map(|(a, b)| a + b).collect())
    }

    /// Scalar-vector product of representatives.
    pub fn scalar_mul(&self, a: Complex64, x: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_dim(x.len())?;
        let q = self.scalars.factor();
        Ok(x.iter().map(|z| a * z / q).collect())
    }

    /// Norm of a representative, as a scalar representative.
    pub fn norm(&self, x: &[Complex64]) -> Result<Complex64> {
        self.check_dim(x.len())?;
        let q = self.scalars.factor();
        Ok(q / q.norm() * euclidean(x))
    }

    /// `(t/s)·|v|` computed straight from the level-`t` vector.
    pub fn norm_of(&self, v: &ScaledVector) -> Result<Complex64> {
        v.same_level(self.scalars.sup())?;
        Ok(self.scalars.factor() * euclidean(&v.comps))
    }
}

/// Value-preserving transport of a scalar-vector pair from level `t` to
/// level `s`. Both members keep their values and move together.
pub fn wsv_map(
    s: Level,
    t: Level,
    pair: (&ScaledValue, &ScaledVector),
) -> Result<(ScaledValue, ScaledVector)> {
    let (a, v) = pair;
    if a.level() != t {
        return Err(Error::LevelMismatch {
            expected: t.value(),
            found: a.level().value(),
        });
    }
    v.same_level(t)?;
    if s.kind() != t.kind() {
        return Err(Error::KindMismatch);
    }
    Ok((
        ScaledValue::new(a.v(), s)?,
        ScaledVector::new(v.comps.clone(), s)?,
    ))
}
