use std::ops::Deref;

use num_traits::{One, Zero};

use crate::algebra::{Ambient, Point};
use crate::error::{Error, Result};
use crate::scalars::{ComplexApprox, Rational, Scalar, ScalarKind};

/// A dense function on `Z_p^d`, values in lexicographic point order. All
/// values share one scalar kind.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    ambient: Ambient,
    kind: ScalarKind,
    values: Vec<Scalar>,
}

impl GridFunction {
    /// Builds a function, promoting every value to the largest kind present.
    pub fn new(ambient: Ambient, values: Vec<Scalar>) -> Result<Self> {
        if values.len() != ambient.size() {
            return Err(Error::Schema(vec![format!(
                "expected {} values for p={}, d={}, got {}",
                ambient.size(),
                ambient.p(),
                ambient.d(),
                values.len()
            )]));
        }
        let mut bad = Vec::new();
        for (i, v) in values.iter().enumerate() {
            match v {
                Scalar::Cyclotomic(c) if c.p() != ambient.p() => {
                    bad.push(format!("values[{i}]: conductor {} != p={}", c.p(), ambient.p()))
                }
                Scalar::Complex(c) if !c.is_finite() => {
                    bad.push(format!("values[{i}]: non-finite complex value"))
                }
                _ => {}
            }
        }
        if !bad.is_empty() {
            return Err(Error::Schema(bad));
        }
        let kind = values
            .iter()
            .map(Scalar::kind)
            .max()
            .unwrap_or(ScalarKind::Rational);
        let values = values
            .into_iter()
            .map(|v| if v.kind() == kind { v } else { v.promote(kind, ambient.p()) })
            .collect();
        Ok(GridFunction {
            ambient,
            kind,
            values,
        })
    }

    pub(crate) fn from_parts(ambient: Ambient, kind: ScalarKind, values: Vec<Scalar>) -> Self {
        debug_assert_eq!(values.len(), ambient.size());
        debug_assert!(values.iter().all(|v| v.kind() == kind));
        GridFunction {
            ambient,
            kind,
            values,
        }
    }

    pub fn from_rationals(ambient: Ambient, values: Vec<Rational>) -> Result<Self> {
        GridFunction::new(ambient, values.into_iter().map(Scalar::Rational).collect())
    }

    pub fn from_fn(ambient: Ambient, f: impl Fn(&Point) -> Scalar) -> Result<Self> {
        let values = ambient.points().map(|x| f(&x)).collect();
        GridFunction::new(ambient, values)
    }

    pub fn zero(ambient: Ambient) -> Self {
        GridFunction::constant(ambient, Scalar::zero())
    }

    pub fn constant(ambient: Ambient, c: Scalar) -> Self {
        let kind = c.kind();
        GridFunction::from_parts(ambient, kind, vec![c; ambient.size()])
    }

    /// `1_E` for a point set (duplicates are ignored).
    pub fn indicator(ambient: Ambient, points: &[Point]) -> Self {
        let mut values = vec![Scalar::zero(); ambient.size()];
        for x in points {
            values[ambient.index(x)] = Scalar::from_int(1);
        }
        GridFunction::from_parts(ambient, ScalarKind::Rational, values)
    }

    pub fn indicator_mask(ambient: Ambient, mask: &[bool]) -> Self {
        let values = mask
            .iter()
            .map(|&b| Scalar::from_int(b as i64))
            .collect();
        GridFunction::from_parts(ambient, ScalarKind::Rational, values)
    }

    pub fn delta(ambient: Ambient, x: &Point, value: Scalar) -> Self {
        let kind = value.kind();
        let mut values = vec![Scalar::zero().promote(kind, ambient.p()); ambient.size()];
        values[ambient.index(x)] = value;
        GridFunction::from_parts(ambient, kind, values)
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn kind(&self) -> ScalarKind {
        self.kind
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Scalar> {
        self.values
    }

    pub fn value(&self, x: &Point) -> &Scalar {
        &self.values[self.ambient.index(x)]
    }

    pub fn is_exact(&self) -> bool {
        self.kind != ScalarKind::Complex
    }

    /// All values as rationals, if every value is exactly rational.
    pub fn rational_values(&self) -> Option<Vec<Rational>> {
        self.values.iter().map(Scalar::as_rational).collect()
    }

    pub fn is_rational(&self) -> bool {
        self.rational_values().is_some()
    }

    /// Demotes to rational kind when every value is exactly rational.
    pub fn demote(self) -> GridFunction {
        match self.rational_values() {
            Some(rs) if self.kind != ScalarKind::Rational => GridFunction::from_parts(
                self.ambient,
                ScalarKind::Rational,
                rs.into_iter().map(Scalar::Rational).collect(),
            ),
            _ => self,
        }
    }

    pub fn promote(&self, kind: ScalarKind) -> GridFunction {
        if kind <= self.kind {
            return self.clone();
        }
        let p = self.ambient.p();
        GridFunction::from_parts(
            self.ambient,
            kind,
            self.values.iter().map(|v| v.promote(kind, p)).collect(),
        )
    }

    /// Replaces the comparison tolerance of complex values.
    pub fn with_tolerance(mut self, tol: f64) -> GridFunction {
        for v in self.values.iter_mut() {
            if let Scalar::Complex(c) = v {
                c.tol = tol;
            }
        }
        self
    }

    fn check_ambient(&self, other: &GridFunction) -> Result<()> {
        if self.ambient == other.ambient {
            Ok(())
        } else {
            Err(Error::AmbientMismatch(format!(
                "(p={}, d={}) vs (p={}, d={})",
                self.ambient.p(),
                self.ambient.d(),
                other.ambient.p(),
                other.ambient.d()
            )))
        }
    }

    fn zip_with(
        &self,
        other: &GridFunction,
        op: impl Fn(&Scalar, &Scalar) -> Scalar,
    ) -> Result<GridFunction> {
        self.check_ambient(other)?;
        let kind = self.kind.max(other.kind);
        let p = self.ambient.p();
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| op(a, b).promote(kind, p))
            .collect();
        Ok(GridFunction::from_parts(self.ambient, kind, values))
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, k: &Scalar) -> GridFunction {
        let kind = self.kind.max(k.kind());
        let p = self.ambient.p();
        let values = self
            .values
            .iter()
            .map(|v| (v * k).promote(kind, p))
            .collect();
        GridFunction::from_parts(self.ambient, kind, values)
    }

    pub fn scale_rational(&self, k: &Rational) -> GridFunction {
        let values = self.values.iter().map(|v| v.scale(k)).collect();
        GridFunction::from_parts(self.ambient, self.kind, values)
    }

    pub fn conj(&self) -> GridFunction {
        GridFunction::from_parts(
            self.ambient,
            self.kind,
            self.values.iter().map(Scalar::conj).collect(),
        )
    }

    /// Total mass `m(f) = sum_x f(x)`.
    pub fn total(&self) -> Scalar {
        let p = self.ambient.p();
        self.values
            .iter()
            .fold(Scalar::zero().promote(self.kind, p), |acc, v| &acc + v)
    }

    pub fn is_constant(&self) -> bool {
        let first = &self.values[0];
        self.values.iter().all(|v| v.approx_eq(first))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_zero)
    }

    /// Points where the value is nonzero.
    pub fn support(&self) -> Vec<Point> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, _)| self.ambient.point(i))
            .collect()
    }

    /// `Z(f)`: points where the value is zero.
    pub fn zero_set(&self) -> Vec<Point> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_zero())
            .map(|(i, _)| self.ambient.point(i))
            .collect()
    }

    /// The set `E` when this is a 0/1-valued rational function.
    pub fn indicator_points(&self) -> Option<Vec<Point>> {
        let mut pts = Vec::new();
        for (i, v) in self.values.iter().enumerate() {
            let r = v.as_rational()?;
            if r.is_one() {
                pts.push(self.ambient.point(i));
            } else if !r.is_zero() {
                return None;
            }
        }
        Some(pts)
    }

    /// Exact equality for exact kinds; tolerance comparison otherwise.
    pub fn approx_eq(&self, other: &GridFunction) -> bool {
        self.ambient == other.ambient
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.approx_eq(b))
    }

    /// `max_x |f(x) - g(x)|` under the complex embedding.
    pub fn max_abs_diff(&self, other: &GridFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a.to_complex() - b.to_complex()).norm())
            .fold(0.0, f64::max)
    }

    pub fn l2_norm(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.to_complex().norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Numeric copy with complex values.
    pub fn to_complex(&self) -> GridFunction {
        let values = self
            .values
            .iter()
            .map(|v| match v {
                Scalar::Complex(c) => Scalar::Complex(*c),
                other => Scalar::Complex(ComplexApprox::new(
                    other.to_complex().re,
                    other.to_complex().im,
                )),
            })
            .collect();
        GridFunction::from_parts(self.ambient, ScalarKind::Complex, values)
    }
}

/// A frequency-domain function: the output of [`super::forward`].
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum(GridFunction);

impl Spectrum {
    pub fn from_grid(g: GridFunction) -> Self {
        Spectrum(g)
    }

    pub fn into_inner(self) -> GridFunction {
        self.0
    }

    pub fn grid(&self) -> &GridFunction {
        &self.0
    }

    /// True when every value is (exactly or to tolerance) zero at `x`.
    pub fn vanishes_at(&self, x: &Point) -> bool {
        self.0.value(x).is_zero()
    }
}

impl Deref for Spectrum {
    type Target = GridFunction;
    fn deref(&self) -> &GridFunction {
        &self.0
    }
}

pub(crate) fn zero_of(kind: ScalarKind, p: u64) -> Scalar {
    let z = Scalar::Rational(Rational::zero());
    z.promote(kind, p)
}
