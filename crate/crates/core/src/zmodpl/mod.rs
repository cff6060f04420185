//! The free module `Z_{p^l}^d`: valuations, lines at each level,
//! hyperplanes, the transform with conductor `p^l`, level-`l` wavelets and
//! the multiscale wavelet decomposition.

mod cyclotomic_l;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

pub use cyclotomic_l::CyclotomicL;

use crate::algebra::{grid_size, is_prime, pow_mod, Point};
use crate::error::{Error, Result};
use crate::fourier::exact_transform;
use crate::scalars::{rational_pow, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingAmbient {
    p: u64,
    l: u32,
    d: usize,
    q: u64,
    size: usize,
}

impl RingAmbient {
    pub fn new(p: u64, l: u32, d: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if l == 0 {
            return Err(Error::Domain("modulus exponent must be at least 1".into()));
        }
        if d == 0 {
            return Err(Error::ZeroDimension);
        }
        let q = p
            .checked_pow(l)
            .ok_or_else(|| Error::Capacity(format!("{p}^{l} overflows")))?;
        let size = grid_size(q, d)?;
        Ok(RingAmbient { p, l, d, q, size })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// The modulus `p^l`.
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> Point {
        Point::new(vec![0; self.d])
    }

    pub fn index(&self, x: &Point) -> usize {
        x.coords()
            .iter()
            .fold(0usize, |acc, &c| acc * self.q as usize + c as usize)
    }

    pub fn point(&self, mut index: usize) -> Point {
        let q = self.q as usize;
        let mut coords = vec![0; self.d];
        for c in coords.iter_mut().rev() {
            *c = (index % q) as u64;
            index /= q;
        }
        Point::new(coords)
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.size).map(|i| self.point(i))
    }

    pub fn point_from(&self, coords: &[i64]) -> Result<Point> {
        if coords.len() != self.d {
            return Err(Error::Dimension(format!(
                "expected {} coordinates, got {}",
                self.d,
                coords.len()
            )));
        }
        Ok(Point::new(
            coords.iter().map(|&c| c.rem_euclid(self.q as i64) as u64).collect(),
        ))
    }

    pub fn dot(&self, a: &Point, b: &Point) -> u64 {
        let q = self.q as u128;
        let s = a
            .coords()
            .iter()
            .zip(b.coords())
            .fold(0u128, |acc, (&x, &y)| (acc + x as u128 * y as u128) % q);
        s as u64
    }

    pub fn add(&self, a: &Point, b: &Point) -> Point {
        Point::new(a.coords().iter().zip(b.coords()).map(|(x, y)| (x + y) % self.q).collect())
    }

    pub fn sub(&self, a: &Point, b: &Point) -> Point {
        Point::new(
            a.coords()
                .iter()
                .zip(b.coords())
                .map(|(x, y)| (x + self.q - y) % self.q)
                .collect(),
        )
    }

    pub fn scale(&self, t: u64, a: &Point) -> Point {
        let q = self.q as u128;
        Point::new(
            a.coords()
                .iter()
                .map(|&x| ((t % self.q) as u128 * x as u128 % q) as u64)
                .collect(),
        )
    }

    /// `nu_p(n)`; zero gets the sentinel `l`.
    pub fn valuation(&self, n: u64) -> u32 {
        let mut n = n % self.q;
        if n == 0 {
            return self.l;
        }
        let mut j = 0;
        while n.is_multiple_of(self.p) {
            n /= self.p;
            j += 1;
        }
        j
    }

    /// `p^-nu(n)`, and 0 for n = 0.
    pub fn norm(&self, n: u64) -> Rational {
        if n.is_multiple_of(self.q) {
            Rational::zero()
        } else {
            rational_pow(self.p, -(self.valuation(n) as i64))
        }
    }

    pub fn is_unit(&self, n: u64) -> bool {
        !n.is_multiple_of(self.p)
    }

    pub fn units(&self) -> impl Iterator<Item = u64> + '_ {
        (1..self.q).filter(|&n| self.is_unit(n))
    }

    pub fn unit_inverse(&self, u: u64) -> u64 {
        debug_assert!(self.is_unit(u));
        let phi = self.q / self.p * (self.p - 1);
        pow_mod(u, phi - 1, self.q)
    }

    /// Minimum coordinate valuation; `l` for the zero vector.
    pub fn vector_valuation(&self, v: &Point) -> u32 {
        v.coords().iter().map(|&c| self.valuation(c)).min().unwrap_or(self.l)
    }

    /// The unit multiple of `v` whose first coordinate of minimal valuation
    /// `j` equals `p^j`.
    pub fn canonical(&self, v: &Point) -> Point {
        let j = self.vector_valuation(v);
        if j == self.l {
            return v.clone();
        }
        let c = v.coords().iter().find(|&&c| self.valuation(c) == j).copied().unwrap_or(0);
        let unit = c / self.p.pow(j);
        self.scale(self.unit_inverse(unit % self.q), v)
    }
}

/// A vector together with its valuation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValuedVector {
    coords: Point,
    valuation: u32,
    p: u64,
}

impl ValuedVector {
    pub fn new(ambient: &RingAmbient, coords: Point) -> Self {
        let valuation = ambient.vector_valuation(&coords);
        ValuedVector {
            coords,
            valuation,
            p: ambient.p,
        }
    }

    pub fn coords(&self) -> &Point {
        &self.coords
    }

    pub fn valuation(&self) -> u32 {
        self.valuation
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }

    pub fn norm(&self) -> Rational {
        if self.is_zero() {
            Rational::zero()
        } else {
            rational_pow(self.p, -(self.valuation as i64))
        }
    }
}

/// `l_v = {a v}`. The level is `l - nu(v)`; the zero line has level 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelLine {
    generator: Point,
    level: u32,
}

impl LevelLine {
    pub fn through(ambient: &RingAmbient, v: &Point) -> Result<Self> {
        if v.is_zero() {
            return Err(Error::ZeroDirection);
        }
        Ok(Self::spanned(ambient, v))
    }

    fn spanned(ambient: &RingAmbient, v: &Point) -> Self {
        LevelLine {
            generator: ambient.canonical(v),
            level: ambient.l - ambient.vector_valuation(v),
        }
    }

    pub fn generator(&self) -> &Point {
        &self.generator
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn points(&self, ambient: &RingAmbient) -> Vec<Point> {
        (0..ambient.p.pow(self.level))
            .map(|a| ambient.scale(a, &self.generator))
            .collect()
    }

    pub fn contains(&self, ambient: &RingAmbient, x: &Point) -> bool {
        if self.level == 0 {
            return x.is_zero();
        }
        // The canonical generator has p^nu at its pivot, which pins down a.
        let nu = ambient.l - self.level;
        let pivot = ambient.p.pow(nu);
        let i = self.generator.coords().iter().position(|&c| c == pivot);
        let Some(i) = i else { return false };
        let xi = x.coords()[i];
        xi.is_multiple_of(pivot) && ambient.scale(xi / pivot, &self.generator) == *x
    }
}

/// `anchor + l_v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineLevelLine {
    anchor: Point,
    line: LevelLine,
}

impl AffineLevelLine {
    /// The anchor is reduced to the smallest point of the coset.
    pub fn new(ambient: &RingAmbient, anchor: &Point, line: LevelLine) -> Self {
        let anchor = line
            .points(ambient)
            .iter()
            .map(|y| ambient.add(anchor, y))
            .min()
            .unwrap_or_else(|| anchor.clone());
        AffineLevelLine { anchor, line }
    }

    pub fn anchor(&self) -> &Point {
        &self.anchor
    }

    pub fn line(&self) -> &LevelLine {
        &self.line
    }

    pub fn level(&self) -> u32 {
        self.line.level
    }

    pub fn points(&self, ambient: &RingAmbient) -> Vec<Point> {
        self.line
            .points(ambient)
            .iter()
            .map(|y| ambient.add(&self.anchor, y))
            .collect()
    }

    pub fn contains(&self, ambient: &RingAmbient, x: &Point) -> bool {
        self.line.contains(ambient, &ambient.sub(x, &self.anchor))
    }

    /// The `p` disjoint affine lines of level `s - 1` making up this one:
    /// `anchor + c v + l_{pv}` for `c` in `0..p`. Empty at level 0.
    pub fn sublines(&self, ambient: &RingAmbient) -> Vec<AffineLevelLine> {
        if self.line.level == 0 {
            return Vec::new();
        }
        let v = &self.line.generator;
        let inner = LevelLine::spanned(ambient, &ambient.scale(ambient.p, v));
        (0..ambient.p)
            .map(|c| {
                let anchor = ambient.add(&self.anchor, &ambient.scale(c, v));
                AffineLevelLine::new(ambient, &anchor, inner.clone())
            })
            .collect()
    }
}

/// The distinct lines at level `l` (unit generators), in canonical form.
pub fn unit_lines(ambient: &RingAmbient) -> Vec<LevelLine> {
    let set: BTreeSet<LevelLine> = ambient
        .points()
        .filter(|v| ambient.vector_valuation(v) == 0)
        .map(|v| LevelLine::spanned(ambient, &v))
        .collect();
    set.into_iter().collect()
}

/// `H_v = {x : x.v = 0 mod p^l}`, of size `p^(l(d-1) + nu(v))`.
pub fn hyperplane_mod(ambient: &RingAmbient, v: &Point) -> Result<Vec<Point>> {
    if v.is_zero() {
        return Err(Error::ZeroDirection);
    }
    let points: Vec<Point> = ambient.points().filter(|x| ambient.dot(x, v) == 0).collect();
    let expected = ambient
        .p
        .pow(ambient.l * (ambient.d as u32 - 1) + ambient.vector_valuation(v));
    if points.len() as u64 != expected {
        return Err(Error::InvariantViolation(format!(
            "hyperplane {:?} has {} points, expected {expected}",
            v.coords(),
            points.len()
        )));
    }
    Ok(points)
}

/// A function on `Z_{p^l}^d` with values in `Q(zeta_{p^l})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingFunction {
    ambient: RingAmbient,
    values: Vec<CyclotomicL>,
}

impl RingFunction {
    pub fn new(ambient: RingAmbient, values: Vec<CyclotomicL>) -> Result<Self> {
        if values.len() != ambient.size {
            return Err(Error::Dimension(format!(
                "expected {} values, got {}",
                ambient.size,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| (v.p(), v.l()) != (ambient.p, ambient.l)) {
            return Err(Error::ConductorMismatch {
                left: ambient.q,
                right: v.p().pow(v.l()),
            });
        }
        Ok(RingFunction { ambient, values })
    }

    pub fn from_rationals(ambient: RingAmbient, values: Vec<Rational>) -> Result<Self> {
        let values = values
            .into_iter()
            .map(|r| CyclotomicL::from_rational(ambient.p, ambient.l, r))
            .collect();
        RingFunction::new(ambient, values)
    }

    pub fn from_fn(ambient: RingAmbient, mut f: impl FnMut(&Point) -> Rational) -> Self {
        let values = ambient
            .points()
            .map(|x| CyclotomicL::from_rational(ambient.p, ambient.l, f(&x)))
            .collect();
        RingFunction { ambient, values }
    }

    pub fn zero(ambient: RingAmbient) -> Self {
        RingFunction::from_fn(ambient, |_| Rational::zero())
    }

    pub fn indicator(ambient: RingAmbient, set: &[Point]) -> Self {
        let mut f = RingFunction::zero(ambient);
        for x in set {
            f.values[ambient.index(x)] = CyclotomicL::from_rational(ambient.p, ambient.l, Rational::one());
        }
        f
    }

    pub fn ambient(&self) -> &RingAmbient {
        &self.ambient
    }

    pub fn values(&self) -> &[CyclotomicL] {
        &self.values
    }

    pub fn value(&self, x: &Point) -> &CyclotomicL {
        &self.values[self.ambient.index(x)]
    }

    pub fn rational_values(&self) -> Option<Vec<Rational>> {
        self.values.iter().map(CyclotomicL::rational_part).collect()
    }

    pub fn is_rational(&self) -> bool {
        self.values.iter().all(|v| v.rational_part().is_some())
    }

    pub fn support(&self) -> Vec<Point> {
        self.ambient
            .points()
            .zip(&self.values)
            .filter(|(_, v)| !v.is_zero())
            .map(|(x, _)| x)
            .collect()
    }

    pub fn try_add(&self, other: &RingFunction) -> Result<RingFunction> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch("ring functions on different modules".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<_>>()?;
        Ok(RingFunction {
            ambient: self.ambient,
            values,
        })
    }

    /// The same values restricted to `keep`, zero elsewhere.
    pub fn restrict(&self, keep: &BTreeSet<Point>) -> RingFunction {
        let values = self
            .ambient
            .points()
            .zip(&self.values)
            .map(|(x, v)| {
                if keep.contains(&x) {
                    v.clone()
                } else {
                    CyclotomicL::zero(self.ambient.p, self.ambient.l)
                }
            })
            .collect();
        RingFunction {
            ambient: self.ambient,
            values,
        }
    }
}

fn transform(f: &RingFunction, sign: i64, factor: &Rational) -> RingFunction {
    let a = f.ambient;
    let input: Vec<Vec<Rational>> = f.values.iter().map(CyclotomicL::redundant).collect();
    let out = exact_transform(a.q as usize, a.d, &input, sign);
    let values = out
        .into_iter()
        .map(|r| CyclotomicL::from_redundant(a.p, a.l, r).scale(factor))
        .collect();
    RingFunction { ambient: a, values }
}

/// `f^(m) = p^(-ld) sum_x zeta^(-x.m) f(x)`.
pub fn forward_mod(f: &RingFunction) -> RingFunction {
    let a = f.ambient;
    transform(f, -1, &rational_pow(a.q, -(a.d as i64)))
}

/// `f(x) = sum_m zeta^(x.m) f^(m)`.
pub fn inverse_mod(spectrum: &RingFunction) -> RingFunction {
    transform(spectrum, 1, &Rational::one())
}

#[derive(Debug, Clone, PartialEq)]
pub enum LevelWaveletClass {
    /// Spectrum inside `{0}`.
    Constant,
    /// Spectrum on the level-`l` line `l_v` and `f = sum_t coeffs[t] 1_{x.v = t}`.
    Wavelet {
        line: LevelLine,
        coeffs: Vec<CyclotomicL>,
    },
    /// Spectrum on an affine level-`l` line not through the origin. Such an
    /// `f` is not a combination of parallel hyperplane indicators.
    AffineOnly {
        line: AffineLevelLine,
        converse_gap: bool,
    },
    NotWavelet,
}

fn spatial_coeffs(f: &RingFunction, v: &Point) -> Option<Vec<CyclotomicL>> {
    let a = f.ambient;
    let mut coeffs: Vec<Option<&CyclotomicL>> = vec![None; a.q as usize];
    for (x, value) in a.points().zip(&f.values) {
        let slot = &mut coeffs[a.dot(&x, v) as usize];
        match slot {
            Some(seen) if *seen != value => return None,
            _ => *slot = Some(value),
        }
    }
    Some(
        coeffs
            .into_iter()
            .map(|c| c.cloned().unwrap_or_else(|| CyclotomicL::zero(a.p, a.l)))
            .collect(),
    )
}

/// Decides whether `f` is a level-`l` wavelet, checking the spectral
/// description against the parallel-hyperplane one for every unit line.
pub fn is_level_l_wavelet(f: &RingFunction) -> Result<LevelWaveletClass> {
    let a = f.ambient;
    let support = forward_mod(f).support();
    if support.iter().all(Point::is_zero) {
        return Ok(LevelWaveletClass::Constant);
    }
    let lines = unit_lines(&a);
    for line in &lines {
        let spectral = support.iter().all(|m| line.contains(&a, m));
        let spatial = spatial_coeffs(f, line.generator());
        match (spectral, spatial) {
            (true, Some(coeffs)) => {
                return Ok(LevelWaveletClass::Wavelet {
                    line: line.clone(),
                    coeffs,
                })
            }
            (false, None) => {}
            (true, None) => {
                return Err(Error::InvariantViolation(format!(
                    "spectrum lies on l_{:?} but f is not constant on its hyperplanes",
                    line.generator().coords()
                )))
            }
            (false, Some(_)) => {
                return Err(Error::InvariantViolation(format!(
                    "f is constant on the hyperplanes x.{:?} = t but its spectrum leaves the line",
                    line.generator().coords()
                )))
            }
        }
    }
    let m0 = &support[0];
    for line in &lines {
        if support.iter().all(|m| line.contains(&a, &a.sub(m, m0))) {
            return Ok(LevelWaveletClass::AffineOnly {
                line: AffineLevelLine::new(&a, m0, line.clone()),
                converse_gap: true,
            });
        }
    }
    Ok(LevelWaveletClass::NotWavelet)
}

/// One piece of a multiscale decomposition. Its spectrum lies on `line`,
/// so it is a wavelet at `line.level()`.
#[derive(Debug, Clone, PartialEq)]
pub struct RingPart {
    pub line: LevelLine,
    pub function: RingFunction,
}

impl RingPart {
    pub fn level(&self) -> u32 {
        self.line.level
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiscaleDecomposition {
    pub ambient: RingAmbient,
    /// Present only when the spectrum is inside `{0}`.
    pub constant: Option<RingFunction>,
    pub parts: Vec<RingPart>,
}

impl MultiscaleDecomposition {
    pub fn evaluate(&self) -> Result<RingFunction> {
        let mut acc = RingFunction::zero(self.ambient);
        for f in self.constant.iter().chain(self.parts.iter().map(|p| &p.function)) {
            acc = acc.try_add(f)?;
        }
        Ok(acc)
    }

    pub fn part_counts_by_level(&self) -> BTreeMap<u32, usize> {
        let mut counts = BTreeMap::new();
        for part in &self.parts {
            *counts.entry(part.level()).or_insert(0) += 1;
        }
        counts
    }
}

/// Splits `f` into wavelets at levels `l, l-1, ..., 1`.
///
/// Nonzero frequencies are visited stratum by stratum (valuation 0 first);
/// each still unclaimed frequency `m` claims every unclaimed support point
/// of `l_m`, so each frequency is counted exactly once. The origin goes to
/// the first part. For rational `f` every claimed set is closed under
/// units, so the parts are rational as well.
pub fn multiscale_decompose(f: &RingFunction) -> Result<MultiscaleDecomposition> {
    let a = f.ambient;
    let spectrum = forward_mod(f);
    let support = spectrum.support();
    let nonzero: Vec<&Point> = support.iter().filter(|m| !m.is_zero()).collect();
    if nonzero.is_empty() {
        return Ok(MultiscaleDecomposition {
            ambient: a,
            constant: Some(f.clone()),
            parts: Vec::new(),
        });
    }
    let mut claimed: BTreeSet<Point> = BTreeSet::new();
    let mut parts = Vec::new();
    for j in 0..a.l {
        for m in nonzero.iter().filter(|m| a.vector_valuation(m) == j) {
            if claimed.contains(*m) {
                continue;
            }
            let line = LevelLine::spanned(&a, m);
            let mut set: BTreeSet<Point> = nonzero
                .iter()
                .filter(|x| !claimed.contains(**x) && line.contains(&a, x))
                .map(|x| (*x).clone())
                .collect();
            if parts.is_empty() {
                set.insert(a.zero());
            }
            claimed.extend(set.iter().cloned());
            let part = inverse_mod(&spectrum.restrict(&set));
            if f.is_rational() && !part.is_rational() {
                return Err(Error::InvariantViolation(format!(
                    "part on l_{:?} is not rational",
                    line.generator().coords()
                )));
            }
            parts.push(RingPart {
                line,
                function: part,
            });
        }
    }
    Ok(MultiscaleDecomposition {
        ambient: a,
        constant: None,
        parts,
    })
}

#[cfg(test)]
mod tests;
