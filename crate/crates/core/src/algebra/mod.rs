//! Points, lines through the origin, hyperplanes and subspaces of `Z_p^d`.
//!
//! Points are stored as residue vectors and indexed lexicographically:
//! `index(x) = sum_i x[i] * p^(d-1-i)`. Every dense array in the crate uses
//! this order.

mod subspace;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use subspace::{
    avoid_lines_subspace, enumerate_all_subspaces, enumerate_subspaces, gaussian_binomial,
    AffineSubspace, Subspace,
};

/// Largest grid (number of points) any dense routine will allocate.
pub const MAX_GRID_POINTS: usize = 1 << 24;

/// Largest number of objects an enumeration routine will produce.
pub const MAX_ENUMERATION: usize = 1 << 22;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut f = 3u64;
    while f.saturating_mul(f) <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = (base % modulus) as u128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p), "no inverse of 0 mod {p}");
    pow_mod(a, p - 2, p)
}

/// The space `Z_p^d` for a prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ambient {
    p: u64,
    d: usize,
    size: usize,
}

impl Ambient {
    pub fn new(p: u64, d: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if d == 0 {
            return Err(Error::ZeroDimension);
        }
        let size = checked_grid_size(p, d)?;
        Ok(Ambient { p, d, size })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of points, `p^d`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of lines through the origin, `(p^d - 1) / (p - 1)`.
    pub fn line_count(&self) -> usize {
        (self.size - 1) / (self.p as usize - 1)
    }

    pub fn zero(&self) -> Point {
        Point(vec![0; self.d])
    }

    pub fn index(&self, x: &Point) -> usize {
        debug_assert_eq!(x.dim(), self.d);
        x.0.iter()
            .fold(0usize, |acc, &c| acc * self.p as usize + c as usize)
    }

    pub fn point(&self, mut index: usize) -> Point {
        let p = self.p as usize;
        let mut coords = vec![0u64; self.d];
        for slot in coords.iter_mut().rev() {
            *slot = (index % p) as u64;
            index /= p;
        }
        Point(coords)
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.size).map(move |i| self.point(i))
    }

    /// Reduces arbitrary integer coordinates into a point of this space.
    pub fn point_from(&self, coords: &[i64]) -> Result<Point> {
        if coords.len() != self.d {
            return Err(Error::Dimension(format!(
                "expected {} coordinates, got {}",
                self.d,
                coords.len()
            )));
        }
        let p = self.p as i64;
        Ok(Point(coords.iter().map(|c| c.rem_euclid(p) as u64).collect()))
    }

    pub fn contains(&self, x: &Point) -> bool {
        x.dim() == self.d && x.0.iter().all(|&c| c < self.p)
    }

    pub fn dot(&self, a: &Point, b: &Point) -> u64 {
        let p = self.p as u128;
        (a.0.iter()
            .zip(&b.0)
            .map(|(&x, &y)| x as u128 * y as u128 % p)
            .sum::<u128>()
            % p) as u64
    }

    pub fn add(&self, a: &Point, b: &Point) -> Point {
        Point(a.0.iter().zip(&b.0).map(|(&x, &y)| (x + y) % self.p).collect())
    }

    pub fn sub(&self, a: &Point, b: &Point) -> Point {
        Point(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| (x + self.p - y) % self.p)
                .collect(),
        )
    }

    pub fn neg(&self, a: &Point) -> Point {
        Point(a.0.iter().map(|&x| (self.p - x) % self.p).collect())
    }

    pub fn scale(&self, t: u64, a: &Point) -> Point {
        let p = self.p as u128;
        Point(
            a.0.iter()
                .map(|&x| ((t as u128 % p) * x as u128 % p) as u64)
                .collect(),
        )
    }

    /// Sum of squares of the coordinates, mod p.
    pub fn norm_squared(&self, x: &Point) -> u64 {
        self.dot(x, x)
    }
}

fn checked_grid_size(base: u64, d: usize) -> Result<usize> {
    let exp = u32::try_from(d).map_err(|_| Error::Capacity(format!("dimension {d}")))?;
    let size = (base as usize)
        .checked_pow(exp)
        .filter(|&n| n <= MAX_GRID_POINTS)
        .ok_or_else(|| {
            Error::Capacity(format!(
                "{base}^{d} points exceeds the limit of {MAX_GRID_POINTS}"
            ))
        })?;
    Ok(size)
}

pub(crate) fn grid_size(base: u64, d: usize) -> Result<usize> {
    checked_grid_size(base, d)
}

/// A point of `Z_p^d`, serialized as a JSON array of residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<u64>);

impl Point {
    pub fn new(coords: Vec<u64>) -> Self {
        Point(coords)
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u64>> for Point {
    fn from(v: Vec<u64>) -> Self {
        Point(v)
    }
}

/// A line through the origin, identified by its canonical representative:
/// the nonzero multiple whose first nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjectiveLine {
    rep: Point,
}

impl ProjectiveLine {
    pub fn through(ambient: &Ambient, x: &Point) -> Result<Self> {
        let lead = x.0.iter().copied().find(|&c| c != 0).ok_or(Error::ZeroDirection)?;
        let inv = inv_mod(lead, ambient.p);
        Ok(ProjectiveLine {
            rep: ambient.scale(inv, x),
        })
    }

    pub fn rep(&self) -> &Point {
        &self.rep
    }

    /// The `p - 1` nonzero points `t * rep`, ordered by `t`.
    pub fn punctured_points(&self, ambient: &Ambient) -> Vec<Point> {
        (1..ambient.p).map(|t| ambient.scale(t, &self.rep)).collect()
    }

    pub fn contains(&self, ambient: &Ambient, x: &Point) -> bool {
        if x.is_zero() {
            return true;
        }
        ProjectiveLine::through(ambient, x).is_ok_and(|l| l == *self)
    }

    /// The multiplier `t` with `x = t * rep`, for nonzero `x` on the line.
    pub fn scalar_of(&self, ambient: &Ambient, x: &Point) -> Option<u64> {
        let i = self.rep.0.iter().position(|&c| c != 0)?;
        let t = x.0[i];
        (ambient.scale(t, &self.rep) == *x).then_some(t)
    }
}

impl fmt::Display for ProjectiveLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line{}", self.rep)
    }
}

/// All lines through the origin, in lexicographic order of representatives.
pub fn enumerate_lines(ambient: &Ambient) -> Result<Vec<ProjectiveLine>> {
    let count = ambient.line_count();
    if count > MAX_ENUMERATION {
        return Err(Error::Capacity(format!("{count} lines")));
    }
    let lines: Vec<_> = ambient
        .points()
        .filter(|x| x.0.iter().copied().find(|&c| c != 0) == Some(1))
        .map(|rep| ProjectiveLine { rep })
        .collect();
    debug_assert_eq!(lines.len(), count);
    Ok(lines)
}

/// For every point index, the position of its line in [`enumerate_lines`]
/// order; `None` for the origin.
pub fn line_index_table(ambient: &Ambient, lines: &[ProjectiveLine]) -> Vec<Option<usize>> {
    let mut table = vec![None; ambient.size()];
    for (li, line) in lines.iter().enumerate() {
        for x in line.punctured_points(ambient) {
            table[ambient.index(&x)] = Some(li);
        }
    }
    table
}

/// The affine hyperplane `H_{s,t} = { x : x . s = t }`.
pub fn hyperplane_points(ambient: &Ambient, s: &Point, t: u64) -> Result<Vec<Point>> {
    if s.is_zero() {
        return Err(Error::ZeroDirection);
    }
    let t = t % ambient.p;
    Ok(ambient.points().filter(|x| ambient.dot(x, s) == t).collect())
}

/// True iff every point is a scalar multiple of some member of `set`.
pub fn is_compass_set(set: &[Point], ambient: &Ambient) -> bool {
    if set.is_empty() {
        return false;
    }
    let covered: HashSet<ProjectiveLine> = set
        .iter()
        .filter(|x| !x.is_zero())
        .filter_map(|x| ProjectiveLine::through(ambient, x).ok())
        .collect();
    covered.len() == ambient.line_count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadraticClass {
    Zero,
    Residue,
    NonResidue,
}

/// Euler's criterion for the quadratic character of `a` mod `p`.
pub fn quadratic_class(a: u64, p: u64) -> QuadraticClass {
    let a = a % p;
    if a == 0 {
        QuadraticClass::Zero
    } else if p == 2 || pow_mod(a, (p - 1) / 2, p) == 1 {
        QuadraticClass::Residue
    } else {
        QuadraticClass::NonResidue
    }
}

/// The smaller square root of `-1` mod `p`; requires `p = 1 mod 4`.
pub fn sqrt_minus_one(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 4 != 1 {
        return Err(Error::Domain(format!("-1 is not a square mod {p}")));
    }
    (1..p)
        .find(|&i| (i as u128 * i as u128 % p as u128) as u64 == p - 1)
        .ok_or_else(|| Error::Domain(format!("no square root of -1 mod {p}")))
}

/// Smallest quadratic non-residue mod an odd prime.
pub fn least_non_residue(p: u64) -> Result<u64> {
    (2..p)
        .find(|&b| quadratic_class(b, p) == QuadraticClass::NonResidue)
        .ok_or_else(|| Error::Domain(format!("no quadratic non-residue mod {p}")))
}
