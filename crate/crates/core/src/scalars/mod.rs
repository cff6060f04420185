//! Exact and approximate scalars: big rationals, the cyclotomic field
//! `Q(xi_p)`, and a tolerance-carrying complex approximation.

mod cyclotomic;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use cyclotomic::Cyclotomic;

pub type Rational = num_rational::BigRational;

/// Default tolerance for every approximate comparison in the crate.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p^e` for a possibly negative exponent.
pub fn rational_pow(p: u64, e: i64) -> Rational {
    let base = Rational::from_integer(BigInt::from(p));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

/// Parses `"a/b"` or `"a"`; the result is always normalized.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Schema(vec![format!("invalid rational {s:?}")]);
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Rank of a rational matrix given as rows, by exact Gaussian elimination.
pub fn rational_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][c].recip();
        let lead: Vec<Rational> = m[rank].iter().map(|v| v * &inv).collect();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let k = row[c].clone();
                for (x, y) in row.iter_mut().zip(&lead) {
                    *x -= &k * y;
                }
            }
        }
        m[rank] = lead;
        rank += 1;
    }
    rank
}

/// A complex double with its own comparison tolerance.
#[derive(Debug, Clone, Copy)]
pub struct ComplexApprox {
    pub value: Complex64,
    pub tol: f64,
}

impl ComplexApprox {
    pub fn new(re: f64, im: f64) -> Self {
        ComplexApprox {
            value: Complex64::new(re, im),
            tol: DEFAULT_TOLERANCE,
        }
    }

    pub fn with_tol(value: Complex64, tol: f64) -> Self {
        ComplexApprox { value, tol }
    }

    pub fn is_finite(&self) -> bool {
        self.value.re.is_finite() && self.value.im.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.value.re.abs() <= self.tol && self.value.im.abs() <= self.tol
    }
}

impl PartialEq for ComplexApprox {
    fn eq(&self, other: &Self) -> bool {
        let tol = self.tol.max(other.tol);
        (self.value.re - other.value.re).abs() <= tol && (self.value.im - other.value.im).abs() <= tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScalarKind {
    Rational,
    Cyclotomic,
    Complex,
}

impl ScalarKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScalarKind::Rational => "rational",
            ScalarKind::Cyclotomic => "cyclotomic",
            ScalarKind::Complex => "complex",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(ScalarKind::Rational),
            "cyclotomic" => Ok(ScalarKind::Cyclotomic),
            "complex" => Ok(ScalarKind::Complex),
            other => Err(Error::Schema(vec![format!("unknown kind {other:?}")])),
        }
    }
}

/// A value of one of the three scalar kinds. Mixed arithmetic promotes to
/// the larger kind (rational < cyclotomic < complex).
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Rational(Rational),
    Cyclotomic(Cyclotomic),
    Complex(ComplexApprox),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(Rational::zero())
    }

    pub fn kind(&self) -> ScalarKind {
        match self {
            Scalar::Rational(_) => ScalarKind::Rational,
            Scalar::Cyclotomic(_) => ScalarKind::Cyclotomic,
            Scalar::Complex(_) => ScalarKind::Complex,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(int(n))
    }

    /// Exact zero test for exact kinds, tolerance test for complex.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Cyclotomic(c) => c.is_zero(),
            Scalar::Complex(c) => c.is_zero(),
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Scalar::Complex(_))
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Rational(r) => Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0),
            Scalar::Cyclotomic(c) => c.embed(),
            Scalar::Complex(c) => c.value,
        }
    }

    fn tol(&self) -> f64 {
        match self {
            Scalar::Complex(c) => c.tol,
            _ => DEFAULT_TOLERANCE,
        }
    }

    /// The rational value if this scalar is exactly rational.
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Scalar::Rational(r) => Some(r.clone()),
            Scalar::Cyclotomic(c) => c.rational_part(),
            Scalar::Complex(_) => None,
        }
    }

    /// Demotes a cyclotomic value to rational when it is exactly rational.
    pub fn demote(self) -> Scalar {
        match self {
            Scalar::Cyclotomic(c) => match c.rational_part() {
                Some(r) => Scalar::Rational(r),
                None => Scalar::Cyclotomic(c),
            },
            other => other,
        }
    }

    /// Converts to `kind`; `p` is the conductor used when promoting to
    /// cyclotomic. Demotion is not performed here.
    pub fn promote(&self, kind: ScalarKind, p: u64) -> Scalar {
        match (self, kind) {
            (Scalar::Rational(r), ScalarKind::Cyclotomic) => {
                Scalar::Cyclotomic(Cyclotomic::from_rational(p, r.clone()))
            }
            (s, ScalarKind::Complex) if s.is_exact() => {
                Scalar::Complex(ComplexApprox::with_tol(s.to_complex(), DEFAULT_TOLERANCE))
            }
            (s, _) => s.clone(),
        }
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r.clone()),
            Scalar::Cyclotomic(c) => Scalar::Cyclotomic(c.conj()),
            Scalar::Complex(c) => Scalar::Complex(ComplexApprox::with_tol(c.value.conj(), c.tol)),
        }
    }

    pub fn scale(&self, k: &Rational) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r * k),
            Scalar::Cyclotomic(c) => Scalar::Cyclotomic(c.scale(k)),
            Scalar::Complex(c) => Scalar::Complex(ComplexApprox::with_tol(
                c.value * k.to_f64().unwrap_or(f64::NAN),
                c.tol,
            )),
        }
    }

    /// Componentwise comparison: exact for exact kinds, tolerance otherwise.
    pub fn approx_eq(&self, other: &Scalar) -> bool {
        if self.is_exact() && other.is_exact() {
            (self - other).is_zero()
        } else {
            let tol = self.tol().max(other.tol());
            let d = self.to_complex() - other.to_complex();
            d.re.abs() <= tol && d.im.abs() <= tol
        }
    }

    fn binary(
        &self,
        rhs: &Scalar,
        rat: impl Fn(&Rational, &Rational) -> Rational,
        cyc: impl Fn(&Cyclotomic, &Cyclotomic) -> Cyclotomic,
        cplx: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(rat(a, b)),
            (Scalar::Cyclotomic(a), Scalar::Cyclotomic(b)) => Scalar::Cyclotomic(cyc(a, b)),
            (Scalar::Cyclotomic(a), Scalar::Rational(b)) => {
                Scalar::Cyclotomic(cyc(a, &Cyclotomic::from_rational(a.p(), b.clone())))
            }
            (Scalar::Rational(a), Scalar::Cyclotomic(b)) => {
                Scalar::Cyclotomic(cyc(&Cyclotomic::from_rational(b.p(), a.clone()), b))
            }
            (a, b) => Scalar::Complex(ComplexApprox::with_tol(
                cplx(a.to_complex(), b.to_complex()),
                a.tol().max(b.tol()),
            )),
        }
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rational(r)
    }
}

impl From<Cyclotomic> for Scalar {
    fn from(c: Cyclotomic) -> Self {
        Scalar::Cyclotomic(c)
    }
}

impl From<ComplexApprox> for Scalar {
    fn from(c: ComplexApprox) -> Self {
        Scalar::Complex(c)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a + b, |a, b| a + b, |a, b| a + b)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a - b, |a, b| a - b, |a, b| a - b)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a * b, |a, b| a * b, |a, b| a * b)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Cyclotomic(c) => Scalar::Cyclotomic(-c),
            Scalar::Complex(c) => Scalar::Complex(ComplexApprox::with_tol(-c.value, c.tol)),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Cyclotomic(c) => write!(f, "{c}"),
            Scalar::Complex(c) => write!(f, "{}{:+}i", c.value.re, c.value.im),
        }
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn rank_of_small_matrices() {
        let rows = vec![
            vec![int(1), int(2), int(3)],
            vec![int(2), int(4), int(6)],
            vec![int(0), rational(1, 2), int(1)],
        ];
        assert_eq!(rational_rank(&rows), 2);
        assert_eq!(rational_rank(&[]), 0);
        assert_eq!(rational_rank(&[vec![int(0), int(0)]]), 0);
    }

    use super::*;

    #[test]
    fn parse_and_normalize() {
        assert_eq!(parse_rational("2/4").unwrap(), rational(1, 2));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational("3/-6").unwrap(), rational(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(rational(6, -4).to_string(), "-3/2");
        assert_eq!(int(5).to_string(), "5");
    }

    #[test]
    fn powers() {
        assert_eq!(rational_pow(3, 2), int(9));
        assert_eq!(rational_pow(3, -2), rational(1, 9));
        assert_eq!(rational_pow(7, 0), int(1));
    }

    #[test]
    fn mixed_arithmetic_promotes() {
        let r = Scalar::from(rational(1, 2));
        let c = Scalar::from(Cyclotomic::xi_pow(3, 1));
        let s = &r + &c;
        assert_eq!(s.kind(), ScalarKind::Cyclotomic);
        let back = &s - &c;
        assert_eq!(back.clone().demote(), r);
        let z = Scalar::from(ComplexApprox::new(0.5, 0.0));
        assert_eq!((&r - &z).kind(), ScalarKind::Complex);
        assert!((&r - &z).is_zero());
        assert!(r.approx_eq(&z));
    }

    #[test]
    fn complex_tolerance() {
        let a = ComplexApprox::new(1.0, 0.0);
        let b = ComplexApprox::new(1.0 + 5e-10, 0.0);
        assert_eq!(a, b);
        let c = ComplexApprox::new(1.0 + 5e-9, 0.0);
        assert_ne!(a, c);
        let loose = ComplexApprox::with_tol(Complex64::new(1e-6, 0.0), 1e-5);
        assert!(loose.is_zero());
    }
}
