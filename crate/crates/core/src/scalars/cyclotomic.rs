use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::is_prime;
use crate::error::{Error, Result};

use super::Rational;

/// An element of `Q(xi)`, `xi = exp(2 pi i / p)`, on the power basis
/// `1, xi, ..., xi^(p-2)`. The representation is unique, so `is_zero` is an
/// exact test.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    p: u64,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    pub fn new(p: u64, coeffs: Vec<Rational>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if coeffs.len() != p as usize - 1 {
            return Err(Error::Schema(vec![format!(
                "cyclotomic value for p={p} needs {} coefficients, got {}",
                p - 1,
                coeffs.len()
            )]));
        }
        Ok(Cyclotomic { p, coeffs })
    }

    /// Builds from the redundant representation `sum_{j<p} r[j] xi^j`,
    /// reducing with `xi^(p-1) = -(1 + xi + ... + xi^(p-2))`.
    pub fn from_redundant(p: u64, mut r: Vec<Rational>) -> Self {
        debug_assert_eq!(r.len(), p as usize);
        let top = r.pop().expect("p >= 2");
        if !top.is_zero() {
            for c in r.iter_mut() {
                *c -= &top;
            }
        }
        Cyclotomic { p, coeffs: r }
    }

    pub fn zero(p: u64) -> Self {
        Cyclotomic {
            p,
            coeffs: vec![Rational::zero(); p as usize - 1],
        }
    }

    pub fn from_rational(p: u64, r: Rational) -> Self {
        let mut z = Cyclotomic::zero(p);
        z.coeffs[0] = r;
        z
    }

    pub fn one(p: u64) -> Self {
        Cyclotomic::from_rational(p, Rational::from_integer(1.into()))
    }

    /// `xi^e` for any integer exponent.
    pub fn xi_pow(p: u64, e: i64) -> Self {
        let mut r = vec![Rational::zero(); p as usize];
        r[e.rem_euclid(p as i64) as usize] = Rational::from_integer(1.into());
        Cyclotomic::from_redundant(p, r)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value when every non-constant coefficient vanishes.
    pub fn rational_part(&self) -> Option<Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    fn check(&self, other: &Cyclotomic) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::ConductorMismatch {
                left: self.p,
                right: other.p,
            })
        }
    }

    pub fn try_add(&self, other: &Cyclotomic) -> Result<Cyclotomic> {
        self.check(other)?;
        Ok(Cyclotomic {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Cyclotomic) -> Result<Cyclotomic> {
        self.check(other)?;
        Ok(Cyclotomic {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn try_mul(&self, other: &Cyclotomic) -> Result<Cyclotomic> {
        self.check(other)?;
        let p = self.p as usize;
        let mut r = vec![Rational::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    r[(i + j) % p] += a * b;
                }
            }
        }
        Ok(Cyclotomic::from_redundant(self.p, r))
    }

    pub fn scale(&self, k: &Rational) -> Cyclotomic {
        Cyclotomic {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Multiplication by `xi^e`.
    pub fn mul_xi_pow(&self, e: i64) -> Cyclotomic {
        let p = self.p as usize;
        let shift = e.rem_euclid(p as i64) as usize;
        let mut r = vec![Rational::zero(); p];
        for (j, c) in self.coeffs.iter().enumerate() {
            r[(j + shift) % p] = c.clone();
        }
        Cyclotomic::from_redundant(self.p, r)
    }

    /// The Galois automorphism `g_r : xi -> xi^r`, `1 <= r <= p - 1`.
    pub fn galois(&self, r: u64) -> Result<Cyclotomic> {
        if r == 0 || r >= self.p {
            return Err(Error::Domain(format!(
                "Galois index {r} outside [1, {}]",
                self.p - 1
            )));
        }
        let p = self.p as usize;
        let mut out = vec![Rational::zero(); p];
        for (j, c) in self.coeffs.iter().enumerate() {
            out[j * r as usize % p] += c;
        }
        Ok(Cyclotomic::from_redundant(self.p, out))
    }

    /// Complex conjugation, i.e. `g_{p-1}`.
    pub fn conj(&self) -> Cyclotomic {
        self.galois(self.p - 1).expect("p - 1 is a valid index")
    }

    /// Image under the embedding `xi -> exp(2 pi i / p)`.
    pub fn embed(&self) -> Complex64 {
        let step = std::f64::consts::TAU / self.p as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), step * j as f64))
            .sum()
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})ξ")?,
                _ => write!(f, "({c})ξ^{j}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

// Operator forms panic on conductor mismatch; use the `try_` methods when
// operands may come from different fields.
impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.try_add(rhs).expect("cyclotomic conductor mismatch")
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.try_sub(rhs).expect("cyclotomic conductor mismatch")
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.try_mul(rhs).expect("cyclotomic conductor mismatch")
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}
