use std::fmt;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::is_prime;
use crate::error::{Error, Result};
use crate::scalars::Rational;

/// An element of `Q(zeta)`, `zeta = exp(2 pi i / p^l)`, on the power basis
/// `1, zeta, ..., zeta^(phi(p^l) - 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicL {
    p: u64,
    l: u32,
    coeffs: Vec<Rational>,
}

fn phi(p: u64, l: u32) -> usize {
    (p.pow(l - 1) * (p - 1)) as usize
}

impl CyclotomicL {
    pub fn new(p: u64, l: u32, coeffs: Vec<Rational>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if l == 0 {
            return Err(Error::Domain("modulus exponent must be at least 1".into()));
        }
        let n = phi(p, l);
        if coeffs.len() != n {
            return Err(Error::Schema(vec![format!(
                "cyclotomic value for p={p}, l={l} needs {n} coefficients, got {}",
                coeffs.len()
            )]));
        }
        Ok(CyclotomicL { p, l, coeffs })
    }

    /// Reduces `sum_{j < p^l} r[j] zeta^j` top-down with
    /// `zeta^((p-1) p^(l-1)) = -sum_{k=0}^{p-2} zeta^(k p^(l-1))`.
    pub fn from_redundant(p: u64, l: u32, mut r: Vec<Rational>) -> Self {
        let q = p.pow(l) as usize;
        debug_assert_eq!(r.len(), q);
        let step = p.pow(l - 1) as usize;
        let n = phi(p, l);
        for e in (n..q).rev() {
            let c = std::mem::take(&mut r[e]);
            if c.is_zero() {
                continue;
            }
            let base = e - n;
            for k in 0..p as usize - 1 {
                r[base + k * step] -= &c;
            }
        }
        r.truncate(n);
        CyclotomicL { p, l, coeffs: r }
    }

    pub fn zero(p: u64, l: u32) -> Self {
        CyclotomicL {
            p,
            l,
            coeffs: vec![Rational::zero(); phi(p, l)],
        }
    }

    pub fn from_rational(p: u64, l: u32, r: Rational) -> Self {
        let mut z = CyclotomicL::zero(p, l);
        z.coeffs[0] = r;
        z
    }

    pub fn zeta_pow(p: u64, l: u32, e: i64) -> Self {
        let q = p.pow(l);
        let mut r = vec![Rational::zero(); q as usize];
        r[e.rem_euclid(q as i64) as usize] = Rational::from_integer(1.into());
        CyclotomicL::from_redundant(p, l, r)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficients padded with zeros to length `p^l`.
    pub(crate) fn redundant(&self) -> Vec<Rational> {
        let mut r = self.coeffs.clone();
        r.resize(self.p.pow(self.l) as usize, Rational::zero());
        r
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn rational_part(&self) -> Option<Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }

    fn check(&self, other: &CyclotomicL) -> Result<()> {
        if (self.p, self.l) == (other.p, other.l) {
            Ok(())
        } else {
            Err(Error::ConductorMismatch {
                left: self.p.pow(self.l),
                right: other.p.pow(other.l),
            })
        }
    }

    pub fn try_add(&self, other: &CyclotomicL) -> Result<CyclotomicL> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CyclotomicL { coeffs, ..*self })
    }

    pub fn try_sub(&self, other: &CyclotomicL) -> Result<CyclotomicL> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CyclotomicL { coeffs, ..*self })
    }

    pub fn try_mul(&self, other: &CyclotomicL) -> Result<CyclotomicL> {
        self.check(other)?;
        let q = self.p.pow(self.l) as usize;
        let mut r = vec![Rational::zero(); q];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                r[(i + j) % q] += a * b;
            }
        }
        Ok(CyclotomicL::from_redundant(self.p, self.l, r))
    }

    pub fn scale(&self, k: &Rational) -> CyclotomicL {
        let coeffs = self.coeffs.iter().map(|c| c * k).collect();
        CyclotomicL { coeffs, ..*self }
    }

    pub fn embed(&self) -> Complex64 {
        let step = std::f64::consts::TAU / self.p.pow(self.l) as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), step * j as f64))
            .sum()
    }
}

impl fmt::Display for CyclotomicL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| match j {
                0 => format!("{c}"),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{j}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rational};
    use crate::scalars::Cyclotomic;

    #[test]
    fn level_one_matches_prime_field() {
        for p in [2, 3, 5, 7] {
            for e in -3..10 {
                let a = CyclotomicL::zeta_pow(p, 1, e);
                let b = Cyclotomic::xi_pow(p, e);
                assert_eq!(a.coeffs(), b.coeffs());
            }
        }
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for (p, l) in [(2u64, 2u32), (2, 3), (3, 2)] {
            let q = p.pow(l) as i64;
            let total = (0..q).fold(CyclotomicL::zero(p, l), |acc, e| {
                acc.try_add(&CyclotomicL::zeta_pow(p, l, e)).unwrap()
            });
            assert!(total.is_zero());
            // zeta^(q/p) is a primitive p-th root, so its powers sum to zero too.
            let step = q / p as i64;
            let sub = (0..p as i64).fold(CyclotomicL::zero(p, l), |acc, k| {
                acc.try_add(&CyclotomicL::zeta_pow(p, l, k * step)).unwrap()
            });
            assert!(sub.is_zero());
        }
    }

    #[test]
    fn zeta_mod_four_is_i() {
        let i = CyclotomicL::zeta_pow(2, 2, 1);
        assert_eq!(i.try_mul(&i).unwrap(), CyclotomicL::from_rational(2, 2, int(-1)));
        let z = i.scale(&rational(3, 2));
        assert!((z.embed() - Complex64::new(0.0, 1.5)).norm() < 1e-12);
    }

    #[test]
    fn multiplication_matches_embedding() {
        let p = 3;
        let l = 2;
        let a = CyclotomicL::new(p, l, (0..6).map(|k| rational(k - 2, 3)).collect()).unwrap();
        let b = CyclotomicL::new(p, l, (0..6).map(|k| rational(2 * k + 1, 5)).collect()).unwrap();
        let prod = a.try_mul(&b).unwrap();
        assert!((prod.embed() - a.embed() * b.embed()).norm() < 1e-9);
        assert!(CyclotomicL::new(p, l, vec![int(0); 5]).is_err());
        assert!(a.try_add(&CyclotomicL::zero(2, 2)).is_err());
    }
}
