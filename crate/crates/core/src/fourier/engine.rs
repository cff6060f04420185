//! Row-column (axis-pass) evaluation of multidimensional character sums.
//!
//! Values live in the redundant basis `1, w, ..., w^(n-1)` of `Q(w)` with
//! `w` a primitive `n`-th root of unity, so multiplication by a root power
//! is a cyclic shift. Denominators are cleared up front; the passes run on
//! `i128` and fall back to big integers if any addition overflows.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::scalars::Rational;

trait Accumulator: Clone {
    fn zero() -> Self;
    /// `self += other`; false on overflow.
    fn accumulate(&mut self, other: &Self) -> bool;
}

impl Accumulator for i128 {
    fn zero() -> Self {
        0
    }
    fn accumulate(&mut self, other: &Self) -> bool {
        match self.checked_add(*other) {
            Some(v) => {
                *self = v;
                true
            }
            None => false,
        }
    }
}

impl Accumulator for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn accumulate(&mut self, other: &Self) -> bool {
        *self += other;
        true
    }
}

/// One full set of axis passes over `data` (`n^d` points times `n` redundant
/// coefficients). Computes `out(m) = sum_x w^(sign * x.m) in(x)`.
fn passes<T: Accumulator>(n: usize, d: usize, mut data: Vec<T>, sign: i64) -> Option<Vec<T>> {
    let size = n.pow(d as u32);
    let mut fiber_in = vec![T::zero(); n * n];
    let mut fiber_out = vec![T::zero(); n * n];
    for axis in 0..d {
        let stride = n.pow((d - 1 - axis) as u32);
        for base in (0..size).filter(|b| (b / stride).is_multiple_of(n)) {
            for j in 0..n {
                let at = (base + j * stride) * n;
                fiber_in[j * n..(j + 1) * n].clone_from_slice(&data[at..at + n]);
            }
            for k in 0..n {
                let out = &mut fiber_out[k * n..(k + 1) * n];
                out.iter_mut().for_each(|c| *c = T::zero());
                for j in 0..n {
                    let shift = (sign * (j * k) as i64).rem_euclid(n as i64) as usize;
                    let src = &fiber_in[j * n..(j + 1) * n];
                    for (i, c) in src.iter().enumerate() {
                        if !out[(i + shift) % n].accumulate(c) {
                            return None;
                        }
                    }
                }
            }
            for k in 0..n {
                let at = (base + k * stride) * n;
                data[at..at + n].clone_from_slice(&fiber_out[k * n..(k + 1) * n]);
            }
        }
    }
    Some(data)
}

/// Unnormalized exact transform: input and output are per-point redundant
/// coefficient vectors of length `n`.
pub(crate) fn exact_transform(
    n: usize,
    d: usize,
    values: &[Vec<Rational>],
    sign: i64,
) -> Vec<Vec<Rational>> {
    let denom = values
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let numerators: Vec<BigInt> = values
        .iter()
        .flatten()
        .map(|r| r.numer() * (&denom / r.denom()))
        .collect();

    let small: Option<Vec<i128>> = numerators.iter().map(ToPrimitive::to_i128).collect();
    let ints: Vec<BigInt> = match small.and_then(|v| passes(n, d, v, sign)) {
        Some(v) => v.into_iter().map(BigInt::from).collect(),
        None => passes(n, d, numerators, sign).expect("big integers never overflow"),
    };
    ints.chunks(n)
        .map(|c| {
            c.iter()
                .map(|v| Rational::new(v.clone(), denom.clone()))
                .collect()
        })
        .collect()
}

/// Unnormalized complex transform `out(m) = sum_x exp(sign 2 pi i x.m / n) in(x)`.
pub(crate) fn complex_transform(n: usize, d: usize, mut data: Vec<Complex64>, sign: i64) -> Vec<Complex64> {
    let size = n.pow(d as u32);
    let roots: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.0, sign as f64 * std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    let mut fiber = vec![Complex64::zero(); n];
    for axis in 0..d {
        let stride = n.pow((d - 1 - axis) as u32);
        for base in (0..size).filter(|b| (b / stride).is_multiple_of(n)) {
            for (j, slot) in fiber.iter_mut().enumerate() {
                *slot = data[base + j * stride];
            }
            for k in 0..n {
                data[base + k * stride] = fiber
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v * roots[(j * k) % n])
                    .sum();
            }
        }
    }
    data
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{int, rational};

    #[test]
    fn falls_back_to_big_integers_on_overflow() {
        let huge = Rational::from_integer(BigInt::from(i128::MAX / 2));
        let values = vec![
            vec![huge.clone(), int(0), int(0)],
            vec![huge.clone(), int(0), int(0)],
            vec![huge.clone(), int(0), int(0)],
        ];
        let out = exact_transform(3, 1, &values, -1);
        // At frequency 0 all three add up.
        assert_eq!(out[0][0], &huge * int(3));
    }

    #[test]
    fn clears_denominators() {
        let values = vec![vec![rational(1, 2), int(0)], vec![rational(1, 3), int(0)]];
        let out = exact_transform(2, 1, &values, -1);
        // n = 2: w = -1 in redundant basis (1, w).
        assert_eq!(out[0], vec![rational(5, 6), int(0)]);
        assert_eq!(out[1], vec![rational(1, 2), rational(1, 3)]);
    }
}
