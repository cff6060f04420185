//! The normalized Fourier transform on `Z_p^d`:
//!
//! ```text
//! forward(f)(m) = p^-d * sum_x chi(-x.m) f(x)        chi(u) = exp(2 pi i u / p)
//! inverse(F)(x) =        sum_m chi( x.m) F(m)
//! ```
//!
//! The forward side carries the whole normalization, so the convolution
//! theorem reads `forward(f * g) = p^d forward(f) forward(g)`.
//!
//! Exact inputs (rational or cyclotomic) produce exact cyclotomic spectra;
//! complex inputs go through the floating-point path.

mod engine;
mod grid;

use num_traits::Zero;

use crate::algebra::{Ambient, Point, Subspace};
use crate::error::Result;
use crate::scalars::{rational_pow, ComplexApprox, Cyclotomic, Rational, Scalar, ScalarKind};

pub(crate) use engine::{complex_transform, exact_transform};
pub use grid::{GridFunction, Spectrum};
pub(crate) use grid::zero_of;

fn redundant(v: &Scalar, p: u64) -> Vec<Rational> {
    let mut r = vec![Rational::zero(); p as usize];
    match v {
        Scalar::Rational(q) => r[0] = q.clone(),
        Scalar::Cyclotomic(c) => r[..p as usize - 1].clone_from_slice(c.coeffs()),
        Scalar::Complex(_) => unreachable!("exact path only"),
    }
    r
}

fn complex_tol(f: &GridFunction) -> f64 {
    f.values()
        .iter()
        .find_map(|v| match v {
            Scalar::Complex(c) => Some(c.tol),
            _ => None,
        })
        .unwrap_or(crate::scalars::DEFAULT_TOLERANCE)
}

fn transform(f: &GridFunction, sign: i64, scale: &Rational) -> GridFunction {
    let a = *f.ambient();
    let p = a.p();
    if f.is_exact() {
        let input: Vec<Vec<Rational>> = f.values().iter().map(|v| redundant(v, p)).collect();
        let out = exact_transform(p as usize, a.d(), &input, sign);
        let values = out
            .into_iter()
            .map(|r| Scalar::Cyclotomic(Cyclotomic::from_redundant(p, r).scale(scale)))
            .collect();
        GridFunction::from_parts(a, ScalarKind::Cyclotomic, values)
    } else {
        let tol = complex_tol(f);
        let k = num_traits::ToPrimitive::to_f64(scale).unwrap_or(f64::NAN);
        let input = f.values().iter().map(Scalar::to_complex).collect();
        let values = complex_transform(p as usize, a.d(), input, sign)
            .into_iter()
            .map(|z| Scalar::Complex(ComplexApprox::with_tol(z * k, tol)))
            .collect();
        GridFunction::from_parts(a, ScalarKind::Complex, values)
    }
}

/// Forward transform by `d` axis passes of length-`p` transforms.
pub fn forward(f: &GridFunction) -> Spectrum {
    let a = f.ambient();
    Spectrum::from_grid(transform(f, -1, &rational_pow(a.p(), -(a.d() as i64))))
}

/// Inverse transform; the result is demoted to rational kind when every
/// value cancels to an exact rational.
pub fn inverse(spectrum: &Spectrum) -> GridFunction {
    transform(spectrum.grid(), 1, &Rational::from_integer(1.into())).demote()
}

/// Reference forward transform: the direct `p^2d` double sum, evaluated with
/// power-basis cyclotomic multiplication. Kept for differential testing.
pub fn forward_naive(f: &GridFunction) -> Spectrum {
    let a = *f.ambient();
    let p = a.p();
    let norm = rational_pow(p, -(a.d() as i64));
    let values = if f.is_exact() {
        let vals: Vec<Cyclotomic> = f
            .values()
            .iter()
            .map(|v| match v.promote(ScalarKind::Cyclotomic, p) {
                Scalar::Cyclotomic(c) => c,
                _ => unreachable!(),
            })
            .collect();
        a.points()
            .map(|m| {
                let mut acc = Cyclotomic::zero(p);
                for (x, v) in a.points().zip(&vals) {
                    if v.is_zero() {
                        continue;
                    }
                    let root = Cyclotomic::xi_pow(p, -(a.dot(&x, &m) as i64));
                    acc = &acc + &(v * &root);
                }
                Scalar::Cyclotomic(acc.scale(&norm))
            })
            .collect()
    } else {
        let tol = complex_tol(f);
        let k = num_traits::ToPrimitive::to_f64(&norm).unwrap_or(f64::NAN);
        a.points()
            .map(|m| {
                let sum: num_complex::Complex64 = a
                    .points()
                    .zip(f.values())
                    .map(|(x, v)| {
                        let angle = -std::f64::consts::TAU * a.dot(&x, &m) as f64 / p as f64;
                        v.to_complex() * num_complex::Complex64::from_polar(1.0, angle)
                    })
                    .sum();
                Scalar::Complex(ComplexApprox::with_tol(sum * k, tol))
            })
            .collect()
    };
    let kind = if f.is_exact() {
        ScalarKind::Cyclotomic
    } else {
        ScalarKind::Complex
    };
    Spectrum::from_grid(GridFunction::from_parts(a, kind, values))
}

/// `(f * g)(x) = sum_y f(y) g(x - y)`.
pub fn convolve(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    // Checks the ambient and settles the common kind.
    let kind = f.add(g)?.kind();
    let a = *f.ambient();
    let p = a.p();
    let fv = f.promote(kind);
    let gv = g.promote(kind);
    let values = a
        .points()
        .map(|x| {
            a.points().fold(zero_of(kind, p), |acc, y| {
                let fy = fv.value(&y);
                if fy.is_zero() {
                    acc
                } else {
                    &acc + &(fy * gv.value(&a.sub(&x, &y)))
                }
            })
        })
        .map(|v| v.promote(kind, p))
        .collect();
    Ok(GridFunction::from_parts(a, kind, values))
}

/// The phase function `phi_x(m) = chi(-x.m)`.
pub fn phase(ambient: &Ambient, x: &Point) -> GridFunction {
    let p = ambient.p();
    let values = ambient
        .points()
        .map(|m| Scalar::Cyclotomic(Cyclotomic::xi_pow(p, -(ambient.dot(x, &m) as i64))))
        .collect();
    GridFunction::from_parts(*ambient, ScalarKind::Cyclotomic, values)
}

/// Closed form `forward(1_V) = |V| / p^d * 1_{V^perp}`.
pub fn transform_subspace(v: &Subspace) -> Spectrum {
    let a = *v.ambient();
    transform_affine(v, &a.zero())
}

/// Closed form `forward(1_{V+x}) = |V| / p^d * phi_x * 1_{V^perp}`.
pub fn transform_affine(v: &Subspace, x: &Point) -> Spectrum {
    let a = *v.ambient();
    let p = a.p();
    let weight = rational_pow(p, v.dim() as i64 - a.d() as i64);
    let perp = v.perp().membership();
    let values = a
        .points()
        .zip(perp)
        .map(|(m, inside)| {
            let c = if inside {
                Cyclotomic::xi_pow(p, -(a.dot(x, &m) as i64)).scale(&weight)
            } else {
                Cyclotomic::zero(p)
            };
            Scalar::Cyclotomic(c)
        })
        .collect();
    Spectrum::from_grid(GridFunction::from_parts(a, ScalarKind::Cyclotomic, values))
}
