//! Eigenfunctions of the normalized transform built from a subspace and its
//! orthogonal complement, self-dual sets, and expansion of arbitrary
//! functions into conjugate-transform eigenfunctions.

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::algebra::{enumerate_subspaces, AffineSubspace, Ambient, Point, Subspace};
use crate::error::{Error, Result};
use crate::fourier::{forward, GridFunction};
use crate::scalars::{rational_pow, ComplexApprox, Cyclotomic, Rational, Scalar};
use crate::wavelets::{decompose, WaveletForm};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    /// `forward(g) = lambda g`.
    Plain,
    /// `forward(g) = lambda conj(g)`.
    Conjugate,
}

/// `p^(d/2 - k)`: exact when the exponent is an integer.
#[derive(Debug, Clone, PartialEq)]
pub enum Weight {
    Exact(Rational),
    Approx(f64),
}

impl Weight {
    fn new(p: u64, d: usize, k: usize) -> Weight {
        if d.is_multiple_of(2) {
            Weight::Exact(rational_pow(p, d as i64 / 2 - k as i64))
        } else {
            Weight::Approx((p as f64).powf(d as f64 / 2.0 - k as f64))
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Weight::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Weight::Approx(x) => *x,
        }
    }

    fn scalar(&self) -> Scalar {
        match self {
            Weight::Exact(r) => Scalar::Rational(r.clone()),
            Weight::Approx(x) => Scalar::Complex(ComplexApprox::new(*x, 0.0)),
        }
    }

    fn halved_inverse(&self) -> Scalar {
        match self {
            Weight::Exact(r) => Scalar::Rational((r * Rational::from_integer(2.into())).recip()),
            Weight::Approx(x) => Scalar::Complex(ComplexApprox::new(0.5 / x, 0.0)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub subspace: Subspace,
    pub shift: Point,
    pub weight: Weight,
    pub plus: GridFunction,
    pub minus: GridFunction,
    pub transform_kind: TransformKind,
    /// `minus` vanishes identically (`V + x` is a Lagrangian subspace).
    pub degenerate: bool,
}

impl EigenPair {
    /// `p^(-d/2)`.
    pub fn eigenvalue_magnitude(&self) -> f64 {
        let a = self.plus.ambient();
        (a.p() as f64).powf(-(a.d() as f64) / 2.0)
    }

    /// Signed eigenvalues of `plus` and `minus`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let l = self.eigenvalue_magnitude();
        (l, -l)
    }

    fn target(&self, g: &GridFunction) -> GridFunction {
        match self.transform_kind {
            TransformKind::Plain => g.clone(),
            TransformKind::Conjugate => g.conj(),
        }
    }

    /// `max |forward(g) - lambda target(g)|` over both members.
    pub fn residual(&self) -> f64 {
        let (lp, lm) = self.eigenvalues();
        let res = |g: &GridFunction, l: f64| {
            let lhs = forward(g);
            let rhs = self.target(g);
            lhs.values()
                .iter()
                .zip(rhs.values())
                .map(|(x, y)| (x.to_complex() - y.to_complex() * l).norm())
                .fold(0.0, f64::max)
        };
        res(&self.plus, lp).max(res(&self.minus, lm))
    }

    /// Exact verification, available when `d` is even.
    pub fn verify_exact(&self) -> Option<bool> {
        let a = self.plus.ambient();
        if !a.d().is_multiple_of(2) {
            return None;
        }
        let lambda = rational_pow(a.p(), -(a.d() as i64) / 2);
        let check = |g: &GridFunction, l: &Rational| {
            forward(g).grid().approx_eq(&self.target(g).scale_rational(l))
        };
        Some(check(&self.plus, &lambda) && check(&self.minus, &-lambda.clone()))
    }

    /// Gram-determinant test on the complex embeddings.
    pub fn linearly_independent(&self, tol: f64) -> bool {
        let pv: Vec<Complex64> = self.plus.values().iter().map(Scalar::to_complex).collect();
        let mv: Vec<Complex64> = self.minus.values().iter().map(Scalar::to_complex).collect();
        let pp: f64 = pv.iter().map(|z| z.norm_sqr()).sum();
        let mm: f64 = mv.iter().map(|z| z.norm_sqr()).sum();
        let pm: Complex64 = pv.iter().zip(&mv).map(|(x, y)| x * y.conj()).sum();
        pp * mm - pm.norm_sqr() > tol * pp.max(1.0) * mm.max(1.0)
    }
}

/// Hermitian inner product `sum f conj(g)` on complex embeddings.
pub fn inner_product(f: &GridFunction, g: &GridFunction) -> Complex64 {
    f.values()
        .iter()
        .zip(g.values())
        .map(|(x, y)| x.to_complex() * y.to_complex().conj())
        .sum()
}

fn build_pair(v: &Subspace, x: &Point, transform_kind: TransformKind) -> EigenPair {
    let a = *v.ambient();
    let p = a.p();
    let weight = Weight::new(p, a.d(), v.dim());
    let w = weight.scalar();
    let coset = AffineSubspace::new(v.clone(), x);
    let perp = v.perp().membership();
    let exact = matches!(weight, Weight::Exact(_));
    let phase = |m: &Point| -> Scalar {
        let e = a.dot(x, m) as i64;
        match exact {
            true => Scalar::Cyclotomic(Cyclotomic::xi_pow(p, e)).demote(),
            false => {
                let angle = std::f64::consts::TAU * e as f64 / p as f64;
                Scalar::Complex(ComplexApprox::with_tol(
                    Complex64::from_polar(1.0, angle),
                    crate::scalars::DEFAULT_TOLERANCE,
                ))
            }
        }
    };
    let zero = Scalar::zero();
    let make = |sign: i64| {
        GridFunction::from_fn(a, |m| {
            let first = if coset.contains(m) { w.clone() } else { zero.clone() };
            let second = if perp[a.index(m)] {
                phase(m).scale(&Rational::from_integer(sign.into()))
            } else {
                zero.clone()
            };
            &first + &second
        })
        .expect("uniform kinds")
    };
    let degenerate = v.contains(x) && v.is_lagrangian();
    let (plus, minus) = (make(1), make(-1));
    EigenPair {
        subspace: v.clone(),
        shift: coset.anchor().clone(),
        weight,
        plus,
        minus,
        transform_kind,
        degenerate,
    }
}

/// `f+- = p^(d/2-k) 1_V +- 1_{V^perp}` with eigenvalues `+-p^(-d/2)`.
pub fn eigenfunction_pair(v: &Subspace) -> EigenPair {
    build_pair(v, &v.ambient().zero(), TransformKind::Plain)
}

/// `f+- = p^(d/2-k) 1_{V+x} +- phi_{-x} 1_{V^perp}`, eigenfunctions of the
/// conjugate transform.
pub fn affine_eigenfunction_pair(v: &Subspace, x: &Point) -> EigenPair {
    build_pair(v, x, TransformKind::Conjugate)
}

#[derive(Debug, Clone, PartialEq)]
pub enum SelfDual {
    Empty,
    Lagrangian { subspace: Subspace, lambda: Rational },
    NotSelfDual,
}

/// Decides whether `forward(1_E) = lambda 1_E`; the only candidate is
/// `lambda = |E| / p^d`.
pub fn self_dual_classify(a: &Ambient, set: &[Point]) -> Result<SelfDual> {
    let f = GridFunction::indicator(*a, set);
    let size = f.support().len();
    if size == 0 {
        return Ok(SelfDual::Empty);
    }
    let lambda = Rational::new(size.into(), a.size().into());
    if !forward(&f).grid().approx_eq(&f.scale_rational(&lambda)) {
        return Ok(SelfDual::NotSelfDual);
    }
    let subspace = Subspace::from_point_set(a, &f.support())
        .filter(Subspace::is_lagrangian)
        .ok_or_else(|| {
            Error::InvariantViolation("self-dual set that is not a Lagrangian subspace".into())
        })?;
    if &lambda * &lambda != rational_pow(a.p(), -(a.d() as i64)) {
        return Err(Error::InvariantViolation(format!(
            "self-dual set with lambda = {lambda}, expected p^(-d/2)"
        )));
    }
    Ok(SelfDual::Lagrangian { subspace, lambda })
}

/// Subspaces with `L = L^perp`; empty for odd `d`.
pub fn enumerate_lagrangian(a: &Ambient) -> Result<Vec<Subspace>> {
    if !a.d().is_multiple_of(2) {
        return Ok(Vec::new());
    }
    Ok(enumerate_subspaces(a, a.d() / 2)?
        .into_iter()
        .filter(Subspace::is_lagrangian)
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenTerm {
    pub pair: EigenPair,
    pub plus_coeff: Scalar,
    pub minus_coeff: Scalar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenExpansion {
    pub ambient: Ambient,
    pub terms: Vec<EigenTerm>,
}

impl EigenExpansion {
    pub fn evaluate(&self) -> GridFunction {
        self.terms.iter().fold(GridFunction::zero(self.ambient), |acc, t| {
            acc.add(&t.pair.plus.scale(&t.plus_coeff))
                .and_then(|g| g.add(&t.pair.minus.scale(&t.minus_coeff)))
                .expect("same ambient")
        })
        .demote()
    }
}

/// Writes `f` as a combination of conjugate-transform eigenfunctions:
/// plain wavelet decomposition, then `1_{V+x} = (f+ + f-) / (2 p^(d/2-k))`
/// for every hyperplane indicator and for the constant.
pub fn eigen_expand(f: &GridFunction) -> EigenExpansion {
    let a = *f.ambient();
    let p = a.p();
    let dec = decompose(f, WaveletForm::Plain);
    let mut terms = Vec::new();
    let mut push = |pair: EigenPair, c: &Scalar| {
        let k = &pair.weight.halved_inverse() * c;
        terms.push(EigenTerm {
            pair,
            plus_coeff: k.clone(),
            minus_coeff: k,
        });
    };
    if !dec.constant.is_zero() {
        push(affine_eigenfunction_pair(&Subspace::full(&a), &a.zero()), &dec.constant);
    }
    for w in &dec.parts {
        let s = w.direction().rep();
        let v = Subspace::span(&a, std::slice::from_ref(s)).perp();
        let lead = s.0.iter().position(|&c| c != 0).expect("nonzero direction");
        for (t, c) in w.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // s is canonical, so s[lead] = 1 and x = t e_lead has x.s = t.
            let mut x = vec![0; a.d()];
            x[lead] = t as u64 % p;
            push(affine_eigenfunction_pair(&v, &Point(x)), c);
        }
    }
    EigenExpansion { ambient: a, terms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{enumerate_all_subspaces, hyperplane_points};
    use crate::scalars::{int, rational};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn amb(p: u64, d: usize) -> Ambient {
        Ambient::new(p, d).unwrap()
    }

    fn span(a: &Ambient, gens: &[&[u64]]) -> Subspace {
        let g: Vec<Point> = gens.iter().map(|c| Point(c.to_vec())).collect();
        Subspace::span(a, &g)
    }

    fn subsets(a: &Ambient) -> impl Iterator<Item = Vec<Point>> + '_ {
        let n = a.size();
        (0u32..1 << n).map(move |m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| a.point(i)).collect())
    }

    #[test]
    fn self_dual_examples() {
        let a = amb(2, 2);
        assert_eq!(self_dual_classify(&a, &[]).unwrap(), SelfDual::Empty);
        let l = span(&a, &[&[1, 1]]);
        assert_eq!(
            self_dual_classify(&a, &l.points()).unwrap(),
            SelfDual::Lagrangian { subspace: l, lambda: rational(1, 2) }
        );
        let a3 = amb(3, 2);
        let mut seen = 0;
        for set in subsets(&a3) {
            let c = self_dual_classify(&a3, &set).unwrap();
            assert_eq!(c == SelfDual::Empty, set.is_empty());
            assert!(!matches!(c, SelfDual::Lagrangian { .. }));
            seen += 1;
        }
        assert_eq!(seen, 512);
    }

    #[test]
    fn self_dual_trichotomy_exhaustive() {
        for (p, d) in [(2, 2), (2, 3), (3, 2)] {
            let a = amb(p, d);
            let lagrangians = enumerate_lagrangian(&a).unwrap();
            let mut found = Vec::new();
            for set in subsets(&a) {
                if let SelfDual::Lagrangian { subspace, .. } = self_dual_classify(&a, &set).unwrap() {
                    found.push(subspace);
                }
            }
            assert_eq!(found, lagrangians, "p={p} d={d}");
            if d % 2 == 1 {
                assert!(found.is_empty());
            }
        }
    }

    #[test]
    fn lagrangian_enumeration() {
        let a = amb(2, 2);
        assert_eq!(enumerate_lagrangian(&a).unwrap(), vec![span(&a, &[&[1, 1]])]);
        assert!(enumerate_lagrangian(&amb(3, 2)).unwrap().is_empty());
        let a = amb(5, 2);
        assert_eq!(
            enumerate_lagrangian(&a).unwrap(),
            vec![span(&a, &[&[1, 2]]), span(&a, &[&[1, 3]])]
        );
        assert!(enumerate_lagrangian(&amb(5, 3)).unwrap().is_empty());
        let a = amb(3, 4);
        for l in enumerate_lagrangian(&a).unwrap() {
            assert_eq!(l.dim(), 2);
        }
    }

    #[test]
    fn plain_pair_examples() {
        let a = amb(3, 2);
        let v = span(&a, &[&[1, 0]]);
        let pair = eigenfunction_pair(&v);
        assert_eq!(pair.weight, Weight::Exact(int(1)));
        let expect = GridFunction::indicator(a, &v.points())
            .add(&GridFunction::indicator(a, &v.perp().points()))
            .unwrap();
        assert_eq!(pair.plus, expect);
        assert_eq!(pair.verify_exact(), Some(true));
        assert!(pair.residual() < 1e-9);
        assert!(!pair.degenerate && pair.linearly_independent(1e-9));

        let a = amb(2, 2);
        let pair = eigenfunction_pair(&Subspace::zero(&a));
        let expect = GridFunction::from_fn(a, |x| Scalar::from_int(if x.is_zero() { 3 } else { 1 })).unwrap();
        assert_eq!(pair.plus, expect);
        assert_eq!(pair.eigenvalues().0, 0.5);
        assert_eq!(pair.verify_exact(), Some(true));
        assert!(pair.linearly_independent(1e-9));

        let pair = eigenfunction_pair(&span(&a, &[&[1, 1]]));
        assert!(pair.degenerate);
        assert!(pair.minus.is_zero());
        assert!(!pair.linearly_independent(1e-9));
    }

    #[test]
    fn full_space_pair_is_independent() {
        for (p, d) in [(2, 2), (3, 2), (3, 3), (5, 1)] {
            let a = amb(p, d);
            let pair = eigenfunction_pair(&Subspace::full(&a));
            assert!(!pair.degenerate);
            assert!(pair.linearly_independent(1e-9));
            assert!(pair.residual() < 1e-9);
        }
    }

    #[test]
    fn affine_pair_examples() {
        let a = amb(3, 2);
        let v = span(&a, &[&[1, 1]]);
        let p0 = affine_eigenfunction_pair(&v, &a.zero());
        let q0 = eigenfunction_pair(&v);
        assert_eq!((p0.plus.clone(), p0.minus.clone()), (q0.plus, q0.minus));

        let v = span(&a, &[&[0, 1]]);
        let pair = affine_eigenfunction_pair(&v, &Point(vec![1, 0]));
        assert_eq!(pair.verify_exact(), Some(true));
        assert!(pair.residual() < 1e-9);

        let a = amb(2, 2);
        let pair = affine_eigenfunction_pair(&span(&a, &[&[1, 1]]), &Point(vec![1, 0]));
        assert!(!pair.degenerate);
        assert!(pair.linearly_independent(1e-9));
        assert_eq!(pair.verify_exact(), Some(true));
    }

    #[test]
    fn all_pairs_are_eigen() {
        for (p, d) in [(2, 2), (3, 2), (2, 3), (3, 3), (5, 2)] {
            let a = amb(p, d);
            for v in enumerate_all_subspaces(&a).unwrap() {
                for x in [a.zero(), a.point(1), a.point(a.size() - 1)] {
                    let pair = affine_eigenfunction_pair(&v, &x);
                    assert!(pair.residual() < 1e-9, "p={p} d={d}");
                    if d % 2 == 0 {
                        assert_eq!(pair.verify_exact(), Some(true));
                    }
                    assert_eq!(pair.linearly_independent(1e-9), !pair.degenerate);
                    let lam = pair.eigenvalue_magnitude();
                    for g in [&pair.plus, &pair.minus] {
                        let n_hat = forward(g).l2_norm();
                        assert!((n_hat - lam * g.l2_norm()).abs() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn plus_minus_inner_products() {
        for (p, d) in [(3, 2), (2, 3), (5, 2)] {
            let a = amb(p, d);
            for v in enumerate_all_subspaces(&a).unwrap() {
                let pair = eigenfunction_pair(&v);
                assert!(inner_product(&pair.plus, &pair.minus).norm() < 1e-9);
                let x = a.point(a.size() - 1);
                let pair = affine_eigenfunction_pair(&v, &x);
                // Only the overlap of V + x and V^perp contributes: w (phi - conj phi).
                let w = pair.weight.to_f64();
                let perp = v.perp();
                let expect: Complex64 = AffineSubspace::new(v.clone(), &x)
                    .points()
                    .iter()
                    .filter(|m| perp.contains(m))
                    .map(|m| {
                        let phi = Complex64::from_polar(1.0, std::f64::consts::TAU * a.dot(&x, m) as f64 / p as f64);
                        (phi - phi.conj()) * w
                    })
                    .sum();
                assert!((inner_product(&pair.plus, &pair.minus) - expect).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn odd_dimension_uses_complex_weights() {
        let a = amb(3, 3);
        let v = span(&a, &[&[1, 0, 0]]);
        let pair = eigenfunction_pair(&v);
        assert!(matches!(pair.weight, Weight::Approx(_)));
        assert_eq!(pair.verify_exact(), None);
        assert!(pair.residual() < 1e-9);
    }

    #[test]
    fn expansion_examples() {
        let a = amb(3, 2);
        let c = GridFunction::constant(a, Scalar::from(rational(2, 3)));
        let e = eigen_expand(&c);
        assert_eq!(e.terms.len(), 1);
        assert_eq!(e.terms[0].pair.subspace, Subspace::full(&a));
        assert_eq!(e.evaluate(), c);

        let h = GridFunction::indicator(a, &hyperplane_points(&a, &Point(vec![1, 0]), 1).unwrap());
        let e = eigen_expand(&h);
        assert_eq!(e.terms.len(), 1);
        assert_eq!(e.evaluate(), h);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, d) in [(3, 2), (5, 2), (3, 3), (2, 3)] {
            let a = amb(p, d);
            let f = GridFunction::from_rationals(
                a,
                (0..a.size()).map(|_| rational(rng.gen_range(-5..=5), rng.gen_range(1..=4))).collect(),
            )
            .unwrap();
            let e = eigen_expand(&f);
            assert!(e.evaluate().max_abs_diff(&f) < 1e-9);
            if d % 2 == 0 {
                assert_eq!(e.evaluate(), f);
            }
            for t in &e.terms {
                assert!(t.pair.residual() < 1e-9);
            }
        }
    }
}
