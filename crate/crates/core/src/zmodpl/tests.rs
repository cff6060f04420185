use super::*;
use crate::scalars::{int, rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_function(a: RingAmbient, rng: &mut ChaCha8Rng) -> RingFunction {
    RingFunction::from_fn(a, |_| rational(rng.gen_range(-5..=5), rng.gen_range(1..=4)))
}

fn pt(a: &RingAmbient, c: &[i64]) -> Point {
    a.point_from(c).unwrap()
}

#[test]
fn valuation_examples() {
    let a = RingAmbient::new(2, 2, 1).unwrap();
    assert_eq!(a.valuation(2), 1);
    assert_eq!(a.norm(2), rational(1, 2));
    assert_eq!(a.valuation(0), 2);
    assert_eq!(a.norm(0), int(0));
    let b = RingAmbient::new(3, 2, 1).unwrap();
    assert_eq!(b.valuation(6), 1);
    assert!(b.is_unit(2));
    assert!(RingAmbient::new(4, 2, 1).is_err());
    assert!(RingAmbient::new(2, 0, 1).is_err());
}

#[test]
fn unit_count_and_strata() {
    for (p, l) in [(2u64, 2u32), (3, 2), (2, 3), (5, 1)] {
        let a = RingAmbient::new(p, l, 1).unwrap();
        let q = p.pow(l);
        assert_eq!(a.units().count() as u64, q - q / p);
        for j in 0..l {
            let count = (1..q).filter(|&n| a.valuation(n) == j).count() as u64;
            assert_eq!(count, p.pow(l - j) - p.pow(l - j - 1));
        }
        for u in a.units() {
            assert_eq!(u * a.unit_inverse(u) % q, 1);
        }
    }
}

#[test]
fn vector_valuation_and_norm() {
    let a = RingAmbient::new(3, 2, 2).unwrap();
    let v = ValuedVector::new(&a, pt(&a, &[3, 6]));
    assert_eq!(v.valuation(), 1);
    assert_eq!(v.norm(), rational(1, 3));
    let w = ValuedVector::new(&a, pt(&a, &[3, 2]));
    assert_eq!(w.valuation(), 0);
    assert_eq!(w.norm(), int(1));
    assert_eq!(ValuedVector::new(&a, a.zero()).norm(), int(0));
}

#[test]
fn hyperplane_examples() {
    let a = RingAmbient::new(2, 2, 2).unwrap();
    let h = hyperplane_mod(&a, &pt(&a, &[1, 0])).unwrap();
    assert_eq!(h.len(), 4);
    assert!(h.iter().all(|x| x.coords()[0] == 0));
    let h = hyperplane_mod(&a, &pt(&a, &[2, 0])).unwrap();
    assert_eq!(h.len(), 8);
    assert!(h.iter().all(|x| x.coords()[0] % 2 == 0));
    let b = RingAmbient::new(3, 2, 2).unwrap();
    assert_eq!(hyperplane_mod(&b, &pt(&b, &[1, 3])).unwrap().len(), 9);
    assert!(matches!(hyperplane_mod(&a, &a.zero()), Err(Error::ZeroDirection)));
}

#[test]
fn hyperplane_sizes_exhaustive() {
    for (p, l, d) in [(2, 2, 2), (3, 2, 2), (2, 2, 3), (2, 3, 2)] {
        let a = RingAmbient::new(p, l, d).unwrap();
        for v in a.points().filter(|v| !v.is_zero()) {
            let brute = a.points().filter(|x| a.dot(x, &v) == 0).count() as u64;
            let nu = a.vector_valuation(&v);
            assert_eq!(brute, p.pow(l * (d as u32 - 1) + nu));
            hyperplane_mod(&a, &v).unwrap();
        }
    }
}

#[test]
fn line_cardinality_and_membership() {
    for (p, l, d) in [(2, 2, 2), (3, 2, 2), (2, 3, 2)] {
        let a = RingAmbient::new(p, l, d).unwrap();
        for v in a.points().filter(|v| !v.is_zero()) {
            let line = LevelLine::through(&a, &v).unwrap();
            let brute: BTreeSet<Point> = (0..a.q()).map(|t| a.scale(t, &v)).collect();
            assert_eq!(brute.len() as u64, p.pow(l - a.vector_valuation(&v)));
            let pts: BTreeSet<Point> = line.points(&a).into_iter().collect();
            assert_eq!(pts, brute);
            for x in a.points() {
                assert_eq!(line.contains(&a, &x), brute.contains(&x));
            }
        }
    }
}

#[test]
fn canonical_generator_is_unique_per_line() {
    let a = RingAmbient::new(2, 2, 2).unwrap();
    let mut by_set: BTreeMap<Vec<Point>, BTreeSet<Point>> = BTreeMap::new();
    for v in a.points().filter(|v| !v.is_zero()) {
        let mut pts = LevelLine::through(&a, &v).unwrap().points(&a);
        pts.sort();
        by_set.entry(pts).or_default().insert(a.canonical(&v));
    }
    assert!(by_set.values().all(|g| g.len() == 1));
    assert_eq!(unit_lines(&a).len(), 6);
}

#[test]
fn nesting_is_exhaustive() {
    let a = RingAmbient::new(2, 2, 2).unwrap();
    for v in a.points().filter(|v| !v.is_zero()) {
        for x in a.points() {
            let line = AffineLevelLine::new(&a, &x, LevelLine::through(&a, &v).unwrap());
            let subs = line.sublines(&a);
            assert_eq!(subs.len(), 2);
            let mut all: Vec<Point> = subs.iter().flat_map(|s| s.points(&a)).collect();
            assert!(subs.iter().all(|s| s.level() + 1 == line.level()));
            all.sort();
            let n = all.len();
            all.dedup();
            assert_eq!(all.len(), n, "sublines overlap");
            let mut whole = line.points(&a);
            whole.sort();
            assert_eq!(all, whole);
        }
    }
}

#[test]
fn transform_examples() {
    let a = RingAmbient::new(2, 2, 2).unwrap();
    let one = RingFunction::from_fn(a, |_| int(1));
    let spec = forward_mod(&one);
    assert_eq!(spec.support(), vec![a.zero()]);
    assert_eq!(spec.value(&a.zero()).rational_part(), Some(int(1)));
    let delta = RingFunction::indicator(a, &[a.zero()]);
    let spec = forward_mod(&delta);
    assert!(spec.values().iter().all(|v| v.rational_part() == Some(rational(1, 16))));
}

#[test]
fn transform_round_trips_and_matches_naive_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (p, l, d) in [(2, 2, 2), (3, 2, 1), (2, 3, 1), (3, 1, 2)] {
        let a = RingAmbient::new(p, l, d).unwrap();
        let f = random_function(a, &mut rng);
        let spec = forward_mod(&f);
        assert_eq!(inverse_mod(&spec), f);
        let scale = rational_pow(a.q(), -(d as i64));
        for m in a.points() {
            let mut acc = CyclotomicL::zero(p, l);
            for x in a.points() {
                let phase = CyclotomicL::zeta_pow(p, l, -(a.dot(&x, &m) as i64));
                acc = acc.try_add(&phase.try_mul(f.value(&x)).unwrap()).unwrap();
            }
            assert_eq!(&acc.scale(&scale), spec.value(&m));
        }
    }
}

#[test]
fn hyperplane_indicator_is_a_wavelet() {
    let a = RingAmbient::new(3, 2, 2).unwrap();
    let v = pt(&a, &[1, 3]);
    let set: Vec<Point> = a.points().filter(|x| a.dot(x, &v) == 4).collect();
    let f = RingFunction::indicator(a, &set);
    let line = LevelLine::through(&a, &v).unwrap();
    assert!(forward_mod(&f).support().iter().all(|m| line.contains(&a, m)));
    match is_level_l_wavelet(&f).unwrap() {
        LevelWaveletClass::Wavelet { line: found, coeffs } => {
            assert_eq!(found, line);
            assert_eq!(coeffs[4].rational_part(), Some(int(1)));
            assert!(coeffs.iter().enumerate().all(|(t, c)| t == 4 || c.is_zero()));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn two_directions_and_constants() {
    let a = RingAmbient::new(2, 2, 2).unwrap();
    let h1: Vec<Point> = a.points().filter(|x| x.coords()[0] == 1).collect();
    let h2: Vec<Point> = a.points().filter(|x| x.coords()[1] == 3).collect();
    let f = RingFunction::indicator(a, &h1)
        .try_add(&RingFunction::indicator(a, &h2))
        .unwrap();
    assert_eq!(is_level_l_wavelet(&f).unwrap(), LevelWaveletClass::NotWavelet);
    let c = RingFunction::from_fn(a, |_| rational(2, 3));
    assert_eq!(is_level_l_wavelet(&c).unwrap(), LevelWaveletClass::Constant);
}

#[test]
fn modulated_wavelet_is_affine_only() {
    let a = RingAmbient::new(2, 2, 2).unwrap();
    // zeta^(x.m0) times a function of x_1: spectrum on m0 + l_(1,0).
    let m0 = pt(&a, &[0, 1]);
    let values = a
        .points()
        .map(|x| {
            let base = if x.coords()[0] == 2 { int(1) } else { int(0) };
            CyclotomicL::zeta_pow(2, 2, a.dot(&x, &m0) as i64).scale(&base)
        })
        .collect();
    let f = RingFunction::new(a, values).unwrap();
    match is_level_l_wavelet(&f).unwrap() {
        LevelWaveletClass::AffineOnly { line, converse_gap } => {
            assert!(converse_gap);
            assert_eq!(line.line().generator(), &pt(&a, &[1, 0]));
            assert!(line.contains(&a, &m0));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn multiscale_constant_and_single_wavelet() {
    let a = RingAmbient::new(2, 2, 2).unwrap();
    let c = RingFunction::from_fn(a, |_| int(3));
    let dec = multiscale_decompose(&c).unwrap();
    assert!(dec.parts.is_empty());
    assert_eq!(dec.constant.as_ref(), Some(&c));

    let v = pt(&a, &[1, 2]);
    let set: Vec<Point> = a.points().filter(|x| a.dot(x, &v) == 1).collect();
    let f = RingFunction::indicator(a, &set);
    let dec = multiscale_decompose(&f).unwrap();
    assert_eq!(dec.parts.len(), 1);
    assert_eq!(dec.parts[0].function, f);
    assert_eq!(dec.parts[0].level(), 2);
}

#[test]
fn multiscale_round_trips_on_random_functions() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (p, l, d) in [(2, 2, 2), (3, 2, 1)] {
        let a = RingAmbient::new(p, l, d).unwrap();
        for _ in 0..100 {
            let f = random_function(a, &mut rng);
            let dec = multiscale_decompose(&f).unwrap();
            assert_eq!(dec.evaluate().unwrap(), f);
            for part in &dec.parts {
                assert!(part.function.is_rational());
                let spec = forward_mod(&part.function);
                assert!(spec.support().iter().all(|m| part.line.contains(&a, m)));
            }
        }
    }
}

#[test]
fn parts_are_wavelets_at_their_level() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let a = RingAmbient::new(2, 2, 2).unwrap();
    for _ in 0..20 {
        let f = random_function(a, &mut rng);
        for part in multiscale_decompose(&f).unwrap().parts {
            let v = part.line.generator();
            // Spectrum on l_v means f depends only on x.v.
            assert!(spatial_coeffs(&part.function, v).is_some());
            if part.level() == a.l() {
                assert!(matches!(
                    is_level_l_wavelet(&part.function).unwrap(),
                    LevelWaveletClass::Wavelet { .. } | LevelWaveletClass::Constant
                ));
            }
        }
    }
}
