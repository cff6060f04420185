//! Spectral support: which lines through the origin carry the transform,
//! bandwidth, vanishing subspaces, equidistribution and the uncertainty
//! bound.

use std::collections::{BTreeMap, HashSet};

use num_traits::{ToPrimitive, Zero};

use crate::algebra::{
    avoid_lines_subspace, enumerate_lines, enumerate_subspaces, is_compass_set, Ambient, Point,
    ProjectiveLine, Subspace,
};
use crate::error::{Error, Result};
use crate::fourier::{forward, inverse, GridFunction, Spectrum};
use crate::scalars::{rational_pow, Cyclotomic, Rational, Scalar, ScalarKind};

/// Activity of the spectrum on one punctured line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineFlag {
    Vanishes,
    Active,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineSupportProfile {
    pub lines: Vec<(ProjectiveLine, LineFlag)>,
    pub dc_active: bool,
    /// Lines where the spectrum is zero at some but not all punctured
    /// points. Always empty for rational inputs.
    pub mixed: Vec<ProjectiveLine>,
    pub approximate: bool,
}

impl LineSupportProfile {
    pub fn active_lines(&self) -> Vec<ProjectiveLine> {
        self.lines
            .iter()
            .filter(|(_, f)| *f == LineFlag::Active)
            .map(|(l, _)| l.clone())
            .collect()
    }

    pub fn active_count(&self) -> usize {
        self.lines.iter().filter(|(_, f)| *f == LineFlag::Active).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandwidthReport {
    pub cbw: usize,
    pub bw: Rational,
    pub bwd: f64,
    pub lines: Vec<ProjectiveLine>,
    pub approximate: bool,
}

pub fn line_support_profile(spectrum: &Spectrum) -> LineSupportProfile {
    let a = *spectrum.ambient();
    let lines = enumerate_lines(&a).expect("grid already allocated");
    let mut mixed = Vec::new();
    let flags = lines
        .into_iter()
        .map(|l| {
            let pts = l.punctured_points(&a);
            let zeros = pts.iter().filter(|m| spectrum.vanishes_at(m)).count();
            if zeros != 0 && zeros != pts.len() {
                mixed.push(l.clone());
            }
            let flag = if zeros == pts.len() {
                LineFlag::Vanishes
            } else {
                LineFlag::Active
            };
            (l, flag)
        })
        .collect();
    LineSupportProfile {
        lines: flags,
        dc_active: !spectrum.vanishes_at(&a.zero()),
        mixed,
        approximate: !spectrum.is_exact(),
    }
}

/// `bwd = log_p((p - 1) cbw + 1)`.
pub fn bandwidth_dimension(p: u64, cbw: usize) -> f64 {
    (((p - 1) as f64) * cbw as f64 + 1.0).ln() / (p as f64).ln()
}

pub fn bandwidth_of_spectrum(spectrum: &Spectrum) -> BandwidthReport {
    let a = spectrum.ambient();
    let profile = line_support_profile(spectrum);
    let lines = profile.active_lines();
    let cbw = lines.len();
    BandwidthReport {
        cbw,
        bw: Rational::new(
            ((a.p() - 1) as i64 * cbw as i64).into(),
            (a.line_count() as i64 * (a.p() - 1) as i64).into(),
        ),
        bwd: bandwidth_dimension(a.p(), cbw),
        lines,
        approximate: profile.approximate,
    }
}

pub fn bandwidth(f: &GridFunction) -> BandwidthReport {
    bandwidth_of_spectrum(&forward(f))
}

/// For rational `f`, every punctured line lies entirely inside or entirely
/// outside the zero set of the transform.
pub fn check_vanishing_principle(f: &GridFunction) -> Result<LineSupportProfile> {
    let profile = line_support_profile(&forward(f));
    if f.is_rational() && !profile.mixed.is_empty() {
        return Err(Error::InvariantViolation(format!(
            "rational function with partially vanishing lines {:?}",
            profile.mixed.iter().map(|l| l.to_string()).collect::<Vec<_>>()
        )));
    }
    Ok(profile)
}

/// Largest subspace, by exhaustive search, whose punctured points all lie
/// on `vanishing` lines, provided its dimension exceeds `floor`.
fn largest_vanishing_subspace(
    a: &Ambient,
    vanishing: &HashSet<ProjectiveLine>,
    floor: usize,
) -> Result<Option<Subspace>> {
    for k in (floor + 1..=a.d()).rev() {
        for v in enumerate_subspaces(a, k)? {
            if v.lines().iter().all(|l| vanishing.contains(l)) {
                return Ok(Some(v));
            }
        }
    }
    Ok(None)
}

/// A subspace `V` with the transform of `f` identically zero on `V \ {0}`.
///
/// With `(p^(k-1) - 1)/(p - 1) <= cbw < (p^k - 1)/(p - 1)` the line-avoidance
/// construction guarantees dimension `d - k + 1`. For `d <= 3` an exhaustive
/// search is also run and the larger subspace wins.
pub fn vanishing_certificate(f: &GridFunction) -> Result<Option<Subspace>> {
    if f.is_zero() {
        return Err(Error::Precondition("function must be nonzero".into()));
    }
    let a = *f.ambient();
    let p = a.p() as u128;
    let d = a.d();
    let spectrum = forward(f);
    let profile = line_support_profile(&spectrum);
    let active = profile.active_lines();
    let cbw = active.len() as u128;

    let k = (1..=d as u32 + 1)
        .find(|&k| cbw < (p.pow(k) - 1) / (p - 1))
        .expect("cbw never exceeds the line count") as usize;
    let guaranteed = if k <= d {
        Some(avoid_lines_subspace(&a, &active, d - k)?)
    } else {
        None
    };

    if d <= 3 {
        let vanishing: HashSet<ProjectiveLine> = profile
            .lines
            .iter()
            .filter(|(_, fl)| *fl == LineFlag::Vanishes)
            .map(|(l, _)| l.clone())
            .collect();
        let floor = guaranteed.as_ref().map_or(0, Subspace::dim);
        if let Some(v) = largest_vanishing_subspace(&a, &vanishing, floor)? {
            return Ok(Some(v));
        }
    }
    Ok(guaranteed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquidistributionReport {
    pub equidistributed: bool,
    pub common_mass: Option<Scalar>,
    /// Masses on the cosets of `V^perp`, keyed by `(x . v_i)_i` over the
    /// basis of `V` in lexicographic order.
    pub masses: Vec<Scalar>,
    pub spectrum_vanishes: bool,
}

/// Compares masses over cosets of `V^perp` with vanishing of the transform
/// on `V \ {0}`; the two must agree.
pub fn equidistribution_check(f: &GridFunction, v: &Subspace) -> Result<EquidistributionReport> {
    let a = *f.ambient();
    if *v.ambient() != a {
        return Err(Error::AmbientMismatch("subspace and function".into()));
    }
    if v.dim() == 0 {
        return Err(Error::Precondition("V must be nonzero".into()));
    }
    let p = a.p();
    let kind = f.kind();
    let buckets = (p as usize).pow(v.dim() as u32);
    let mut masses = vec![crate::fourier::zero_of(kind, p); buckets];
    for (x, val) in a.points().zip(f.values()) {
        let key = v
            .basis()
            .iter()
            .fold(0usize, |acc, b| acc * p as usize + a.dot(&x, b) as usize);
        masses[key] = &masses[key] + val;
    }
    let equal = masses.iter().all(|m| m.approx_eq(&masses[0]));
    let spectrum = forward(f);
    let vanishes = v
        .points()
        .iter()
        .filter(|m| !m.is_zero())
        .all(|m| spectrum.vanishes_at(m));
    if equal != vanishes {
        return Err(Error::InvariantViolation(format!(
            "coset masses equal: {equal}, spectrum vanishes on punctured V: {vanishes}"
        )));
    }
    Ok(EquidistributionReport {
        equidistributed: equal,
        common_mass: equal.then(|| masses[0].clone()),
        masses,
        spectrum_vanishes: vanishes,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyReport {
    pub cbw: usize,
    pub size: usize,
    pub lhs: u128,
    pub rhs: u128,
    pub holds: bool,
    pub bwd: f64,
    pub dim: f64,
    /// `bwd + dim >= d`, compared with a `1e-12` slack.
    pub dimension_form_holds: bool,
}

/// `((p - 1) cbw(E) + 1) |E| >= p^d`.
pub fn uncertainty_check(ambient: &Ambient, set: &[Point]) -> Result<UncertaintyReport> {
    let unique: HashSet<&Point> = set.iter().collect();
    if unique.is_empty() {
        return Err(Error::EmptySet);
    }
    let p = ambient.p();
    let cbw = bandwidth(&GridFunction::indicator(*ambient, set)).cbw;
    let size = unique.len();
    let lhs = ((p as u128 - 1) * cbw as u128 + 1) * size as u128;
    let rhs = ambient.size() as u128;
    let bwd = bandwidth_dimension(p, cbw);
    let dim = (size as f64).ln() / (p as f64).ln();
    Ok(UncertaintyReport {
        cbw,
        size,
        lhs,
        rhs,
        holds: lhs >= rhs,
        bwd,
        dim,
        dimension_form_holds: bwd + dim >= ambient.d() as f64 - 1e-12,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum SmallCbwClass {
    /// `E` is a union of affine lines parallel to this line.
    UnionOfParallelLines(ProjectiveLine),
    CbwExceedsD { cbw: usize },
}

/// Either `E` is a union of parallel lines or `cbw(E) > d`.
pub fn classify_small_cbw_set(ambient: &Ambient, set: &[Point]) -> Result<SmallCbwClass> {
    let f = GridFunction::indicator(*ambient, set);
    let cbw = bandwidth(&f).cbw;
    if cbw > ambient.d() {
        return Ok(SmallCbwClass::CbwExceedsD { cbw });
    }
    let mask: Vec<bool> = f.values().iter().map(|v| !v.is_zero()).collect();
    let members: Vec<Point> = f.support();
    for line in enumerate_lines(ambient)? {
        let u = line.rep();
        if members
            .iter()
            .all(|x| mask[ambient.index(&ambient.add(x, u))])
        {
            return Ok(SmallCbwClass::UnionOfParallelLines(line));
        }
    }
    Err(Error::InvariantViolation(format!(
        "cbw = {cbw} <= d = {} but the set is not a union of parallel lines",
        ambient.d()
    )))
}

/// If the zero set of the transform is a compass set, `f` must be constant.
/// Returns whether the compass hypothesis held.
pub fn constancy_from_compass(f: &GridFunction) -> Result<bool> {
    if !f.is_rational() {
        return Err(Error::Kind("constancy test needs a rational function".into()));
    }
    let spectrum = forward(f);
    if !is_compass_set(&spectrum.zero_set(), f.ambient()) {
        return Ok(false);
    }
    if !f.is_constant() {
        return Err(Error::InvariantViolation(
            "transform vanishes on a compass set but the function is not constant".into(),
        ));
    }
    Ok(true)
}

/// Rebuilds a rational function from `f^(0)` and one spectral value per
/// line, extending along each line by `f^(r m) = g_r(f^(m))`.
pub fn inverse_phi(
    ambient: &Ambient,
    dc: &Rational,
    seeds: &BTreeMap<ProjectiveLine, Cyclotomic>,
) -> Result<GridFunction> {
    let p = ambient.p();
    let mut values = vec![Scalar::Cyclotomic(Cyclotomic::zero(p)); ambient.size()];
    values[0] = Scalar::Cyclotomic(Cyclotomic::from_rational(p, dc.clone()));
    for (line, seed) in seeds {
        if seed.p() != p {
            return Err(Error::ConductorMismatch {
                left: p,
                right: seed.p(),
            });
        }
        if line.rep().dim() != ambient.d() {
            return Err(Error::Dimension(format!("seed direction {line}")));
        }
        for r in 1..p {
            let m = ambient.scale(r, line.rep());
            values[ambient.index(&m)] = Scalar::Cyclotomic(seed.galois(r)?);
        }
    }
    let spectrum = Spectrum::from_grid(GridFunction::new(*ambient, values)?);
    let f = inverse(&spectrum);
    if f.kind() != ScalarKind::Rational {
        return Err(Error::InvariantViolation(
            "Galois-extended spectrum inverted to a non-rational function".into(),
        ));
    }
    Ok(f)
}

/// `f^(0) = m(f) / p^d` as an exact rational, when `f` is rational.
pub fn dc_value(f: &GridFunction) -> Option<Rational> {
    let a = f.ambient();
    f.total()
        .as_rational()
        .map(|m| m * rational_pow(a.p(), -(a.d() as i64)))
}

impl BandwidthReport {
    pub fn bw_f64(&self) -> f64 {
        self.bw.to_f64().unwrap_or(f64::NAN)
    }

    pub fn is_constant(&self) -> bool {
        self.cbw == 0 && self.bw.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::hyperplane_points;
    use crate::scalars::{int, rational};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn amb(p: u64, d: usize) -> Ambient {
        Ambient::new(p, d).unwrap()
    }

    fn pts(list: &[&[u64]]) -> Vec<Point> {
        list.iter().map(|c| Point(c.to_vec())).collect()
    }

    fn example_set() -> Vec<Point> {
        pts(&[&[1, 2], &[2, 1], &[2, 2]])
    }

    fn line(a: &Ambient, c: &[u64]) -> ProjectiveLine {
        ProjectiveLine::through(a, &Point(c.to_vec())).unwrap()
    }

    fn random_rational(a: Ambient, rng: &mut impl Rng) -> GridFunction {
        let vals = (0..a.size())
            .map(|_| rational(rng.gen_range(-5..=5), rng.gen_range(1..=4)))
            .collect();
        GridFunction::from_rationals(a, vals).unwrap()
    }

    fn all_subsets(a: &Ambient) -> Vec<Vec<Point>> {
        let n = a.size();
        (0u32..1 << n)
            .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).map(|i| a.point(i)).collect())
            .collect()
    }

    #[test]
    fn bandwidth_examples() {
        let a = amb(3, 2);
        let c = bandwidth(&GridFunction::constant(a, Scalar::from(rational(2, 7))));
        assert_eq!((c.cbw, c.bw.clone(), c.bwd), (0, int(0), 0.0));

        let r = bandwidth(&GridFunction::indicator(a, &example_set()));
        assert_eq!(r.cbw, 3);
        assert_eq!(r.lines, vec![line(&a, &[0, 1]), line(&a, &[1, 0]), line(&a, &[1, 1])]);
        assert_eq!(r.bw, rational(3, 4));
        assert!((r.bwd - 7f64.ln() / 3f64.ln()).abs() < 1e-12);
        assert!((r.bwd - 1.7712).abs() < 1e-4);
        assert!(!r.approximate);

        let h = hyperplane_points(&a, &Point(vec![1, 2]), 1).unwrap();
        assert_eq!(bandwidth(&GridFunction::indicator(a, &h)).cbw, 1);

        let approx = bandwidth(&GridFunction::indicator(a, &example_set()).to_complex());
        assert!(approx.approximate);
        assert_eq!(approx.cbw, 3);
    }

    #[test]
    fn cbw_zero_iff_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (p, d) in [(2, 2), (3, 2), (5, 2), (3, 3)] {
            let a = amb(p, d);
            for _ in 0..10 {
                let f = random_rational(a, &mut rng);
                assert_eq!(bandwidth(&f).cbw == 0, f.is_constant());
            }
        }
    }

    #[test]
    fn vanishing_principle_on_random_rationals() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (p, d) in [(2, 3), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let a = amb(p, d);
            for _ in 0..6 {
                let f = random_rational(a, &mut rng);
                let profile = check_vanishing_principle(&f).unwrap();
                assert!(profile.mixed.is_empty());
                // Sparse functions exercise vanishing lines too.
                let sparse = GridFunction::indicator(a, &[a.point(1), a.point(a.size() - 1)]);
                check_vanishing_principle(&sparse).unwrap();
            }
        }
    }

    #[test]
    fn cyclotomic_inputs_may_vanish_partially() {
        // A phase function has a single spectral point, so its line is mixed.
        let a = amb(5, 2);
        let f = crate::fourier::phase(&a, &Point(vec![1, 0]));
        let profile = check_vanishing_principle(&f).unwrap();
        assert_eq!(profile.mixed.len(), 1);
    }

    fn assert_certificate(f: &GridFunction, v: &Subspace) {
        let s = forward(f);
        for m in v.points().iter().filter(|m| !m.is_zero()) {
            assert!(s.vanishes_at(m), "spectrum nonzero at {m}");
        }
    }

    #[test]
    fn certificate_examples() {
        let a = amb(3, 2);
        let c = GridFunction::constant(a, Scalar::from_int(4));
        assert_eq!(vanishing_certificate(&c).unwrap(), Some(Subspace::full(&a)));

        let f = GridFunction::indicator(a, &example_set());
        let v = vanishing_certificate(&f).unwrap().unwrap();
        assert_eq!(v, Subspace::line(&a, &line(&a, &[1, 2])));

        let a3 = amb(3, 3);
        let h = hyperplane_points(&a3, &Point(vec![1, 1, 0]), 2).unwrap();
        let w = GridFunction::indicator(a3, &h);
        let v = vanishing_certificate(&w).unwrap().unwrap();
        assert_eq!(v.dim(), 2);
        assert_certificate(&w, &v);

        assert!(vanishing_certificate(&GridFunction::zero(a)).is_err());

        // delta_0 has a nowhere-vanishing transform.
        let delta = GridFunction::delta(a, &a.zero(), Scalar::from_int(1));
        assert_eq!(vanishing_certificate(&delta).unwrap(), None);
    }

    #[test]
    fn certificate_dimension_meets_guarantee() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (p, d) in [(2, 3), (3, 3), (2, 4)] {
            let a = amb(p, d);
            for _ in 0..20 {
                let k = rng.gen_range(1..a.size());
                let set: Vec<Point> = (0..k).map(|_| a.point(rng.gen_range(0..a.size()))).collect();
                let f = GridFunction::indicator(a, &set);
                let cbw = bandwidth(&f).cbw as u128;
                let pp = p as u128;
                let kk = (1..=d as u32 + 1).find(|&k| cbw < (pp.pow(k) - 1) / (pp - 1)).unwrap() as usize;
                match vanishing_certificate(&f).unwrap() {
                    Some(v) => {
                        assert!(kk > d || v.dim() > d - kk);
                        assert_certificate(&f, &v);
                    }
                    None => assert!(kk > d),
                }
            }
        }
    }

    #[test]
    fn equidistribution_examples() {
        let a = amb(3, 2);
        let v = Subspace::span(&a, &[Point(vec![1, 0])]);
        let c = GridFunction::constant(a, Scalar::from(rational(1, 2)));
        let r = equidistribution_check(&c, &v).unwrap();
        assert!(r.equidistributed);
        assert_eq!(r.common_mass, Some(Scalar::from(rational(3, 2))));

        // One coset of V^perp = span{(0,1)}.
        let coset = pts(&[&[1, 0], &[1, 1], &[1, 2]]);
        let r = equidistribution_check(&GridFunction::indicator(a, &coset), &v).unwrap();
        assert!(!r.equidistributed && !r.spectrum_vanishes);

        // Two cosets of span{(0,1)} over V = span{(1,0)}: masses (3,3,0).
        let two = pts(&[&[0, 0], &[0, 1], &[0, 2], &[1, 0], &[1, 1], &[1, 2]]);
        let r = equidistribution_check(&GridFunction::indicator(a, &two), &v).unwrap();
        assert!(!r.equidistributed);
        assert_eq!(r.masses, vec![Scalar::from_int(3), Scalar::from_int(3), Scalar::from_int(0)]);

        // Over V = span{(0,1)} the same set is equidistributed, and 6 is a multiple of 3.
        let w = Subspace::span(&a, &[Point(vec![0, 1])]);
        let r = equidistribution_check(&GridFunction::indicator(a, &two), &w).unwrap();
        assert!(r.equidistributed);
        assert_eq!(r.common_mass, Some(Scalar::from_int(2)));

        assert!(equidistribution_check(&c, &Subspace::zero(&a)).is_err());
    }

    #[test]
    fn equidistribution_biconditional_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (p, d) in [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2)] {
            let a = amb(p, d);
            let subspaces = crate::algebra::enumerate_all_subspaces(&a).unwrap();
            for _ in 0..20 {
                let f = if rng.gen_bool(0.5) {
                    random_rational(a, &mut rng)
                } else {
                    // Functions pulled back from a quotient are often equidistributed.
                    let s = a.point(rng.gen_range(1..a.size()));
                    GridFunction::from_fn(a, |x| Scalar::from_int((a.dot(x, &s) == 0) as i64)).unwrap()
                };
                for v in subspaces.iter().filter(|v| v.dim() > 0) {
                    equidistribution_check(&f, v).unwrap();
                }
            }
        }
    }

    #[test]
    fn uncertainty_examples() {
        let a = amb(3, 2);
        let all: Vec<Point> = a.points().collect();
        let r = uncertainty_check(&a, &all).unwrap();
        assert_eq!((r.cbw, r.lhs, r.rhs, r.holds), (0, 9, 9, true));

        let r = uncertainty_check(&a, &example_set()).unwrap();
        assert_eq!((r.lhs, r.rhs, r.holds), (21, 9, true));
        assert!(r.dimension_form_holds);

        assert_eq!(uncertainty_check(&a, &[]), Err(Error::EmptySet));
    }

    #[test]
    fn uncertainty_exhaustive_small() {
        for d in [2, 3] {
            let a = amb(2, d);
            let sets = all_subsets(&a);
            let mut count = 0;
            for set in sets.iter().filter(|s| !s.is_empty()) {
                let r = uncertainty_check(&a, set).unwrap();
                assert!(r.holds && r.dimension_form_holds, "{set:?}");
                count += 1;
            }
            assert_eq!(count, (1 << a.size()) - 1);
        }
    }

    #[test]
    fn dichotomy_examples() {
        let a = amb(3, 2);
        let l = pts(&[&[0, 1], &[1, 2], &[2, 0]]);
        assert_eq!(
            classify_small_cbw_set(&a, &l).unwrap(),
            SmallCbwClass::UnionOfParallelLines(line(&a, &[1, 1]))
        );
        assert_eq!(
            classify_small_cbw_set(&a, &example_set()).unwrap(),
            SmallCbwClass::CbwExceedsD { cbw: 3 }
        );
        let a = amb(2, 2);
        let sets = all_subsets(&a);
        assert_eq!(sets.len(), 16);
        for set in &sets {
            classify_small_cbw_set(&a, set).unwrap();
        }
        for set in all_subsets(&amb(2, 3)) {
            classify_small_cbw_set(&amb(2, 3), &set).unwrap();
        }
    }

    #[test]
    fn compass_constancy() {
        let a = amb(3, 2);
        assert!(constancy_from_compass(&GridFunction::constant(a, Scalar::from_int(2))).unwrap());
        let delta = GridFunction::delta(a, &a.zero(), Scalar::from_int(1));
        assert!(!constancy_from_compass(&delta).unwrap());
        assert!(constancy_from_compass(&delta.to_complex()).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for p in [3, 5] {
            let a = amb(p, 2);
            for _ in 0..20 {
                constancy_from_compass(&random_rational(a, &mut rng)).unwrap();
            }
        }
    }

    #[test]
    fn inverse_phi_examples() {
        let a = amb(3, 2);
        let c = inverse_phi(&a, &rational(5, 3), &BTreeMap::new()).unwrap();
        assert_eq!(c, GridFunction::constant(a, Scalar::from(rational(5, 3))));

        let mut seeds = BTreeMap::new();
        seeds.insert(line(&a, &[1, 0]), Cyclotomic::from_rational(3, rational(1, 3)));
        let f = inverse_phi(&a, &rational(1, 3), &seeds).unwrap();
        let h = hyperplane_points(&a, &Point(vec![1, 0]), 0).unwrap();
        assert_eq!(f, GridFunction::indicator(a, &h));
    }

    #[test]
    fn inverse_phi_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = amb(5, 2);
        for _ in 0..10 {
            let mut seeds = BTreeMap::new();
            for l in enumerate_lines(&a).unwrap() {
                if rng.gen_bool(0.6) {
                    let coeffs = (0..4).map(|_| rational(rng.gen_range(-4..=4), rng.gen_range(1..=3))).collect();
                    seeds.insert(l, Cyclotomic::new(5, coeffs).unwrap());
                }
            }
            let dc = rational(rng.gen_range(-3..=3), 2);
            let f = inverse_phi(&a, &dc, &seeds).unwrap();
            assert!(f.is_rational());
            let s = forward(&f);
            assert_eq!(s.value(&a.zero()).as_rational(), Some(dc.clone()));
            for (l, seed) in &seeds {
                assert_eq!(s.value(l.rep()), &Scalar::Cyclotomic(seed.clone()));
            }
            let seeded: HashSet<_> = seeds.keys().cloned().collect();
            for m in a.points().filter(|m| !m.is_zero() && !s.vanishes_at(m)) {
                assert!(seeded.contains(&ProjectiveLine::through(&a, &m).unwrap()));
            }
        }
    }

    #[test]
    fn support_in_subspace_gives_constancy_on_perp_cosets() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for (p, d) in [(3, 3), (5, 2), (2, 4)] {
            let a = amb(p, d);
            for v in crate::algebra::enumerate_all_subspaces(&a).unwrap().into_iter().filter(|v| v.dim() > 0 && v.dim() < d).take(8) {
                let mut seeds = BTreeMap::new();
                for l in v.lines() {
                    let coeffs = (0..p - 1).map(|_| rational(rng.gen_range(-4..=4), 1)).collect();
                    seeds.insert(l, Cyclotomic::new(p, coeffs).unwrap());
                }
                let f = inverse_phi(&a, &rational(1, 1), &seeds).unwrap();
                for coset in crate::algebra::AffineSubspace::cosets(&v.perp()) {
                    let vals: Vec<&Scalar> = coset.points().iter().map(|x| f.value(x)).collect();
                    assert!(vals.iter().all(|x| *x == vals[0]));
                }
            }
        }
    }
}
