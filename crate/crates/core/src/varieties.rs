//! Transforms vanishing on quadrics: the paraboloid `x_d = x_1^2 + ... +
//! x_(d-1)^2`, spheres `sum x_i^2 = a` and the isotropic cone `sum x_i^2 = 0`.

use crate::algebra::{
    enumerate_lines, least_non_residue, quadratic_class, sqrt_minus_one, Ambient, Point,
    ProjectiveLine, QuadraticClass,
};
use crate::error::{Error, Result};
use crate::fourier::{forward, GridFunction, Spectrum};
use crate::scalars::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarietyKind {
    Paraboloid,
    Sphere(u64),
    IsotropicCone,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarietyPoints {
    pub kind: VarietyKind,
    pub points: Vec<Point>,
}

fn sum_squares(a: &Ambient, x: &[u64]) -> u64 {
    let p = a.p() as u128;
    (x.iter().map(|&c| c as u128 * c as u128 % p).sum::<u128>() % p) as u64
}

impl VarietyKind {
    pub fn contains(&self, a: &Ambient, x: &Point) -> bool {
        match *self {
            VarietyKind::Paraboloid => {
                let (last, head) = x.0.split_last().expect("d >= 1");
                sum_squares(a, head) == *last
            }
            VarietyKind::Sphere(r) => a.norm_squared(x) == r % a.p(),
            VarietyKind::IsotropicCone => a.norm_squared(x) == 0,
        }
    }
}

pub fn variety_points(a: &Ambient, kind: VarietyKind) -> VarietyPoints {
    VarietyPoints {
        kind,
        points: a.points().filter(|x| kind.contains(a, x)).collect(),
    }
}

fn spectrum_vanishes_on(s: &Spectrum, pts: &[Point]) -> bool {
    pts.iter().all(|m| s.vanishes_at(m))
}

/// The transform is supported on the isotropic cone.
pub fn is_good(f: &GridFunction) -> bool {
    let a = *f.ambient();
    let s = forward(f);
    let good = a
        .points()
        .zip(s.values())
        .all(|(m, v)| v.is_zero() || a.norm_squared(&m) == 0);
    good
}

/// Restriction to the plane `x_d = a`, as a function on `Z_p^(d-1)`.
pub fn slice(f: &GridFunction, a: u64) -> Result<GridFunction> {
    let amb = f.ambient();
    if amb.d() < 2 {
        return Err(Error::Dimension("slicing needs d >= 2".into()));
    }
    let p = amb.p();
    let low = Ambient::new(p, amb.d() - 1)?;
    let a = a % p;
    let values = (0..low.size())
        .map(|i| f.values()[i * p as usize + a as usize].clone())
        .collect();
    GridFunction::new(low, values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParaboloidDirection {
    /// `x_d != 0` and `x_1^2 + ... + x_(d-1)^2 = 0`.
    Type1,
    /// `x_d = 0` and `x_1^2 + ... + x_(d-1)^2 != 0`.
    Type2,
    /// The line meets the paraboloid away from the origin.
    Covered,
}

pub fn classify_direction_paraboloid(a: &Ambient, v: &Point) -> Result<ParaboloidDirection> {
    if v.is_zero() {
        return Err(Error::ZeroDirection);
    }
    let (last, head) = v.0.split_last().expect("d >= 1");
    let q = sum_squares(a, head);
    Ok(match (*last != 0, q != 0) {
        (true, false) => ParaboloidDirection::Type1,
        (false, true) => ParaboloidDirection::Type2,
        _ => ParaboloidDirection::Covered,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParaboloidReport {
    pub hypothesis_met: bool,
    pub pairs_checked: usize,
    /// Slice pairs `(a, b)` whose difference is not good.
    pub violations: Vec<(u64, u64)>,
}

/// If the transform vanishes on the paraboloid, every slice difference
/// `f_a - f_b` is good in `d - 1` dimensions.
///
/// The origin is left out of the hypothesis: it only carries the mean of
/// `f`, and adding a constant does not change any slice difference.
pub fn check_paraboloid_theorem(f: &GridFunction) -> Result<ParaboloidReport> {
    if !f.is_rational() {
        return Err(Error::Kind("paraboloid check needs a rational function".into()));
    }
    let a = *f.ambient();
    if a.d() < 2 {
        return Err(Error::Dimension("paraboloid check needs d >= 2".into()));
    }
    let s = forward(f);
    let mut parab = variety_points(&a, VarietyKind::Paraboloid).points;
    parab.retain(|x| !x.is_zero());
    if !spectrum_vanishes_on(&s, &parab) {
        return Ok(ParaboloidReport {
            hypothesis_met: false,
            pairs_checked: 0,
            violations: Vec::new(),
        });
    }
    let p = a.p();
    let slices: Vec<GridFunction> = (0..p).map(|t| slice(f, t)).collect::<Result<_>>()?;
    let mut violations = Vec::new();
    let mut checked = 0;
    for x in 0..p {
        for y in x + 1..p {
            checked += 1;
            let diff = slices[x as usize].sub(&slices[y as usize])?;
            if !is_good(&diff) {
                violations.push((x, y));
            }
        }
    }
    Ok(ParaboloidReport {
        hypothesis_met: true,
        pairs_checked: checked,
        violations,
    })
}

/// `S_a \cup S_b` for a nonzero residue `a` and a non-residue `b`.
fn check_sphere_pair(a: &Ambient, r: u64, n: u64) -> Result<Vec<Point>> {
    let p = a.p();
    if p == 2 {
        return Err(Error::Precondition("spheres need an odd prime".into()));
    }
    if quadratic_class(r, p) != QuadraticClass::Residue {
        return Err(Error::Precondition(format!("{r} is not a nonzero residue mod {p}")));
    }
    if quadratic_class(n, p) != QuadraticClass::NonResidue {
        return Err(Error::Precondition(format!("{n} is not a non-residue mod {p}")));
    }
    let mut pts = variety_points(a, VarietyKind::Sphere(r)).points;
    pts.extend(variety_points(a, VarietyKind::Sphere(n)).points);
    Ok(pts)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwoCircleOutcome {
    Constant,
    /// Union of lines parallel to `L+ = {(t, i t)}`; carries `(1, i)`.
    LplusUnion(Point),
    /// Union of lines parallel to `L- = {(t, -i t)}`; carries `(1, -i)`.
    LminusUnion(Point),
    /// Not an indicator; the transform lives on `L+ \cup L-`.
    Other,
}

/// Plane functions whose transform vanishes on `S_a \cup S_b`.
pub fn two_circle_analysis(f: &GridFunction, r: u64, n: u64) -> Result<TwoCircleOutcome> {
    let a = *f.ambient();
    if a.d() != 2 {
        return Err(Error::Dimension(format!("two-circle analysis needs d = 2, got {}", a.d())));
    }
    if !f.is_rational() {
        return Err(Error::Kind("two-circle analysis needs a rational function".into()));
    }
    let spheres = check_sphere_pair(&a, r, n)?;
    let s = forward(f);
    if !spectrum_vanishes_on(&s, &spheres) {
        return Err(Error::HypothesisNotMet(format!(
            "transform does not vanish on S_{r} and S_{n}"
        )));
    }
    let p = a.p();
    if f.is_constant() {
        return Ok(TwoCircleOutcome::Constant);
    }
    if p % 4 == 3 {
        return Err(Error::InvariantViolation(
            "p = 3 mod 4 and vanishing on two circles, yet f is not constant".into(),
        ));
    }
    let i = sqrt_minus_one(p)?;
    let plus = Point(vec![1, i]);
    let minus = Point(vec![1, p - i]);
    if let Some(mask) = f.indicator_points().map(|_| {
        f.values().iter().map(|v| !v.is_zero()).collect::<Vec<bool>>()
    }) {
        let invariant = |u: &Point| {
            a.points()
                .all(|x| !mask[a.index(&x)] || mask[a.index(&a.add(&x, u))])
        };
        if invariant(&plus) {
            return Ok(TwoCircleOutcome::LplusUnion(plus));
        }
        if invariant(&minus) {
            return Ok(TwoCircleOutcome::LminusUnion(minus));
        }
        return Err(Error::InvariantViolation(
            "indicator with transform on the cone is not a union of isotropic lines".into(),
        ));
    }
    let lp = ProjectiveLine::through(&a, &plus)?;
    let lm = ProjectiveLine::through(&a, &minus)?;
    let on_cone = a
        .points()
        .filter(|m| !m.is_zero() && !s.vanishes_at(m))
        .all(|m| lp.contains(&a, &m) || lm.contains(&a, &m));
    if !on_cone {
        return Err(Error::InvariantViolation("support escapes L+ and L-".into()));
    }
    Ok(TwoCircleOutcome::Other)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SphereReport {
    pub center: Point,
    /// Masses on spheres of radius `r = 1..p`.
    pub masses: Vec<Rational>,
    pub common: Option<Rational>,
    pub equidistributed: bool,
}

/// Sphere masses around `center`, after checking that the transform
/// vanishes on `S_1 \cup S_b` with `b` the least non-residue.
pub fn sphere_equidistribution_check(f: &GridFunction, center: &Point) -> Result<SphereReport> {
    let p = f.ambient().p();
    let b = least_non_residue(p).map_err(|_| Error::Precondition("spheres need an odd prime".into()))?;
    sphere_equidistribution_check_with(f, center, 1, b)
}

pub fn sphere_equidistribution_check_with(
    f: &GridFunction,
    center: &Point,
    r: u64,
    n: u64,
) -> Result<SphereReport> {
    let a = *f.ambient();
    if !a.d().is_multiple_of(2) {
        return Err(Error::Precondition(format!("sphere theorem needs even d, got {}", a.d())));
    }
    if !a.contains(center) {
        return Err(Error::Schema(vec![format!("center {center} is not a point of the grid")]));
    }
    let values = f
        .rational_values()
        .ok_or_else(|| Error::Kind("sphere check needs a rational function".into()))?;
    let spheres = check_sphere_pair(&a, r, n)?;
    if !spectrum_vanishes_on(&forward(f), &spheres) {
        return Err(Error::HypothesisNotMet(format!(
            "transform does not vanish on S_{r} and S_{n}"
        )));
    }
    let p = a.p();
    let mut masses = vec![Rational::from_integer(0.into()); p as usize];
    for (x, v) in a.points().zip(values) {
        let radius = a.norm_squared(&a.sub(&x, center));
        masses[radius as usize] += v;
    }
    let masses: Vec<Rational> = masses.into_iter().skip(1).collect();
    let equal = masses.iter().all(|m| *m == masses[0]);
    Ok(SphereReport {
        center: center.clone(),
        common: equal.then(|| masses[0].clone()),
        masses,
        equidistributed: equal,
    })
}

/// `|{x in Z_p^d : sum x_i^2 = r}|` by enumeration.
pub fn sphere_count(p: u64, d: usize, r: u64) -> Result<usize> {
    let a = Ambient::new(p, d)?;
    Ok(variety_points(&a, VarietyKind::Sphere(r)).points.len())
}

/// Lines through the origin contained in the isotropic cone.
pub fn cone_lines(a: &Ambient) -> Result<Vec<ProjectiveLine>> {
    Ok(enumerate_lines(a)?
        .into_iter()
        .filter(|l| a.norm_squared(l.rep()) == 0)
        .collect())
}

/// True when `f` is good, judged line by line; agrees with [`is_good`] for
/// rational functions.
pub fn active_lines_on_cone(f: &GridFunction) -> bool {
    let a = *f.ambient();
    crate::spectrum::bandwidth(f)
        .lines
        .iter()
        .all(|l| a.norm_squared(l.rep()) == 0)
}
