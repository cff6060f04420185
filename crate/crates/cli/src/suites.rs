//! Brute-force verification suites, one per family of results.

use std::collections::{BTreeMap, BTreeSet};

use charkit::algebra::{
    enumerate_all_subspaces, enumerate_lines, least_non_residue, sqrt_minus_one, Ambient, Point,
    ProjectiveLine, Subspace,
};
use charkit::eigen::{
    affine_eigenfunction_pair, eigenfunction_pair, enumerate_lagrangian, self_dual_classify,
    EigenPair, SelfDual,
};
use charkit::format::function_to_json;
use charkit::fourier::{forward, forward_naive, inverse, GridFunction};
use charkit::scalars::{int, rational, Cyclotomic, Rational, Scalar, ScalarKind};
use charkit::spectrum::{
    bandwidth, classify_small_cbw_set, equidistribution_check, inverse_phi, uncertainty_check,
};
use charkit::varieties::{
    check_paraboloid_theorem, classify_direction_paraboloid, cone_lines,
    sphere_equidistribution_check, sphere_count, two_circle_analysis, ParaboloidDirection,
    TwoCircleOutcome,
};
use charkit::wavelets::{
    decompose, evaluate, is_wavelet, mass_table, reconstruct_from_masses, MassTable, Wavelet,
    WaveletClass, WaveletForm,
};
use charkit::zmodpl::{
    hyperplane_mod, multiscale_decompose, AffineLevelLine, LevelLine, RingAmbient,
};
use charkit::Error;
use rand::Rng;

use crate::corpus::Corpus;
use crate::report::{Check, SuiteReport};

type CaseResult = Result<(), String>;

pub const SUITES: [&str; 11] = [
    "galois",
    "wavelet",
    "tomography",
    "equidist",
    "uncertainty",
    "dichotomy",
    "paraboloid",
    "spheres",
    "selfdual",
    "eigen",
    "zpl",
];

/// Largest grid for which every subset is enumerated.
const MAX_EXHAUSTIVE_POINTS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Overrides the default number of random cases.
    pub size: Option<usize>,
    pub exhaustive: bool,
    pub p: Option<u64>,
    pub d: Option<usize>,
    pub l: Option<u32>,
    pub tolerance: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 42,
            size: None,
            exhaustive: true,
            p: None,
            d: None,
            l: None,
            tolerance: charkit::scalars::DEFAULT_TOLERANCE,
        }
    }
}

impl SuiteConfig {
    fn size(&self, default: usize) -> usize {
        self.size.unwrap_or(default)
    }

    /// `(p, d)` pairs: the override if given, else the defaults.
    fn grids(&self, defaults: &[(u64, usize)]) -> Result<Vec<Ambient>, Error> {
        match (self.p, self.d) {
            (None, None) => defaults.iter().map(|&(p, d)| Ambient::new(p, d)).collect(),
            (p, d) => {
                let p = p.or(defaults.first().map(|x| x.0)).unwrap_or(2);
                let d = d.or(defaults.first().map(|x| x.1)).unwrap_or(2);
                Ok(vec![Ambient::new(p, d)?])
            }
        }
    }

    fn primes(&self, defaults: &[u64]) -> Vec<u64> {
        self.p.map(|p| vec![p]).unwrap_or_else(|| defaults.to_vec())
    }

    fn dims(&self, defaults: &[usize]) -> Vec<usize> {
        self.d.map(|d| vec![d]).unwrap_or_else(|| defaults.to_vec())
    }
}

pub fn run(name: &str, cfg: &SuiteConfig) -> Result<Vec<SuiteReport>, Error> {
    if name == "all" {
        return SUITES.iter().map(|s| run_one(s, cfg)).collect();
    }
    Ok(vec![run_one(name, cfg)?])
}

fn run_one(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport, Error> {
    match name {
        "galois" => galois(cfg),
        "wavelet" => wavelet(cfg),
        "tomography" => tomography(cfg),
        "equidist" => equidist(cfg),
        "uncertainty" => uncertainty(cfg),
        "dichotomy" => dichotomy(cfg),
        "paraboloid" => paraboloid(cfg),
        "spheres" => spheres(cfg),
        "selfdual" => selfdual(cfg),
        "eigen" => eigen(cfg),
        "zpl" => zpl(cfg),
        other => Err(Error::Domain(format!(
            "unknown suite {other:?}; expected one of {} or all",
            SUITES.join(", ")
        ))),
    }
}

fn show(f: &GridFunction) -> String {
    function_to_json(f).to_string()
}

fn show_points(points: &[Point]) -> String {
    let items: Vec<String> = points.iter().map(Point::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn as_cyclotomic(s: &Scalar, p: u64) -> Cyclotomic {
    match s.promote(ScalarKind::Cyclotomic, p) {
        Scalar::Cyclotomic(c) => c,
        other => panic!("exact spectrum expected, got {other}"),
    }
}

/// All subsets of the grid, as point lists, in bitmask order.
fn all_subsets(a: Ambient) -> Vec<Vec<Point>> {
    let pts: Vec<Point> = a.points().collect();
    (0u64..1 << pts.len())
        .map(|mask| {
            pts.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// `E = {(x, y) : x + y >= p}` with coordinates read as integers `0..p`.
pub fn worked_example(p: u64) -> GridFunction {
    let a = Ambient::new(p, 2).expect("prime");
    let set: Vec<Point> = a.points().filter(|x| x.coords()[0] + x.coords()[1] >= p).collect();
    GridFunction::indicator(a, &set)
}

fn galois(cfg: &SuiteConfig) -> Result<SuiteReport, Error> {
    let mut corpus = Corpus::for_suite(cfg.seed, "galois");
    let mut report = SuiteReport::new("galois");
    let primes = cfg.primes(&[2, 3, 5]);
    let dims = cfg.dims(&[1, 2, 3]);
    let mut functions = Vec::new();
    for _ in 0..cfg.size(300) {
        let a = Ambient::new(corpus.pick(&primes), corpus.pick(&dims))?;
        functions.push(corpus.function(a));
    }

    let mut round = Check::new("inverse(forward(f)) = f");
    round.run_all(&functions, |f| {
        (inverse(&forward(f)) == *f).then_some(()).ok_or_else(|| show(f))
    });
    report.push(round);

    let mut oracle = Check::new("axis passes = direct sum");
    let n = functions.len().min(100);
    oracle.run_all(&functions[..n], |f| {
        (forward(f) == forward_naive(f)).then_some(()).ok_or_else(|| show(f))
    });
    report.push(oracle);

    let primes = cfg.primes(&[3, 5, 7]);
    let dims = cfg.dims(&[2]);
    let mut functions = Vec::new();
    for _ in 0..cfg.size(200) {
        let a = Ambient::new(corpus.pick(&primes), corpus.pick(&dims))?;
        functions.push(corpus.function(a));
    }
    let mut equiv = Check::new("f^(r m) = g_r(f^(m))");
    equiv.run_all(&functions, |f| {
        let a = *f.ambient();
        let p = a.p();
        let spec = forward(f);
        for m in a.points().filter(|m| !m.is_zero()) {
            let base = as_cyclotomic(spec.value(&m), p);
            for r in 1..p {
                let lhs = as_cyclotomic(spec.value(&a.scale(r, &m)), p);
                let rhs = base.galois(r).map_err(|e| e.to_string())?;
                if lhs != rhs {
                    return Err(format!("m = {m}, r = {r}, f = {}", show(f)));
                }
            }
        }
        Ok(())
    });
    report.push(equiv);
    Ok(report)
}

fn check_worked_example(p: u64) -> Result<(), String> {
    let f = worked_example(p);
    let a = *f.ambient();
    let line = |c: &[u64]| ProjectiveLine::through(&a, &Point::new(c.to_vec())).expect("nonzero");
    let (lx, ly, ld) = (line(&[1, 0]), line(&[0, 1]), line(&[1, 1]));

    let bw = bandwidth(&f);
    let lines: BTreeSet<ProjectiveLine> = bw.lines.iter().cloned().collect();
    let expected: BTreeSet<ProjectiveLine> = [lx.clone(), ly.clone(), ld.clone()].into();
    if bw.cbw != 3 || lines != expected {
        let shown: Vec<String> = bw.lines.iter().map(|l| l.to_string()).collect();
        return Err(format!("p = {p}: cbw = {}, lines = [{}]", bw.cbw, shown.join(", ")));
    }

    // The closed form, built pointwise from hyperplane indicators.
    let closed = GridFunction::from_fn(a, |x| {
        let (u, v) = (x.coords()[0], x.coords()[1]);
        let total: Rational = (1..p)
            .map(|i| {
                let hits = (u == i) as i64 + (v == i) as i64 - ((u + v) % p == i) as i64;
                rational(i as i64 * hits, p as i64)
            })
            .sum();
        Scalar::Rational(total)
    })
    .map_err(|e| e.to_string())?;
    if closed != f {
        return Err(format!("p = {p}: closed form differs from 1_E"));
    }

    let dec = decompose(&f, WaveletForm::Reduced);
    if !dec.constant.is_zero() {
        return Err(format!("p = {p}: reduced constant {} != 0", dec.constant));
    }
    for w in &dec.parts {
        let sign = if *w.direction() == ld { -1 } else { 1 };
        for (t, c) in w.coeffs().iter().enumerate() {
            let want = Scalar::Rational(rational(sign * t as i64, p as i64));
            if *c != want {
                return Err(format!("p = {p}: direction {}, c_{t} = {c}, want {want}", w.direction()));
            }
        }
    }
    if dec.evaluate() != closed {
        return Err(format!("p = {p}: reduced decomposition does not re-evaluate to f"));
    }
    Ok(())
}

fn wavelet(cfg: &SuiteConfig) -> Result<SuiteReport, Error> {
    let mut corpus = Corpus::for_suite(cfg.seed, "wavelet");
    let mut report = SuiteReport::new("wavelet");

    let mut example = Check::new("worked example");
    let example_primes = cfg.primes(&[3, 5, 7]);
    example.run_all(&example_primes, |&p| check_worked_example(p));
    report.push(example);

    let primes = cfg.primes(&[2, 3, 5]);
    let dims = cfg.dims(&[1, 2, 3]);
    let mut functions = Vec::new();
    for _ in 0..cfg.size(100) {
        let a = Ambient::new(corpus.pick(&primes), corpus.pick(&dims))?;
        functions.push(corpus.function(a));
    }
    let mut round = Check::new("decompositions re-evaluate exactly");
    round.run_all(&functions, |f| {
        for form in [WaveletForm::Plain, WaveletForm::Reduced, WaveletForm::Massless] {
            if decompose(f, form).evaluate() != *f {
                return Err(format!("form {}: {}", form.name(), show(f)));
            }
        }
        Ok(())
    });
    report.push(round);

    // Single wavelets are recognized; sums in two directions are not.
    let mut cases = Vec::new();
    for _ in 0..cfg.size(100) {
        let a = Ambient::new(corpus.pick(&primes), corpus.pick(&[2, 3]))?;
        let lines = enumerate_lines(&a)?;
        let i = corpus.rng().gen_range(0..lines.len());
        let j = (i + corpus.rng().gen_range(1..lines.len())) % lines.len();
        let coeffs = |c: &mut Corpus| loop {
            let v: Vec<Scalar> = (0..a.p()).map(|_| Scalar::Rational(c.rational())).collect();
            if v.iter().any(|x| *x != v[0]) {
                return v;
            }
        };
        let w1 = Wavelet::new(a, lines[i].clone(), coeffs(&mut corpus), WaveletForm::Plain)?;
        let w2 = Wavelet::new(a, lines[j].clone(), coeffs(&mut corpus), WaveletForm::Plain)?;
        cases.push((w1, w2));
    }
    let mut classify = Check::new("wavelet recognition");
    classify.run_all(&cases, |(w1, w2)| {
        let f = evaluate(w1);
        match is_wavelet(&f) {
            WaveletClass::Direction(l) if l == *w1.direction() => {}
            other => return Err(format!("single wavelet classified as {other:?}: {}", show(&f))),
        }
        let g = f.add(&evaluate(w2)).map_err(|e| e.to_string())?;
        match is_wavelet(&g) {
            WaveletClass::NotWavelet { cbw: 2 } => Ok(()),
            other => Err(format!("sum of two directions classified as {other:?}: {}", show(&g))),
        }
    });
    report.push(classify);
    Ok(report)
}

fn corrupted(table: &MassTable, target: &ProjectiveLine, t: usize) -> MassTable {
    let mut out = MassTable::new(*table.ambient());
    for (line, row) in table.rows() {
        let mut row = row.clone();
        if line == target {
            row[t] = &row[t] + &Scalar::from_int(1);
        }
        out.insert(line.rep(), row).expect("fresh table");
    }
    out
}

fn tomography(cfg: &SuiteConfig) -> Result<SuiteReport, Error> {
    let mut corpus = Corpus::for_suite(cfg.seed, "tomography");
    let mut report = SuiteReport::new("tomography");
    let primes = cfg.primes(&[2, 3, 5]);
    let dims = cfg.dims(&[2, 3]);
    let mut functions: Vec<GridFunction> = cfg.primes(&[3, 5, 7]).into_iter().map(worked_example).collect();
    for _ in 0..cfg.size(100) {
        let a = Ambient::new(corpus.pick(&primes), corpus.pick(&dims))?;
        functions.push(corpus.function(a));
    }

    let mut round = Check::new("reconstruct(project(f)) = f");
    round.run_all(&functions, |f| {
        match reconstruct_from_masses(&mass_table(f)) {
            Ok(g) if g == *f => Ok(()),
            Ok(_) => Err(format!("wrong reconstruction of {}", show(f))),
            Err(e) => Err(format!("{e}: {}", show(f))),
        }
    });
    report.push(round);

    let mut corrupt = Check::new("every single-entry corruption is detected");
    let tables: Vec<MassTable> = functions
        .iter()
        .filter(|f| f.ambient().d() >= 2)
        .map(mass_table)
        .collect();
    let entries: Vec<(usize, ProjectiveLine, usize)> = tables
        .iter()
        .enumerate()
        .flat_map(|(k, table)| {
            let p = table.ambient().p() as usize;
            table
                .rows()
                .keys()
                .flat_map(move |line| (0..p).map(move |t| (k, line.clone(), t)))
                .collect::<Vec<_>>()
        })
        .collect();
    corrupt.run_all(&entries, |(k, line, t)| {
        match reconstruct_from_masses(&corrupted(&tables[*k], line, *t)) {
            Err(Error::InconsistentMasses(_)) => Ok(()),
            other => Err(format!("table {k}, direction {line}, t = {t}: {other:?}")),
        }
    });
    report.push(corrupt);
    Ok(report)
}

/// Key of the coset of `V^perp` containing `x`.
fn coset_key(v: &Subspace, x: &Point) -> Point {
    v.perp().reduce(x)
}

/// Subtracts from `g`, coset by coset, the excess over the mean mass.
fn equidistributed_from(g: &GridFunction, v: &Subspace) -> GridFunction {
    let a = *g.ambient();
    let perp = v.perp();
    let values = g.rational_values().expect("rational corpus");
    let mut mass: BTreeMap<Point, Rational> = BTreeMap::new();
    for (x, val) in a.points().zip(&values) {
        *mass.entry(perp.reduce(&x)).or_insert_with(|| int(0)) += val;
    }
    let count = Rational::from_integer((mass.len() as i64).into());
    let mean = mass.values().sum::<Rational>() / count;
    let coset = Rational::from_integer((perp.size() as i64).into());
    let fixed = a
        .points()
        .zip(values)
        .map(|(x, val)| val - (&mass[&perp.reduce(&x)] - &mean) / &coset)
        .collect();
    GridFunction::from_rationals(a, fixed).expect("sizes agree")
}

/// An indicator with the same number `c` of points in every coset.
fn equidistributed_indicator(corpus: &mut Corpus, a: Ambient, v: &Subspace) -> Vec<Point> {
    let perp = v.perp();
    let mut cosets: BTreeMap<Point, Vec<Point>> = BTreeMap::new();
    for x in a.points() {
        cosets.entry(perp.reduce(&x)).or_default().push(x);
    }
    let c = corpus.rng().gen_range(1..=perp.size());
    let mut set = Vec::new();
    for members in cosets.values_mut() {
        use rand::seq::SliceRandom;
        members.shuffle(corpus.rng());
        set.extend(members.iter().take(c).cloned());
    }
    set
}

struct EquidistCase {
    f: GridFunction,
    v: Subspace,
    indicator: bool,
    constructed: bool,
}

fn equidist(cfg: &SuiteConfig) -> Result<SuiteReport, Error> {
    let mut corpus = Corpus::for_suite(cfg.seed, "equidist");
    let mut report = SuiteReport::new("equidist");
    let primes = cfg.primes(&[2, 3, 5]);
    let dims = cfg.dims(&[1, 2, 3]);
    let mut cases = Vec::new();
    for i in 0..cfg.size(500) {
        let a = Ambient::new(corpus.pick(&primes), corpus.pick(&dims))?;
        let v = corpus.subspace(a, a.d());
        let (f, indicator, constructed) = match i % 4 {
            0 => (corpus.function(a), false, false),
            1 => {
                let g = corpus.function(a);
                (equidistributed_from(&g, &v), false, true)
            }
            2 => (GridFunction::indicator(a, &corpus.subset(a)), true, false),
            _ => {
                let set = equidistributed_indicator(&mut corpus, a, &v);
                (GridFunction::indicator(a, &set), true, true)
            }
        };
        cases.push(EquidistCase {
            f,
            v,
            indicator,
            constructed,
        });
    }

    let mut bicond = Check::new("equal coset masses iff vanishing on V \\ {0}");
    let mut divis = Check::new("equidistributed indicators have p^k | |E|");
    let outcomes: Vec<(CaseResult, Option<CaseResult>)> = {
        use rayon::prelude::*;
        cases
            .par_iter()
            .map(|c| {
                let a = *c.f.ambient();
                let desc = || format!("V = span{}, f = {}", show_points(c.v.basis()), show(&c.f));
                let r = match equidistribution_check(&c.f, &c.v) {
                    Ok(r) => r,
                    Err(e) => return (Err(format!("{e}: {}", desc())), None),
                };
                // Independent oracle: direct character sums and coset grouping.
                let spec = forward_naive(&c.f);
                let vanish = c
                    .v
                    .points()
                    .iter()
                    .filter(|m| !m.is_zero())
                    .all(|m| spec.vanishes_at(m));
                let mut mass: BTreeMap<Point, Scalar> = BTreeMap::new();
                for (x, val) in a.points().zip(c.f.values()) {
                    let e = mass.entry(coset_key(&c.v, &x)).or_insert_with(Scalar::zero);
                    *e = &*e + val;
                }
                let first = mass.values().next().cloned().unwrap_or_else(Scalar::zero);
                let equal = mass.values().all(|m| *m == first);
                let main = if vanish != r.spectrum_vanishes || equal != r.equidistributed || equal != vanish {
                    Err(format!("oracle vanish={vanish} equal={equal}, report {r:?}: {}", desc()))
                } else if c.constructed && !r.equidistributed {
                    Err(format!("constructed case not equidistributed: {}", desc()))
                } else {
                    Ok(())
                };
                let div = (c.indicator && r.equidistributed).then(|| {
                    let size = c.f.support().len();
                    let pk = (a.p() as usize).pow(c.v.dim() as u32);
                    (size % pk == 0)
                        .then_some(())
                        .ok_or_else(|| format!("|E| = {size}, p^k = {pk}: {}", desc()))
                });
                (main, div)
            })
            .collect()
    };
    for (main, div) in outcomes {
        bicond.record(main);
        if let Some(d) = div {
            divis.record(d);
        }
    }
    report.push(bicond);
    report.push(divis);
    Ok(report)
}

fn uncertainty(cfg: &SuiteConfig) -> Result<SuiteReport, Error> {
    let mut corpus = Corpus::for_suite(cfg.seed, "uncertainty");
    let mut report = SuiteReport::new("uncertainty");
    let mut plans: Vec<(Ambient, bool)> = Vec::new();
    if cfg.p.is_none() && cfg.d.is_none() {
        plans.push((Ambient::new(2, 2)?, true));
        plans.push((Ambient::new(2, 3)?, true));
        plans.push((Ambient::new(3, 3)?, false));
    } else {
        for a in cfg.grids(&[(2, 2)])? {
            plans.push((a, cfg.exhaustive && a.size() <= MAX_EXHAUSTIVE_POINTS));
        }
    }
    for (a, exhaustive) in plans {
        let sets: Vec<Vec<Point>> = if exhaustive {
            all_subsets(a).into_iter().filter(|s| !s.is_empty()).collect()
        } else {
            (0..cfg.size(1000)).map(|_| corpus.nonempty_subset(a)).collect()
        };
        let mode = if exhaustive { "all" } else { "random" };
        let mut check = Check::new(format!(
            "((p-1) cbw + 1) |E| >= p^d, {mode} E at p={}, d={}",
            a.p(),
            a.d()
        ));
        check.run_all(&sets, |set| match uncertainty_check(&a, set) {
            Ok(r) if r.holds && r.dimension_form_holds => Ok(()),
            Ok(r) => Err(format!("E = {}: cbw = {}, lhs = {} < {}", show_points(set), r.cbw, r.lhs, r.rhs)),
            Err(e) => Err(format!("E = {}: {e}", show_points(set))),
        });
        report.push(check);
    }
    Ok(report)
}

fn dichotomy(cfg: &SuiteConfig) -> Result<SuiteReport, Error> {
    let mut corpus = Corpus::for_suite(cfg.seed, "dichotomy");
    let mut report = SuiteReport::new("dichotomy");
    for a in cfg.grids(&[(2, 2), (2, 3)])? {
        let exhaustive = cfg.exhaustive && a.size() <= MAX_EXHAUSTIVE_POINTS;
        let sets: Vec<Vec<Point>> = if exhaustive {
            all_subsets(a)
        } else {
            (0..cfg.size(1000)).map(|_| corpus.subset(a)).collect()
        };
        let mut check = Check::new(format!(
            "parallel lines or cbw > d at p={}, d={}",
            a.p(),
            a.d()
        ));
        check.run_all(&sets, |set| {
            classify_small_cbw_set(&a, set)
                .map(|_| ())
                .map_err(|e| format!("E = {}: {e}", show_points(set)))
        });
        report.push(check);
    }
    Ok(report)
}

/// A rational function whose transform is supported on the origin and on
/// a random subset of `lines`.
fn seeded_on_lines(corpus: &mut Corpus, a: Ambient, lines: &[ProjectiveLine]) -> GridFunction {
    let p = a.p();
    let mut seeds = BTreeMap::new();
    for line in lines {
        if corpus.rng().gen_bool(0.5) {
            let coeffs = (0..p - 1).map(|_| corpus.rational()).collect();
            seeds.insert(line.clone(), Cyclotomic::new(p, coeffs).expect("p - 1 coefficients"));
        }
    }
    let dc = corpus.rational();
    inverse_phi(&a, &dc, &seeds).expect("seeds on lines of this grid")
}

fn paraboloid(cfg: &SuiteConfig) -> Result<SuiteReport, Error> {
    let mut corpus = Corpus::for_suite(cfg.seed, "paraboloid");
    let mut report = SuiteReport::new("paraboloid");
    let mut check = Check::new("slice differences are good");
    let mut cases = Vec::new();
    for a in cfg.grids(&[(5, 3)])? {
        let off: Vec<ProjectiveLine> = enumerate_lines(&a)?
            .into_iter()
            .filter(|l| {
                classify_direction_paraboloid(&a, l.rep()).ok() != Some(ParaboloidDirection::Covered)
            })
            .collect();
        check.note(format!(
            "p={}, d={}: {} of {} lines avoid the paraboloid",
            a.p(),
            a.d(),
            off.len(),
            a.line_count()
        ));
        for _ in 0..cfg.size(100) {
            cases.push(seeded_on_lines(&mut corpus, a, &off));
        }
    }
    check.run_all(&cases, |f| {
        if !f.is_rational() {
            return Err(format!("constructed function is not rational: {}", show(f)));
        }
        match check_paraboloid_theorem(f) {
            Ok(r) if r.hypothesis_met && r.violations.is_empty() => Ok(()),
            Ok(r) => Err(format!("{r:?}: {}", show(f))),
            Err(e) => Err(format!("{e}: {}", show(f))),
        }
    });
    report.push(check);
    Ok(report)
}

fn spheres(cfg: &SuiteConfig) -> Result<SuiteReport, Error> {
    let mut corpus = Corpus::for_suite(cfg.seed, "spheres");
    let mut report = SuiteReport::new("spheres");
    let grids = cfg.grids(&[(3, 2), (5, 2)])?;

    let mut counts = Check::new("nonzero-radius spheres are equinumerous");
    for a in &grids {
        let (p, d) = (a.p(), a.d());
        let sizes: Vec<usize> = (1..p).map(|r| sphere_count(p, d, r)).collect::<Result<_, _>>()?;
        counts.note(format!("p={p}, d={d}: |S_r| for r = 1..{} is {sizes:?}", p - 1));
        counts.expect(sizes.iter().all(|&s| s == sizes[0]), || format!("p={p}, d={d}: {sizes:?}"));
    }
    report.push(counts);

    let mut equi = Check::new("two-circle vanishing gives equal sphere masses");
    let mut cases = Vec::new();
    for &a in &grids {
        if a.p() == 2 || a.d() % 2 != 0 {
            continue;
        }
        let cone = cone_lines(&a)?;
        for _ in 0..cfg.size(20) {
            let f = seeded_on_lines(&mut corpus, a, &cone);
            let centers: Vec<Point> = (0..5).map(|_| corpus.point(a)).collect();
            cases.push((f, centers));
        }
    }
    equi.run_all(&cases, |(f, centers)| {
        for c in centers {
            match sphere_equidistribution_check(f, c) {
                Ok(r) if r.equidistributed => {}
                Ok(r) => {
                    let masses: Vec<String> = r.masses.iter().map(|m| m.to_string()).collect();
                    return Err(format!("center {c}: masses [{}]: {}", masses.join(", "), show(f)));
                }
                Err(e) => return Err(format!("center {c}: {e}: {}", show(f))),
            }
        }
        if f.ambient().d() == 2 {
            let b = least_non_residue(f.ambient().p()).map_err(|e| e.to_string())?;
            two_circle_analysis(f, 1, b).map_err(|e| format!("{e}: {}", show(f)))?;
        }
        Ok(())
    });
    report.push(equi);

    let mut unions = Check::new("indicators split into L+ and L- unions");
    let mut cases = Vec::new();
    for &a in &grids {
        let p = a.p();
        if a.d() != 2 || p % 4 != 1 {
            continue;
        }
        let i = sqrt_minus_one(p)?;
        for k in 0..cfg.size(20) {
            let chosen: Vec<u64> = loop {
                let s: Vec<u64> = (0..p).filter(|_| corpus.rng().gen_bool(0.5)).collect();
                if !s.is_empty() && s.len() < p as usize {
                    break s;
                }
            };
            // y - i x constant along (1, i); y + i x constant along (1, -i).
            let plus = k % 2 == 0;
            let set: Vec<Point> = a
                .points()
                .filter(|x| {
                    let (u, v) = (x.coords()[0], x.coords()[1]);
                    let key = if plus { (v + (p - i) * u) % p } else { (v + i * u) % p };
                    chosen.contains(&key)
                })
                .collect();
            cases.push((GridFunction::indicator(a, &set), plus));
        }
    }
    unions.run_all(&cases, |(f, plus)| {
        let p = f.ambient().p();
        let b = least_non_residue(p).map_err(|e| e.to_string())?;
        match (two_circle_analysis(f, 1, b), plus) {
            (Ok(TwoCircleOutcome::LplusUnion(_)), true) | (Ok(TwoCircleOutcome::LminusUnion(_)), false) => Ok(()),
            (other, _) => Err(format!("{other:?}: {}", show(f))),
        }
    });
    report.push(unions);
    Ok(report)
}

fn selfdual(cfg: &SuiteConfig) -> Result<SuiteReport, Error> {
    let mut report = SuiteReport::new("selfdual");
    for a in cfg.grids(&[(2, 2), (3, 2), (2, 3)])? {
        if a.size() > MAX_EXHAUSTIVE_POINTS.max(9) {
            return Err(Error::Capacity(format!(
                "self-dual search over 2^{} subsets",
                a.size()
            )));
        }
        let subsets = all_subsets(a);
        let mut check = Check::new(format!("self-dual sets at p={}, d={}", a.p(), a.d()));
        #[allow(clippy::type_complexity)]
        let found: Vec<Result<Option<(Vec<Point>, Rational)>, String>> = {
            use rayon::prelude::*;
            subsets
                .par_iter()
                .map(|s| match self_dual_classify(&a, s) {
                    Ok(SelfDual::Empty) => Ok(Some((Vec::new(), int(0)))),
                    Ok(SelfDual::Lagrangian { lambda, .. }) => Ok(Some((s.clone(), lambda))),
                    Ok(SelfDual::NotSelfDual) => Ok(None),
                    Err(e) => Err(format!("E = {}: {e}", show_points(s))),
                })
                .collect()
        };
        let mut hits: BTreeMap<Vec<Point>, Rational> = BTreeMap::new();
        for r in found {
            match r {
                Ok(Some((mut s, lambda))) => {
                    s.sort();
                    hits.insert(s, lambda);
                    check.record(Ok(()));
                }
                Ok(None) => check.record(Ok(())),
                Err(e) => check.record(Err(e)),
            }
        }
        // Oracle: the empty set and the Lagrangian subspaces, lambda = p^(-d/2).
        let mut expected: BTreeMap<Vec<Point>, Rational> = BTreeMap::new();
        expected.insert(Vec::new(), int(0));
        for l in enumerate_lagrangian(&a)? {
            let mut pts = l.points();
            pts.sort();
            let lambda = Rational::new((pts.len() as i64).into(), (a.size() as i64).into());
            expected.insert(pts, lambda);
        }
        let listing: Vec<String> = hits
            .iter()
            .map(|(s, l)| format!("{} (lambda = {l})", show_points(s)))
            .collect();
        check.note(format!("{} subsets, self-dual: {}", subsets.len(), listing.join(", ")));
        check.expect(hits == expected, || format!("found {hits:?}, expected {expected:?}"));
        report.push(check);
    }
    Ok(report)
}

fn check_pair(pair: &EigenPair, tol: f64) -> Result<(), String> {
    let res = pair.residual();
    // NaN residuals fail too
    if res.is_nan() || res >= tol {
        return Err(format!("residual {res:e} >= {tol:e}"));
    }
    if let Some(exact) = pair.verify_exact() {
        if !exact {
            return Err("exact verification failed".into());
        }
    }
    let v = &pair.subspace;
    let degenerate = v.is_lagrangian() && v.contains(&pair.shift);
    if degenerate != pair.degenerate {
        return Err(format!("degenerate flag {} but expected {degenerate}", pair.degenerate));
    }
    if !pair.degenerate && !pair.linearly_independent(tol) {
        return Err("f+ and f- are dependent".into());
    }
    Ok(())
}

fn eigen(cfg: &SuiteConfig) -> Result<SuiteReport, Error> {
    let mut corpus = Corpus::for_suite(cfg.seed, "eigen");
    let mut report = SuiteReport::new("eigen");
    let grids = cfg.grids(&[(2, 2), (3, 2), (2, 3)])?;
    let tol = cfg.tolerance;

    let mut linear = Check::new("forward(f+-) = +-p^(-d/2) f+- for every subspace");
    let mut subspaces = Vec::new();
    for &a in &grids {
        subspaces.extend(enumerate_all_subspaces(&a)?);
    }
    linear.run_all(&subspaces, |v| {
        check_pair(&eigenfunction_pair(v), tol).map_err(|e| format!("V = span{}: {e}", show_points(v.basis())))
    });
    report.push(linear);

    let mut affine = Check::new("forward(f+-) = +-p^(-d/2) conj(f+-) for affine V + x");
    let mut cases = Vec::new();
    for _ in 0..cfg.size(20) {
        let a = grids[corpus.rng().gen_range(0..grids.len())];
        let v = if corpus.rng().gen_bool(0.2) {
            Subspace::zero(&a)
        } else {
            corpus.subspace(a, a.d())
        };
        let x = corpus.point(a);
        cases.push((v, x));
    }
    affine.run_all(&cases, |(v, x)| {
        check_pair(&affine_eigenfunction_pair(v, x), tol)
            .map_err(|e| format!("V = span{}, x = {x}: {e}", show_points(v.basis())))
    });
    report.push(affine);
    Ok(report)
}

fn zpl(cfg: &SuiteConfig) -> Result<SuiteReport, Error> {
    let mut corpus = Corpus::for_suite(cfg.seed, "zpl");
    let mut report = SuiteReport::new("zpl");
    let grids: Vec<RingAmbient> = match (cfg.p, cfg.l, cfg.d) {
        (None, None, None) => vec![RingAmbient::new(2, 2, 2)?, RingAmbient::new(3, 2, 1)?],
        (p, l, d) => vec![RingAmbient::new(p.unwrap_or(2), l.unwrap_or(2), d.unwrap_or(2))?],
    };

    let mut units = Check::new("p^l - p^(l-1) units");
    let mut hyper = Check::new("|H_v| = p^(l(d-1) + nu(v))");
    let mut lines = Check::new("|l_v| = p^(l - nu(v))");
    let mut nesting = Check::new("level-s lines split into p level-(s-1) lines");
    for &a in &grids {
        let (p, l, q) = (a.p(), a.l(), a.q());
        let count = (1..q).filter(|n| n % p != 0).count() as u64;
        units.note(format!("p={p}, l={l}: {count} units"));
        units.expect(count == q - q / p, || format!("p={p}, l={l}: {count} units"));
        for v in a.points().filter(|v| !v.is_zero()) {
            let nu = a.vector_valuation(&v);
            let brute = a.points().filter(|x| a.dot(x, &v) == 0).count() as u64;
            let formula = p.pow(l * (a.d() as u32 - 1) + nu);
            hyper.expect(brute == formula && hyperplane_mod(&a, &v).is_ok(), || {
                format!("v = {v}: {brute} points, formula {formula}")
            });
            let orbit: BTreeSet<Point> = (0..q).map(|t| a.scale(t, &v)).collect();
            lines.expect(orbit.len() as u64 == p.pow(l - nu), || {
                format!("v = {v}: {} points, nu = {nu}", orbit.len())
            });
            let line = LevelLine::through(&a, &v)?;
            for x in a.points() {
                let affine = AffineLevelLine::new(&a, &x, line.clone());
                let subs = affine.sublines(&a);
                let mut all: Vec<Point> = subs.iter().flat_map(|s| s.points(&a)).collect();
                all.sort();
                let mut whole = affine.points(&a);
                whole.sort();
                let distinct = all.windows(2).all(|w| w[0] != w[1]);
                nesting.expect(subs.len() == p as usize && distinct && all == whole, || {
                    format!("v = {v}, x = {x}")
                });
            }
        }
    }
    report.push(units);
    report.push(hyper);
    report.push(lines);
    report.push(nesting);

    let mut round = Check::new("multiscale decomposition re-evaluates exactly");
    let mut functions = Vec::new();
    for &a in &grids {
        for _ in 0..cfg.size(100) {
            functions.push(corpus.ring_function(a));
        }
    }
    let outcomes: Vec<Result<usize, String>> = {
        use rayon::prelude::*;
        functions
            .par_iter()
            .map(|f| {
                let dec = multiscale_decompose(f).map_err(|e| e.to_string())?;
                let back = dec.evaluate().map_err(|e| e.to_string())?;
                if back != *f || !dec.parts.iter().all(|part| part.function.is_rational()) {
                    return Err(format!("{}", charkit::format::ring_function_to_json(f)));
                }
                Ok(dec.parts.len())
            })
            .collect()
    };
    let mut part_counts: BTreeMap<usize, usize> = BTreeMap::new();
    for o in outcomes {
        if let Ok(n) = &o {
            *part_counts.entry(*n).or_insert(0) += 1;
        }
        round.record(o.map(|_| ()));
    }
    round.note(format!("part count histogram (parts: functions): {part_counts:?}"));
    report.push(round);
    Ok(report)
}
