use std::path::{Path, PathBuf};

use charkit::algebra::{Ambient, Point, Subspace};
use charkit::eigen::{affine_eigenfunction_pair, eigen_expand, eigenfunction_pair, TransformKind, Weight};
use charkit::format::{
    bandwidth_to_json, decomposition_to_json, function_from_json, function_to_json,
    multiscale_to_json, parse_document, point_to_json, points_to_json, rational_to_json,
    ring_function_from_json, ring_function_to_json, scalar_to_json, sinogram_from_json,
    sinogram_to_json, to_pretty,
};
use charkit::fourier::{forward, forward_naive, inverse, GridFunction, Spectrum};
use charkit::spectrum::bandwidth;
use charkit::varieties::{
    check_paraboloid_theorem, sphere_equidistribution_check, variety_points, VarietyKind,
};
use charkit::wavelets::{decompose, mass_table, reconstruct_from_masses, WaveletForm};
use charkit::zmodpl::{
    forward_mod, hyperplane_mod, inverse_mod, is_level_l_wavelet, multiscale_decompose,
    LevelLine, LevelWaveletClass, RingAmbient,
};
use serde_json::{json, Value};

use crate::args::{
    Cli, Command, EigenAction, FormArg, GlobalArgs, OutputFormat, TomographyAction, VarietyAction,
    VarietyArg, ZplAction,
};
use crate::corpus::Corpus;
use crate::error::CliError;
use crate::report::{render_suite_table, render_table};
use crate::suites::{self, SuiteConfig};

/// What a command produced: the main document, optional side files, and
/// the exit code to finish with.
#[derive(Debug)]
pub struct Outcome {
    pub document: Value,
    pub table: Option<String>,
    pub side_files: Vec<(PathBuf, String)>,
    pub exit: i32,
}

impl Outcome {
    fn doc(document: Value) -> Self {
        Outcome {
            document,
            table: None,
            side_files: Vec::new(),
            exit: 0,
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => to_pretty(&self.document),
            OutputFormat::Table => self
                .table
                .clone()
                .unwrap_or_else(|| render_table(&self.document)),
        }
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn read_json(path: Option<&Path>) -> Result<Value, CliError> {
    let path = path.ok_or_else(|| CliError::Usage("this command needs --input FILE".into()))?;
    Ok(parse_document(&read_text(path)?)?)
}

fn read_function(g: &GlobalArgs) -> Result<GridFunction, CliError> {
    Ok(function_from_json(&read_json(g.input.as_deref())?)?)
}

fn parse_coords(text: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(|c| {
            c.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Usage(format!("expected comma-separated integers, got {text:?}")))
        })
        .collect()
}

fn ambient_from_flags(g: &GlobalArgs) -> Result<Ambient, CliError> {
    match (g.p, g.d) {
        (Some(p), Some(d)) => Ok(Ambient::new(p, d)?),
        _ => Err(CliError::Usage("this command needs --p and --d".into())),
    }
}

fn form(f: FormArg) -> WaveletForm {
    match f {
        FormArg::Plain => WaveletForm::Plain,
        FormArg::Reduced => WaveletForm::Reduced,
        FormArg::Massless => WaveletForm::Massless,
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Transform { inverse: inv, oracle } => transform(g, *inv, *oracle),
        Command::Bandwidth => Ok(Outcome::doc(bandwidth_to_json(&bandwidth(&read_function(g)?)))),
        Command::Decompose => {
            let f = read_function(g)?;
            Ok(Outcome::doc(decomposition_to_json(&decompose(&f, form(g.form)))))
        }
        Command::Tomography { action } => tomography(g, action),
        Command::Eigen { action } => eigen(g, action),
        Command::Variety { action } => variety(g, action),
        Command::Zpl { action } => zpl(g, action),
        Command::Verify { suite } => verify(g, suite),
        Command::Random { indicator } => {
            let a = ambient_from_flags(g)?;
            let mut corpus = Corpus::new(g.seed);
            let f = if *indicator {
                GridFunction::indicator(a, &corpus.subset(a))
            } else {
                corpus.function(a)
            };
            Ok(Outcome::doc(function_to_json(&f)))
        }
    }
}

fn transform(g: &GlobalArgs, inv: bool, oracle: bool) -> Result<Outcome, CliError> {
    let f = read_function(g)?;
    if inv {
        let spectrum = Spectrum::from_grid(f);
        return Ok(Outcome::doc(function_to_json(&inverse(&spectrum))));
    }
    let spectrum = forward(&f);
    if !oracle {
        return Ok(Outcome::doc(function_to_json(&spectrum)));
    }
    let agree = spectrum == forward_naive(&f);
    let doc = json!({
        "match": if agree { "exact" } else { "mismatch" },
        "spectrum": function_to_json(&spectrum),
    });
    if !agree {
        return Err(CliError::Invariant("axis passes disagree with the direct sum".into()));
    }
    Ok(Outcome {
        table: Some("match  exact\n".into()),
        ..Outcome::doc(doc)
    })
}

fn tomography(g: &GlobalArgs, action: &TomographyAction) -> Result<Outcome, CliError> {
    match action {
        TomographyAction::Project { file } => {
            let doc = read_json(file.as_deref().or(g.input.as_deref()))?;
            let f = function_from_json(&doc)?;
            Ok(Outcome::doc(sinogram_to_json(&mass_table(&f))))
        }
        TomographyAction::Reconstruct { file } => {
            let doc = read_json(file.as_deref().or(g.input.as_deref()))?;
            let table = sinogram_from_json(&doc)?;
            Ok(Outcome::doc(function_to_json(&reconstruct_from_masses(&table)?)))
        }
    }
}

fn weight_json(w: &Weight) -> Value {
    match w {
        Weight::Exact(r) => rational_to_json(r),
        Weight::Approx(x) => json!(x),
    }
}

fn eigen(g: &GlobalArgs, action: &EigenAction) -> Result<Outcome, CliError> {
    match action {
        EigenAction::Pair { span, shift } => {
            let a = ambient_from_flags(g)?;
            let gens = span
                .iter()
                .map(|s| Ok(a.point_from(&parse_coords(s)?)?))
                .collect::<Result<Vec<Point>, CliError>>()?;
            let v = Subspace::span(&a, &gens);
            let pair = match shift {
                Some(x) => affine_eigenfunction_pair(&v, &a.point_from(&parse_coords(x)?)?),
                None => eigenfunction_pair(&v),
            };
            let (lp, lm) = pair.eigenvalues();
            let kind = match pair.transform_kind {
                TransformKind::Plain => "plain",
                TransformKind::Conjugate => "conjugate",
            };
            let mut meta = json!({
                "p": a.p(),
                "d": a.d(),
                "subspace": points_to_json(v.basis()),
                "shift": point_to_json(&pair.shift),
                "weight": weight_json(&pair.weight),
                "eigenvalue": {"plus": lp, "minus": lm},
                "transform_kind": kind,
                "degenerate": pair.degenerate,
                "residual": pair.residual(),
                "exact": pair.verify_exact(),
            });
            let plus = function_to_json(&pair.plus);
            let minus = function_to_json(&pair.minus);
            let mut side_files = Vec::new();
            match &g.output {
                Some(out) => {
                    let stem = out.with_extension("");
                    let plus_path = PathBuf::from(format!("{}.plus.json", stem.display()));
                    let minus_path = PathBuf::from(format!("{}.minus.json", stem.display()));
                    meta["plus_file"] = json!(plus_path.display().to_string());
                    meta["minus_file"] = json!(minus_path.display().to_string());
                    side_files.push((plus_path, to_pretty(&plus)));
                    side_files.push((minus_path, to_pretty(&minus)));
                }
                None => {
                    meta["plus"] = plus;
                    meta["minus"] = minus;
                }
            }
            Ok(Outcome {
                side_files,
                ..Outcome::doc(meta)
            })
        }
        EigenAction::Expand => {
            let f = read_function(g)?;
            let expansion = eigen_expand(&f);
            let terms: Vec<Value> = expansion
                .terms
                .iter()
                .map(|t| {
                    json!({
                        "subspace": points_to_json(t.pair.subspace.basis()),
                        "shift": point_to_json(&t.pair.shift),
                        "plus_coeff": scalar_to_json(&t.plus_coeff),
                        "minus_coeff": scalar_to_json(&t.minus_coeff),
                    })
                })
                .collect();
            let back = expansion.evaluate();
            let reconstructs = back.approx_eq(&f);
            if !reconstructs {
                return Err(CliError::Invariant("eigen expansion does not re-evaluate to f".into()));
            }
            Ok(Outcome::doc(json!({
                "p": f.ambient().p(),
                "d": f.ambient().d(),
                "terms": terms,
                "reconstructs": reconstructs,
            })))
        }
    }
}

fn variety(g: &GlobalArgs, action: &VarietyAction) -> Result<Outcome, CliError> {
    match action {
        VarietyAction::Points { kind, radius } => {
            let a = ambient_from_flags(g)?;
            let (kind, name) = match kind {
                VarietyArg::Paraboloid => (VarietyKind::Paraboloid, "paraboloid"),
                VarietyArg::Sphere => (VarietyKind::Sphere(*radius), "sphere"),
                VarietyArg::Cone => (VarietyKind::IsotropicCone, "cone"),
            };
            let pts = variety_points(&a, kind).points;
            Ok(Outcome::doc(json!({
                "p": a.p(),
                "d": a.d(),
                "kind": name,
                "radius": matches!(kind, VarietyKind::Sphere(_)).then_some(*radius),
                "count": pts.len(),
                "points": points_to_json(&pts),
            })))
        }
        VarietyAction::Paraboloid => {
            let f = read_function(g)?;
            let r = check_paraboloid_theorem(&f)?;
            if !r.hypothesis_met {
                return Err(CliError::Data(charkit::Error::HypothesisNotMet(
                    "transform does not vanish on the punctured paraboloid".into(),
                )));
            }
            if !r.violations.is_empty() {
                return Err(CliError::Invariant(format!(
                    "slice differences that are not good: {:?}",
                    r.violations
                )));
            }
            Ok(Outcome::doc(json!({
                "hypothesis_met": r.hypothesis_met,
                "pairs_checked": r.pairs_checked,
                "violations": r.violations,
            })))
        }
        VarietyAction::Spheres { center } => {
            let f = read_function(g)?;
            let a = *f.ambient();
            let c = match center {
                Some(c) => a.point_from(&parse_coords(c)?)?,
                None => a.zero(),
            };
            let r = sphere_equidistribution_check(&f, &c)?;
            if !r.equidistributed {
                let masses: Vec<String> = r.masses.iter().map(|m| m.to_string()).collect();
                return Err(CliError::Invariant(format!(
                    "unequal sphere masses about {c}: [{}]",
                    masses.join(", ")
                )));
            }
            Ok(Outcome::doc(json!({
                "center": point_to_json(&r.center),
                "masses": r.masses.iter().map(rational_to_json).collect::<Vec<_>>(),
                "common": r.common.as_ref().map(rational_to_json),
                "equidistributed": r.equidistributed,
            })))
        }
    }
}

fn ring_from_flags(g: &GlobalArgs) -> Result<RingAmbient, CliError> {
    match (g.p, g.l, g.d) {
        (Some(p), Some(l), Some(d)) => Ok(RingAmbient::new(p, l, d)?),
        _ => Err(CliError::Usage("this command needs --p, --l and --d".into())),
    }
}

fn zpl(g: &GlobalArgs, action: &ZplAction) -> Result<Outcome, CliError> {
    let read = || -> Result<_, CliError> { Ok(ring_function_from_json(&read_json(g.input.as_deref())?)?) };
    match action {
        ZplAction::Transform { inverse } => {
            let f = read()?;
            let out = if *inverse { inverse_mod(&f) } else { forward_mod(&f) };
            Ok(Outcome::doc(ring_function_to_json(&out)))
        }
        ZplAction::Wavelet => {
            let f = read()?;
            let doc = match is_level_l_wavelet(&f)? {
                LevelWaveletClass::Constant => json!({"class": "constant", "degenerate": true}),
                LevelWaveletClass::Wavelet { line, coeffs } => json!({
                    "class": "wavelet",
                    "level": line.level(),
                    "generator": point_to_json(line.generator()),
                    "coeffs": coeffs.iter().map(charkit::format::cyclotomic_l_to_json).collect::<Vec<_>>(),
                }),
                LevelWaveletClass::AffineOnly { line, converse_gap } => json!({
                    "class": "affine_only",
                    "level": line.level(),
                    "anchor": point_to_json(line.anchor()),
                    "generator": point_to_json(line.line().generator()),
                    "converse_gap": converse_gap,
                }),
                LevelWaveletClass::NotWavelet => json!({"class": "not_wavelet"}),
            };
            Ok(Outcome::doc(doc))
        }
        ZplAction::Decompose => {
            let f = read()?;
            let dec = multiscale_decompose(&f)?;
            if dec.evaluate()? != f {
                return Err(CliError::Invariant("multiscale parts do not sum to f".into()));
            }
            Ok(Outcome::doc(multiscale_to_json(&dec)))
        }
        ZplAction::Hyperplane { v } => {
            let a = ring_from_flags(g)?;
            let v = a.point_from(&parse_coords(v)?)?;
            let pts = hyperplane_mod(&a, &v)?;
            Ok(Outcome::doc(json!({
                "v": point_to_json(&v),
                "valuation": a.vector_valuation(&v),
                "count": pts.len(),
                "points": points_to_json(&pts),
            })))
        }
        ZplAction::Line { v } => {
            let a = ring_from_flags(g)?;
            let v = a.point_from(&parse_coords(v)?)?;
            let line = LevelLine::through(&a, &v)?;
            let pts = line.points(&a);
            Ok(Outcome::doc(json!({
                "generator": point_to_json(line.generator()),
                "level": line.level(),
                "count": pts.len(),
                "points": points_to_json(&pts),
            })))
        }
    }
}

fn verify(g: &GlobalArgs, suite: &str) -> Result<Outcome, CliError> {
    if suite != "all" && !suites::SUITES.contains(&suite) {
        return Err(CliError::Usage(format!(
            "unknown suite {suite:?}; expected one of {} or all",
            suites::SUITES.join(", ")
        )));
    }
    let cfg = SuiteConfig {
        seed: g.seed,
        size: g.suite_size,
        exhaustive: g.exhaustive || (g.p.is_none() && g.d.is_none()),
        p: g.p,
        d: g.d,
        l: g.l,
        tolerance: g.tolerance,
    };
    let reports = suites::run(suite, &cfg)?;
    let ok = reports.iter().all(|r| r.ok());
    Ok(Outcome {
        document: json!({
            "seed": g.seed,
            "ok": ok,
            "suites": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        }),
        table: Some(render_suite_table(&reports)),
        side_files: Vec::new(),
        exit: if ok { 0 } else { 3 },
    })
}
