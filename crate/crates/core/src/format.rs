//! JSON encodings of functions, spectra, sinograms and reports.
//!
//! Readers collect every problem they find and fail with a single
//! [`Error::Schema`] listing the offending fields.

use serde_json::{json, Map, Value};

use crate::algebra::{Ambient, Point};
use crate::error::{Error, Result};
use crate::fourier::GridFunction;
use crate::scalars::{parse_rational, ComplexApprox, Cyclotomic, Rational, Scalar, ScalarKind};
use crate::spectrum::BandwidthReport;
use crate::wavelets::{Decomposition, MassTable, WaveletForm};
use crate::zmodpl::{CyclotomicL, MultiscaleDecomposition, RingAmbient, RingFunction};

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    match s {
        Scalar::Rational(r) => rational_to_json(r),
        Scalar::Cyclotomic(c) => json!({
            "p": c.p(),
            "coeffs": c.coeffs().iter().map(rational_to_json).collect::<Vec<_>>(),
        }),
        Scalar::Complex(c) => json!({"re": c.value.re, "im": c.value.im}),
    }
}

pub fn cyclotomic_l_to_json(c: &CyclotomicL) -> Value {
    json!({
        "p": c.p(),
        "l": c.l(),
        "coeffs": c.coeffs().iter().map(rational_to_json).collect::<Vec<_>>(),
    })
}

pub fn point_to_json(x: &Point) -> Value {
    json!(x.coords())
}

pub fn points_to_json(points: &[Point]) -> Value {
    Value::Array(points.iter().map(point_to_json).collect())
}

/// Accumulates schema problems while walking a document.
struct Reader {
    errors: Vec<String>,
}

impl Reader {
    fn new() -> Self {
        Reader { errors: Vec::new() }
    }

    fn fail(&mut self, path: &str, msg: impl std::fmt::Display) {
        self.errors.push(format!("{path}: {msg}"));
    }

    fn object<'a>(&mut self, v: &'a Value, path: &str) -> Option<&'a Map<String, Value>> {
        let o = v.as_object();
        if o.is_none() {
            self.fail(path, "expected an object");
        }
        o
    }

    fn field<'a>(&mut self, o: &'a Map<String, Value>, key: &str) -> Option<&'a Value> {
        let v = o.get(key);
        if v.is_none() {
            self.fail(key, "missing");
        }
        v
    }

    fn uint(&mut self, v: Option<&Value>, path: &str) -> Option<u64> {
        let v = v?;
        let n = v.as_u64();
        if n.is_none() {
            self.fail(path, format!("expected a non-negative integer, got {v}"));
        }
        n
    }

    fn array<'a>(&mut self, v: Option<&'a Value>, path: &str) -> Option<&'a Vec<Value>> {
        let v = v?;
        let a = v.as_array();
        if a.is_none() {
            self.fail(path, "expected an array");
        }
        a
    }

    fn rational(&mut self, v: &Value, path: &str) -> Option<Rational> {
        let parsed = match v {
            Value::String(s) => parse_rational(s).ok(),
            Value::Number(n) => n.as_i64().map(|n| Rational::from_integer(n.into())),
            _ => None,
        };
        if parsed.is_none() {
            self.fail(path, format!("expected a rational like \"a/b\", got {v}"));
        }
        parsed
    }

    fn rationals(&mut self, v: Option<&Value>, path: &str) -> Option<Vec<Rational>> {
        let items = self.array(v, path)?;
        let out: Vec<Option<Rational>> = items
            .iter()
            .enumerate()
            .map(|(i, x)| self.rational(x, &format!("{path}[{i}]")))
            .collect();
        out.into_iter().collect()
    }

    fn point(&mut self, v: Option<&Value>, path: &str, modulus: u64, d: usize) -> Option<Point> {
        let items = self.array(v, path)?;
        if items.len() != d {
            self.fail(path, format!("expected {d} coordinates, got {}", items.len()));
            return None;
        }
        let coords: Vec<Option<u64>> = items
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let c = self.uint(Some(c), &format!("{path}[{i}]"))?;
                if c >= modulus {
                    self.fail(&format!("{path}[{i}]"), format!("{c} is not a residue mod {modulus}"));
                    return None;
                }
                Some(c)
            })
            .collect();
        coords.into_iter().collect::<Option<Vec<_>>>().map(Point::new)
    }

    fn scalar(&mut self, v: &Value, kind: ScalarKind, p: u64, path: &str) -> Option<Scalar> {
        match kind {
            ScalarKind::Rational => self.rational(v, path).map(Scalar::Rational),
            ScalarKind::Cyclotomic => {
                let o = self.object(v, path)?;
                let vp = self.uint(o.get("p"), &format!("{path}.p"));
                if o.get("p").is_none() {
                    self.fail(&format!("{path}.p"), "missing");
                }
                if vp.is_some_and(|vp| vp != p) {
                    self.fail(&format!("{path}.p"), format!("conductor {} != p={p}", vp.unwrap_or(0)));
                    return None;
                }
                let coeffs = self.rationals(o.get("coeffs"), &format!("{path}.coeffs"));
                if o.get("coeffs").is_none() {
                    self.fail(&format!("{path}.coeffs"), "missing");
                }
                match Cyclotomic::new(vp?, coeffs?) {
                    Ok(c) => Some(Scalar::Cyclotomic(c)),
                    Err(e) => {
                        self.fail(path, e);
                        None
                    }
                }
            }
            ScalarKind::Complex => {
                let o = self.object(v, path)?;
                let part = |key: &str| o.get(key).and_then(Value::as_f64);
                match (part("re"), part("im")) {
                    (Some(re), Some(im)) if re.is_finite() && im.is_finite() => {
                        Some(Scalar::Complex(ComplexApprox::new(re, im)))
                    }
                    _ => {
                        self.fail(path, "expected {\"re\": x, \"im\": y} with finite numbers");
                        None
                    }
                }
            }
        }
    }

    fn finish<T>(self, value: Option<T>) -> Result<T> {
        match value {
            Some(v) if self.errors.is_empty() => Ok(v),
            _ if self.errors.is_empty() => Err(Error::Schema(vec!["malformed document".into()])),
            _ => Err(Error::Schema(self.errors)),
        }
    }
}

fn parse_kind(r: &mut Reader, o: &Map<String, Value>) -> Option<ScalarKind> {
    let v = o.get("kind")?;
    match v.as_str().map(ScalarKind::parse) {
        Some(Ok(k)) => Some(k),
        _ => {
            r.fail("kind", format!("expected \"rational\", \"cyclotomic\" or \"complex\", got {v}"));
            None
        }
    }
}

fn header(r: &mut Reader, o: &Map<String, Value>) -> Option<(u64, usize)> {
    let p = o.get("p");
    let d = o.get("d");
    let p = r.field(o, "p").and(r.uint(p, "p"));
    let d = r.field(o, "d").and(r.uint(d, "d"));
    Some((p?, d? as usize))
}

pub fn function_to_json(f: &GridFunction) -> Value {
    let a = f.ambient();
    json!({
        "p": a.p(),
        "d": a.d(),
        "kind": f.kind().name(),
        "values": f.values().iter().map(scalar_to_json).collect::<Vec<_>>(),
    })
}

/// Reads a function or spectrum file. A missing `"kind"` means rational.
pub fn function_from_json(v: &Value) -> Result<GridFunction> {
    let mut r = Reader::new();
    let Some(o) = r.object(v, "$") else {
        return r.finish(None);
    };
    let head = header(&mut r, o);
    let kind = if o.contains_key("kind") {
        parse_kind(&mut r, o)
    } else {
        Some(ScalarKind::Rational)
    };
    let values = r.array(o.get("values"), "values").cloned();
    if o.get("values").is_none() {
        r.fail("values", "missing");
    }
    let (Some((p, d)), Some(kind), Some(values)) = (head, kind, values) else {
        return r.finish(None);
    };
    let ambient = Ambient::new(p, d)?;
    let parsed: Vec<Option<Scalar>> = values
        .iter()
        .enumerate()
        .map(|(i, x)| r.scalar(x, kind, p, &format!("values[{i}]")))
        .collect();
    let parsed: Option<Vec<Scalar>> = parsed.into_iter().collect();
    let values = r.finish(parsed)?;
    GridFunction::new(ambient, values)
}

pub fn ring_function_to_json(f: &RingFunction) -> Value {
    let a = f.ambient();
    let values: Vec<Value> = match f.rational_values() {
        Some(rs) => rs.iter().map(rational_to_json).collect(),
        None => f.values().iter().map(cyclotomic_l_to_json).collect(),
    };
    json!({
        "p": a.p(),
        "d": a.d(),
        "modulus_exponent": a.l(),
        "kind": if f.is_rational() { "rational" } else { "cyclotomic" },
        "values": values,
    })
}

pub fn ring_function_from_json(v: &Value) -> Result<RingFunction> {
    let mut r = Reader::new();
    let Some(o) = r.object(v, "$") else {
        return r.finish(None);
    };
    let head = header(&mut r, o);
    let l = r.field(o, "modulus_exponent").and(r.uint(o.get("modulus_exponent"), "modulus_exponent"));
    let kind = if o.contains_key("kind") {
        parse_kind(&mut r, o)
    } else {
        Some(ScalarKind::Rational)
    };
    if kind == Some(ScalarKind::Complex) {
        r.fail("kind", "complex values are not supported over Z_{p^l}");
    }
    let values = r.field(o, "values").and(r.array(o.get("values"), "values")).cloned();
    let (Some((p, d)), Some(l), Some(kind), Some(values)) = (head, l, kind, values) else {
        return r.finish(None);
    };
    let l = u32::try_from(l).map_err(|_| Error::Capacity(format!("modulus exponent {l}")))?;
    let ambient = RingAmbient::new(p, l, d)?;
    let parsed: Vec<Option<CyclotomicL>> = values
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let path = format!("values[{i}]");
            if kind == ScalarKind::Rational {
                return r.rational(x, &path).map(|q| CyclotomicL::from_rational(p, l, q));
            }
            let o = r.object(x, &path)?;
            let vp = r.uint(o.get("p"), &format!("{path}.p"));
            let vl = r.uint(o.get("l"), &format!("{path}.l"));
            if (vp, vl) != (Some(p), Some(l as u64)) {
                r.fail(&path, format!("expected conductor p={p}, l={l}"));
                return None;
            }
            let coeffs = r.rationals(o.get("coeffs"), &format!("{path}.coeffs"))?;
            CyclotomicL::new(p, l, coeffs).map_err(|e| r.fail(&path, e)).ok()
        })
        .collect();
    let parsed: Option<Vec<CyclotomicL>> = parsed.into_iter().collect();
    let values = r.finish(parsed)?;
    RingFunction::new(ambient, values)
}

pub fn sinogram_to_json(table: &MassTable) -> Value {
    let a = table.ambient();
    let masses: Vec<Value> = table
        .rows()
        .iter()
        .map(|(s, m)| {
            json!({
                "s": point_to_json(s.rep()),
                "m": m.iter().map(scalar_to_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({"p": a.p(), "d": a.d(), "masses": masses})
}

/// Reads a sinogram. Rows may use any nonzero direction; they are
/// re-indexed to canonical representatives, and conflicting duplicates are
/// reported as inconsistent masses.
pub fn sinogram_from_json(v: &Value) -> Result<MassTable> {
    let mut r = Reader::new();
    let Some(o) = r.object(v, "$") else {
        return r.finish(None);
    };
    let head = header(&mut r, o);
    let rows = r.field(o, "masses").and(r.array(o.get("masses"), "masses")).cloned();
    let (Some((p, d)), Some(rows)) = (head, rows) else {
        return r.finish(None);
    };
    let ambient = Ambient::new(p, d)?;
    let mut parsed = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let path = format!("masses[{i}]");
        let Some(ro) = r.object(row, &path) else { continue };
        let s = r.point(ro.get("s"), &format!("{path}.s"), p, d);
        if ro.get("s").is_none() {
            r.fail(&format!("{path}.s"), "missing");
        }
        let m = r.array(ro.get("m"), &format!("{path}.m")).map(|items| {
            let kind = if items.iter().any(Value::is_object) {
                if items.iter().any(|x| x.get("re").is_some()) {
                    ScalarKind::Complex
                } else {
                    ScalarKind::Cyclotomic
                }
            } else {
                ScalarKind::Rational
            };
            items
                .iter()
                .enumerate()
                .map(|(t, x)| r.scalar(x, kind, p, &format!("{path}.m[{t}]")))
                .collect::<Option<Vec<_>>>()
        });
        if ro.get("m").is_none() {
            r.fail(&format!("{path}.m"), "missing");
        }
        match (s, m.flatten()) {
            (Some(s), Some(m)) if m.len() == p as usize => parsed.push((s, m)),
            (Some(_), Some(m)) => r.fail(&format!("{path}.m"), format!("expected {p} masses, got {}", m.len())),
            _ => {}
        }
    }
    let parsed = r.finish(Some(parsed))?;
    let mut table = MassTable::new(ambient);
    for (s, m) in parsed {
        table.insert(&s, m)?;
    }
    Ok(table)
}

pub fn bandwidth_to_json(report: &BandwidthReport) -> Value {
    json!({
        "cbw": report.cbw,
        "bw": rational_to_json(&report.bw),
        "bwd": report.bwd,
        "lines": report.lines.iter().map(|l| point_to_json(l.rep())).collect::<Vec<_>>(),
        "approximate": report.approximate,
    })
}

/// The massless constant is written as `m(f)/p^d`; the unnormalized
/// reading `m(f)` is carried alongside as `constant_unnormalized`.
pub fn decomposition_to_json(dec: &Decomposition) -> Value {
    let a = dec.ambient;
    let parts: Vec<Value> = dec
        .parts
        .iter()
        .map(|w| {
            json!({
                "direction": point_to_json(w.direction().rep()),
                "coeffs": w.coeffs().iter().map(scalar_to_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut out = json!({
        "p": a.p(),
        "d": a.d(),
        "form": dec.form.name(),
        "constant": scalar_to_json(&dec.constant),
        "total_mass": scalar_to_json(&dec.total_mass),
        "parts": parts,
    });
    if dec.form == WaveletForm::Massless {
        out["constant_unnormalized"] = scalar_to_json(&dec.total_mass);
    }
    out
}

pub fn multiscale_to_json(dec: &MultiscaleDecomposition) -> Value {
    let a = dec.ambient;
    let parts: Vec<Value> = dec
        .parts
        .iter()
        .map(|part| {
            json!({
                "level": part.level(),
                "generator": point_to_json(part.line.generator()),
                "function": ring_function_to_json(&part.function),
            })
        })
        .collect();
    json!({
        "p": a.p(),
        "d": a.d(),
        "modulus_exponent": a.l(),
        "constant": dec.constant.as_ref().map(ring_function_to_json),
        "part_count": dec.parts.len(),
        "parts": parts,
    })
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn parse_document(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Schema(vec![format!("invalid JSON: {e}")]))
}
