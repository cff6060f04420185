//! Wavelets `sum_t c_t 1_{H_{s,t}}`, hyperplane masses, the decomposition of
//! a function into one wavelet per active spectral line, and reconstruction
//! from masses (tomography).

use std::collections::BTreeMap;

use crate::algebra::{enumerate_lines, Ambient, Point, ProjectiveLine};
use crate::error::{Error, Result};
use crate::fourier::{inverse, zero_of, GridFunction, Spectrum};
use crate::scalars::{rational_pow, ComplexApprox, Cyclotomic, Rational, Scalar, ScalarKind};
use crate::spectrum::bandwidth;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WaveletForm {
    Plain,
    Reduced,
    Massless,
}

impl WaveletForm {
    pub fn name(&self) -> &'static str {
        match self {
            WaveletForm::Plain => "plain",
            WaveletForm::Reduced => "reduced",
            WaveletForm::Massless => "massless",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(WaveletForm::Plain),
            "reduced" => Ok(WaveletForm::Reduced),
            "massless" => Ok(WaveletForm::Massless),
            other => Err(Error::Schema(vec![format!("unknown wavelet form {other:?}")])),
        }
    }
}

/// `x -> c_{x.s}` for the canonical direction `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct Wavelet {
    ambient: Ambient,
    direction: ProjectiveLine,
    coeffs: Vec<Scalar>,
    form: WaveletForm,
}

impl Wavelet {
    pub fn new(
        ambient: Ambient,
        direction: ProjectiveLine,
        coeffs: Vec<Scalar>,
        form: WaveletForm,
    ) -> Result<Self> {
        let p = ambient.p();
        if coeffs.len() != p as usize {
            return Err(Error::Schema(vec![format!(
                "wavelet needs {p} coefficients, got {}",
                coeffs.len()
            )]));
        }
        if direction.rep().dim() != ambient.d() {
            return Err(Error::Dimension(format!("direction {direction} in d={}", ambient.d())));
        }
        let kind = coeffs.iter().map(Scalar::kind).max().unwrap_or(ScalarKind::Rational);
        let coeffs: Vec<Scalar> = coeffs.iter().map(|c| c.promote(kind, p)).collect();
        let w = Wavelet {
            ambient,
            direction,
            coeffs,
            form,
        };
        match form {
            WaveletForm::Reduced if !w.coeffs[0].is_zero() => {
                Err(Error::Precondition("reduced wavelet needs c_0 = 0".into()))
            }
            WaveletForm::Massless if !w.coeff_sum().is_zero() => {
                Err(Error::Precondition("massless wavelet needs coefficients summing to 0".into()))
            }
            _ => Ok(w),
        }
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn direction(&self) -> &ProjectiveLine {
        &self.direction
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn form(&self) -> WaveletForm {
        self.form
    }

    fn coeff_sum(&self) -> Scalar {
        let kind = self.coeffs[0].kind();
        self.coeffs
            .iter()
            .fold(zero_of(kind, self.ambient.p()), |acc, c| &acc + c)
    }

    /// `m = p^(d-1) sum_t c_t`.
    pub fn mass(&self) -> Scalar {
        self.coeff_sum()
            .scale(&rational_pow(self.ambient.p(), self.ambient.d() as i64 - 1))
    }
}

pub fn evaluate(w: &Wavelet) -> GridFunction {
    let a = w.ambient;
    let s = w.direction.rep();
    let values = a
        .points()
        .map(|x| w.coeffs[a.dot(&x, s) as usize].clone())
        .collect();
    GridFunction::new(a, values).expect("coefficients share one kind")
}

/// `m_{s,t}(f) = sum_{x.s = t} f(x)` for `t = 0..p`.
pub fn masses(f: &GridFunction, s: &Point) -> Result<Vec<Scalar>> {
    let a = f.ambient();
    if s.dim() != a.d() {
        return Err(Error::Dimension(format!("direction {s} in d={}", a.d())));
    }
    if s.is_zero() {
        return Err(Error::ZeroDirection);
    }
    let mut out = vec![zero_of(f.kind(), a.p()); a.p() as usize];
    for (x, v) in a.points().zip(f.values()) {
        let t = a.dot(&x, s) as usize;
        out[t] = &out[t] + v;
    }
    Ok(out)
}

/// Hyperplane masses for every canonical direction (a sinogram).
#[derive(Debug, Clone, PartialEq)]
pub struct MassTable {
    ambient: Ambient,
    rows: BTreeMap<ProjectiveLine, Vec<Scalar>>,
}

impl MassTable {
    pub fn new(ambient: Ambient) -> Self {
        MassTable {
            ambient,
            rows: BTreeMap::new(),
        }
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn rows(&self) -> &BTreeMap<ProjectiveLine, Vec<Scalar>> {
        &self.rows
    }

    pub fn get(&self, line: &ProjectiveLine) -> Option<&Vec<Scalar>> {
        self.rows.get(line)
    }

    /// Records `m_{s,t}` for `t = 0..p`. A non-canonical `s = c rep` is
    /// re-indexed: `m_{rep,t} = m_{s,c t}`. Conflicting duplicates are an
    /// inconsistency.
    pub fn insert(&mut self, s: &Point, masses: Vec<Scalar>) -> Result<()> {
        let a = self.ambient;
        let p = a.p();
        if s.dim() != a.d() || s.0.iter().any(|&c| c >= p) {
            return Err(Error::Schema(vec![format!("direction {s} is not a point of Z_{p}^{}", a.d())]));
        }
        if masses.len() != p as usize {
            return Err(Error::Schema(vec![format!(
                "direction {s}: expected {p} masses, got {}",
                masses.len()
            )]));
        }
        let line = ProjectiveLine::through(&a, s)?;
        let c = line.scalar_of(&a, s).expect("s lies on its own line");
        let row: Vec<Scalar> = (0..p)
            .map(|t| masses[(c * t % p) as usize].clone())
            .collect();
        if let Some(old) = self.rows.get(&line) {
            if !old.iter().zip(&row).all(|(x, y)| x.approx_eq(y)) {
                return Err(Error::InconsistentMasses(format!(
                    "conflicting rows for direction {}",
                    line.rep()
                )));
            }
            return Ok(());
        }
        self.rows.insert(line, row);
        Ok(())
    }

    /// Directions with no row, as canonical representatives.
    pub fn missing(&self) -> Vec<ProjectiveLine> {
        enumerate_lines(&self.ambient)
            .expect("ambient fits")
            .into_iter()
            .filter(|l| !self.rows.contains_key(l))
            .collect()
    }

    /// Per-direction totals `sum_t m_{s,t}`, in line order.
    pub fn totals(&self) -> Vec<Scalar> {
        self.rows
            .values()
            .map(|row| row.iter().skip(1).fold(row[0].clone(), |acc, m| &acc + m))
            .collect()
    }

    /// Checks completeness and that all totals agree; returns the total.
    pub fn validate(&self) -> Result<Scalar> {
        let missing = self.missing();
        if !missing.is_empty() {
            return Err(Error::IncompleteMasses {
                missing: missing.iter().map(|l| l.rep().0.clone()).collect(),
            });
        }
        let totals = self.totals();
        let first = totals[0].clone();
        if let Some((line, bad)) = self
            .rows
            .keys()
            .zip(&totals)
            .find(|(_, t)| !t.approx_eq(&first))
        {
            return Err(Error::InconsistentMasses(format!(
                "direction {} totals {bad}, expected {first}",
                line.rep()
            )));
        }
        Ok(first)
    }
}

pub fn mass_table(f: &GridFunction) -> MassTable {
    let a = *f.ambient();
    let mut table = MassTable::new(a);
    for line in enumerate_lines(&a).expect("ambient fits") {
        let row = masses(f, line.rep()).expect("canonical directions are nonzero");
        table.rows.insert(line, row);
    }
    table
}

/// The plain wavelet with coefficients `m_{s,t}(f) / p^(d-1)`: the unique
/// wavelet agreeing with `f` in frequency on the line through `s`.
pub fn associated_wavelet(f: &GridFunction, s: &Point) -> Result<Wavelet> {
    let a = *f.ambient();
    let line = ProjectiveLine::through(&a, s)?;
    let k = rational_pow(a.p(), 1 - a.d() as i64);
    let coeffs = masses(f, line.rep())?.iter().map(|m| m.scale(&k)).collect();
    Wavelet::new(a, line, coeffs, WaveletForm::Plain)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub ambient: Ambient,
    pub form: WaveletForm,
    /// `c` for the plain form, `delta_0` for the reduced form, `m(f)/p^d` for
    /// the massless form.
    pub constant: Scalar,
    pub parts: Vec<Wavelet>,
    pub total_mass: Scalar,
}

impl Decomposition {
    pub fn evaluate(&self) -> GridFunction {
        self.parts.iter().fold(
            GridFunction::constant(self.ambient, self.constant.clone()),
            |acc, w| acc.add(&evaluate(w)).expect("same ambient"),
        )
    }
}

/// One wavelet per active line of the transform, in line order, plus a
/// constant. Re-evaluating the result gives `f` back exactly.
pub fn decompose(f: &GridFunction, form: WaveletForm) -> Decomposition {
    let a = *f.ambient();
    let p = a.p();
    let d = a.d() as i64;
    let kind = f.kind();
    let m = f.total();
    let active = bandwidth(f).lines;
    let cbw = active.len() as i64;
    let inv_pd = rational_pow(p, -d);
    let inv_pd1 = rational_pow(p, 1 - d);
    let rows: Vec<Vec<Scalar>> = active
        .iter()
        .map(|l| masses(f, l.rep()).expect("nonzero direction"))
        .collect();

    let plain_constant = m.scale(&(Rational::from_integer((1 - cbw).into()) * &inv_pd));
    let constant = match form {
        WaveletForm::Plain => plain_constant,
        WaveletForm::Reduced => rows
            .iter()
            .fold(plain_constant, |acc, row| &acc + &row[0].scale(&inv_pd1)),
        WaveletForm::Massless => m.scale(&inv_pd),
    };
    let parts = active
        .into_iter()
        .zip(rows)
        .map(|(line, row)| {
            let coeffs = row
                .iter()
                .map(|mt| match form {
                    WaveletForm::Plain => mt.scale(&inv_pd1),
                    WaveletForm::Reduced => (mt - &row[0]).scale(&inv_pd1),
                    WaveletForm::Massless => {
                        (&mt.scale(&Rational::from_integer(p.into())) - &m).scale(&inv_pd)
                    }
                })
                .collect();
            Wavelet::new(a, line, coeffs, form).expect("form constraints hold by construction")
        })
        .collect();
    Decomposition {
        ambient: a,
        form,
        constant: constant.promote(kind, p),
        parts,
        total_mass: m,
    }
}

/// Inverts a complete, consistent mass table:
/// `f^(k s) = p^-d sum_t chi(-k t) m_{s,t}` and `f^(0) = total / p^d`.
pub fn reconstruct_from_masses(table: &MassTable) -> Result<GridFunction> {
    let total = table.validate()?;
    let a = table.ambient;
    let p = a.p();
    let inv_pd = rational_pow(p, -(a.d() as i64));
    let exact = table.rows.values().flatten().all(Scalar::is_exact) && total.is_exact();
    let mut spectrum = vec![Scalar::zero(); a.size()];
    spectrum[0] = total.scale(&inv_pd);
    for (line, row) in &table.rows {
        for k in 1..p {
            let mk = a.scale(k, line.rep());
            let value = if exact {
                let sum = row.iter().enumerate().fold(Cyclotomic::zero(p), |acc, (t, mt)| {
                    let c = match mt.promote(ScalarKind::Cyclotomic, p) {
                        Scalar::Cyclotomic(c) => c,
                        _ => unreachable!(),
                    };
                    &acc + &c.mul_xi_pow(-((k * t as u64) as i64))
                });
                Scalar::Cyclotomic(sum.scale(&inv_pd))
            } else {
                let tol = row
                    .iter()
                    .find_map(|m| match m {
                        Scalar::Complex(c) => Some(c.tol),
                        _ => None,
                    })
                    .unwrap_or(crate::scalars::DEFAULT_TOLERANCE);
                let sum: num_complex::Complex64 = row
                    .iter()
                    .enumerate()
                    .map(|(t, mt)| {
                        let angle = -std::f64::consts::TAU * ((k * t as u64) % p) as f64 / p as f64;
                        mt.to_complex() * num_complex::Complex64::from_polar(1.0, angle)
                    })
                    .sum();
                let k = num_traits::ToPrimitive::to_f64(&inv_pd).unwrap_or(f64::NAN);
                Scalar::Complex(ComplexApprox::with_tol(sum * k, tol))
            };
            spectrum[a.index(&mk)] = value;
        }
    }
    let grid = GridFunction::new(a, spectrum)?;
    Ok(inverse(&Spectrum::from_grid(grid)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WaveletClass {
    /// Constants are wavelets in every direction.
    Constant,
    Direction(ProjectiveLine),
    NotWavelet { cbw: usize },
}

/// Whether the transform of `f` off the origin lives on a single line.
pub fn is_wavelet(f: &GridFunction) -> WaveletClass {
    let report = bandwidth(f);
    match report.cbw {
        0 => WaveletClass::Constant,
        1 => WaveletClass::Direction(report.lines[0].clone()),
        cbw => WaveletClass::NotWavelet { cbw },
    }
}
