//! One PASS/FAIL line per acceptance criterion. Every criterion runs even
//! when an earlier one fails; the process exits nonzero if any failed.
//! Runs without the libtest harness so the lines are never captured.

use std::time::{Duration, Instant};

use charkit_cli::report::SuiteReport;
use charkit_cli::suites::{run, SuiteConfig};

const TOLERANCE: f64 = 1e-9;

fn config() -> SuiteConfig {
    SuiteConfig {
        tolerance: TOLERANCE,
        ..SuiteConfig::default()
    }
}

fn suite(name: &str) -> Result<SuiteReport, String> {
    let mut reports = run(name, &config()).map_err(|e| e.to_string())?;
    Ok(reports.remove(0))
}

/// Requires the named check to pass on exactly `total` cases.
fn require(report: &SuiteReport, name: &str, total: usize) -> Result<(), String> {
    let c = report
        .check(name)
        .ok_or_else(|| format!("{}: no check named {name:?}", report.suite))?;
    if !c.ok() {
        return Err(format!("{name}: {}/{} passed, e.g. {:?}", c.passed, c.total, c.failures));
    }
    if c.total != total {
        return Err(format!("{name}: ran {} cases, expected {total}", c.total));
    }
    Ok(())
}

fn require_all(report: &SuiteReport) -> Result<(), String> {
    match report.checks.iter().find(|c| !c.ok()) {
        Some(c) => Err(format!("{}: {}/{} passed, e.g. {:?}", c.name, c.passed, c.total, c.failures)),
        None => Ok(()),
    }
}

fn notes(report: &SuiteReport, name: &str) -> Vec<String> {
    report.check(name).map(|c| c.notes.clone()).unwrap_or_default()
}

fn criterion_1() -> Result<(), String> {
    let r = suite("wavelet")?;
    require(&r, "worked example", 3)
}

fn criterion_2() -> Result<(), String> {
    let r = suite("galois")?;
    require(&r, "inverse(forward(f)) = f", 300)?;
    require(&r, "axis passes = direct sum", 100)
}

fn criterion_3() -> Result<(), String> {
    let r = suite("galois")?;
    require(&r, "f^(r m) = g_r(f^(m))", 200)
}

fn criterion_4() -> Result<(), String> {
    let r = suite("tomography")?;
    // 100 seeded functions plus the worked example at p = 3, 5, 7
    require(&r, "reconstruct(project(f)) = f", 103)?;
    let c = r.check("every single-entry corruption is detected").ok_or("missing corruption check")?;
    if !c.ok() || c.total == 0 {
        return Err(format!("corruption: {}/{} detected", c.passed, c.total));
    }
    Ok(())
}

fn criterion_5() -> Result<(), String> {
    let r = suite("uncertainty")?;
    require(&r, "((p-1) cbw + 1) |E| >= p^d, all E at p=2, d=2", 15)?;
    require(&r, "((p-1) cbw + 1) |E| >= p^d, all E at p=2, d=3", 255)?;
    require(&r, "((p-1) cbw + 1) |E| >= p^d, random E at p=3, d=3", 1000)
}

fn criterion_6() -> Result<(), String> {
    let r = suite("dichotomy")?;
    require(&r, "parallel lines or cbw > d at p=2, d=2", 16)?;
    require(&r, "parallel lines or cbw > d at p=2, d=3", 256)
}

fn criterion_7() -> Result<(), String> {
    let r = suite("equidist")?;
    let c = r.check("equal coset masses iff vanishing on V \\ {0}").ok_or("missing check")?;
    if c.total < 500 {
        return Err(format!("only {} biconditional cases", c.total));
    }
    require_all(&r)
}

fn criterion_8() -> Result<(), String> {
    let r = suite("selfdual")?;
    require(&r, "self-dual sets at p=2, d=2", 17)?;
    require(&r, "self-dual sets at p=3, d=2", 513)?;
    require(&r, "self-dual sets at p=2, d=3", 257)?;
    let expect = [
        ("self-dual sets at p=2, d=2", "self-dual: {} (lambda = 0), {(0,0), (1,1)} (lambda = 1/2)"),
        ("self-dual sets at p=3, d=2", "self-dual: {} (lambda = 0)"),
        ("self-dual sets at p=2, d=3", "self-dual: {} (lambda = 0)"),
    ];
    for (name, tail) in expect {
        let n = notes(&r, name);
        if !n.iter().any(|s| s.ends_with(tail)) {
            return Err(format!("{name}: notes {n:?} do not end with {tail:?}"));
        }
    }
    Ok(())
}

fn criterion_9() -> Result<(), String> {
    let r = suite("eigen")?;
    // 5 + 6 + 16 subspaces of Z_2^2, Z_3^2, Z_2^3
    require(&r, "forward(f+-) = +-p^(-d/2) f+- for every subspace", 27)?;
    require(&r, "forward(f+-) = +-p^(-d/2) conj(f+-) for affine V + x", 20)
}

fn criterion_10() -> Result<(), String> {
    let r = suite("paraboloid")?;
    require(&r, "slice differences are good", 100)
}

fn criterion_11() -> Result<(), String> {
    let r = suite("spheres")?;
    require(&r, "nonzero-radius spheres are equinumerous", 2)?;
    let counts = notes(&r, "nonzero-radius spheres are equinumerous");
    println!("    sphere counts: {}", counts.join("; "));
    let c = r.check("two-circle vanishing gives equal sphere masses").ok_or("missing two-circle check")?;
    if c.total == 0 {
        return Err("no two-circle cases".into());
    }
    let c = r.check("indicators split into L+ and L- unions").ok_or("missing L+/L- check")?;
    if c.total == 0 {
        return Err("no L+/L- cases".into());
    }
    require_all(&r)
}

fn criterion_12() -> Result<(), String> {
    let r = suite("zpl")?;
    require_all(&r)?;
    let units = notes(&r, "p^l - p^(l-1) units");
    if !units.iter().any(|n| n == "p=2, l=2: 2 units") {
        return Err(format!("unit counts {units:?}"));
    }
    let h = r.check("|H_v| = p^(l(d-1) + nu(v))").ok_or("missing hyperplane check")?;
    if h.total < 15 {
        return Err(format!("only {} hyperplanes checked", h.total));
    }
    let m = r.check("multiscale decomposition re-evaluates exactly").ok_or("missing multiscale check")?;
    if m.total < 100 {
        return Err(format!("only {} multiscale cases", m.total));
    }
    Ok(())
}

type Criterion = (u32, &'static str, u64, fn() -> Result<(), String>);

const CRITERIA: [Criterion; 12] = [
    (1, "worked example: cbw 3 and exact reduced decomposition", 1, criterion_1),
    (2, "inverse(forward) = id on 300 functions, axis passes = direct sum on 100", 30, criterion_2),
    (3, "Galois equivariance on 200 functions", 60, criterion_3),
    (4, "tomography round trip and corruption detection", 30, criterion_4),
    (5, "uncertainty inequality", 120, criterion_5),
    (6, "parallel lines or cbw > d", 60, criterion_6),
    (7, "equidistribution biconditional and p^k | |E|", 120, criterion_7),
    (8, "self-dual classification", 120, criterion_8),
    (9, "eigenfunction pairs", 60, criterion_9),
    (10, "paraboloid slice differences are good", 120, criterion_10),
    (11, "sphere counts, two-circle vanishing, L+/L- unions", 120, criterion_11),
    (12, "Z_{p^l} units, hyperplanes, lines and multiscale decomposition", 60, criterion_12),
];

fn main() {
    let mut failed = Vec::new();
    for (n, text, budget, run) in CRITERIA {
        let start = Instant::now();
        let mut outcome = run();
        let took = start.elapsed();
        if outcome.is_ok() && took > Duration::from_secs(budget) {
            outcome = Err(format!("took {took:.2?}, budget {budget} s"));
        }
        match &outcome {
            Ok(()) => println!("PASS criterion {n}: {text} ({took:.2?})"),
            Err(e) => {
                println!("FAIL criterion {n}: {text} ({took:.2?}): {e}");
                failed.push(n);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: 12/12 criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
