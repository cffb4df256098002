//! Acceptance suite: one check per criterion, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the report reads top to bottom; the
//! process exits non-zero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use ptmathieu::floquet::discriminant_at;
use ptmathieu::perturbative::QuarterSign;
use ptmathieu::tracer::{perturbative_edge, solve_edge_with, trace_boundary_with};
use ptmathieu::{
    band_edges, boundary_a0, boundary_quarter, curvature_kappa1, curvature_kappa2, estimate_curvature,
    hermitian_equivalence_check, monodromy, trace_boundary, BranchId, EdgeTarget, MathieuParams, TraceOptions,
};
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

const BRANCHES: [BranchId; 3] = [BranchId::A0Zero, BranchId::A0QuarterPlus, BranchId::A0QuarterMinus];

/// Closed forms against a literal re-evaluation on 10 ε × 5 β points.
fn formula_fidelity() -> Outcome {
    let mut worst = 0.0f64;
    for eps in linspace(0.0, 0.5, 10) {
        for beta in linspace(0.0, 1.0, 5) {
            let w = 1.0 - beta * beta;
            let root = w.sqrt();
            let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(1.0);
            worst = worst
                .max(rel(boundary_a0(eps, beta).map_err(err)?, -2.0 * w * eps * eps))
                .max(rel(
                    boundary_quarter(eps, beta, QuarterSign::Plus).map_err(err)?,
                    0.25 + root * eps - w / 2.0 * eps * eps,
                ))
                .max(rel(
                    boundary_quarter(eps, beta, QuarterSign::Minus).map_err(err)?,
                    0.25 - root * eps - w / 2.0 * eps * eps,
                ))
                .max(rel(curvature_kappa1(beta).map_err(err)?, 4.0 * w))
                .max(rel(curvature_kappa2(beta).map_err(err)?, w))
                .max(rel(
                    4.0 * curvature_kappa2(beta).map_err(err)?,
                    curvature_kappa1(beta).map_err(err)?,
                ));
        }
    }
    ensure(
        worst <= 4.0 * f64::EPSILON,
        format!("50 points, max relative deviation {worst:.1e}"),
    )
}

fn free_discriminant() -> Outcome {
    let start = Instant::now();
    let mut worst_osc = 0.0f64;
    for a in [0.05, 0.25, 1.0] {
        let d = discriminant_at(a, 0.0, 0.0, 4096).map_err(err)?;
        worst_osc = worst_osc.max((d - 2.0 * (2.0 * std::f64::consts::PI * a.sqrt()).cos()).norm());
    }
    let d = discriminant_at(-0.1, 0.0, 0.0, 4096).map_err(err)?;
    let hyp = (d - 2.0 * (2.0 * std::f64::consts::PI * 0.1f64.sqrt()).cosh()).norm();
    let secs = start.elapsed().as_secs_f64();
    ensure(
        worst_osc <= 1e-8 && hyp <= 1e-6 && secs < 1.0,
        format!("oscillatory {worst_osc:.1e} (≤1e-8), hyperbolic {hyp:.1e} (≤1e-6), {secs:.2}s"),
    )
}

fn pt_reality() -> Outcome {
    let start = Instant::now();
    let a_grid = linspace(-0.1, 0.5, 61);
    let eps_grid = linspace(0.0, 0.3, 31);
    let mut jobs = Vec::new();
    for beta in [0.0, 0.5, 0.9, 1.0, 1.1] {
        for &a in &a_grid {
            for &eps in &eps_grid {
                jobs.push((a, eps, beta));
            }
        }
    }
    let (im, det) = jobs
        .par_iter()
        .map(|&(a, eps, beta)| {
            let p = MathieuParams::new(a, eps, beta).map_err(err)?;
            let m = monodromy(&p, 4096).map_err(err)?;
            Ok((m.trace().im.abs(), (m.det() - 1.0).norm()))
        })
        .collect::<Result<Vec<(f64, f64)>, String>>()?
        .into_iter()
        .fold((0.0f64, 0.0f64), |(i, d), (x, y)| (i.max(x), d.max(y)));
    let secs = start.elapsed().as_secs_f64();
    ensure(
        im <= 1e-8 && det <= 1e-9 && secs < 30.0,
        format!(
            "{} cells, max |Im Δ| {im:.1e}, max |det M - 1| {det:.1e}, {secs:.1}s",
            jobs.len()
        ),
    )
}

fn sample_near(samples: &[(f64, f64)], eps: f64) -> Option<(f64, f64)> {
    samples.iter().copied().find(|(e, _)| (e - eps).abs() < 1e-9)
}

fn boundary_validation() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut worst_ratio = 0.0f64;
    for branch in BRANCHES {
        for beta in [0.0, 0.5, 0.9] {
            let curve = trace_boundary(branch, beta, 0.1, 11).map_err(err)?;
            for eps in [0.02, 0.05, 0.1] {
                let (e, a) =
                    sample_near(&curve.samples, eps).ok_or(format!("{branch} β={beta}: no sample at ε={eps}"))?;
                let dev = (a - perturbative_edge(branch, e, beta).map_err(err)?).abs();
                let bound = match branch {
                    BranchId::A0Zero => 5.0 * e.powi(4),
                    _ => 5.0 * e.powi(3),
                };
                worst_ratio = worst_ratio.max(dev / bound);
                if dev > bound {
                    failures.push(format!("{branch} β={beta} ε={eps}: {dev:.2e} > {bound:.2e}"));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if failures.is_empty() && secs < 60.0 {
        Ok(format!(
            "27 points, worst deviation at {:.0}% of bound, {secs:.1}s",
            100.0 * worst_ratio
        ))
    } else {
        Err(format!("{} ({secs:.1}s)", failures.join("; ")))
    }
}

fn curvature() -> Outcome {
    let mut worst = 0.0f64;
    for branch in BRANCHES {
        for beta in [0.0, 0.5, 0.9] {
            let report = estimate_curvature(&trace_boundary(branch, beta, 0.05, 26).map_err(err)?).map_err(err)?;
            worst = worst.max(report.relative_error);
        }
    }
    let mut flat = 0.0f64;
    for branch in BRANCHES {
        let report = estimate_curvature(&trace_boundary(branch, 1.0, 0.05, 26).map_err(err)?).map_err(err)?;
        flat = flat.max(report.kappa_numeric);
    }
    ensure(
        worst <= 0.02 && flat <= 0.02,
        format!(
            "max relative error {:.3}% (≤2%), β=1 max κ {flat:.1e} (≤0.02)",
            100.0 * worst
        ),
    )
}

fn cross_engine() -> Outcome {
    let opts = TraceOptions {
        steps: 8192,
        ..TraceOptions::default()
    };
    let mut cases = Vec::new();
    for nu in [0.0, 0.5] {
        for beta in [0.0, 0.5, 0.9] {
            for eps in [0.05, 0.1, 0.2, 0.3] {
                cases.push((nu, beta, eps));
            }
        }
    }
    let results = cases
        .par_iter()
        .map(|&(nu, beta, eps)| {
            let edges = band_edges(nu, eps, beta, 32, 4).map_err(err)?.values;
            let target = if nu == 0.0 {
                EdgeTarget::Periodic
            } else {
                EdgeTarget::Antiperiodic
            };
            let mut worst = 0.0f64;
            for k in 0..3 {
                let mut gap = f64::INFINITY;
                if k > 0 {
                    gap = gap.min(edges[k] - edges[k - 1]);
                }
                gap = gap.min(edges[k + 1] - edges[k]);
                let window = 1e-5f64.min(0.45 * gap);
                let a = solve_edge_with(eps, beta, edges[k], target, window, &opts)
                    .map_err(|e| format!("ν={nu} β={beta} ε={eps} edge {k}: {e}"))?;
                worst = worst.max((a - edges[k]).abs());
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>, String>>()?;
    let worst = results.into_iter().fold(0.0f64, f64::max);
    ensure(
        worst <= 1e-6,
        format!("{} edges, max |Hill - Floquet| {worst:.1e} (≤1e-6)", 3 * cases.len()),
    )
}

fn hermitian_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    for eps in [0.1, 0.2, 0.4] {
        for beta in [0.3, 0.6, 0.9] {
            worst = worst.max(hermitian_equivalence_check(eps, beta, 16).map_err(err)?);
        }
    }
    ensure(worst <= 1e-10, format!("max deviation {worst:.1e} (≤1e-10)"))
}

/// `(branch, beta) -> [(eps, a)]` from a perturb CSV.
type Curve = (String, f64, Vec<(f64, f64)>);

fn parse_curves(csv: &str) -> Result<Vec<Curve>, String> {
    let mut curves: Vec<Curve> = Vec::new();
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    if lines.next() != Some("branch,beta,eps,a") {
        return Err("unexpected perturb header".into());
    }
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let num = |s: &str| s.parse::<f64>().map_err(|e| format!("{line}: {e}"));
        let (branch, beta, eps, a) = (f[0].to_string(), num(f[1])?, num(f[2])?, num(f[3])?);
        match curves.last_mut() {
            Some((b, bt, pts)) if *b == branch && *bt == beta => pts.push((eps, a)),
            _ => curves.push((branch, beta, vec![(eps, a)])),
        }
    }
    Ok(curves)
}

fn figure_ordering() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_ptmathieu"))
        .args(["perturb", "--beta", "0,0.5,0.9"])
        .output()
        .map_err(err)?;
    if !out.status.success() {
        return Err(format!("perturb exited with {}", out.status));
    }
    let curves = parse_curves(&String::from_utf8(out.stdout).map_err(err)?)?;
    let curve = |branch: &str, beta: f64| -> Result<&Vec<(f64, f64)>, String> {
        curves
            .iter()
            .find(|(b, bt, _)| b == branch && *bt == beta)
            .map(|(_, _, pts)| pts)
            .ok_or(format!("missing curve {branch} β={beta}"))
    };
    let mut problems = Vec::new();
    for branch in ["zero", "quarter+", "quarter-"] {
        for beta in [0.0, 0.5, 0.9] {
            let pts = curve(branch, beta)?;
            let rising = branch == "quarter+";
            if !pts
                .windows(2)
                .all(|w| if rising { w[1].1 > w[0].1 } else { w[1].1 < w[0].1 })
            {
                problems.push(format!("{branch} β={beta} not monotone"));
            }
        }
    }
    let (z0, z5, z9) = (curve("zero", 0.0)?, curve("zero", 0.5)?, curve("zero", 0.9)?);
    let (p0, p9) = (curve("quarter+", 0.0)?, curve("quarter+", 0.9)?);
    let (m0, m9) = (curve("quarter-", 0.0)?, curve("quarter-", 0.9)?);
    let mut angle_dev = 0.0f64;
    for i in 1..z0.len() {
        let eps = z0[i].0;
        if !(z0[i].1 < z5[i].1 && z5[i].1 < z9[i].1 && z9[i].1 < 0.0) {
            problems.push(format!("zero curves out of order at ε={eps}"));
        }
        if !(p9[i].1 > 0.25 && p9[i].1 < p0[i].1 && m9[i].1 < 0.25 && m9[i].1 > m0[i].1) {
            problems.push(format!("quarter curves out of order at ε={eps}"));
        }
        for beta in [0.5, 0.9] {
            let width = curve("quarter+", beta)?[i].1 - curve("quarter-", beta)?[i].1;
            let ratio = width / (p0[i].1 - m0[i].1);
            angle_dev = angle_dev.max((ratio - (1.0 - beta * beta).sqrt()).abs());
        }
    }
    if angle_dev > 1e-9 {
        problems.push(format!("opening-angle ratio off √(1-β²) by {angle_dev:.1e}"));
    }
    let flat = Command::new(env!("CARGO_BIN_EXE_ptmathieu"))
        .args(["perturb", "--beta", "1"])
        .output()
        .map_err(err)?;
    for (branch, _, pts) in parse_curves(&String::from_utf8(flat.stdout).map_err(err)?)? {
        let anchor = BranchId::from_label(&branch).ok_or("bad branch label")?.anchor();
        if pts.iter().any(|&(_, a)| a != anchor) {
            problems.push(format!("β=1 {branch} curve is not the vertical line a={anchor}"));
        }
    }
    if problems.is_empty() {
        Ok(format!(
            "9 curves over {} ε samples ordered and monotone, angle ratio within {angle_dev:.0e}",
            z0.len()
        ))
    } else {
        Err(problems.join("; "))
    }
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = xs.iter().zip(ys).map(|(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn convergence_order() -> Outcome {
    let windows = [0.02, 0.04, 0.08];
    let opts = TraceOptions::default();
    let mut summary = Vec::new();
    let mut ok = true;
    for branch in BRANCHES {
        let floor = if branch == BranchId::A0Zero { 3.5 } else { 2.5 };
        let mut lowest = f64::INFINITY;
        for beta in [0.0, 0.5, 0.9] {
            let mut devs = Vec::new();
            for &e in &windows {
                let curve = trace_boundary_with(branch, beta, e, 9, &opts).map_err(err)?;
                let mut dev = 0.0f64;
                for &(eps, a) in &curve.samples {
                    dev = dev.max((a - perturbative_edge(branch, eps, beta).map_err(err)?).abs());
                }
                devs.push(dev);
            }
            lowest = lowest.min(slope(&windows, &devs));
        }
        ok &= lowest >= floor;
        summary.push(format!("{branch} {lowest:.2} (≥{floor})"));
    }
    ensure(ok, format!("min slope per branch: {}", summary.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("closed-form boundaries and curvatures", formula_fidelity),
        ("Floquet discriminant at ε = 0", free_discriminant),
        ("real discriminant and unit determinant", pt_reality),
        ("traced boundaries vs closed forms", boundary_validation),
        ("curvature from traced boundaries", curvature),
        ("Hill vs Floquet band edges", cross_engine),
        ("Hermitian equivalence of band edges", hermitian_equivalence),
        ("perturb curve ordering and monotonicity", figure_ordering),
        ("convergence order of the closed forms", convergence_order),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
