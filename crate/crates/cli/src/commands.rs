//! Subcommand handlers.

use clap::error::ErrorKind;
use clap::Parser;
use ptmathieu::hill::FloquetExponent;
use ptmathieu::tracer::{compare_row, perturbative_edge, trace_boundary_with, CompareOptions};
use ptmathieu::{band_edges, estimate_curvature, hermitian_equivalence_check, BranchId, MathieuError, TraceOptions};
use rayon::prelude::*;

use crate::args::{ChartArgs, Cli, Command, CompareArgs, EdgesArgs, Format, OutputArgs, PerturbArgs, TraceArgs};
use crate::chart::{compute_chart, CellClass, ChartGrid, GridSpec};
use crate::config::merge_config;
use crate::error::CliError;
use crate::output::{write_output, Cell, Table};
use crate::svg::{series_colour, Plot};

/// Effective invocation after config merging, recorded in every output header.
fn invocation(argv: &[String]) -> String {
    std::iter::once("ptmathieu")
        .chain(argv.iter().skip(1).map(String::as_str))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn dispatch(argv: Vec<String>) -> Result<(), CliError> {
    let argv = merge_config(argv)?;
    let cli = Cli::try_parse_from(&argv).map_err(|e| match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            CliError::Help(e.to_string())
        }
        _ => CliError::Usage(e.to_string()),
    })?;
    let inv = invocation(&argv);
    match cli.command {
        Command::Perturb(args) => perturb(&args, &inv),
        Command::Chart(args) => chart(&args, &inv),
        Command::Trace(args) => trace(&args, &inv),
        Command::Edges(args) => edges(&args, &inv),
        Command::Compare(args) => compare(&args, &inv),
    }
}

fn emit(output: &OutputArgs, table: &Table, svg: Option<String>, inv: &str) -> Result<(), CliError> {
    let text = match output.format {
        Format::Csv => table.to_csv(inv),
        Format::Json => table.to_json(inv),
        Format::Svg => {
            svg.ok_or_else(|| CliError::Usage(format!("--format svg is not available for {}", table.kind)))?
        }
    };
    write_output(output.out.as_deref(), &text)?;
    Ok(())
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?;
    Ok(pool.install(f))
}

fn check_unit_beta(beta: f64) -> Result<(), CliError> {
    if (0.0..=1.0).contains(&beta) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--beta {beta} is outside [0, 1]")))
    }
}

fn eps_samples(eps_max: f64, samples: usize) -> Vec<f64> {
    (0..samples)
        .map(|i| {
            if i == samples - 1 {
                eps_max
            } else {
                eps_max * i as f64 / (samples - 1) as f64
            }
        })
        .collect()
}

fn perturb(args: &PerturbArgs, inv: &str) -> Result<(), CliError> {
    if args.beta.is_empty() {
        return Err(CliError::Usage("--beta needs at least one value".into()));
    }
    for &b in &args.beta {
        check_unit_beta(b)?;
    }
    if !(args.eps_max > 0.0 && args.eps_max.is_finite()) {
        return Err(CliError::Usage("--eps-max must be positive".into()));
    }
    if args.samples < 2 {
        return Err(CliError::Usage("--samples must be at least 2".into()));
    }
    let grid = eps_samples(args.eps_max, args.samples);
    let mut table = Table::new("perturb", &["branch", "beta", "eps", "a"]);
    let mut curves = Vec::new();
    for &beta in &args.beta {
        for branch in BranchId::ALL {
            let points = grid
                .iter()
                .map(|&eps| Ok((eps, perturbative_edge(branch, eps, beta)?)))
                .collect::<Result<Vec<_>, MathieuError>>()?;
            for &(eps, a) in &points {
                table.push(vec![
                    branch.label().into(),
                    Cell::Num(beta),
                    Cell::Num(eps),
                    Cell::Num(a),
                ]);
            }
            curves.push((branch, beta, points));
        }
    }
    let svg = (args.output.format == Format::Svg).then(|| perturb_svg(&args.beta, &curves, args.eps_max));
    emit(&args.output, &table, svg, inv)
}

type Curve = (BranchId, f64, Vec<(f64, f64)>);

fn perturb_svg(betas: &[f64], curves: &[Curve], eps_max: f64) -> String {
    let (mut a_lo, mut a_hi) = (0.0f64, 0.25f64);
    for (_, _, pts) in curves {
        for &(_, a) in pts {
            a_lo = a_lo.min(a);
            a_hi = a_hi.max(a);
        }
    }
    let mut plot = Plot::new(
        "Closed-form stability boundaries",
        "a",
        "ε",
        (a_lo - 0.02, a_hi + 0.02),
        (0.0, eps_max),
    );
    for (i, &beta) in betas.iter().enumerate() {
        let colour = series_colour(i);
        for (branch, b, pts) in curves {
            if *b != beta {
                continue;
            }
            // plotted as in the figures: a across, ε up
            let swapped: Vec<(f64, f64)> = pts.iter().map(|&(e, a)| (a, e)).collect();
            plot.polyline(&swapped, colour, *branch == BranchId::A0QuarterMinus);
        }
        plot.legend_entry(&format!("β = {}", crate::numfmt::fmt_num(beta)), colour, false);
    }
    plot.finish()
}

fn chart(args: &ChartArgs, inv: &str) -> Result<(), CliError> {
    let spec = GridSpec {
        a_min: args.a_min,
        a_max: args.a_max,
        a_steps: args.a_steps,
        eps_min: args.eps_min,
        eps_max: args.eps_max,
        eps_steps: args.eps_steps,
        beta: args.beta,
        steps: args.steps,
        tol: args.tol,
    };
    spec.validate()?;
    let grid = with_pool(args.jobs.jobs, || compute_chart(spec))??;
    let mut table = Table::new("chart", &["a", "eps", "class", "growth_rate", "re_delta", "im_delta"]);
    for c in &grid.cells {
        table.push(vec![
            Cell::Num(c.a),
            Cell::Num(c.eps),
            c.class.label().into(),
            Cell::opt(c.growth_rate),
            Cell::opt(c.re_delta),
            Cell::opt(c.im_delta),
        ]);
    }
    for class in [
        CellClass::Stable,
        CellClass::Unstable,
        CellClass::Boundary,
        CellClass::Overflow,
    ] {
        let key = match class {
            CellClass::Stable => "stable_cells",
            CellClass::Unstable => "unstable_cells",
            CellClass::Boundary => "boundary_cells",
            CellClass::Overflow => "overflow_cells",
        };
        table.meta(key, Cell::Int(grid.count(class) as i64));
    }
    let svg = (args.output.format == Format::Svg).then(|| chart_svg(&grid));
    emit(&args.output, &table, svg, inv)?;
    if grid.count(CellClass::Overflow) == grid.cells.len() {
        return Err(CliError::Numerical("every cell overflowed".into()));
    }
    Ok(())
}

fn chart_svg(grid: &ChartGrid) -> String {
    let s = &grid.spec;
    let half = |lo: f64, hi: f64, n: usize| if n > 1 { 0.5 * (hi - lo) / (n - 1) as f64 } else { 0.5 };
    let (da, de) = (
        half(s.a_min, s.a_max, s.a_steps),
        half(s.eps_min, s.eps_max, s.eps_steps),
    );
    let mut plot = Plot::new(
        &format!("Floquet growth rate, β = {}", crate::numfmt::fmt_num(s.beta)),
        "a",
        "ε",
        (s.a_min - da, s.a_max + da),
        (s.eps_min - de, s.eps_max + de),
    );
    let max_growth = grid
        .cells
        .iter()
        .filter_map(|c| c.growth_rate)
        .fold(0.0f64, f64::max)
        .max(1e-12);
    for c in &grid.cells {
        let fill = match (c.class, c.growth_rate) {
            (CellClass::Overflow, _) | (_, None) => "#000000".to_string(),
            (CellClass::Stable, _) => "#f4f4f4".to_string(),
            (CellClass::Boundary, _) => "#ffd700".to_string(),
            (CellClass::Unstable, Some(g)) => {
                let t = (g / max_growth).sqrt().clamp(0.0, 1.0);
                let shade = (230.0 - 180.0 * t).round() as u8;
                format!("#ff{shade:02x}{shade:02x}")
            }
        };
        plot.cell(c.a - da, c.a + da, c.eps - de, c.eps + de, &fill);
    }
    if s.beta <= 1.0 {
        let eps = eps_samples(s.eps_max.max(1e-12), 51);
        for (branch, dashed) in [
            (BranchId::A0Zero, false),
            (BranchId::A0QuarterPlus, false),
            (BranchId::A0QuarterMinus, true),
        ] {
            let pts: Vec<(f64, f64)> = eps
                .iter()
                .filter_map(|&e| perturbative_edge(branch, e, s.beta).ok().map(|a| (a, e)))
                .filter(|&(a, e)| a >= s.a_min && a <= s.a_max && e >= s.eps_min)
                .collect();
            plot.polyline(&pts, "#1f77b4", dashed);
        }
        plot.legend_entry("closed form", "#1f77b4", false);
    }
    plot.finish()
}

fn trace(args: &TraceArgs, inv: &str) -> Result<(), CliError> {
    let branch = BranchId::from_label(&args.branch).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown --branch {}; use zero, quarter+ or quarter-",
            args.branch
        ))
    })?;
    check_unit_beta(args.beta)?;
    if args.steps < ptmathieu::floquet::MIN_STEPS {
        return Err(CliError::Usage("--steps must be at least 64".into()));
    }
    let opts = TraceOptions {
        steps: args.steps,
        ..TraceOptions::default()
    };
    let curve = trace_boundary_with(branch, args.beta, args.eps_max, args.samples, &opts)?;
    let mut table = Table::new("trace", &["eps", "a", "a_perturbative", "deviation"]);
    let mut closed_form = Vec::with_capacity(curve.samples.len());
    for &(eps, a) in &curve.samples {
        let pert = perturbative_edge(branch, eps, args.beta)?;
        closed_form.push((eps, pert));
        table.push(vec![Cell::Num(eps), Cell::Num(a), Cell::Num(pert), Cell::Num(a - pert)]);
    }
    table.meta("branch", branch.label().into());
    table.meta("beta", Cell::Num(args.beta));
    table.meta("target_discriminant", Cell::Num(curve.target.value()));
    table.meta("merged", Cell::Bool(curve.merged));
    table.meta("closed_at", Cell::opt(curve.closed_at));
    match estimate_curvature(&curve) {
        Ok(r) => {
            table.meta("kappa_numeric", Cell::Num(r.kappa_numeric));
            table.meta("kappa_paper", Cell::Num(r.kappa_paper));
            table.meta("relative_error", Cell::Num(r.relative_error));
            table.meta("slope_numeric", Cell::Num(r.slope_numeric));
            table.meta("slope_paper", Cell::Num(r.slope_paper));
        }
        Err(MathieuError::InsufficientSamples { .. }) => {
            table.meta("curvature", "insufficient samples with eps <= 0.05".into());
        }
        Err(e) => return Err(e.into()),
    }
    let svg = (args.output.format == Format::Svg).then(|| {
        let swap = |pts: &[(f64, f64)]| pts.iter().map(|&(e, a)| (a, e)).collect::<Vec<_>>();
        let all = curve.samples.iter().chain(&closed_form);
        let a_lo = all.clone().fold(f64::INFINITY, |m, p| m.min(p.1));
        let a_hi = all.fold(f64::NEG_INFINITY, |m, p| m.max(p.1));
        let pad = 0.05 * (a_hi - a_lo).max(1e-3);
        let mut plot = Plot::new(
            &format!(
                "Traced {} boundary, β = {}",
                branch.label(),
                crate::numfmt::fmt_num(args.beta)
            ),
            "a",
            "ε",
            (a_lo - pad, a_hi + pad),
            (0.0, args.eps_max),
        );
        plot.polyline(&swap(&curve.samples), "black", false);
        plot.polyline(&swap(&closed_form), "#d62728", true);
        plot.legend_entry("Floquet", "black", false);
        plot.legend_entry("closed form", "#d62728", true);
        plot.finish()
    });
    emit(&args.output, &table, svg, inv)?;
    if curve.samples.len() == 1 {
        return Err(CliError::Numerical("no boundary point could be bracketed".into()));
    }
    Ok(())
}

fn edges(args: &EdgesArgs, inv: &str) -> Result<(), CliError> {
    let exponent = FloquetExponent::from_nu(args.nu)?;
    if args.beta < 0.0 || args.eps < 0.0 {
        return Err(CliError::Usage("--beta and --eps must be non-negative".into()));
    }
    let result = band_edges(args.nu, args.eps, args.beta, args.trunc, args.count)?;
    let mut table = Table::new("edges", &["nu", "beta", "eps", "trunc", "index", "a"]);
    for (k, &a) in result.values.iter().enumerate() {
        table.push(vec![
            Cell::Num(exponent.nu()),
            Cell::Num(args.beta),
            Cell::Num(args.eps),
            Cell::Int(args.trunc as i64),
            Cell::Int(k as i64),
            Cell::Num(a),
        ]);
    }
    table.meta("truncation_warning", Cell::Bool(result.truncation_warning));
    let deviation = if args.beta < 1.0 && 2 * args.trunc + 1 >= 5 {
        Some(hermitian_equivalence_check(args.eps, args.beta, args.trunc)?)
    } else {
        None
    };
    table.meta("hermitian_equivalence_deviation", Cell::opt(deviation));
    emit(&args.output, &table, None, inv)
}

fn compare(args: &CompareArgs, inv: &str) -> Result<(), CliError> {
    if args.beta.is_empty() || args.eps.is_empty() {
        return Err(CliError::Usage("--beta and --eps need at least one value".into()));
    }
    for &b in &args.beta {
        check_unit_beta(b)?;
    }
    for &e in &args.eps {
        if !(0.0..=ptmathieu::tracer::MAX_COMPARE_EPS).contains(&e) {
            return Err(CliError::Usage(format!("--eps {e} is outside [0, 0.3]")));
        }
    }
    if args.steps < ptmathieu::floquet::MIN_STEPS {
        return Err(CliError::Usage("--steps must be at least 64".into()));
    }
    let opts = CompareOptions {
        trace: TraceOptions {
            steps: args.steps,
            ..TraceOptions::default()
        },
        truncation: args.trunc,
    };
    let work: Vec<(BranchId, f64, f64)> = BranchId::ALL
        .iter()
        .flat_map(|&b| {
            args.beta
                .iter()
                .flat_map(move |&beta| args.eps.iter().map(move |&eps| (b, beta, eps)))
        })
        .collect();
    let rows = with_pool(args.jobs.jobs, || {
        work.par_iter()
            .map(|&(b, beta, eps)| compare_row(b, beta, eps, &opts))
            .collect::<Result<Vec<_>, _>>()
    })??;
    let mut table = Table::new(
        "compare",
        &[
            "branch",
            "beta",
            "eps",
            "a_perturbative",
            "a_floquet",
            "a_hill",
            "abs_error_pert",
            "cross_engine_error",
            "flag",
        ],
    );
    for r in &rows {
        table.push(vec![
            r.branch.label().into(),
            Cell::Num(r.beta),
            Cell::Num(r.eps),
            Cell::Num(r.a_perturbative),
            Cell::opt(r.a_floquet),
            Cell::opt(r.a_hill),
            Cell::opt(r.abs_error_pert),
            Cell::opt(r.cross_engine_error),
            r.flag.map_or(Cell::Missing, |f| f.label().into()),
        ]);
    }
    let worst = rows
        .iter()
        .filter_map(|r| r.cross_engine_error)
        .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))));
    table.meta("max_cross_engine_error", Cell::opt(worst));
    emit(&args.output, &table, None, inv)?;
    if rows.iter().all(|r| r.a_floquet.is_none()) {
        return Err(CliError::Numerical("no boundary point could be bracketed".into()));
    }
    Ok(())
}
