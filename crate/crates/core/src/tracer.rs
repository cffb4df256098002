//! Numerical stability boundaries traced from the Floquet discriminant.
//!
//! A boundary point at fixed `ε` is a root of `Re Δ(a) - target` with
//! `target = +2` on the `a₀ = 0` curve and `-2` on the quarter tongue. Roots
//! are found by bisection in `a`. The two quarter edges share a target, so
//! their brackets are clipped at the tongue centre `1/4 - (1-β²)ε²/2`, which
//! lies inside the tongue; that keeps a bracket from straddling both edges.
//!
//! At `β = 1` the tongue has zero width and `Δ + 2` only touches zero. When no
//! sign change exists, the solver falls back to minimising `|Re Δ - target|`
//! and accepts a touching point, flagging the curve as merged.

use crate::error::{MathieuError, Result};
use crate::floquet::{discriminant_at, DEFAULT_STEPS};
use crate::hill::{band_edges, DEFAULT_TRUNCATION};
use crate::params::BranchId;
use crate::perturbative::{boundary_a0, boundary_quarter, curvature_kappa1, curvature_kappa2, QuarterSign};

/// Samples with `eps` up to this value enter the curvature fit.
pub const CURVATURE_EPS_LIMIT: f64 = 0.05;
pub const CURVATURE_MIN_SAMPLES: usize = 5;
pub const MAX_TRACE_EPS: f64 = 0.5;
pub const MAX_COMPARE_EPS: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeTarget {
    /// `Δ = +2`
    Periodic,
    /// `Δ = -2`
    Antiperiodic,
}

impl EdgeTarget {
    pub fn value(self) -> f64 {
        match self {
            EdgeTarget::Periodic => 2.0,
            EdgeTarget::Antiperiodic => -2.0,
        }
    }

    pub fn from_value(v: f64) -> Result<Self> {
        if v == 2.0 {
            Ok(EdgeTarget::Periodic)
        } else if v == -2.0 {
            Ok(EdgeTarget::Antiperiodic)
        } else {
            Err(MathieuError::InvalidParameter {
                name: "target",
                value: v,
                reason: "target discriminant must be +2 or -2",
            })
        }
    }

    pub fn for_branch(branch: BranchId) -> Self {
        match branch {
            BranchId::A0Zero => EdgeTarget::Periodic,
            _ => EdgeTarget::Antiperiodic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceOptions {
    /// RK4 steps per period for the root solve; verification uses twice as many.
    pub steps: usize,
    /// Bracket width at which bisection stops.
    pub a_tol: f64,
    /// Bound on `|Δ - target|` every accepted point must meet.
    pub verify_tol: f64,
    /// Largest `|Re Δ - target|` accepted for a touching (double) root.
    pub tangency_tol: f64,
    /// Number of ×3 window expansions tried after the first bracket fails.
    pub max_expansions: u32,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            steps: DEFAULT_STEPS,
            a_tol: 1e-12,
            verify_tol: 1e-8,
            tangency_tol: 1e-8,
            max_expansions: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct EdgeRoot {
    a: f64,
    /// Found as a touching point rather than a sign change.
    tangent: bool,
}

struct Residual {
    eps: f64,
    beta: f64,
    target: f64,
    steps: usize,
}

impl Residual {
    fn at(&self, a: f64) -> Result<f64> {
        Ok(discriminant_at(a, self.eps, self.beta, self.steps)?.re - self.target)
    }
}

fn solve_in_bracket(res: &Residual, mut lo: f64, mut hi: f64, opts: &TraceOptions) -> Result<EdgeRoot> {
    let mut f_lo = res.at(lo)?;
    let f_hi = res.at(hi)?;
    if f_lo == 0.0 {
        return Ok(EdgeRoot { a: lo, tangent: false });
    }
    if f_hi == 0.0 {
        return Ok(EdgeRoot { a: hi, tangent: false });
    }
    if f_lo.signum() != f_hi.signum() {
        while hi - lo > opts.a_tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let f_mid = res.at(mid)?;
            if f_mid == 0.0 {
                return Ok(EdgeRoot { a: mid, tangent: false });
            }
            if f_mid.signum() == f_lo.signum() {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        return Ok(EdgeRoot {
            a: 0.5 * (lo + hi),
            tangent: false,
        });
    }
    touching_root(res, lo, hi, opts)
}

/// Golden-section search for the minimum of `|Re Δ - target|` on `[lo, hi]`.
fn touching_root(res: &Residual, lo: f64, hi: f64, opts: &TraceOptions) -> Result<EdgeRoot> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = res.at(c)?.abs();
    let mut fd = res.at(d)?.abs();
    while b - a > opts.a_tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = res.at(c)?.abs();
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = res.at(d)?.abs();
        }
        if fc.min(fd) == 0.0 {
            break;
        }
    }
    let (x, fx) = if fc < fd { (c, fc) } else { (d, fd) };
    if fx <= opts.tangency_tol {
        Ok(EdgeRoot { a: x, tangent: true })
    } else {
        Err(MathieuError::NoBracket { lo, hi })
    }
}

fn validate_eps_beta(eps: f64, beta: f64) -> Result<()> {
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(MathieuError::InvalidParameter {
            name: "eps",
            value: eps,
            reason: "must be finite and non-negative",
        });
    }
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(MathieuError::InvalidParameter {
            name: "beta",
            value: beta,
            reason: "must be finite and non-negative",
        });
    }
    Ok(())
}

/// Root of `Re Δ(a) - target` on `[seed - window, seed + window]` with default options.
pub fn solve_edge(eps: f64, beta: f64, seed_a: f64, target: EdgeTarget, window: f64) -> Result<f64> {
    solve_edge_with(eps, beta, seed_a, target, window, &TraceOptions::default())
}

pub fn solve_edge_with(
    eps: f64,
    beta: f64,
    seed_a: f64,
    target: EdgeTarget,
    window: f64,
    opts: &TraceOptions,
) -> Result<f64> {
    validate_eps_beta(eps, beta)?;
    if !(window > 0.0) {
        return Err(MathieuError::InvalidParameter {
            name: "window",
            value: window,
            reason: "must be positive",
        });
    }
    let res = Residual {
        eps,
        beta,
        target: target.value(),
        steps: opts.steps,
    };
    solve_in_bracket(&res, seed_a - window, seed_a + window, opts).map(|r| r.a)
}

/// Closed-form value of `branch` at `(eps, beta)`, the seed for the first step.
pub fn perturbative_edge(branch: BranchId, eps: f64, beta: f64) -> Result<f64> {
    match branch {
        BranchId::A0Zero => boundary_a0(eps, beta),
        BranchId::A0QuarterPlus => boundary_quarter(eps, beta, QuarterSign::Plus),
        BranchId::A0QuarterMinus => boundary_quarter(eps, beta, QuarterSign::Minus),
    }
}

fn tongue_centre(eps: f64, beta: f64) -> f64 {
    0.25 - 0.5 * (1.0 - beta * beta) * eps * eps
}

fn initial_window(eps: f64) -> f64 {
    (10.0 * eps * eps).max(0.02)
}

/// Brackets never grow past this half-width; the next edge with the same
/// target is at least twice as far away for `ε ≤ 0.5`.
const WINDOW_CAP: f64 = 0.5;

fn branch_bracket(branch: BranchId, eps: f64, beta: f64, seed: f64, w: f64) -> (f64, f64) {
    let centre = tongue_centre(eps, beta);
    match branch {
        BranchId::A0Zero => (seed - w, seed + w),
        BranchId::A0QuarterPlus => ((seed - w).max(centre), seed.max(centre) + w),
        BranchId::A0QuarterMinus => (seed.min(centre) - w, (seed + w).min(centre)),
    }
}

/// Boundary of `branch` at one `eps`, bracketed around `seed` with the
/// expanding window schedule.
fn solve_branch(branch: BranchId, eps: f64, beta: f64, seed: f64, opts: &TraceOptions) -> Result<EdgeRoot> {
    if eps == 0.0 {
        return Ok(EdgeRoot {
            a: branch.anchor(),
            tangent: false,
        });
    }
    let res = Residual {
        eps,
        beta,
        target: EdgeTarget::for_branch(branch).value(),
        steps: opts.steps,
    };
    let mut w = initial_window(eps).min(WINDOW_CAP);
    let mut last = None;
    for _ in 0..=opts.max_expansions {
        let (lo, hi) = branch_bracket(branch, eps, beta, seed, w);
        match solve_in_bracket(&res, lo, hi, opts) {
            Ok(mut root) => {
                if branch != BranchId::A0Zero {
                    // the clip point already sits on the target: branches merged
                    let centre = tongue_centre(eps, beta);
                    root.tangent |= res.at(centre)?.abs() <= opts.tangency_tol;
                }
                return Ok(root);
            }
            Err(e @ MathieuError::NoBracket { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
        w = (3.0 * w).min(WINDOW_CAP);
    }
    Err(last.unwrap_or(MathieuError::NoBracket { lo: seed, hi: seed }))
}

/// One traced stability boundary in the `(ε, a)` plane.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub branch: BranchId,
    pub beta: f64,
    /// `(eps, a)` with strictly increasing `eps`, starting at `(0, anchor)`.
    pub samples: Vec<(f64, f64)>,
    pub target: EdgeTarget,
    /// Some points were touching roots: the two quarter edges coincide there.
    pub merged: bool,
    /// `eps` at which no bracket could be found; the curve stops before it.
    pub closed_at: Option<f64>,
}

impl BoundaryCurve {
    pub fn is_complete(&self) -> bool {
        self.closed_at.is_none()
    }
}

pub fn trace_boundary(branch: BranchId, beta: f64, eps_max: f64, n_samples: usize) -> Result<BoundaryCurve> {
    trace_boundary_with(branch, beta, eps_max, n_samples, &TraceOptions::default())
}

/// Marches `eps` uniformly over `[0, eps_max]` in `n_samples` points. The
/// first step is seeded by the closed-form curve, later ones by linear
/// extrapolation of the previous two roots. Every accepted point is
/// re-checked with a fresh monodromy at twice the step count.
pub fn trace_boundary_with(
    branch: BranchId,
    beta: f64,
    eps_max: f64,
    n_samples: usize,
    opts: &TraceOptions,
) -> Result<BoundaryCurve> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(MathieuError::BetaOutOfRange(beta));
    }
    if !(eps_max > 0.0 && eps_max <= MAX_TRACE_EPS) {
        return Err(MathieuError::InvalidParameter {
            name: "eps_max",
            value: eps_max,
            reason: "must lie in (0, 0.5]",
        });
    }
    if n_samples < 2 {
        return Err(MathieuError::InvalidParameter {
            name: "n_samples",
            value: n_samples as f64,
            reason: "need at least two samples",
        });
    }
    let target = EdgeTarget::for_branch(branch);
    let mut curve = BoundaryCurve {
        branch,
        beta,
        samples: vec![(0.0, branch.anchor())],
        target,
        merged: false,
        closed_at: None,
    };
    let step = eps_max / (n_samples - 1) as f64;
    for i in 1..n_samples {
        let eps = if i == n_samples - 1 { eps_max } else { i as f64 * step };
        let seed = match curve.samples.as_slice() {
            [.., (e0, a0), (e1, a1)] => a1 + (a1 - a0) * (eps - e1) / (e1 - e0),
            _ => perturbative_edge(branch, eps, beta)?,
        };
        let root = match solve_branch(branch, eps, beta, seed, opts) {
            Ok(root) => root,
            Err(MathieuError::NoBracket { .. }) => {
                curve.closed_at = Some(eps);
                break;
            }
            Err(e) => return Err(e),
        };
        curve.merged |= root.tangent;
        curve.samples.push((eps, root.a));
    }
    for &(eps, a) in &curve.samples {
        verify_point(eps, beta, a, target, opts)?;
    }
    Ok(curve)
}

fn verify_point(eps: f64, beta: f64, a: f64, target: EdgeTarget, opts: &TraceOptions) -> Result<()> {
    let delta = discriminant_at(a, eps, beta, 2 * opts.steps)?;
    let residual = (delta - target.value()).norm();
    if residual <= opts.verify_tol {
        Ok(())
    } else {
        Err(MathieuError::VerificationFailed { eps, a, residual })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureReport {
    pub branch: BranchId,
    pub beta: f64,
    pub kappa_numeric: f64,
    pub kappa_paper: f64,
    /// `|kappa_numeric - kappa_paper| / max(kappa_paper, 1e-3)`
    pub relative_error: f64,
    pub slope_numeric: f64,
    pub slope_paper: f64,
}

/// Least-squares fit of `a - anchor = s ε + (κ/2) ε² + c ε³` over the samples
/// with `ε ≤ 0.05`.
///
/// The cubic column absorbs the `O(ε³)` term of the quarter edges, which would
/// otherwise bias `κ` by a few percent over this window.
pub fn estimate_curvature(curve: &BoundaryCurve) -> Result<CurvatureReport> {
    let points: Vec<(f64, f64)> = curve
        .samples
        .iter()
        .filter(|(eps, _)| *eps <= CURVATURE_EPS_LIMIT * (1.0 + 1e-9))
        .map(|&(eps, a)| (eps, a - curve.branch.anchor()))
        .collect();
    if points.len() < CURVATURE_MIN_SAMPLES {
        return Err(MathieuError::InsufficientSamples {
            found: points.len(),
            required: CURVATURE_MIN_SAMPLES,
            eps_limit: CURVATURE_EPS_LIMIT,
        });
    }
    let scale = points.iter().fold(0.0f64, |m, p| m.max(p.0));
    // normal equations in t = ε / scale for conditioning
    let mut gram = [[0.0; 3]; 3];
    let mut rhs = [0.0; 3];
    for &(eps, y) in &points {
        let t = eps / scale;
        let basis = [t, t * t, t * t * t];
        for i in 0..3 {
            rhs[i] += basis[i] * y;
            for j in 0..3 {
                gram[i][j] += basis[i] * basis[j];
            }
        }
    }
    let coef = solve3(gram, rhs);
    let slope_numeric = coef[0] / scale;
    let kappa_numeric = (2.0 * coef[1] / (scale * scale)).abs();

    let beta = curve.beta;
    let root = (1.0 - beta * beta).max(0.0).sqrt();
    let (kappa_paper, slope_paper) = match curve.branch {
        BranchId::A0Zero => (curvature_kappa1(beta)?, 0.0),
        BranchId::A0QuarterPlus => (curvature_kappa2(beta)?, root),
        BranchId::A0QuarterMinus => (curvature_kappa2(beta)?, -root),
    };
    Ok(CurvatureReport {
        branch: curve.branch,
        beta,
        kappa_numeric,
        kappa_paper,
        relative_error: (kappa_numeric - kappa_paper).abs() / kappa_paper.max(1e-3),
        slope_numeric,
        slope_paper,
    })
}

/// Gaussian elimination with partial pivoting on a 3×3 system.
fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> [f64; 3] {
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap_or(col);
        m.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            let upper = m[col];
            for (x, u) in m[row].iter_mut().zip(upper).skip(col) {
                *x -= f * u;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|k| m[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / m[row][row];
    }
    x
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowFlag {
    /// The quarter edges touch; `a_floquet` is a touching root.
    Merged,
    NoBracket,
    Overflow,
}

impl RowFlag {
    pub fn label(self) -> &'static str {
        match self {
            RowFlag::Merged => "merged",
            RowFlag::NoBracket => "no_bracket",
            RowFlag::Overflow => "overflow",
        }
    }
}

/// One `(branch, β, ε)` line of the three-route comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub branch: BranchId,
    pub beta: f64,
    pub eps: f64,
    pub a_perturbative: f64,
    pub a_floquet: Option<f64>,
    pub a_hill: Option<f64>,
    /// `|a_perturbative - a_floquet|`
    pub abs_error_pert: Option<f64>,
    /// `|a_hill - a_floquet|`
    pub cross_engine_error: Option<f64>,
    pub flag: Option<RowFlag>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareOptions {
    pub trace: TraceOptions,
    pub truncation: usize,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            trace: TraceOptions {
                steps: 2 * DEFAULT_STEPS,
                ..TraceOptions::default()
            },
            truncation: DEFAULT_TRUNCATION,
        }
    }
}

fn hill_edge(branch: BranchId, eps: f64, beta: f64, truncation: usize) -> Result<f64> {
    let (nu, index) = match branch {
        BranchId::A0Zero => (0.0, 0),
        BranchId::A0QuarterMinus => (0.5, 0),
        BranchId::A0QuarterPlus => (0.5, 1),
    };
    Ok(band_edges(nu, eps, beta, truncation, index + 1)?.values[index])
}

fn validate_compare_inputs(beta: f64, eps: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(MathieuError::BetaOutOfRange(beta));
    }
    if !(0.0..=MAX_COMPARE_EPS).contains(&eps) {
        return Err(MathieuError::InvalidParameter {
            name: "eps",
            value: eps,
            reason: "comparison covers 0 <= eps <= 0.3",
        });
    }
    Ok(())
}

/// Closed-form, Floquet and Hill values of one boundary point. Numerical
/// failures are recorded in `flag` instead of being returned.
pub fn compare_row(branch: BranchId, beta: f64, eps: f64, opts: &CompareOptions) -> Result<ComparisonRow> {
    validate_compare_inputs(beta, eps)?;
    let a_perturbative = perturbative_edge(branch, eps, beta)?;
    let a_hill = hill_edge(branch, eps, beta, opts.truncation).ok();
    let (a_floquet, flag) = match solve_branch(branch, eps, beta, a_perturbative, &opts.trace) {
        Ok(root) => (Some(root.a), root.tangent.then_some(RowFlag::Merged)),
        Err(MathieuError::NoBracket { .. }) => (None, Some(RowFlag::NoBracket)),
        Err(MathieuError::NonFinite { .. }) => (None, Some(RowFlag::Overflow)),
        Err(e) => return Err(e),
    };
    Ok(ComparisonRow {
        branch,
        beta,
        eps,
        a_perturbative,
        a_floquet,
        a_hill,
        abs_error_pert: a_floquet.map(|f| (a_perturbative - f).abs()),
        cross_engine_error: a_floquet.zip(a_hill).map(|(f, h)| (h - f).abs()),
        flag,
    })
}

/// Every `(branch, β, ε)` combination, ordered by branch, then β, then ε.
pub fn compare_report(betas: &[f64], eps_grid: &[f64]) -> Result<Vec<ComparisonRow>> {
    let opts = CompareOptions::default();
    let mut rows = Vec::with_capacity(3 * betas.len() * eps_grid.len());
    for branch in BranchId::ALL {
        for &beta in betas {
            for &eps in eps_grid {
                rows.push(compare_row(branch, beta, eps, &opts)?);
            }
        }
    }
    Ok(rows)
}
