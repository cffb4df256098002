//! Closed-form stability boundaries from the multiple-scale expansion.
//!
//! Two anchors are covered. Near `a₀ = 0` a single curve
//! `a(ε) = -2(1-β²)ε²` separates the unstable region below it from the stable
//! region above. Near `a₀ = 1/4` the tongue `1/4 ± √(1-β²)ε - (1-β²)ε²/2` is
//! unstable inside. Both are truncated after `ε²`; the next correction is
//! `O(ε⁴)` at `a₀ = 0` (the cubic coefficient vanishes) and `O(ε³)` at `1/4`.
//!
//! All functions require `0 ≤ β ≤ 1`. Past `β = 1` the square root turns
//! imaginary and the expansions no longer describe the spectrum.

use crate::error::{MathieuError, Result};
use crate::params::MathieuParams;

/// Anchor split used by [`predict_stability_perturbative`]: points with `a`
/// below it are judged against the `a₀ = 0` curve, the rest against the
/// quarter tongue.
pub const ANCHOR_SPLIT: f64 = 0.125;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuarterSign {
    Plus,
    Minus,
}

impl QuarterSign {
    fn factor(self) -> f64 {
        match self {
            QuarterSign::Plus => 1.0,
            QuarterSign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PerturbativeClass {
    Stable,
    Unstable,
    NearBoundary,
}

fn check_beta(beta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&beta) {
        Ok(())
    } else {
        Err(MathieuError::BetaOutOfRange(beta))
    }
}

/// `1 - β²`, the factor through which β enters every closed-form result.
fn hermitian_weight(beta: f64) -> f64 {
    1.0 - beta * beta
}

/// Boundary leaving `a = 0`: `-2(1-β²)ε²`.
pub fn boundary_a0(eps: f64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok((-2.0 * eps * eps) * hermitian_weight(beta))
}

/// Tongue edge leaving `a = 1/4`: `1/4 ± √(1-β²)ε - (1-β²)ε²/2`.
pub fn boundary_quarter(eps: f64, beta: f64, sign: QuarterSign) -> Result<f64> {
    check_beta(beta)?;
    let w = hermitian_weight(beta);
    Ok(0.25 + sign.factor() * w.sqrt() * eps - 0.5 * w * eps * eps)
}

/// `|d²a/dε²|` at `ε = 0` on the `a₀ = 0` curve: `4(1-β²)`.
pub fn curvature_kappa1(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(4.0 * hermitian_weight(beta))
}

/// `|d²a/dε²|` at `ε = 0` on either quarter edge: `1-β²`.
pub fn curvature_kappa2(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(hermitian_weight(beta))
}

/// Default half-width of the `NearBoundary` band, `max(1e-9, 10ε³)`, sized to
/// the truncation error of the formulas.
pub fn default_boundary_tolerance(eps: f64) -> f64 {
    (10.0 * eps * eps * eps).max(1e-9)
}

pub fn predict_stability_perturbative(p: &MathieuParams) -> Result<PerturbativeClass> {
    predict_stability_perturbative_with(p, default_boundary_tolerance(p.eps()))
}

/// Classifies `p` by the closed-form boundary of the nearer anchor, treating
/// points within `tol` of a boundary as `NearBoundary`.
///
/// The anchor split at `a = 1/8` is a heuristic; the formulas say nothing about
/// points far from both anchors.
pub fn predict_stability_perturbative_with(p: &MathieuParams, tol: f64) -> Result<PerturbativeClass> {
    let (a, eps, beta) = (p.a(), p.eps(), p.beta());
    check_beta(beta)?;
    if a < ANCHOR_SPLIT {
        let edge = boundary_a0(eps, beta)?;
        return Ok(if (a - edge).abs() <= tol {
            PerturbativeClass::NearBoundary
        } else if a > edge {
            PerturbativeClass::Stable
        } else {
            PerturbativeClass::Unstable
        });
    }
    let lower = boundary_quarter(eps, beta, QuarterSign::Minus)?;
    let upper = boundary_quarter(eps, beta, QuarterSign::Plus)?;
    Ok(if (a - lower).abs() <= tol || (a - upper).abs() <= tol {
        PerturbativeClass::NearBoundary
    } else if lower < a && a < upper {
        PerturbativeClass::Unstable
    } else {
        PerturbativeClass::Stable
    })
}
