//! Parameter model and the PT-symmetric potential.

use std::fmt;

use num_complex::Complex64;

use crate::error::{MathieuError, Result};

/// One instance of the equation: characteristic value `a`, modulation strength
/// `eps` and non-Hermitian weight `beta`.
///
/// `eps` and `beta` are non-negative. A negative `eps` is the same equation
/// shifted by `π` and a negative `beta` is its mirror image, so nothing is lost;
/// [`MathieuParams::normalized`] folds such inputs back.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MathieuParams {
    a: f64,
    eps: f64,
    beta: f64,
}

impl MathieuParams {
    pub fn new(a: f64, eps: f64, beta: f64) -> Result<Self> {
        if !a.is_finite() {
            return Err(MathieuError::InvalidParameter {
                name: "a",
                value: a,
                reason: "must be finite",
            });
        }
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
        Ok(Self { a, eps, beta })
    }

    /// Maps `eps → |eps|` and `beta → |beta|` before validating.
    pub fn normalized(a: f64, eps: f64, beta: f64) -> Result<Self> {
        Self::new(a, eps.abs(), beta.abs())
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn with_a(self, a: f64) -> Result<Self> {
        Self::new(a, self.eps, self.beta)
    }
}

/// Which stability boundary leaves the `a` axis: the single curve from `a = 0`,
/// or the upper/lower edge of the tongue from `a = 1/4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BranchId {
    A0Zero,
    A0QuarterPlus,
    A0QuarterMinus,
}

impl BranchId {
    pub const ALL: [BranchId; 3] = [BranchId::A0Zero, BranchId::A0QuarterPlus, BranchId::A0QuarterMinus];

    /// Unperturbed value `a₀` the curve starts from at `ε = 0`.
    pub fn anchor(self) -> f64 {
        match self {
            BranchId::A0Zero => 0.0,
            BranchId::A0QuarterPlus | BranchId::A0QuarterMinus => 0.25,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BranchId::A0Zero => "zero",
            BranchId::A0QuarterPlus => "quarter+",
            BranchId::A0QuarterMinus => "quarter-",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        match label {
            "zero" | "a0" => Some(BranchId::A0Zero),
            "quarter+" | "plus" => Some(BranchId::A0QuarterPlus),
            "quarter-" | "minus" => Some(BranchId::A0QuarterMinus),
            _ => None,
        }
    }
}

impl fmt::Display for BranchId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// `V(x) = cos x + iβ sin x`.
pub fn potential_value(x: f64, beta: f64) -> Complex64 {
    let (s, c) = x.sin_cos();
    Complex64::new(c, beta * s)
}

/// Splits `2εV(x)` into `g₊ e^{ix} + g₋ e^{-ix}`, returning `(g₊, g₋) = (ε(1+β), ε(1-β))`.
pub fn coupling_coefficients(eps: f64, beta: f64) -> (f64, f64) {
    (eps * (1.0 + beta), eps * (1.0 - beta))
}
