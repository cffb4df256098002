//! Band edges from the truncated Hill matrix.
//!
//! Substituting `ψ = Σₙ cₙ e^{i(ν+n)x}` with `ν ∈ {0, 1/2}` (periodic or
//! antiperiodic solutions) gives the three-term recurrence
//!
//! ```text
//! (ν+n)² cₙ - ε(1+β) cₙ₋₁ - ε(1-β) cₙ₊₁ = a cₙ
//! ```
//!
//! so band edges are eigenvalues of a tridiagonal matrix with constant
//! sub-diagonal `-ε(1+β)` and super-diagonal `-ε(1-β)`. For `β < 1` the
//! scaling `cₙ → rⁿcₙ`, `r = √((1+β)/(1-β))`, turns it into a symmetric matrix
//! with off-diagonal `-ε√(1-β²)`, so the spectrum is real and Sturm bisection
//! applies. At `β = 1` the matrix is triangular and the edges are the diagonal.

use crate::error::{MathieuError, Result};
use crate::params::coupling_coefficients;

pub const DEFAULT_TRUNCATION: usize = 32;
/// Absolute width at which eigenvalue bisection stops.
pub const EIGEN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FloquetExponent {
    /// `ν = 0`, periodic solutions, `Δ = +2`.
    Periodic,
    /// `ν = 1/2`, antiperiodic solutions, `Δ = -2`.
    Antiperiodic,
}

impl FloquetExponent {
    pub fn from_nu(nu: f64) -> Result<Self> {
        if nu == 0.0 {
            Ok(FloquetExponent::Periodic)
        } else if nu == 0.5 {
            Ok(FloquetExponent::Antiperiodic)
        } else {
            Err(MathieuError::InvalidExponent(nu))
        }
    }

    pub fn nu(self) -> f64 {
        match self {
            FloquetExponent::Periodic => 0.0,
            FloquetExponent::Antiperiodic => 0.5,
        }
    }

    /// Value of the discriminant on the edges of this family.
    pub fn discriminant(self) -> f64 {
        match self {
            FloquetExponent::Periodic => 2.0,
            FloquetExponent::Antiperiodic => -2.0,
        }
    }
}

/// Truncated Hill operator on Fourier indices `n = -N..=N`, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct HillMatrix {
    pub exponent: FloquetExponent,
    pub half_width: usize,
    pub beta: f64,
    pub diag: Vec<f64>,
    /// Entry `(n, n-1)`: `-ε(1+β)`.
    pub sub: f64,
    /// Entry `(n, n+1)`: `-ε(1-β)`.
    pub sup: f64,
}

impl HillMatrix {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Dense copy, row-major. Used by tests and small diagnostics.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut rows = vec![vec![0.0; n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = self.diag[i];
            if i > 0 {
                row[i - 1] = self.sub;
            }
            if i + 1 < n {
                row[i + 1] = self.sup;
            }
        }
        rows
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTridiagonal {
    pub diag: Vec<f64>,
    /// Constant off-diagonal entry.
    pub off: f64,
}

impl SymmetricTridiagonal {
    /// Number of eigenvalues strictly below `x`, from the signs of the `LDLᵀ`
    /// pivots of `T - xI`.
    pub fn count_below(&self, x: f64) -> usize {
        let off2 = self.off * self.off;
        let mut count = 0;
        let mut pivot = 1.0;
        for (i, &d) in self.diag.iter().enumerate() {
            pivot = if i == 0 { d - x } else { d - x - off2 / pivot };
            if pivot == 0.0 {
                // a zero pivot means x is an eigenvalue of the leading block;
                // nudging it keeps the recurrence defined without changing the count
                pivot = -f64::EPSILON * (d.abs() + self.off.abs() + x.abs()).max(1.0);
            }
            if pivot < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let r = 2.0 * self.off.abs();
        let lo = self.diag.iter().fold(f64::INFINITY, |m, &d| m.min(d - r));
        let hi = self.diag.iter().fold(f64::NEG_INFINITY, |m, &d| m.max(d + r));
        (lo, hi)
    }

    /// `k`-th smallest eigenvalue (zero-based) by bisection to absolute width `tol`.
    pub fn eigenvalue(&self, k: usize, tol: f64) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

pub fn build_hill_matrix(nu: f64, eps: f64, beta: f64, half_width: usize) -> Result<HillMatrix> {
    let exponent = FloquetExponent::from_nu(nu)?;
    if half_width < 1 {
        return Err(MathieuError::InvalidParameter {
            name: "N",
            value: 0.0,
            reason: "truncation half-width must be at least 1",
        });
    }
    let n = half_width as i64;
    let diag = (-n..=n)
        .map(|k| {
            let s = exponent.nu() + k as f64;
            s * s
        })
        .collect();
    let (g_plus, g_minus) = coupling_coefficients(eps, beta);
    Ok(HillMatrix {
        exponent,
        half_width,
        beta,
        diag,
        sub: -g_plus,
        sup: -g_minus,
    })
}

/// Diagonal similarity to a symmetric tridiagonal matrix with off-diagonal
/// `-√(sub·sup)`. Only possible in the unbroken phase `β < 1`.
pub fn symmetrize(h: &HillMatrix) -> Result<SymmetricTridiagonal> {
    let product = h.sub * h.sup;
    if !(h.beta < 1.0) || product < 0.0 || ((h.sub == 0.0) != (h.sup == 0.0)) {
        return Err(MathieuError::NotSymmetrizable { beta: h.beta });
    }
    let sign = if h.sub < 0.0 { -1.0 } else { 1.0 };
    Ok(SymmetricTridiagonal {
        diag: h.diag.clone(),
        off: sign * product.sqrt(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandEdges {
    /// Smallest eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Set when the largest returned value exceeds `(N/2)²`, where truncation
    /// starts to distort the spectrum.
    pub truncation_warning: bool,
}

/// The `count` lowest band edges for Floquet exponent `nu`.
pub fn band_edges(nu: f64, eps: f64, beta: f64, half_width: usize, count: usize) -> Result<BandEdges> {
    if beta > 1.0 {
        return Err(MathieuError::BetaOutOfRange(beta));
    }
    if !(beta >= 0.0 && eps >= 0.0) {
        return Err(MathieuError::InvalidParameter {
            name: "beta/eps",
            value: beta.min(eps),
            reason: "must be non-negative",
        });
    }
    let h = build_hill_matrix(nu, eps, beta, half_width)?;
    if count == 0 || count > h.dim() {
        return Err(MathieuError::InvalidParameter {
            name: "count",
            value: count as f64,
            reason: "must lie in 1..=2N+1",
        });
    }
    // no coupling on one side: the matrix is triangular or diagonal
    let values: Vec<f64> = if beta == 1.0 || eps == 0.0 {
        let mut d = h.diag.clone();
        d.sort_by(f64::total_cmp);
        d.truncate(count);
        d
    } else {
        let t = symmetrize(&h)?;
        (0..count).map(|k| t.eigenvalue(k, EIGEN_TOL)).collect()
    };
    let limit = (half_width as f64 / 2.0).powi(2);
    let truncation_warning = values.last().is_some_and(|&v| v > limit);
    Ok(BandEdges {
        values,
        truncation_warning,
    })
}

/// Largest deviation between the PT band edges and the Hermitian ones at
/// `ε√(1-β²)`, over both exponents and the five lowest edges.
pub fn hermitian_equivalence_check(eps: f64, beta: f64, half_width: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&beta) {
        return Err(MathieuError::NotSymmetrizable { beta });
    }
    let eps_hermitian = eps * (1.0 - beta * beta).sqrt();
    let mut worst = 0.0f64;
    for nu in [0.0, 0.5] {
        let pt = band_edges(nu, eps, beta, half_width, 5)?;
        let herm = band_edges(nu, eps_hermitian, 0.0, half_width, 5)?;
        for (x, y) in pt.values.iter().zip(&herm.values) {
            worst = worst.max((x - y).abs());
        }
    }
    Ok(worst)
}
