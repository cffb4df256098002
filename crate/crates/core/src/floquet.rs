//! Floquet analysis by direct integration over one period.
//!
//! The second-order equation is written as the first-order system
//! `(ψ, ψ')' = (ψ', -[a + 2εV(x)]ψ)` and integrated from `0` to `2π` with
//! fixed-step classical RK4, once from `(1, 0)` and once from `(0, 1)`. The two
//! end states are the columns of the monodromy matrix `M`. Since the system
//! matrix is traceless, `det M = 1` and the multipliers solve
//! `μ² - Δμ + 1 = 0` with `Δ = tr M`.
//!
//! For real `a, ε, β` the potential satisfies `V(x) = conj(V(-x))`, which forces
//! `Δ` to be real. The engine still carries `Δ` as a complex number; its
//! imaginary part is a free correctness check on the integration.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{MathieuError, Result};
use crate::params::{potential_value, MathieuParams};

pub const DEFAULT_STEPS: usize = 4096;
pub const MIN_STEPS: usize = 64;
pub const DEFAULT_GROWTH_TOL: f64 = 1e-7;
/// Integration aborts once `|ψ|` or `|ψ'|` passes this bound.
pub const OVERFLOW_LIMIT: f64 = 1e150;

/// `(ψ, ψ')` at one point of the period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    pub psi: Complex64,
    pub dpsi: Complex64,
}

impl StateVector {
    pub fn new(psi: Complex64, dpsi: Complex64) -> Self {
        Self { psi, dpsi }
    }

    fn derivative(self, q: Complex64) -> Self {
        Self {
            psi: self.dpsi,
            dpsi: -q * self.psi,
        }
    }

    fn axpy(self, h: f64, k: Self) -> Self {
        Self {
            psi: self.psi + k.psi * h,
            dpsi: self.dpsi + k.dpsi * h,
        }
    }

    fn is_bounded(&self) -> bool {
        let ok = |z: Complex64| z.re.is_finite() && z.im.is_finite() && z.norm() <= OVERFLOW_LIMIT;
        ok(self.psi) && ok(self.dpsi)
    }
}

/// Fundamental matrix at `x = 2π` for identity data at `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonodromyMatrix {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

impl MonodromyMatrix {
    pub fn identity() -> Self {
        let (one, zero) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Self {
            m11: one,
            m12: zero,
            m21: zero,
            m22: one,
        }
    }

    pub fn det(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn trace(&self) -> Complex64 {
        self.m11 + self.m22
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FloquetClass {
    Stable,
    Unstable,
    Boundary,
}

impl FloquetClass {
    pub fn label(self) -> &'static str {
        match self {
            FloquetClass::Stable => "stable",
            FloquetClass::Unstable => "unstable",
            FloquetClass::Boundary => "boundary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloquetResult {
    pub discriminant: Complex64,
    pub mu1: Complex64,
    pub mu2: Complex64,
    /// `max |ln|μ|| / 2π`, the exponential growth per unit `x`.
    pub growth_rate: f64,
    pub classification: FloquetClass,
}

/// `a + 2εV(x)`, with no sign conventions imposed on `eps` or `beta`.
#[inline]
fn coefficient(a: f64, eps: f64, beta: f64, x: f64) -> Complex64 {
    potential_value(x, beta) * (2.0 * eps) + a
}

/// RK4 over one period for raw coefficients. Validation lives in [`monodromy`];
/// this entry point also accepts negative `eps` and `beta` so the reflection
/// symmetries can be checked directly.
pub(crate) fn monodromy_raw(a: f64, eps: f64, beta: f64, steps: usize) -> Result<MonodromyMatrix> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut cols = [StateVector::new(one, zero), StateVector::new(zero, one)];
    let h = TAU / steps as f64;
    let mut q_left = coefficient(a, eps, beta, 0.0);
    for i in 0..steps {
        let x = i as f64 * h;
        let q_mid = coefficient(a, eps, beta, x + 0.5 * h);
        let q_right = coefficient(a, eps, beta, (i + 1) as f64 * h);
        for y in cols.iter_mut() {
            let k1 = y.derivative(q_left);
            let k2 = y.axpy(0.5 * h, k1).derivative(q_mid);
            let k3 = y.axpy(0.5 * h, k2).derivative(q_mid);
            let k4 = y.axpy(h, k3).derivative(q_right);
            *y = StateVector {
                psi: y.psi + (k1.psi + (k2.psi + k3.psi) * 2.0 + k4.psi) * (h / 6.0),
                dpsi: y.dpsi + (k1.dpsi + (k2.dpsi + k3.dpsi) * 2.0 + k4.dpsi) * (h / 6.0),
            };
            if !y.is_bounded() {
                return Err(MathieuError::NonFinite { x: x + h });
            }
        }
        q_left = q_right;
    }
    let [c1, c2] = cols;
    Ok(MonodromyMatrix {
        m11: c1.psi,
        m21: c1.dpsi,
        m12: c2.psi,
        m22: c2.dpsi,
    })
}

/// Monodromy matrix of the equation over `[0, 2π]` using `steps` RK4 steps.
pub fn monodromy(p: &MathieuParams, steps: usize) -> Result<MonodromyMatrix> {
    if steps < MIN_STEPS {
        return Err(MathieuError::InvalidParameter {
            name: "steps",
            value: steps as f64,
            reason: "at least 64 integration steps are required",
        });
    }
    monodromy_raw(p.a(), p.eps(), p.beta(), steps)
}

/// `Δ = tr M`.
pub fn discriminant(m: &MonodromyMatrix) -> Complex64 {
    m.trace()
}

/// Roots of `μ² - Δμ + 1 = 0`, larger magnitude first. The second root is taken
/// as the reciprocal of the first so the product is one to rounding.
pub fn multipliers(delta: Complex64) -> (Complex64, Complex64) {
    let root = (delta * delta - 4.0).sqrt();
    let plus = (delta + root) * 0.5;
    let minus = (delta - root) * 0.5;
    let big = if plus.norm() >= minus.norm() { plus } else { minus };
    (big, big.inv())
}

/// Floquet classification of a single parameter point.
///
/// `Boundary` wins over `Stable` when `Δ` sits within `100·tol` of `±2`.
pub fn classify(p: &MathieuParams, steps: usize, tol: f64) -> Result<FloquetResult> {
    if !(tol > 0.0) {
        return Err(MathieuError::InvalidParameter {
            name: "tol",
            value: tol,
            reason: "must be positive",
        });
    }
    let m = monodromy(p, steps)?;
    Ok(result_from_discriminant(discriminant(&m), tol))
}

pub(crate) fn result_from_discriminant(delta: Complex64, tol: f64) -> FloquetResult {
    let (mu1, mu2) = multipliers(delta);
    let growth_rate = mu1.norm().ln().abs().max(mu2.norm().ln().abs()) / TAU;
    let edge_distance = (delta - 2.0).norm().min((delta + 2.0).norm());
    let classification = if growth_rate <= tol && edge_distance <= 100.0 * tol {
        FloquetClass::Boundary
    } else if growth_rate <= tol {
        FloquetClass::Stable
    } else {
        FloquetClass::Unstable
    };
    FloquetResult {
        discriminant: delta,
        mu1,
        mu2,
        growth_rate,
        classification,
    }
}

/// Discriminant for one parameter point, the quantity every boundary solver
/// works with.
pub fn discriminant_at(a: f64, eps: f64, beta: f64, steps: usize) -> Result<Complex64> {
    let p = MathieuParams::new(a, eps, beta)?;
    Ok(discriminant(&monodromy(&p, steps)?))
}
