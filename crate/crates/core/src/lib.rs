//! Stability analysis for the PT-symmetric Mathieu equation
//!
//! ```text
//! ψ''(x) + [a + 2ε V(x)] ψ(x) = 0,    V(x) = cos x + iβ sin x
//! ```
//!
//! The crate has three independent routes to the stability boundaries in the
//! `(a, ε)` plane:
//!
//! - [`perturbative`]: closed-form boundary curves and curvatures valid for
//!   small `ε` and `0 ≤ β ≤ 1`,
//! - [`floquet`]: RK4 integration of the fundamental system over one period and
//!   classification through the Floquet discriminant `Δ = tr M`,
//! - [`hill`]: band edges as eigenvalues of the truncated Fourier (Hill) matrix,
//!   solved by Sturm-sequence bisection after a symmetrizing similarity scaling.
//!
//! [`tracer`] ties them together: it follows the boundaries numerically from the
//! discriminant, fits their curvature and tabulates the three routes side by side.

// `!(x > 0.0)` is used on purpose so NaN lands in the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod floquet;
pub mod hill;
pub mod params;
pub mod perturbative;
pub mod tracer;

pub use error::{MathieuError, Result};
pub use floquet::{
    classify, discriminant, monodromy, multipliers, FloquetClass, FloquetResult, MonodromyMatrix, StateVector,
};
pub use hill::{
    band_edges, build_hill_matrix, hermitian_equivalence_check, symmetrize, BandEdges, FloquetExponent, HillMatrix,
    SymmetricTridiagonal,
};
pub use params::{coupling_coefficients, potential_value, BranchId, MathieuParams};
pub use perturbative::{
    boundary_a0, boundary_quarter, curvature_kappa1, curvature_kappa2, predict_stability_perturbative,
    PerturbativeClass, QuarterSign,
};
pub use tracer::{
    compare_report, estimate_curvature, solve_edge, trace_boundary, BoundaryCurve, ComparisonRow, CurvatureReport,
    EdgeTarget, RowFlag, TraceOptions,
};
