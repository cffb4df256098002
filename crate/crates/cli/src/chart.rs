//! Floquet classification raster over the `(a, ε)` plane.

use ptmathieu::floquet::FloquetClass;
use ptmathieu::{classify, MathieuError, MathieuParams};
use rayon::prelude::*;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub a_min: f64,
    pub a_max: f64,
    pub a_steps: usize,
    pub eps_min: f64,
    pub eps_max: f64,
    pub eps_steps: usize,
    pub beta: f64,
    pub steps: usize,
    pub tol: f64,
}

fn uniform(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
    if n == 1 {
        lo
    } else if i == n - 1 {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        let finite = [self.a_min, self.a_max, self.eps_min, self.eps_max, self.beta, self.tol]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(CliError::Usage("grid bounds must be finite".into()));
        }
        if self.a_steps == 0 || self.eps_steps == 0 {
            return Err(CliError::Usage("--a-steps and --eps-steps must be positive".into()));
        }
        if self.a_max < self.a_min || self.eps_max < self.eps_min {
            return Err(CliError::Usage("grid maxima must not be below minima".into()));
        }
        if self.eps_min < 0.0 || self.beta < 0.0 {
            return Err(CliError::Usage("eps and beta must be non-negative".into()));
        }
        if !(self.tol > 0.0) {
            return Err(CliError::Usage("--tol must be positive".into()));
        }
        if self.steps < ptmathieu::floquet::MIN_STEPS {
            return Err(CliError::Usage("--steps must be at least 64".into()));
        }
        Ok(())
    }

    pub fn a_at(&self, i: usize) -> f64 {
        uniform(self.a_min, self.a_max, self.a_steps, i)
    }

    pub fn eps_at(&self, j: usize) -> f64 {
        uniform(self.eps_min, self.eps_max, self.eps_steps, j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellClass {
    Stable,
    Unstable,
    Boundary,
    Overflow,
}

impl CellClass {
    pub fn label(self) -> &'static str {
        match self {
            CellClass::Stable => "stable",
            CellClass::Unstable => "unstable",
            CellClass::Boundary => "boundary",
            CellClass::Overflow => "overflow",
        }
    }
}

impl From<FloquetClass> for CellClass {
    fn from(c: FloquetClass) -> Self {
        match c {
            FloquetClass::Stable => CellClass::Stable,
            FloquetClass::Unstable => CellClass::Unstable,
            FloquetClass::Boundary => CellClass::Boundary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartCell {
    pub a: f64,
    pub eps: f64,
    pub class: CellClass,
    pub growth_rate: Option<f64>,
    pub re_delta: Option<f64>,
    pub im_delta: Option<f64>,
}

/// Cells are row-major with `eps` as the row index: cell `(i, j)` sits at
/// `j * a_steps + i`.
#[derive(Debug, Clone)]
pub struct ChartGrid {
    pub spec: GridSpec,
    pub cells: Vec<ChartCell>,
}

impl ChartGrid {
    pub fn count(&self, class: CellClass) -> usize {
        self.cells.iter().filter(|c| c.class == class).count()
    }
}

fn chart_cell(spec: &GridSpec, i: usize, j: usize) -> Result<ChartCell, CliError> {
    let (a, eps) = (spec.a_at(i), spec.eps_at(j));
    let p = MathieuParams::new(a, eps, spec.beta)?;
    Ok(match classify(&p, spec.steps, spec.tol) {
        Ok(r) => ChartCell {
            a,
            eps,
            class: r.classification.into(),
            growth_rate: Some(r.growth_rate),
            re_delta: Some(r.discriminant.re),
            im_delta: Some(r.discriminant.im),
        },
        Err(MathieuError::NonFinite { .. }) => ChartCell {
            a,
            eps,
            class: CellClass::Overflow,
            growth_rate: None,
            re_delta: None,
            im_delta: None,
        },
        Err(e) => return Err(e.into()),
    })
}

/// Classifies every grid point in parallel on the current rayon pool; the
/// result order does not depend on scheduling.
pub fn compute_chart(spec: GridSpec) -> Result<ChartGrid, CliError> {
    spec.validate()?;
    let cells = (0..spec.a_steps * spec.eps_steps)
        .into_par_iter()
        .map(|k| chart_cell(&spec, k % spec.a_steps, k / spec.a_steps))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ChartGrid { spec, cells })
}
