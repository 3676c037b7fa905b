//! Tabulated densities.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exact::ancillary::{cdf_coherence, pdf_coherence, pdf_observable};
use crate::exact::n2::{
    m2_log_model, m2_support, n2_log_model, pdf_m, pdf_n2_exact, pdf_xi, xi2_log_model, LogModel, N2_SUPPORT,
    XI2_SUPPORT,
};
use crate::quadrature::integrate_panels;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PdfVariable {
    #[serde(rename = "N_alpha")]
    NAlpha,
    #[serde(rename = "Xi_alpha")]
    XiAlpha,
    #[serde(rename = "M_alpha")]
    MAlpha,
    Coherence,
    Observable,
}

impl PdfVariable {
    pub fn name(self) -> &'static str {
        match self {
            PdfVariable::NAlpha => "N_alpha",
            PdfVariable::XiAlpha => "Xi_alpha",
            PdfVariable::MAlpha => "M_alpha",
            PdfVariable::Coherence => "Coherence",
            PdfVariable::Observable => "Observable",
        }
    }
}

/// Single-qubit densities known in closed form or by quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExactDensity {
    N2,
    Xi2,
    M2,
    Coherence,
    /// Observable with eigenvalues `a1 < a2`.
    Observable { a1: f64, a2: f64 },
}

impl ExactDensity {
    /// Exact density of `variable` at order `alpha`; only `alpha = 2` is
    /// available for the purity and entropy variables.
    pub fn for_variable(variable: PdfVariable, alpha: f64) -> Result<Self> {
        let order_two = || {
            if alpha == 2.0 {
                Ok(())
            } else {
                Err(Error::NotImplemented(format!("closed-form density for alpha = {alpha}")))
            }
        };
        match variable {
            PdfVariable::NAlpha => order_two().map(|_| ExactDensity::N2),
            PdfVariable::XiAlpha => order_two().map(|_| ExactDensity::Xi2),
            PdfVariable::MAlpha => order_two().map(|_| ExactDensity::M2),
            PdfVariable::Coherence => Ok(ExactDensity::Coherence),
            PdfVariable::Observable => Ok(ExactDensity::Observable { a1: -1.0, a2: 1.0 }),
        }
    }

    pub fn variable(&self) -> PdfVariable {
        match self {
            ExactDensity::N2 => PdfVariable::NAlpha,
            ExactDensity::Xi2 => PdfVariable::XiAlpha,
            ExactDensity::M2 => PdfVariable::MAlpha,
            ExactDensity::Coherence => PdfVariable::Coherence,
            ExactDensity::Observable { .. } => PdfVariable::Observable,
        }
    }

    pub fn alpha(&self) -> f64 {
        match self {
            ExactDensity::N2 | ExactDensity::Xi2 | ExactDensity::M2 => 2.0,
            _ => f64::NAN,
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match *self {
            ExactDensity::N2 => N2_SUPPORT,
            ExactDensity::Xi2 => XI2_SUPPORT,
            ExactDensity::M2 => m2_support(),
            ExactDensity::Coherence => (0.0, 1.0),
            ExactDensity::Observable { a1, a2 } => (a1, a2),
        }
    }

    pub fn log_model(&self) -> Option<LogModel> {
        match self {
            ExactDensity::N2 => Some(n2_log_model()),
            ExactDensity::Xi2 => Some(xi2_log_model()),
            ExactDensity::M2 => Some(m2_log_model()),
            _ => None,
        }
    }

    pub fn singular_points(&self) -> Vec<f64> {
        match self {
            ExactDensity::Coherence => vec![1.0],
            _ => self.log_model().map(|m| vec![m.center]).unwrap_or_default(),
        }
    }

    pub fn eval(&self, x: f64, tol: f64) -> Result<f64> {
        match *self {
            ExactDensity::N2 => pdf_n2_exact(x, tol),
            ExactDensity::Xi2 => pdf_xi(2.0, x, tol),
            ExactDensity::M2 => pdf_m(2.0, x, tol),
            ExactDensity::Coherence => pdf_coherence(x),
            ExactDensity::Observable { a1, a2 } => pdf_observable(x, a1, a2),
        }
    }

    /// Density with singular neighbourhoods replaced by the log model.
    pub fn eval_or_model(&self, x: f64, tol: f64) -> Result<f64> {
        match self.eval(x, tol) {
            Err(Error::SingularPoint { model: Some(m), .. }) => Ok(m.eval(x)),
            other => other,
        }
    }

    /// Probability mass in `[lo, hi]`.
    pub fn probability(&self, lo: f64, hi: f64, tol: f64) -> Result<f64> {
        let (s0, s1) = self.support();
        let (lo, hi) = (lo.max(s0), hi.min(s1));
        if hi <= lo {
            return Ok(0.0);
        }
        match *self {
            ExactDensity::Coherence => Ok(cdf_coherence(hi) - cdf_coherence(lo)),
            ExactDensity::Observable { a1, a2 } => Ok((hi - lo) / (a2 - a1)),
            _ => {
                let mut points = vec![lo];
                points.extend(self.singular_points().into_iter().filter(|&c| c > lo && c < hi));
                points.push(hi);
                let mut failure = None;
                let f = |x: f64| match self.eval_or_model(x, tol) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                };
                let value = integrate_panels(f, &points, tol)?.value;
                match failure {
                    Some(e) => Err(e),
                    None => Ok(value),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdfCurve {
    pub variable: PdfVariable,
    pub alpha: f64,
    pub points: Vec<(f64, f64)>,
    pub support: (f64, f64),
    pub singular_points: Vec<f64>,
    pub source: Option<ExactDensity>,
}

/// Closest approach of a default grid to a singular point.
pub const GRID_MIN_DISTANCE: f64 = 1e-8;

/// Uniform points on the support plus geometric clustering toward the
/// support edges and every singular point.
pub fn graded_grid(support: (f64, f64), singular: &[f64], uniform: usize) -> Vec<f64> {
    let (lo, hi) = support;
    let uniform = uniform.max(2);
    let mut grid: Vec<f64> = (0..uniform - 1).map(|i| lo + (hi - lo) * i as f64 / (uniform - 1) as f64).collect();
    grid.push(hi);
    let ladder = |from: f64, to: f64, per_decade: usize| {
        let decades = (to / from).log10();
        let steps = (decades * per_decade as f64).ceil() as usize;
        (0..=steps).map(move |i| from * 10f64.powf(decades * i as f64 / steps as f64))
    };
    for eps in ladder(1e-10, 1e-2, 40) {
        grid.push(lo + eps * (hi - lo));
        grid.push(hi - eps * (hi - lo));
    }
    for &c in singular {
        for eps in ladder(GRID_MIN_DISTANCE, 1e-2, 40) {
            grid.push(c - eps);
            grid.push(c + eps);
        }
    }
    grid.retain(|&x| {
        x >= lo && x <= hi && singular.iter().all(|&c| (x - c).abs() >= GRID_MIN_DISTANCE * 0.999)
    });
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs().max(1.0));
    grid
}

impl PdfCurve {
    /// Tabulates an exact density on the given abscissas, in parallel.
    pub fn tabulate(source: ExactDensity, abscissas: &[f64], tol: f64) -> Result<Self> {
        let points = abscissas
            .par_iter()
            .map(|&x| source.eval(x, tol).map(|p| (x, p)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            variable: source.variable(),
            alpha: source.alpha(),
            points,
            support: source.support(),
            singular_points: source.singular_points(),
            source: Some(source),
        })
    }

    /// Tabulates on [`graded_grid`] with `uniform` evenly spaced points.
    pub fn exact(source: ExactDensity, uniform: usize, tol: f64) -> Result<Self> {
        let (lo, hi) = source.support();
        let singular: Vec<f64> = source.singular_points().into_iter().filter(|&c| c > lo && c < hi).collect();
        let mut grid = graded_grid(source.support(), &singular, uniform);
        if source == ExactDensity::Coherence {
            grid.retain(|&x| x < 1.0);
        }
        Self::tabulate(source, &grid, tol)
    }

    /// Trapezoidal integral of the tabulated points. Gaps across a log
    /// singularity use the model, and any part of the support outside the
    /// tabulated range comes from the exact density.
    pub fn integral(&self) -> Result<f64> {
        let model = self.source.and_then(|s| s.log_model());
        let mut total = 0.0;
        for w in self.points.windows(2) {
            let ((x0, p0), (x1, p1)) = (w[0], w[1]);
            match model {
                Some(m) if x0 < m.center && m.center < x1 => total += m.integral(m.center - x0, x1 - m.center),
                _ => total += 0.5 * (p0 + p1) * (x1 - x0),
            }
        }
        if let (Some(source), Some(first), Some(last)) = (self.source, self.points.first(), self.points.last()) {
            total += source.probability(self.support.0, first.0, 1e-10)?;
            total += source.probability(last.0, self.support.1, 1e-10)?;
        }
        Ok(total)
    }
}
