//! Stabilizer purities, stabilizer Renyi entropies and the other scalar
//! measures of a pure state.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::pauli::{self, PauliSpectrum};
use crate::statevec::{BlochVector, PureState};
use crate::{Error, Result, C64};

/// Largest anti-Hermitian part tolerated by [`expectation`].
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Logarithm base used when presenting entropies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    Nats,
    Bits,
}

impl LogBase {
    /// Converts an entropy in nats into this base.
    pub fn from_nats(self, value: f64) -> f64 {
        match self {
            LogBase::Nats => value,
            LogBase::Bits => value / std::f64::consts::LN_2,
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            LogBase::Nats => "nats",
            LogBase::Bits => "bits",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MagicReport {
    pub alpha: f64,
    pub n_alpha: f64,
    pub xi_alpha: f64,
    /// Stabilizer Renyi entropy in nats.
    pub m_alpha: f64,
    pub m_lin: f64,
    pub gamma_alpha: Option<f64>,
    pub coherence: Option<f64>,
    /// False for `1 < alpha < 2`, where monotonicity is not established.
    pub monotone_regime: bool,
}

impl MagicReport {
    /// Full report for a state, including incompatibility (single qubit,
    /// integer `alpha`) and l1-coherence (qubit registers).
    pub fn for_state(state: &PureState, alpha: f64) -> Result<Self> {
        check_order(alpha)?;
        let spec = pauli::spectrum(state)?;
        let mut report = magic_report(&spec, alpha)?;
        if state.dim() == 2 && alpha.fract() == 0.0 && alpha <= u32::MAX as f64 {
            report.gamma_alpha = Some(incompatibility(state, alpha as u32)?);
        }
        if state.local_dim() == 2 {
            report.coherence = Some(coherence_l1(state));
        }
        Ok(report)
    }

    pub fn m_alpha_in(&self, base: LogBase) -> f64 {
        base.from_nats(self.m_alpha)
    }
}

fn check_order(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidOrder(alpha))
    }
}

/// `N_alpha`, `Xi_alpha`, `M_alpha` and the linear entropy from a spectrum.
pub fn magic_report(spec: &PauliSpectrum, alpha: f64) -> Result<MagicReport> {
    check_order(alpha)?;
    let n_alpha = spec.power_sum(alpha);
    let xi_alpha = xi_from_n(n_alpha, spec.dim());
    Ok(MagicReport {
        alpha,
        n_alpha,
        xi_alpha,
        m_alpha: sre_from_xi(xi_alpha, alpha),
        m_lin: 1.0 - xi_alpha,
        gamma_alpha: None,
        coherence: None,
        monotone_regime: alpha >= 2.0,
    })
}

pub fn xi_from_n(n_alpha: f64, dim: usize) -> f64 {
    (1.0 + n_alpha) / dim as f64
}

/// `log(xi) / (1 - alpha)` in nats.
pub fn sre_from_xi(xi: f64, alpha: f64) -> f64 {
    // adding zero turns -0.0 into 0.0 for stabilizer states
    xi.ln() / (1.0 - alpha) + 0.0
}

/// `N_alpha = sum_j |n_j|^(2 alpha)` of a single-qubit Bloch vector.
pub fn n_alpha_bloch(b: &BlochVector, alpha: f64) -> f64 {
    pauli::power_sum(&b.components().map(|c| c * c), alpha)
}

/// `Gamma_alpha = 2 sum_j (1 - n_j^2)^alpha` for a single qubit.
pub fn incompatibility(state: &PureState, alpha: u32) -> Result<f64> {
    if alpha == 0 {
        return Err(Error::InvalidOrder(0.0));
    }
    let b = state.to_bloch()?;
    let exponent = i32::try_from(alpha).map_err(|_| Error::InvalidOrder(alpha as f64))?;
    Ok(2.0 * b.components().iter().map(|c| (1.0 - c * c).powi(exponent)).sum::<f64>())
}

/// `sum_{i != j} |psi_i conj(psi_j)|` in the computational basis.
pub fn coherence_l1(state: &PureState) -> f64 {
    coherence_from_amplitudes(state.amplitudes())
}

pub(crate) fn coherence_from_amplitudes(psi: &[C64]) -> f64 {
    let l1: f64 = psi.iter().map(|a| a.norm()).sum();
    (l1 * l1 - 1.0).max(0.0)
}

/// `<psi|A|psi>` for a Hermitian `A`.
pub fn expectation(state: &PureState, obs: &DMatrix<C64>) -> Result<f64> {
    let d = state.dim();
    if obs.nrows() != d || obs.ncols() != d {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} observable for dimension {d}",
            obs.nrows(),
            obs.ncols()
        )));
    }
    let deviation = (obs - obs.adjoint()).iter().map(|e| e.norm()).fold(0.0, f64::max);
    if deviation.is_nan() || deviation > HERMITIAN_TOLERANCE {
        return Err(Error::InvalidObservable(deviation));
    }
    Ok(expectation_unchecked(state.amplitudes(), obs))
}

pub(crate) fn expectation_unchecked(psi: &[C64], obs: &DMatrix<C64>) -> f64 {
    let mut acc = C64::new(0.0, 0.0);
    for (i, pi) in psi.iter().enumerate() {
        let row: C64 = psi.iter().enumerate().map(|(j, pj)| obs[(i, j)] * pj).sum();
        acc += pi.conj() * row;
    }
    acc.re
}
