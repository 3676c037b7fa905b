//! Mean entropy, coherence and observable densities.

use crate::exact::n2::check_tol;
use crate::quadrature::integrate;
use crate::{Error, Result};

/// Integrand of the Haar mean of `M_2` for a single qubit, in nats.
pub fn mean_sre_integrand(x: f64) -> f64 {
    let x2 = x * x;
    let x4 = x2 * x2;
    let root = (3.0 * x4 * x4 - 5.0 * x4 * x2 + 8.0 * x4 - 5.0 * x2 + 3.0).sqrt();
    (16.0 / (7.0 * x4 - 6.0 * x2 + 4.0 * root + 7.0)).ln()
}

/// Haar average of `M_2` over single-qubit states, in nats.
///
/// Divide by `ln 2` for bits (about 0.330263).
pub fn mean_sre_exact(tol: f64) -> Result<f64> {
    check_tol(tol)?;
    Ok(integrate(mean_sre_integrand, 0.0, 1.0, tol)?.value)
}

/// `P_C(c) = c / sqrt(1 - c^2)` on `[0, 1)`.
pub fn pdf_coherence(c: f64) -> Result<f64> {
    if c.is_nan() {
        return Err(Error::InvalidArgument("coherence is NaN".into()));
    }
    if c == 1.0 {
        return Err(Error::SingularPoint { at: 1.0, model: None });
    }
    if (0.0..1.0).contains(&c) {
        Ok(c / (1.0 - c * c).sqrt())
    } else {
        Ok(0.0)
    }
}

/// Cumulative distribution of the coherence, `1 - sqrt(1 - c^2)`.
pub fn cdf_coherence(c: f64) -> f64 {
    if c <= 0.0 {
        0.0
    } else if c >= 1.0 {
        1.0
    } else {
        1.0 - (1.0 - c * c).sqrt()
    }
}

/// Uniform density of `<psi|A|psi>` on `[a1, a2]` for a qubit observable with
/// eigenvalues `a1 < a2`.
pub fn pdf_observable(a: f64, a1: f64, a2: f64) -> Result<f64> {
    if !(a1 < a2) || !a1.is_finite() || !a2.is_finite() {
        return Err(Error::InvalidSpectrum { a1, a2 });
    }
    Ok(if (a1..=a2).contains(&a) { 1.0 / (a2 - a1) } else { 0.0 })
}
