//! Characteristic function of `N_2` and its numerical inversion.

use rayon::prelude::*;
use std::f64::consts::PI;

use crate::bessel::j0;
use crate::exact::n2::check_tol;
use crate::quadrature::integrate_panels;
use crate::{Error, Result, C64};

pub const MAX_FREQUENCY: f64 = 1e4;

/// `chi(k) = E[exp(i k N_2)]`, written with `x = cos(theta)` as
/// `integral_0^1 exp(i k x^4 + i k (3/4)(1 - x^2)^2) J0(k (1 - x^2)^2 / 4) dx`.
pub fn characteristic_function_n2(k: f64, tol: f64) -> Result<C64> {
    check_tol(tol)?;
    if !(k.abs() <= MAX_FREQUENCY) {
        return Err(Error::InvalidArgument(format!("|k| = {} exceeds {MAX_FREQUENCY}", k.abs())));
    }
    let panels = (k.abs() / 2.0).ceil().max(1.0) as usize;
    let points: Vec<f64> = (0..=panels).map(|i| i as f64 / panels as f64).collect();
    let f = |x: f64| {
        let x2 = x * x;
        let s2 = (1.0 - x2) * (1.0 - x2);
        let phase = k * (x2 * x2 + 0.75 * s2);
        C64::from_polar(j0(0.25 * k * s2), phase)
    };
    Ok(integrate_panels(f, &points, tol)?.value)
}

/// Tabulated characteristic function on `k = j dk`, `j = 0..=k_max/dk`,
/// inverted with a Lanczos sigma window.
#[derive(Debug, Clone)]
pub struct FourierInversion {
    pub dk: f64,
    pub k_max: f64,
    chi: Vec<C64>,
}

impl FourierInversion {
    pub fn new(k_max: f64, dk: f64, tol: f64) -> Result<Self> {
        if !(dk > 0.0 && k_max > dk && k_max <= MAX_FREQUENCY) {
            return Err(Error::InvalidArgument(format!("frequency grid k_max={k_max}, dk={dk}")));
        }
        let count = (k_max / dk).round() as usize;
        let chi = (0..=count)
            .into_par_iter()
            .map(|j| characteristic_function_n2(j as f64 * dk, tol))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dk, k_max, chi })
    }

    /// Default grid: `k_max = 1000`, `dk = 0.25`.
    pub fn standard() -> Result<Self> {
        Self::new(1000.0, 0.25, 1e-9)
    }

    /// `(1/pi) Re integral_0^K sigma(k) chi(k) e^{-i k n} dk` by the trapezoid rule.
    pub fn density(&self, n: f64) -> f64 {
        let m = (self.chi.len() - 1) as f64;
        let mut sum = 0.5 * self.chi[0].re;
        for (j, chi) in self.chi.iter().enumerate().skip(1) {
            let arg = PI * j as f64 / m;
            let sigma = arg.sin() / arg;
            let k = j as f64 * self.dk;
            sum += sigma * (chi * C64::from_polar(1.0, -k * n)).re;
        }
        self.dk / PI * sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn unit_at_origin() {
        let c = characteristic_function_n2(0.0, 1e-12).unwrap();
        assert_abs_diff_eq!(c.re, 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(c.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn hermitian_symmetry() {
        for k in [0.7, 5.0, 123.0, 4000.0] {
            let p = characteristic_function_n2(k, 1e-10).unwrap();
            let m = characteristic_function_n2(-k, 1e-10).unwrap();
            assert!((p - m.conj()).norm() < 1e-10);
        }
    }

    #[test]
    fn frequency_guard() {
        assert!(characteristic_function_n2(1e4 + 1.0, 1e-8).is_err());
        assert!(characteristic_function_n2(f64::NAN, 1e-8).is_err());
    }

    #[test]
    fn small_k_matches_moments() {
        // E[N_2] = 3 E[n_z^4] = 3/5
        let k = 1e-4;
        let c = characteristic_function_n2(k, 1e-12).unwrap();
        assert_abs_diff_eq!(c.im / k, 0.6, epsilon = 1e-6);
    }
}
