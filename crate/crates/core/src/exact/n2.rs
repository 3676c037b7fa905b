//! The single-qubit density of `N_2 = n_x^4 + n_y^4 + n_z^4`.
//!
//! With `x = cos(theta)` and `t = x^2` the density is
//! `(4/pi) * integral dx / sqrt(R(x))` over the set where
//! `R = (1 - t)^4 - (3 (1 - t)^2 + 4 t^2 - 4 n)^2 > 0`, and `R` factors as
//! `[6 (t - x_-^2)(x_+^2 - t)] * [8 ((t - 1/2)^2 - (n - 1/2)/2)]`.
//! Each inverse-square-root endpoint is removed by a substitution
//! (`x = r + L sin^2(tau)` or `x = y_-(1 - u^2)`) before adaptive quadrature.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::quadrature::{integrate, integrate_panels};
use crate::{Error, Result};

/// `3 / (sqrt(2) pi)`: coefficient of `-ln|n - 1/2|` in the density of `N_2`.
pub const DIVERGENCE_COEFFICIENT: f64 = 3.0 / (std::f64::consts::SQRT_2 * PI);

/// The density is reported as singular within this distance of `n = 1/2`.
pub const SINGULAR_GUARD: f64 = 1e-9;

/// Accepted range of absolute tolerances.
pub const MIN_TOL: f64 = 1e-12;
pub const MAX_TOL: f64 = 1e-4;

/// Distance from the saddle at which the model intercepts are measured.
const MODEL_ANCHOR: f64 = 1e-6;

pub const N2_SUPPORT: (f64, f64) = (1.0 / 3.0, 1.0);
pub const XI2_SUPPORT: (f64, f64) = (2.0 / 3.0, 1.0);

pub fn m2_support() -> (f64, f64) {
    (0.0, 1.5f64.ln())
}

/// Saddle value of `N_alpha`, `2^(1 - alpha)`.
pub fn saddle_value(alpha: f64) -> f64 {
    2f64.powf(1.0 - alpha)
}

/// `P(v) ~ -slope * ln|v - center| + intercept` on either side of `center`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogModel {
    pub center: f64,
    pub slope: f64,
    pub intercept_below: f64,
    pub intercept_above: f64,
}

impl LogModel {
    pub fn eval(&self, v: f64) -> f64 {
        let b = if v < self.center { self.intercept_below } else { self.intercept_above };
        -self.slope * (v - self.center).abs().ln() + b
    }

    /// Integral of the model over `[center - below, center + above]`.
    pub fn integral(&self, below: f64, above: f64) -> f64 {
        let side = |w: f64, b: f64| if w > 0.0 { self.slope * w * (1.0 - w.ln()) + b * w } else { 0.0 };
        side(below, self.intercept_below) + side(above, self.intercept_above)
    }

    /// The same divergence seen in a variable `u` with
    /// `v - center = factor * (u - new_center)` near the singular point and
    /// density `jacobian * P(v)`.
    fn mapped(&self, new_center: f64, factor: f64, jacobian: f64) -> LogModel {
        let shift = -self.slope * factor.abs().ln();
        let (below, above) = if factor > 0.0 {
            (self.intercept_below, self.intercept_above)
        } else {
            (self.intercept_above, self.intercept_below)
        };
        LogModel {
            center: new_center,
            slope: jacobian * self.slope,
            intercept_below: jacobian * (below + shift),
            intercept_above: jacobian * (above + shift),
        }
    }
}

/// Roots of the radicand in `[0, 1]` at level `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Roots2 {
    pub x_minus: Option<f64>,
    pub x_plus: f64,
    pub y_minus: Option<f64>,
    pub y_plus: Option<f64>,
}

impl Roots2 {
    /// `x_pm^2 = (1 pm sqrt(6n - 2))/3`, `y_pm^2 = (1 pm sqrt(2n - 1))/2`.
    pub fn new(n: f64) -> Result<Self> {
        if !(N2_SUPPORT.0..=N2_SUPPORT.1).contains(&n) {
            return Err(Error::InvalidArgument(format!("level {n} outside [1/3, 1]")));
        }
        let rho = (6.0 * n - 2.0).max(0.0).sqrt() / 3.0;
        let xm2 = 1.0 / 3.0 - rho;
        let (y_minus, y_plus) = if n >= 0.5 {
            let d = (2.0 * n - 1.0).sqrt() / 2.0;
            (Some((0.5 - d).max(0.0).sqrt()), Some((0.5 + d).sqrt()))
        } else {
            (None, None)
        };
        Ok(Self {
            x_minus: (xm2 >= 0.0).then(|| xm2.sqrt()),
            x_plus: (1.0 / 3.0 + rho).sqrt(),
            y_minus,
            y_plus,
        })
    }
}

/// Second factor of the radicand, written without cancellation.
fn a_plus_k(n: f64, t: f64) -> f64 {
    8.0 * ((t - 0.5).powi(2) - 0.5 * (n - 0.5))
}

/// `P_{N_2}(n)` to absolute error `tol`.
///
/// Returns 0 outside `[1/3, 1]` and [`Error::SingularPoint`] within
/// [`SINGULAR_GUARD`] of `n = 1/2`, carrying the asymptotic [`LogModel`].
pub fn pdf_n2_exact(n: f64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if n.is_nan() {
        return Err(Error::InvalidArgument("level is NaN".into()));
    }
    if (n - 0.5).abs() <= SINGULAR_GUARD {
        return Err(Error::SingularPoint { at: 0.5, model: Some(n2_log_model()) });
    }
    pdf_n2_unguarded(n, tol)
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if (MIN_TOL..=MAX_TOL).contains(&tol) {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

fn pdf_n2_unguarded(n: f64, tol: f64) -> Result<f64> {
    if !(N2_SUPPORT.0..=N2_SUPPORT.1).contains(&n) {
        return Ok(0.0);
    }
    let roots = Roots2::new(n)?;
    let xp = roots.x_plus;
    let xp2 = xp * xp;
    let inner_tol = tol * PI / 4.0;
    let integral = if n < 0.5 {
        let xm = roots.x_minus.unwrap_or(0.0);
        let len = xp - xm;
        let f = |tau: f64| {
            let x = xm + len * tau.sin().powi(2);
            2.0 / (6.0 * (x + xm) * (xp + x) * a_plus_k(n, x * x)).sqrt()
        };
        if len <= 0.0 {
            return Ok(4.0 / PI * FRAC_PI_2 * f(0.0));
        }
        let r = (FRAC_1_SQRT_2 - xm) / len;
        if r > 0.0 && r < 1.0 {
            let peak = r.sqrt().asin();
            integrate_panels(f, &[0.0, peak, FRAC_PI_2], inner_tol)?.value
        } else {
            integrate(f, 0.0, FRAC_PI_2, inner_tol)?.value
        }
    } else {
        let xm2 = 1.0 / 3.0 - (6.0 * n - 2.0).sqrt() / 3.0;
        let ym = roots.y_minus.unwrap_or(0.0);
        let yp = roots.y_plus.unwrap_or(0.0);
        let yp2 = yp * yp;
        let ym2 = ym * ym;
        // [0, y_-] with x = y_-(1 - u^2); the factor y_- cancels analytically
        let lower = |u: f64| {
            let x = ym * (1.0 - u * u);
            let x2 = x * x;
            2.0 / (6.0 * (x2 - xm2) * (xp2 - x2) * 8.0 * (2.0 - u * u) * (yp2 - x2)).sqrt()
        };
        let mut total = integrate(lower, 0.0, 1.0, 0.5 * inner_tol)?.value;
        let len = (xp - yp).max(0.0);
        let upper = |tau: f64| {
            let x = yp + len * tau.sin().powi(2);
            let x2 = x * x;
            2.0 / (6.0 * (x2 - xm2) * (xp + x) * 8.0 * (x + yp) * (x2 - ym2)).sqrt()
        };
        // a vanishing interval still carries (pi/2) * upper(0)
        if len > 0.0 {
            total += integrate(upper, 0.0, FRAC_PI_2, 0.5 * inner_tol)?.value;
        } else {
            total += FRAC_PI_2 * upper(0.0);
        }
        total
    };
    Ok(4.0 / PI * integral)
}

/// Asymptotic model `-(3/(sqrt(2) pi)) ln|n - 1/2| + b` with the two
/// intercepts measured once, one regular evaluation per side.
pub fn n2_log_model() -> LogModel {
    static MODEL: OnceLock<LogModel> = OnceLock::new();
    *MODEL.get_or_init(|| {
        let intercept = |n: f64| {
            let p = pdf_n2_unguarded(n, 1e-11).expect("regular evaluation near the saddle");
            p + DIVERGENCE_COEFFICIENT * MODEL_ANCHOR.ln()
        };
        LogModel {
            center: 0.5,
            slope: DIVERGENCE_COEFFICIENT,
            intercept_below: intercept(0.5 - MODEL_ANCHOR),
            intercept_above: intercept(0.5 + MODEL_ANCHOR),
        }
    })
}

fn require_order_two(alpha: f64) -> Result<()> {
    if alpha == 2.0 {
        Ok(())
    } else {
        Err(Error::NotImplemented(format!(
            "closed-form density only for alpha = 2 (got {alpha}); use Monte Carlo"
        )))
    }
}

/// Log model of `P_{Xi_2}` at `xi_c = 3/4`.
pub fn xi2_log_model() -> LogModel {
    n2_log_model().mapped(0.75, 2.0, 2.0)
}

/// Log model of `P_{M_2}` at `m_c = log(4/3)`; the sides swap because
/// `n` decreases with `m`.
pub fn m2_log_model() -> LogModel {
    n2_log_model().mapped((4.0f64 / 3.0).ln(), -1.5, 1.5)
}

/// `P_{Xi_alpha}(xi) = 2 P_{N_alpha}(2 xi - 1)`.
pub fn pdf_xi(alpha: f64, xi: f64, tol: f64) -> Result<f64> {
    require_order_two(alpha)?;
    match pdf_n2_exact(2.0 * xi - 1.0, tol) {
        Ok(p) => Ok(2.0 * p),
        Err(Error::SingularPoint { .. }) => Err(Error::SingularPoint { at: 0.75, model: Some(xi2_log_model()) }),
        Err(e) => Err(e),
    }
}

/// `P_{M_alpha}(m) = 2 (alpha - 1) e^{(1 - alpha) m} P_{N_alpha}(2 e^{(1 - alpha) m} - 1)`.
pub fn pdf_m(alpha: f64, m: f64, tol: f64) -> Result<f64> {
    require_order_two(alpha)?;
    if m.is_nan() {
        return Err(Error::InvalidArgument("entropy is NaN".into()));
    }
    let xi = (-m).exp();
    match pdf_n2_exact(2.0 * xi - 1.0, tol) {
        Ok(p) => Ok(2.0 * xi * p),
        Err(Error::SingularPoint { .. }) => Err(Error::SingularPoint {
            at: (4.0f64 / 3.0).ln(),
            model: Some(m2_log_model()),
        }),
        Err(e) => Err(e),
    }
}

/// Width of the neighbourhood replaced by the log model in normalizations.
pub const NORMALIZATION_WINDOW: f64 = 1e-4;

fn integrate_with_window<F: Fn(f64) -> Result<f64>>(
    density: F,
    support: (f64, f64),
    model: &LogModel,
    window: f64,
    tol: f64,
) -> Result<f64> {
    let c = model.center;
    let mut failure = None;
    let mut f = |x: f64| match density(x) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    // geometric panels toward the singular point keep the bisection shallow
    let steps = [1e-1, 1e-2, 1e-3];
    let mut left = vec![support.0];
    left.extend(steps.iter().map(|e| c - e).filter(|&x| x > support.0 && x < c - window));
    left.push(c - window);
    let mut right = vec![c + window];
    right.extend(steps.iter().rev().map(|e| c + e).filter(|&x| x < support.1 && x > c + window));
    right.push(support.1);
    let below = integrate_panels(&mut f, &left, 0.5 * tol)?.value;
    let above = integrate_panels(&mut f, &right, 0.5 * tol)?.value;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(below + above + model.integral(window, window))
}

/// `integral P_{N_2}` over `[1/3, 1]`: adaptive quadrature outside
/// `|n - 1/2| < window` and the log model inside.
pub fn normalization_n2(window: f64, tol: f64) -> Result<f64> {
    integrate_with_window(|n| pdf_n2_exact(n, 1e-11), N2_SUPPORT, &n2_log_model(), window, tol)
}

/// `integral P_{M_2}` over `[0, log(3/2)]`, treated like [`normalization_n2`].
pub fn normalization_m2(window: f64, tol: f64) -> Result<f64> {
    integrate_with_window(|m| pdf_m(2.0, m, 1e-11), m2_support(), &m2_log_model(), window, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn outside_support_is_zero() {
        assert_eq!(pdf_n2_exact(1.0 / 3.0 - 1e-3, 1e-10).unwrap(), 0.0);
        assert_eq!(pdf_n2_exact(1.0 + 1e-3, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn support_endpoints() {
        assert_abs_diff_eq!(pdf_n2_exact(1.0 / 3.0, 1e-10).unwrap(), 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(pdf_n2_exact(1.0, 1e-10).unwrap(), 0.75, epsilon = 1e-10);
    }

    #[test]
    fn singular_guard_carries_model() {
        match pdf_n2_exact(0.5 + 5e-10, 1e-8) {
            Err(Error::SingularPoint { at, model: Some(m) }) => {
                assert_eq!(at, 0.5);
                assert_eq!(m.slope, DIVERGENCE_COEFFICIENT);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tolerance_range_enforced() {
        assert!(matches!(pdf_n2_exact(0.4, 1e-3), Err(Error::InvalidTolerance(_))));
        assert!(matches!(pdf_n2_exact(0.4, 1e-13), Err(Error::InvalidTolerance(_))));
    }

    #[test]
    fn roots_lie_in_unit_interval() {
        for n in [1.0 / 3.0, 0.4, 0.5, 0.7, 1.0] {
            let r = Roots2::new(n).unwrap();
            for v in [r.x_minus, Some(r.x_plus), r.y_minus, r.y_plus].into_iter().flatten() {
                assert!((0.0..=1.0).contains(&v));
            }
        }
        assert!(Roots2::new(0.4).unwrap().y_minus.is_none());
        assert!(Roots2::new(0.6).unwrap().x_minus.is_none());
    }

    #[test]
    fn model_is_continuous_with_density() {
        let model = n2_log_model();
        for eps in [1e-7, 1e-5] {
            for n in [0.5 - eps, 0.5 + eps] {
                let p = pdf_n2_exact(n, 1e-11).unwrap();
                assert!((p - model.eval(n)).abs() < 1e-3, "{n}: {p} vs {}", model.eval(n));
            }
        }
    }

    #[test]
    fn mapped_models_match_densities() {
        let eps = 1e-6;
        let xi = xi2_log_model();
        let m = m2_log_model();
        for s in [-1.0, 1.0] {
            let v = 0.75 + s * eps;
            assert!((pdf_xi(2.0, v, 1e-11).unwrap() - xi.eval(v)).abs() < 1e-3);
            let v = m.center + s * eps;
            assert!((pdf_m(2.0, v, 1e-11).unwrap() - m.eval(v)).abs() < 1e-3);
        }
    }

    #[test]
    fn other_orders_not_implemented() {
        assert!(matches!(pdf_xi(3.0, 0.8, 1e-8), Err(Error::NotImplemented(_))));
        assert!(matches!(pdf_m(2.5, 0.1, 1e-8), Err(Error::NotImplemented(_))));
    }

    #[test]
    fn mapped_singular_points() {
        assert!(matches!(pdf_xi(2.0, 0.75, 1e-8), Err(Error::SingularPoint { at, .. }) if at == 0.75));
        let mc = (4.0f64 / 3.0).ln();
        assert!(matches!(pdf_m(2.0, mc, 1e-8), Err(Error::SingularPoint { at, .. }) if at == mc));
    }

    #[test]
    fn model_integral_matches_closed_form() {
        let model = LogModel { center: 0.0, slope: 1.0, intercept_below: 0.0, intercept_above: 2.0 };
        let w: f64 = 1e-2;
        assert_abs_diff_eq!(model.integral(w, w), 2.0 * w * (1.0 - w.ln()) + 2.0 * w, epsilon = 1e-15);
    }
}
