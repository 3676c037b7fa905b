//! Bessel function of the first kind, order zero.
//!
//! `|x| <= 12` uses the power series `sum_k (-x^2/4)^k / (k!)^2`; beyond that
//! the Hankel asymptotic expansion is summed up to its smallest term. Both
//! branches stay within about `1e-12` absolute error.

use std::f64::consts::{FRAC_PI_4, PI};

/// Switch point between the series and the asymptotic expansion.
pub const SERIES_LIMIT: f64 = 12.0;

pub fn j0(x: f64) -> f64 {
    let y = x.abs();
    if y.is_nan() {
        f64::NAN
    } else if y.is_infinite() {
        0.0
    } else if y <= SERIES_LIMIT {
        series(y)
    } else {
        hankel(y)
    }
}

fn series(y: f64) -> f64 {
    let q = -0.25 * y * y;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * kf);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-3) {
            break;
        }
    }
    sum
}

/// `sqrt(2/(pi y)) (P cos(y - pi/4) - Q sin(y - pi/4))`.
fn hankel(y: f64) -> f64 {
    let mut p = 1.0;
    let mut q = 0.0;
    // c_m = prod_{j<=m} (2j-1)^2 / (m! 8^m), taken as a running term c_m / y^m
    let mut term = 1.0f64;
    let mut previous = f64::INFINITY;
    for m in 1..200 {
        let mf = m as f64;
        let next = term * (2.0 * mf - 1.0).powi(2) / (8.0 * mf * y);
        if next >= previous || next < 1e-17 {
            break;
        }
        previous = next;
        term = next;
        // signs cycle as Q: -, P: -, Q: +, P: +
        match m % 4 {
            1 => q -= term,
            2 => p -= term,
            3 => q += term,
            _ => p += term,
        }
    }
    let chi = y - FRAC_PI_4;
    (2.0 / (PI * y)).sqrt() * (p * chi.cos() - q * chi.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(j0(0.0), 1.0);
        assert!(j0(2.404825557695773).abs() < 1e-15);
        assert!((j0(1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
    }

    #[test]
    fn even_function() {
        for x in [0.3, 7.0, 12.5, 40.0] {
            assert_eq!(j0(x), j0(-x));
        }
    }

    #[test]
    fn branches_agree_at_switch() {
        let below = series(SERIES_LIMIT);
        let above = hankel(SERIES_LIMIT);
        assert!((below - above).abs() < 2e-12, "{below} vs {above}");
    }

    #[test]
    fn non_finite_inputs() {
        assert!(j0(f64::NAN).is_nan());
        assert_eq!(j0(f64::INFINITY), 0.0);
    }
}
