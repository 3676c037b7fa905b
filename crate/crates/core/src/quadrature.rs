//! Globally adaptive 21-point Gauss-Kronrod quadrature.
//!
//! Intervals with the largest error estimate are bisected until the summed
//! estimate falls below the requested absolute tolerance. The estimate for a
//! panel is `|K21 - G10|`, which bounds the error of the lower-order rule and
//! is therefore conservative for the returned Kronrod value.

use std::ops::{Add, Mul, Sub};

use crate::{Error, Result, C64};

/// Maximum number of bisections before giving up.
pub const MAX_PANELS: usize = 4000;

// Kronrod abscissae on [-1, 1], positive half; even indices are new points,
// odd indices are shared with the 10-point Gauss rule.
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600527498338,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Values the integrator can accumulate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T = f64> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

/// One 21-point panel: `(Kronrod estimate, |Kronrod - Gauss|)`.
pub fn gk21<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = T::zero();
    for (j, (&x, &w)) in XGK[..10].iter().zip(&WGK[..10]).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * w;
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let kronrod = kronrod * half;
    let gauss = gauss * half;
    (kronrod, (kronrod - gauss).magnitude())
}

struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

/// Integrates `f` over `[a, b]` to absolute error `tol`.
pub fn integrate<T: QuadValue, F: FnMut(f64) -> T>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult<T>> {
    integrate_panels(f, &[a, b], tol)
}

/// Integrates over consecutive panels `[p0, p1], [p1, p2], ...`; interior
/// points are typically kinks or peaks of the integrand.
pub fn integrate_panels<T: QuadValue, F: FnMut(f64) -> T>(
    mut f: F,
    points: &[f64],
    tol: f64,
) -> Result<QuadResult<T>> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidTolerance(tol));
    }
    if points.len() < 2 || points.iter().any(|p| !p.is_finite()) || points.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument(format!("invalid integration panels {points:?}")));
    }
    let mut panels: Vec<Panel<T>> = Vec::new();
    let mut evaluations = 0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            let (value, error) = gk21(&mut f, w[0], w[1]);
            evaluations += 21;
            panels.push(Panel { a: w[0], b: w[1], value, error });
        }
    }
    let limit = panels.len() + MAX_PANELS;
    loop {
        let total_error: f64 = panels.iter().map(|p| p.error).sum();
        let sum = panels.iter().fold(T::zero(), |acc, p| acc + p.value);
        if total_error <= tol || !total_error.is_finite() || panels.len() >= limit {
            if total_error <= tol {
                return Ok(QuadResult { value: sum, error: total_error, evaluations });
            }
            return Err(Error::QuadratureFailure { error: total_error, tol });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let Panel { a, b, .. } = panels.swap_remove(worst);
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            return Err(Error::QuadratureFailure { error: total_error, tol });
        }
        for (lo, hi) in [(a, mid), (mid, b)] {
            let (value, error) = gk21(&mut f, lo, hi);
            evaluations += 21;
            panels.push(Panel { a: lo, b: hi, value, error });
        }
    }
}
