//! Least-squares fits of `P(x) = intercept - slope ln|x - center|`.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::Histogram;
use crate::{Error, Result, SeededRng};

/// Nonzero bins required on every fitted side.
pub const MIN_BINS_PER_SIDE: usize = 6;

pub const BOOTSTRAP_RESAMPLES: usize = 100;

/// Stream id reserved for bootstrap resampling, far from sampler chunks.
const BOOTSTRAP_STREAM: u64 = u64::MAX - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
    Both,
}

impl Side {
    fn includes(self, left: bool) -> bool {
        match self {
            Side::Left => left,
            Side::Right => !left,
            Side::Both => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceFit {
    pub center: f64,
    pub side: Side,
    /// Coefficient of `-ln|x - center|`.
    pub slope: f64,
    pub intercept: f64,
    pub window: (f64, f64),
    pub r_squared: f64,
    pub bins_used: usize,
    /// 2.5% and 97.5% bootstrap quantiles of the slope, for histogram fits.
    pub slope_ci: Option<(f64, f64)>,
}

impl DivergenceFit {
    pub fn brackets(&self, value: f64) -> bool {
        self.slope_ci.is_some_and(|(lo, hi)| lo <= value && value <= hi)
    }
}

fn check_window(window: (f64, f64)) -> Result<()> {
    let (lo, hi) = window;
    if lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("fit window ({lo}, {hi}) needs 0 < eps_min < eps_max")))
    }
}

/// Mean of `-ln t` over `[a, b]` with `0 <= a < b`.
fn mean_neg_log(a: f64, b: f64) -> f64 {
    let g = |t: f64| if t > 0.0 { t * t.ln() - t } else { 0.0 };
    -(g(b) - g(a)) / (b - a)
}

struct Ols {
    slope: f64,
    intercept: f64,
    r_squared: f64,
}

fn ols(xs: &[f64], ys: &[f64]) -> Ols {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let r_squared = if sxx > 0.0 && syy > 0.0 { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) } else { 0.0 };
    Ols { slope, intercept: my - slope * mx, r_squared }
}

/// Bins whose centers sit at distance within `window` of `center` on the
/// requested side and which do not straddle `center`. Returns
/// `(bin, bin-averaged regressor)` pairs.
fn fit_bins(h: &Histogram, center: f64, window: (f64, f64), side: Side) -> Vec<(usize, f64)> {
    (0..h.bins())
        .filter_map(|i| {
            let (a, b) = (h.edges()[i], h.edges()[i + 1]);
            let left = b <= center;
            if !(left || a >= center) || !side.includes(left) {
                return None;
            }
            let dist = (h.center(i) - center).abs();
            if !(dist > window.0 && dist < window.1) {
                return None;
            }
            let (near, far) = if left { (center - b, center - a) } else { (a - center, b - center) };
            Some((i, mean_neg_log(near, far)))
        })
        .collect()
}

fn require_bins(h: &Histogram, bins: &[(usize, f64)], center: f64, side: Side) -> Result<()> {
    let nonzero = |want_left: bool| {
        bins.iter()
            .filter(|&&(i, _)| (h.edges()[i + 1] <= center) == want_left && h.counts()[i] > 0)
            .count()
    };
    for left in [true, false] {
        if side.includes(left) && nonzero(left) < MIN_BINS_PER_SIDE {
            return Err(Error::InsufficientData(format!(
                "fewer than {MIN_BINS_PER_SIDE} nonzero bins {} of {center} in the fit window",
                if left { "below" } else { "above" }
            )));
        }
    }
    Ok(())
}

/// Fits bin densities within `window` of `center` against the bin average of
/// `-ln|x - center|`, then bootstraps the slope by Poisson-resampling counts.
pub fn fit_log_divergence(h: &Histogram, center: f64, window: (f64, f64), side: Side) -> Result<DivergenceFit> {
    let mut fit = fit_histogram_once(h, center, window, side)?;
    let bins = fit_bins(h, center, window, side);
    let xs: Vec<f64> = bins.iter().map(|b| b.1).collect();
    let total = h.total_samples() as f64;
    let mut rng = SeededRng::new(h.seed, BOOTSTRAP_STREAM).generator();
    let mut slopes: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .map(|_| {
            let ys: Vec<f64> = bins
                .iter()
                .map(|&(i, _)| poisson_draw(&mut rng, h.counts()[i] as f64) / (total * h.width(i)))
                .collect();
            ols(&xs, &ys).slope
        })
        .collect();
    slopes.sort_by(f64::total_cmp);
    fit.slope_ci = Some((quantile(&slopes, 0.025), quantile(&slopes, 0.975)));
    Ok(fit)
}

fn fit_histogram_once(h: &Histogram, center: f64, window: (f64, f64), side: Side) -> Result<DivergenceFit> {
    check_window(window)?;
    if h.total_samples() == 0 {
        return Err(Error::InsufficientData("empty histogram".into()));
    }
    let bins = fit_bins(h, center, window, side);
    require_bins(h, &bins, center, side)?;
    let xs: Vec<f64> = bins.iter().map(|b| b.1).collect();
    let ys: Vec<f64> = bins.iter().map(|&(i, _)| h.density(i)).collect();
    let o = ols(&xs, &ys);
    Ok(DivergenceFit {
        center,
        side,
        slope: o.slope,
        intercept: o.intercept,
        window,
        r_squared: o.r_squared,
        bins_used: bins.len(),
        slope_ci: None,
    })
}

fn poisson_draw<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> f64 {
    match Poisson::new(mean) {
        Ok(p) => p.sample(rng),
        Err(_) => 0.0,
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let (i, frac) = (pos.floor() as usize, pos.fract());
    let next = sorted[(i + 1).min(sorted.len() - 1)];
    sorted[i] + frac * (next - sorted[i])
}

/// Fits tabulated `(x, density)` points with `window.0 < |x - center| <
/// window.1` against `-ln|x - center|`.
pub fn fit_log_points(points: &[(f64, f64)], center: f64, window: (f64, f64), side: Side) -> Result<DivergenceFit> {
    check_window(window)?;
    let used: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(x, _)| {
            let d = (x - center).abs();
            x != center && side.includes(x < center) && d > window.0 && d < window.1
        })
        .map(|&(x, y)| (-(x - center).abs().ln(), y))
        .collect();
    for left in [true, false] {
        let n = points
            .iter()
            .filter(|&&(x, _)| (x < center) == left && x != center)
            .filter(|&&(x, _)| (x - center).abs() > window.0 && (x - center).abs() < window.1)
            .count();
        if side.includes(left) && n < 2 {
            return Err(Error::InsufficientData(format!("too few points near {center}")));
        }
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = used.into_iter().unzip();
    let o = ols(&xs, &ys);
    Ok(DivergenceFit {
        center,
        side,
        slope: o.slope,
        intercept: o.intercept,
        window,
        r_squared: o.r_squared,
        bins_used: xs.len(),
        slope_ci: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenterScan {
    /// Candidate with the largest r².
    pub best: DivergenceFit,
    /// `(candidate, r²)` for every candidate that could be fitted.
    pub profile: Vec<(f64, f64)>,
}

/// Tries every interior bin edge as the divergence center, fitting
/// `bins_per_side` bins on both sides, and keeps the best r².
pub fn scan_divergence_center(h: &Histogram, bins_per_side: usize) -> Result<CenterScan> {
    if bins_per_side < MIN_BINS_PER_SIDE {
        return Err(Error::InvalidArgument(format!("need at least {MIN_BINS_PER_SIDE} bins per side")));
    }
    let edges = h.edges();
    let mut profile = Vec::new();
    let mut best: Option<DivergenceFit> = None;
    for k in bins_per_side..=h.bins().saturating_sub(bins_per_side) {
        let c = edges[k];
        let w_left = edges[k] - edges[k - bins_per_side];
        let w_right = edges[k + bins_per_side] - edges[k];
        let near = 0.25 * (edges[k] - edges[k - 1]).min(edges[k + 1] - edges[k]);
        let window = (near, w_left.max(w_right));
        let Ok(fit) = fit_histogram_once(h, c, window, Side::Both) else {
            continue;
        };
        // only a peak counts as a divergence
        if fit.slope <= 0.0 {
            continue;
        }
        profile.push((c, fit.r_squared));
        if best.as_ref().is_none_or(|b| fit.r_squared > b.r_squared) {
            best = Some(fit);
        }
    }
    let best = best.ok_or_else(|| Error::InsufficientData("no candidate center could be fitted".into()))?;
    Ok(CenterScan { best, profile })
}
