//! Goodness-of-fit checks: binned Poisson comparison against an exact curve
//! and Kolmogorov-Smirnov tests.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Histogram;
use crate::exact::PdfCurve;
use crate::{Error, Result};

/// Bins expecting fewer counts than this are not tested.
pub const MIN_EXPECTED_COUNT: f64 = 10.0;

/// 99% quantile of the Kolmogorov distribution.
pub const KS_QUANTILE_99: f64 = 1.6276;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    /// Largest `|observed - expected| / sqrt(expected)`.
    pub max_sigma_deviation: f64,
    pub worst_bin: Option<usize>,
    pub bins_tested: usize,
    pub bins_beyond_4sigma: usize,
    pub bins_beyond_5sigma: usize,
}

/// Probability of `[lo, hi]` under the curve: exact when the curve knows its
/// source, trapezoidal on the tabulated points otherwise.
fn curve_probability(curve: &PdfCurve, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if let Some(source) = curve.source {
        return source.probability(lo, hi, tol);
    }
    let interp = |x: f64| -> f64 {
        let k = curve.points.partition_point(|p| p.0 <= x);
        if k == 0 || k == curve.points.len() {
            return 0.0;
        }
        let ((x0, y0), (x1, y1)) = (curve.points[k - 1], curve.points[k]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    };
    let mut xs = vec![lo];
    xs.extend(curve.points.iter().map(|p| p.0).filter(|&x| x > lo && x < hi));
    xs.push(hi);
    Ok(xs.windows(2).map(|w| 0.5 * (interp(w[0]) + interp(w[1])) * (w[1] - w[0])).sum())
}

/// Compares each bin's count with `total * P(bin)`. Bins within
/// `exclude_radius` of a singular point, or expecting fewer than
/// [`MIN_EXPECTED_COUNT`] counts, are skipped.
pub fn gof_compare(h: &Histogram, curve: &PdfCurve, exclude_radius: f64, tol: f64) -> Result<GofReport> {
    let (lo, hi) = h.range();
    let (s0, s1) = curve.support;
    let slack = 1e-9 * (s1 - s0).abs().max(1.0);
    if lo < s0 - slack || hi > s1 + slack {
        return Err(Error::SupportMismatch(format!(
            "histogram range [{lo}, {hi}] exceeds curve support [{s0}, {s1}]"
        )));
    }
    if !(exclude_radius >= 0.0) {
        return Err(Error::InvalidArgument(format!("exclude radius {exclude_radius}")));
    }
    let total = h.total_samples() as f64;
    let deviations = (0..h.bins())
        .into_par_iter()
        .map(|i| {
            let (a, b) = (h.edges()[i], h.edges()[i + 1]);
            let near_singular = curve
                .singular_points
                .iter()
                .any(|&c| a - exclude_radius < c && c < b + exclude_radius);
            if near_singular {
                return Ok(None);
            }
            let expected = total * curve_probability(curve, a, b, tol)?;
            if expected < MIN_EXPECTED_COUNT {
                return Ok(None);
            }
            Ok(Some((i, (h.counts()[i] as f64 - expected).abs() / expected.sqrt())))
        })
        .collect::<Result<Vec<_>>>()?;
    let tested: Vec<(usize, f64)> = deviations.into_iter().flatten().collect();
    let worst = tested.iter().copied().max_by(|a, b| a.1.total_cmp(&b.1));
    Ok(GofReport {
        max_sigma_deviation: worst.map_or(0.0, |w| w.1),
        worst_bin: worst.map(|w| w.0),
        bins_tested: tested.len(),
        bins_beyond_4sigma: tested.iter().filter(|t| t.1 > 4.0).count(),
        bins_beyond_5sigma: tested.iter().filter(|t| t.1 > 5.0).count(),
    })
}

/// Draws from a tabulated density by inverting its piecewise-linear CDF.
#[derive(Debug, Clone)]
pub struct InverseCdfSampler {
    xs: Vec<f64>,
    cdf: Vec<f64>,
}

impl InverseCdfSampler {
    pub fn new(curve: &PdfCurve) -> Result<Self> {
        if curve.points.len() < 2 {
            return Err(Error::InsufficientData("curve has fewer than two points".into()));
        }
        let model = curve.source.and_then(|s| s.log_model());
        let xs: Vec<f64> = curve.points.iter().map(|p| p.0).collect();
        let mut cdf = vec![0.0];
        for w in curve.points.windows(2) {
            let ((x0, p0), (x1, p1)) = (w[0], w[1]);
            let mass = match model {
                Some(m) if x0 < m.center && m.center < x1 => m.integral(m.center - x0, x1 - m.center),
                _ => 0.5 * (p0 + p1) * (x1 - x0),
            };
            cdf.push(cdf[cdf.len() - 1] + mass.max(0.0));
        }
        let norm = cdf[cdf.len() - 1];
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidArgument("curve carries no probability mass".into()));
        }
        cdf.iter_mut().for_each(|c| *c /= norm);
        Ok(Self { xs, cdf })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let k = self.cdf.partition_point(|&c| c <= u).clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[k - 1], self.cdf[k]);
        let t = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
        self.xs[k - 1] + t * (self.xs[k] - self.xs[k - 1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    /// Critical value at the 1% level.
    pub critical_value: f64,
    pub passed: bool,
}

/// Asymptotic 1% critical value of the KS statistic for effective size `n`.
pub fn ks_critical_value(n_effective: f64) -> f64 {
    KS_QUANTILE_99 / n_effective.sqrt()
}

/// One-sample test against the uniform distribution on `[a, b]`.
pub fn ks_uniform(samples: &[f64], a: f64, b: f64) -> Result<KsResult> {
    if samples.is_empty() || !(b > a) {
        return Err(Error::InvalidArgument("KS test needs samples and a < b".into()));
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let statistic = s
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = ((x - a) / (b - a)).clamp(0.0, 1.0);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max);
    let critical_value = ks_critical_value(n);
    Ok(KsResult { statistic, critical_value, passed: statistic < critical_value })
}

/// Two-sample test.
pub fn ks_two_sample(x: &[f64], y: &[f64]) -> Result<KsResult> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::InvalidArgument("KS test needs two non-empty samples".into()));
    }
    let mut x = x.to_vec();
    let mut y = y.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j, mut statistic) = (0usize, 0usize, 0.0f64);
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        statistic = statistic.max((i as f64 / n - j as f64 / m).abs());
    }
    let critical_value = ks_critical_value(n * m / (n + m));
    Ok(KsResult { statistic, critical_value, passed: statistic < critical_value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ExactDensity;
    use crate::montecarlo::uniform_edges;
    use crate::SeededRng;

    #[test]
    fn inverse_cdf_calibration() {
        let curve = PdfCurve::exact(ExactDensity::N2, 1500, 1e-10).unwrap();
        let sampler = InverseCdfSampler::new(&curve).unwrap();
        let mut rng = SeededRng::new(11, 0).generator();
        let mut h = Histogram::new(uniform_edges(1.0 / 3.0, 1.0, 100).unwrap()).unwrap();
        h.extend((0..200_000).map(|_| sampler.sample(&mut rng)));
        let report = gof_compare(&h, &curve, 1e-3, 1e-8).unwrap();
        assert!(report.bins_tested >= 95);
        assert!(report.bins_beyond_4sigma as f64 <= 0.01 * report.bins_tested as f64);
    }

    #[test]
    fn support_mismatch() {
        let curve = PdfCurve::exact(ExactDensity::Observable { a1: -1.0, a2: 1.0 }, 20, 1e-8).unwrap();
        let h = Histogram::new(uniform_edges(-2.0, 1.0, 10).unwrap()).unwrap();
        assert!(matches!(gof_compare(&h, &curve, 0.0, 1e-8), Err(Error::SupportMismatch(_))));
    }

    #[test]
    fn ks_accepts_and_rejects() {
        let mut rng = SeededRng::new(3, 0).generator();
        let u: Vec<f64> = (0..20_000).map(|_| rng.random_range(-1.0..1.0)).collect();
        assert!(ks_uniform(&u, -1.0, 1.0).unwrap().passed);
        let squashed: Vec<f64> = u.iter().map(|x| x * x.abs()).collect();
        assert!(!ks_uniform(&squashed, -1.0, 1.0).unwrap().passed);
        assert!(ks_two_sample(&u[..10_000], &u[10_000..]).unwrap().passed);
        assert!(!ks_two_sample(&u[..10_000], &squashed[10_000..]).unwrap().passed);
    }
}
