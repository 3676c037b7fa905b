//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::LN_2;
use std::process::{Command, ExitCode};
use std::time::Instant;

use magicdist::clifford::{single_qubit_cliffords, to_dynamic};
use magicdist::exact::{
    critical_points, normalization_m2, normalization_n2, pdf_n2_exact, ClassLabel, ExactDensity, PdfCurve,
    DIVERGENCE_COEFFICIENT, NORMALIZATION_WINDOW,
};
use magicdist::measures::incompatibility;
use magicdist::montecarlo::{
    fit_log_divergence, fit_log_points, geometric_edges, gof_compare, ks_uniform, peak_density_refinement,
    sample_histogram, sample_mean, sample_measure, scan_divergence_center, uniform_edges, Measure, SamplerConfig,
    Side,
};
use magicdist::pauli::{pauli_spectrum_fast, pauli_spectrum_naive};
use magicdist::statevec::haar_sample;
use magicdist::{MagicReport, PureState, Register, SeededRng};

const MEAN_SRE_BITS: f64 = 0.330263;

type Outcome = Result<String, String>;

type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn pass_if(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn qubit() -> Register {
    Register::qubits(1).unwrap()
}

fn exact_mean_sre() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_magicdist");
    let start = Instant::now();
    let out = Command::new(bin).args(["mean-sre", "--tol", "1e-8"]).output().map_err(err)?;
    let elapsed = start.elapsed().as_secs_f64();
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(err)?;
    let value = json["value"].as_f64().ok_or("no value in output")?;
    pass_if(
        (value - MEAN_SRE_BITS).abs() < 1e-5 && elapsed < 1.0,
        format!("value {value:.7} bits, {elapsed:.3} s"),
    )
}

fn monte_carlo_mean() -> Outcome {
    let start = Instant::now();
    let config = SamplerConfig::new(Measure::MAlpha, 2.0, qubit(), 1_000_000, 7).map_err(err)?;
    let (mean, se) = sample_mean(&config).map_err(err)?;
    let elapsed = start.elapsed().as_secs_f64();
    let (mean, se) = (mean / LN_2, se / LN_2);
    let z = (mean - MEAN_SRE_BITS) / se;
    pass_if(z.abs() < 3.0 && elapsed < 30.0, format!("mean {mean:.6} bits, {z:+.2} standard errors, {elapsed:.2} s"))
}

fn divergence_coefficient_exact() -> Outcome {
    let points: Vec<(f64, f64)> = (0..=40)
        .flat_map(|i| {
            let eps = 1e-5 * 100f64.powf(i as f64 / 40.0);
            [0.5 - eps, 0.5 + eps]
        })
        .map(|n| pdf_n2_exact(n, 1e-12).map(|p| (n, p)))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let window = (1e-5 * (1.0 - 1e-9), 1e-3 * (1.0 + 1e-9));
    let fit = fit_log_points(&points, 0.5, window, Side::Both).map_err(err)?;
    let rel = fit.slope / DIVERGENCE_COEFFICIENT - 1.0;
    pass_if(rel.abs() < 0.005, format!("slope {:.6}, relative error {rel:+.2e}", fit.slope))
}

fn divergence_coefficient_monte_carlo() -> Outcome {
    let config = SamplerConfig::new(Measure::NAlpha, 2.0, qubit(), 100_000_000, 1).map_err(err)?;
    let window = (2e-4, 2e-2);
    let h = sample_histogram(&config, geometric_edges(0.5, window.0, window.1, 30).map_err(err)?).map_err(err)?;
    let fit = fit_log_divergence(&h, 0.5, window, Side::Both).map_err(err)?;
    let (lo, hi) = fit.slope_ci.ok_or("no bootstrap interval")?;
    let rel = fit.slope / DIVERGENCE_COEFFICIENT - 1.0;
    pass_if(
        rel.abs() < 0.05 && fit.brackets(DIVERGENCE_COEFFICIENT),
        format!("slope {:.4}, 95% CI [{lo:.4}, {hi:.4}], relative error {rel:+.2e}, 1e8 samples", fit.slope),
    )
}

fn divergence_location() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for (alpha, seed) in [(3.0, 2), (4.0, 3)] {
        let config = SamplerConfig::new(Measure::NAlpha, alpha, qubit(), 10_000_000, seed).map_err(err)?;
        let s = config.support();
        let h = sample_histogram(&config, uniform_edges(s.lo, s.hi, 400).map_err(err)?).map_err(err)?;
        let scan = scan_divergence_center(&h, 20).map_err(err)?;
        let n_c = 2f64.powf(1.0 - alpha);
        let width = h.width(0);
        let off = (scan.best.center - n_c).abs();
        ok &= off <= width;
        details.push(format!("alpha={alpha}: center {:.5} vs {n_c}, off {:.2} bins", scan.best.center, off / width));
    }
    pass_if(ok, details.join("; "))
}

fn exact_vs_monte_carlo() -> Outcome {
    let config = SamplerConfig::new(Measure::NAlpha, 2.0, qubit(), 10_000_000, 11).map_err(err)?;
    let h = sample_histogram(&config, uniform_edges(1.0 / 3.0, 1.0, 500).map_err(err)?).map_err(err)?;
    let curve = PdfCurve::exact(ExactDensity::N2, 200, 1e-10).map_err(err)?;
    let report = gof_compare(&h, &curve, 1e-3, 1e-9).map_err(err)?;
    pass_if(
        report.bins_beyond_5sigma == 0,
        format!("{} bins tested, max deviation {:.2} sigma", report.bins_tested, report.max_sigma_deviation),
    )
}

fn m2_peak() -> Outcome {
    let config = SamplerConfig::new(Measure::MAlpha, 2.0, qubit(), 1_000_000, 12).map_err(err)?;
    let s = config.support();
    let h = sample_histogram(&config, uniform_edges(s.lo, s.hi, 200).map_err(err)?).map_err(err)?;
    let (i, d) = h.max_density_bin();
    let m_c = (4.0f64 / 3.0).ln();
    let (a, b) = (h.edges()[i], h.edges()[i + 1]);
    pass_if(a <= m_c && m_c < b, format!("peak bin [{a:.5}, {b:.5}) with density {d:.3}, m_c = {m_c:.6}"))
}

/// Range covering a pilot run, padded by 5% on each side.
fn pilot_range(config: &SamplerConfig) -> Result<(f64, f64), String> {
    let pilot = SamplerConfig { n_samples: 20_000, seed: config.seed + 1000, ..config.clone() };
    let v = sample_measure(&pilot).map_err(err)?;
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let pad = 0.05 * (hi - lo);
    Ok(((lo - pad).max(0.0), hi + pad))
}

fn peak_growth(q: usize, sites: usize, samples: u64, seed: u64) -> Result<f64, String> {
    let register = Register::new(q, sites).map_err(err)?;
    let config = SamplerConfig::new(Measure::NAlpha, 2.0, register, samples, seed).map_err(err)?;
    let s = config.support();
    let range = if s.exact { (s.lo, s.hi) } else { pilot_range(&config)? };
    let (coarse, fine) = peak_density_refinement(&config, range, 100).map_err(err)?;
    Ok(fine / coarse - 1.0)
}

fn no_divergence_beyond_one_qubit() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for (q, sites, samples) in [(2, 2, 200_000), (2, 6, 200_000), (3, 1, 400_000), (4, 1, 400_000)] {
        let growth = peak_growth(q, sites, samples, 20)?;
        ok &= growth.abs() < 0.15;
        details.push(format!("q={q},n={sites}: {:+.1}%", 100.0 * growth));
    }
    pass_if(ok, details.join("; "))
}

fn divergence_growth_one_qubit() -> Outcome {
    let growth = peak_growth(2, 1, 10_000_000, 20)?;
    pass_if(growth > 0.25, format!("q=2,n=1: {:+.1}% (needs > +25%)", 100.0 * growth))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = SeededRng::new(8, 0).generator();
    let mut haar = |r: Register| haar_sample(r, &mut rng).unwrap();
    let mut worst = 0.0f64;
    for n in 1..=3 {
        for _ in 0..100 {
            let s = haar(Register::qubits(n).unwrap());
            let fast = pauli_spectrum_fast(&s).map_err(err)?;
            let naive = pauli_spectrum_naive(&s).map_err(err)?;
            for (a, b) in fast.values().iter().zip(naive.values()) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    let states: Vec<PureState> = (0..2000).map(|_| haar(Register::qubits(6).unwrap())).collect();
    let start = Instant::now();
    for s in &states {
        pauli_spectrum_fast(s).map_err(err)?;
    }
    let rate = states.len() as f64 / start.elapsed().as_secs_f64();
    pass_if(worst < 1e-12 && rate >= 1e3, format!("max deviation {worst:.1e}, {rate:.0} states/s at n=6"))
}

fn identities() -> Outcome {
    let mut rng = SeededRng::new(9, 0).generator();
    let mut haar = |r: Register| haar_sample(r, &mut rng).unwrap();
    let (mut g1, mut g2) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let s = haar(qubit());
        let xi = MagicReport::for_state(&s, 2.0).map_err(err)?.xi_alpha;
        g1 = g1.max((incompatibility(&s, 1).map_err(err)? - 4.0).abs());
        g2 = g2.max((incompatibility(&s, 2).map_err(err)? - 4.0 * xi).abs());
    }
    let m2 = |s: &PureState| MagicReport::for_state(s, 2.0).map(|r| r.m_alpha).map_err(err);
    let mut additivity = 0.0f64;
    for k in 0..100 {
        let a = haar(Register::qubits(1 + k % 2).unwrap());
        let b = haar(Register::qubits(1 + k % 3).unwrap());
        let joint = a.tensor(&b).map_err(err)?;
        additivity = additivity.max((m2(&joint)? - m2(&a)? - m2(&b)?).abs());
    }
    let mut clifford = 0.0f64;
    let s = haar(qubit());
    let base = m2(&s)?;
    for u in single_qubit_cliffords() {
        clifford = clifford.max((m2(&s.apply(&to_dynamic(&u)).map_err(err)?)? - base).abs());
    }
    pass_if(
        g1 < 1e-12 && g2 < 1e-12 && additivity < 1e-10 && clifford < 1e-12,
        format!("|G1-4| {g1:.1e}, |G2-4Xi2| {g2:.1e}, additivity {additivity:.1e}, Clifford {clifford:.1e}"),
    )
}

fn critical_point_classes() -> Outcome {
    let mut ok = true;
    let mut worst_gradient = 0.0f64;
    for alpha in [2.0, 3.0, 4.0, 5.0] {
        let points = critical_points(alpha).map_err(err)?;
        for (label, count, value) in [
            (ClassLabel::C1Max, 6, 1.0),
            (ClassLabel::C2Saddle, 12, 2f64.powf(1.0 - alpha)),
            (ClassLabel::C3Min, 8, 3f64.powf(1.0 - alpha)),
        ] {
            let class: Vec<_> = points.iter().filter(|p| p.class_label == label).collect();
            ok &= class.len() == count;
            for p in class {
                worst_gradient = worst_gradient.max(p.gradient_norm);
                let [lo, hi] = p.hessian_eigenvalues;
                ok &= (p.value - value).abs() < 1e-12 && p.multiplicity == count;
                ok &= match label {
                    ClassLabel::C1Max => hi < 0.0,
                    ClassLabel::C2Saddle => lo < 0.0 && hi > 0.0,
                    ClassLabel::C3Min => lo > 0.0,
                };
            }
        }
        ok &= points.len() == 26;
    }
    ok &= worst_gradient < 1e-10;
    pass_if(ok, format!("6/12/8 for alpha 2..5, max projected gradient {worst_gradient:.1e}"))
}

fn ancillary_densities() -> Outcome {
    let z = Measure::pauli_on_site0(2, qubit()).map_err(err)?;
    let config = SamplerConfig::new(z, 2.0, qubit(), 1_000_000, 13).map_err(err)?;
    let ks = ks_uniform(&sample_measure(&config).map_err(err)?, -1.0, 1.0).map_err(err)?;

    let config = SamplerConfig::new(Measure::Coherence, 2.0, qubit(), 1_000_000, 14).map_err(err)?;
    let h = sample_histogram(&config, uniform_edges(0.0, 1.0, 200).map_err(err)?).map_err(err)?;
    let curve = PdfCurve::exact(ExactDensity::Coherence, 500, 1e-9).map_err(err)?;
    let report = gof_compare(&h, &curve, 0.02, 1e-9).map_err(err)?;
    pass_if(
        ks.passed && report.bins_beyond_4sigma == 0,
        format!(
            "KS {:.2e} < {:.2e}; coherence max deviation {:.2} sigma over {} bins",
            ks.statistic, ks.critical_value, report.max_sigma_deviation, report.bins_tested
        ),
    )
}

fn normalizations() -> Outcome {
    let n = normalization_n2(NORMALIZATION_WINDOW, 1e-10).map_err(err)?;
    let m = normalization_m2(NORMALIZATION_WINDOW, 1e-10).map_err(err)?;
    pass_if((n - 1.0).abs() < 1e-4 && (m - 1.0).abs() < 1e-4, format!("N2 {n:.8}, M2 {m:.8}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 14] = [
        ("1", "exact mean entropy", exact_mean_sre),
        ("2", "Monte Carlo mean entropy", monte_carlo_mean),
        ("3a", "divergence coefficient, exact density", divergence_coefficient_exact),
        ("3b", "divergence coefficient, Monte Carlo fit", divergence_coefficient_monte_carlo),
        ("4", "divergence location for alpha 3 and 4", divergence_location),
        ("5", "exact density vs 1e7 samples", exact_vs_monte_carlo),
        ("6", "peak of the M2 density", m2_peak),
        ("7a", "stable peak beyond one qubit", no_divergence_beyond_one_qubit),
        ("7b", "growing peak for one qubit", divergence_growth_one_qubit),
        ("8", "fast spectrum equals naive spectrum", oracle_equivalence),
        ("9", "incompatibility, additivity, Clifford invariance", identities),
        ("10", "critical points", critical_point_classes),
        ("11", "observable and coherence densities", ancillary_densities),
        ("12", "normalizations", normalizations),
    ];
    let mut failures = 0;
    for (id, name, check) in &criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {id} ({name}): {detail} [{secs:.1} s]"),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {id} ({name}): {detail} [{secs:.1} s]");
            }
        }
    }
    println!("{failures} criteria failed");
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
