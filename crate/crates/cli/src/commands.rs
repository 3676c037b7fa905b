use std::fs;
use std::io::Write;
use std::path::Path;

use log::{info, warn};
use serde::Serialize;
use sha2::{Digest, Sha256};

use magicdist::exact::{
    self, mean_sre_exact, saddle_value, ExactDensity, PdfCurve, PdfVariable, DIVERGENCE_COEFFICIENT,
};
use magicdist::input::{parse_amplitudes, parse_bloch, parse_real_list};
use magicdist::measures::sre_from_xi;
use magicdist::montecarlo::{
    fit_log_divergence, fit_log_points, geometric_edges, sample_histogram, sample_mean, sample_measure,
    scan_divergence_center, uniform_edges, DivergenceFit, Histogram, Measure, SamplerConfig, Side,
};
use magicdist::statevec::haar_sample;
use magicdist::{LogBase, MagicReport, PureState, Register, SeededRng};

use crate::output::{self, real, real_pair, sink, write_json, write_points_csv};
use crate::svg::{Plot, Series};
use crate::{
    CliError, CriticalArgs, ExactPdfArgs, ExactVariable, FiguresArgs, FitArgs, FitSide, Format, MeanSreArgs,
    MeasureArgs, SampleArgs, SampledMeasure,
};

/// Pilot samples used to pick a histogram range when no exact support is known.
const PILOT_SAMPLES: u64 = 20_000;

/// Seed offset for pilot runs so they never reuse the main run's streams.
const PILOT_SEED_OFFSET: u64 = 0x5EED_0FF5_E700;

fn pair(text: &str, what: &str) -> Result<(f64, f64), CliError> {
    match parse_real_list(text)?[..] {
        [a, b] if b > a => Ok((a, b)),
        _ => Err(CliError::Usage(format!("{what} must be two increasing numbers `a,b`"))),
    }
}

fn register(q: usize, n_sites: usize) -> Result<Register, CliError> {
    Ok(Register::new(q, n_sites)?)
}

#[derive(Serialize)]
struct StateSummary {
    local_dim: usize,
    sites: usize,
    dim: usize,
}

#[derive(Serialize)]
struct MeasureOutput {
    state: StateSummary,
    unit: &'static str,
    #[serde(flatten)]
    report: MagicReport,
}

pub fn measure(a: &MeasureArgs) -> Result<(), CliError> {
    let state = if let Some(text) = &a.state.bloch {
        PureState::from_bloch(parse_bloch(text)?)?
    } else if let Some(text) = &a.state.amplitudes {
        parse_amplitudes(text)?
    } else {
        let reg = register(a.register.q, a.register.n_sites)?;
        haar_sample(reg, &mut SeededRng::new(a.seed, 0).generator())?
    };
    let mut report = MagicReport::for_state(&state, a.alpha)?;
    let base = LogBase::from(a.base);
    report.m_alpha = report.m_alpha_in(base);
    let body = MeasureOutput {
        state: StateSummary { local_dim: state.local_dim(), sites: state.num_sites(), dim: state.dim() },
        unit: base.unit(),
        report,
    };
    write_json(&mut *sink(None)?, "measure", &body)
}

fn exact_source(variable: ExactVariable, alpha: f64) -> Result<ExactDensity, CliError> {
    let v = match variable {
        ExactVariable::N => PdfVariable::NAlpha,
        ExactVariable::Xi => PdfVariable::XiAlpha,
        ExactVariable::M => PdfVariable::MAlpha,
        ExactVariable::Coherence => PdfVariable::Coherence,
    };
    Ok(ExactDensity::for_variable(v, alpha)?)
}

fn singular_label(source: ExactDensity) -> &'static str {
    match source {
        ExactDensity::N2 => "n_c",
        ExactDensity::Xi2 => "xi_c",
        ExactDensity::M2 => "m_c",
        _ => "singular",
    }
}

fn curve_comments(curve: &PdfCurve, tol: f64) -> Vec<(String, String)> {
    let mut c = vec![
        ("variable".to_string(), curve.variable.name().to_string()),
        ("alpha".into(), real(curve.alpha)),
        ("tol".into(), real(tol)),
        ("support".into(), real_pair(curve.support.0, curve.support.1)),
    ];
    if let Some(source) = curve.source {
        for &s in &curve.singular_points {
            c.push((singular_label(source).into(), real(s)));
        }
    }
    c
}

fn curve_plot(curve: &PdfCurve, data: String, log_y: bool) -> Plot {
    let markers = curve
        .source
        .map(|s| curve.singular_points.iter().map(|&c| (c, format!("{} = {c:.6}", singular_label(s)))).collect())
        .unwrap_or_default();
    Plot {
        title: format!("Haar density of {}", curve.variable.name()),
        x_label: curve.variable.name().into(),
        y_label: "density".into(),
        series: vec![Series::Line { points: curve.points.clone(), color: "crimson", label: "exact".into() }],
        markers,
        log_y,
        data,
    }
}

/// CSV bytes and integral of an exact curve.
fn exact_curve_csv(curve: &PdfCurve, tol: f64, integral: Option<f64>) -> Result<Vec<u8>, CliError> {
    let footer: Vec<(String, String)> = integral.map(|v| ("integral".to_string(), real(v))).into_iter().collect();
    let mut buf = Vec::new();
    write_points_csv(&mut buf, ["abscissa", "density"], &curve.points, &curve_comments(curve, tol), &footer)?;
    Ok(buf)
}

#[derive(Serialize)]
struct CurveOutput<'a> {
    variable: &'static str,
    alpha: f64,
    tol: f64,
    support: (f64, f64),
    singular_points: &'a [f64],
    integral: Option<f64>,
    points: &'a [(f64, f64)],
}

pub fn exact_pdf(a: &ExactPdfArgs) -> Result<(), CliError> {
    let source = exact_source(a.variable, a.alpha)?;
    let (curve, integral) = match &a.at {
        Some(list) => {
            let xs = parse_real_list(list)?;
            let mut points = Vec::with_capacity(xs.len());
            for x in xs {
                let p = source.eval_or_model(x, a.tol)?;
                if p.is_finite() {
                    points.push((x, p));
                } else {
                    warn!("skipping {x}: the density diverges there");
                }
            }
            let mut curve = PdfCurve::tabulate(source, &[], a.tol)?;
            curve.points = points;
            (curve, None)
        }
        None => {
            let curve = PdfCurve::exact(source, a.points, a.tol)?;
            let integral = curve.integral()?;
            (curve, Some(integral))
        }
    };
    let mut out = sink(a.out.output.as_deref())?;
    match a.out.format {
        Format::Csv => out.write_all(&exact_curve_csv(&curve, a.tol, integral)?)?,
        Format::Json => {
            let body = CurveOutput {
                variable: curve.variable.name(),
                alpha: curve.alpha,
                tol: a.tol,
                support: curve.support,
                singular_points: &curve.singular_points,
                integral,
                points: &curve.points,
            };
            write_json(&mut *out, "exact-pdf", &body)?;
        }
        Format::Svg => {
            let data = String::from_utf8_lossy(&exact_curve_csv(&curve, a.tol, integral)?).into_owned();
            out.write_all(curve_plot(&curve, data, a.out.log_density).render().as_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

/// One histogram run, shared by `sample` and `reproduce-figures`.
pub struct SampleJob {
    pub measure: SampledMeasure,
    pub alpha: f64,
    pub register: Register,
    pub samples: u64,
    pub seed: u64,
    pub bins: usize,
    pub range: Option<(f64, f64)>,
}

pub struct SampleRun {
    pub job_tag: String,
    pub config: SamplerConfig,
    pub histogram: Histogram,
    pub exact: Option<PdfCurve>,
    pub markers: Vec<(f64, String)>,
}

pub fn default_samples(register: Register) -> u64 {
    match (register.local_dim, register.num_sites) {
        (2, 1) => 10_000_000,
        (2, _) => 200_000,
        _ => 400_000,
    }
}

fn sampler_measure(m: SampledMeasure, register: Register) -> Result<Measure, CliError> {
    Ok(match m {
        SampledMeasure::N => Measure::NAlpha,
        SampledMeasure::Xi => Measure::XiAlpha,
        SampledMeasure::M => Measure::MAlpha,
        SampledMeasure::Coherence => Measure::Coherence,
        SampledMeasure::X => Measure::pauli_on_site0(0, register)?,
        SampledMeasure::Y => Measure::pauli_on_site0(1, register)?,
        SampledMeasure::Z => Measure::pauli_on_site0(2, register)?,
    })
}

/// Exact density matching a sampled measure, where one is known.
fn matching_exact(job: &SampleJob, config: &SamplerConfig) -> Option<ExactDensity> {
    if config.register.dim() != 2 {
        return None;
    }
    match job.measure {
        SampledMeasure::N if job.alpha == 2.0 => Some(ExactDensity::N2),
        SampledMeasure::Xi if job.alpha == 2.0 => Some(ExactDensity::Xi2),
        SampledMeasure::M if job.alpha == 2.0 => Some(ExactDensity::M2),
        SampledMeasure::Coherence => Some(ExactDensity::Coherence),
        SampledMeasure::X | SampledMeasure::Y | SampledMeasure::Z => Some(ExactDensity::Observable { a1: -1.0, a2: 1.0 }),
        _ => None,
    }
}

fn saddle_marker(job: &SampleJob, config: &SamplerConfig) -> Option<(f64, String)> {
    if config.register.dim() != 2 {
        return None;
    }
    let n_c = saddle_value(job.alpha);
    match job.measure {
        SampledMeasure::N => Some((n_c, format!("n_c = {n_c:.6}"))),
        SampledMeasure::Xi => {
            let xi = 0.5 * (1.0 + n_c);
            Some((xi, format!("xi_c = {xi:.6}")))
        }
        SampledMeasure::M => {
            let m = sre_from_xi(0.5 * (1.0 + n_c), job.alpha);
            Some((m, format!("m_c = {m:.6}")))
        }
        _ => None,
    }
}

pub fn run_sample(job: &SampleJob) -> Result<SampleRun, CliError> {
    let measure = sampler_measure(job.measure, job.register)?;
    let config = SamplerConfig::new(measure, job.alpha, job.register, job.samples, job.seed)?;
    let support = config.support();
    let (lo, hi) = match job.range {
        Some(r) => r,
        None if support.exact => (support.lo, support.hi),
        None => {
            let pilot = SamplerConfig {
                n_samples: job.samples.min(PILOT_SAMPLES),
                seed: job.seed.wrapping_add(PILOT_SEED_OFFSET),
                ..config.clone()
            };
            let v = sample_measure(&pilot)?;
            let min = v.iter().copied().fold(f64::INFINITY, f64::min);
            let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let pad = 0.05 * (max - min).max(1e-12);
            ((min - pad).max(support.lo), (max + pad).min(support.hi))
        }
    };
    info!("sampling {} states of {} into {} bins on [{lo}, {hi}]", job.samples, config.tag(), job.bins);
    let histogram = sample_histogram(&config, uniform_edges(lo, hi, job.bins)?)?;
    let exact = match matching_exact(job, &config) {
        Some(source) => Some(PdfCurve::exact(source, 600, 1e-9)?),
        None => None,
    };
    Ok(SampleRun {
        job_tag: config.tag(),
        markers: saddle_marker(job, &config).into_iter().collect(),
        config,
        histogram,
        exact,
    })
}

fn sample_comments(run: &SampleRun) -> Vec<(String, String)> {
    let c = &run.config;
    vec![
        ("measure".into(), run.job_tag.clone()),
        ("alpha".into(), real(c.alpha)),
        ("q".into(), c.register.local_dim.to_string()),
        ("sites".into(), c.register.num_sites.to_string()),
        ("seed".into(), c.seed.to_string()),
    ]
}

pub fn sample_csv(run: &SampleRun) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    run.histogram.write_csv(&mut buf, &sample_comments(run))?;
    Ok(buf)
}

pub fn sample_svg(run: &SampleRun, overlay: bool, log_y: bool) -> Result<String, CliError> {
    let h = &run.histogram;
    let mut series = vec![Series::Steps {
        edges: h.edges().to_vec(),
        heights: h.densities(),
        color: "steelblue",
        label: format!("{} samples", h.total_samples()),
    }];
    if let (true, Some(curve)) = (overlay, &run.exact) {
        let (lo, hi) = h.range();
        let points = curve.points.iter().copied().filter(|p| p.0 >= lo && p.0 <= hi).collect();
        series.push(Series::Line { points, color: "crimson", label: "exact".into() });
    }
    let plot = Plot {
        title: format!("Haar density of {}", run.job_tag),
        x_label: run.config.measure.name(run.config.alpha),
        y_label: "density".into(),
        series,
        markers: run.markers.clone(),
        log_y,
        data: String::from_utf8_lossy(&sample_csv(run)?).into_owned(),
    };
    Ok(plot.render())
}

#[derive(Serialize)]
struct SampleOutput<'a> {
    measure: &'a str,
    alpha: f64,
    q: usize,
    sites: usize,
    histogram: &'a Histogram,
}

pub fn sample(a: &SampleArgs) -> Result<(), CliError> {
    let reg = register(a.register.q, a.register.n_sites)?;
    let job = SampleJob {
        measure: a.measure,
        alpha: a.alpha,
        register: reg,
        samples: a.samples.unwrap_or_else(|| default_samples(reg)),
        seed: a.seed,
        bins: a.bins,
        range: a.range.as_deref().map(|r| pair(r, "--range")).transpose()?,
    };
    let run = run_sample(&job)?;
    let mut out = sink(a.out.output.as_deref())?;
    match a.out.format {
        Format::Csv => out.write_all(&sample_csv(&run)?)?,
        Format::Json => {
            let body = SampleOutput {
                measure: &run.job_tag,
                alpha: run.config.alpha,
                q: reg.local_dim,
                sites: reg.num_sites,
                histogram: &run.histogram,
            };
            write_json(&mut *out, "sample", &body)?;
        }
        Format::Svg => out.write_all(sample_svg(&run, !a.no_overlay, a.out.log_density)?.as_bytes())?,
    }
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct FitOutput {
    mode: &'static str,
    alpha: f64,
    samples: Option<u64>,
    seed: Option<u64>,
    #[serde(flatten)]
    fit: DivergenceFit,
    /// Coefficient proven for the order-2 purity, for comparison.
    expected_slope: Option<f64>,
    scan_profile: Option<Vec<(f64, f64)>>,
}

pub fn fit_divergence(a: &FitArgs) -> Result<(), CliError> {
    let side = match a.side {
        FitSide::Left => Side::Left,
        FitSide::Right => Side::Right,
        FitSide::Both => Side::Both,
    };
    let center = a.center.unwrap_or_else(|| saddle_value(a.alpha));
    let expected_slope = (a.alpha == 2.0).then_some(DIVERGENCE_COEFFICIENT);
    let window = |default: (f64, f64)| a.window.as_deref().map_or(Ok(default), |w| pair(w, "--window"));
    let body = if a.exact {
        let source = ExactDensity::for_variable(PdfVariable::NAlpha, a.alpha)?;
        let curve = PdfCurve::exact(source, 1000, a.tol)?;
        let fit = fit_log_points(&curve.points, center, window((1e-5, 1e-3))?, side)?;
        FitOutput { mode: "exact", alpha: a.alpha, samples: None, seed: None, fit, expected_slope, scan_profile: None }
    } else {
        let config = SamplerConfig::new(Measure::NAlpha, a.alpha, Register::qubits(1)?, a.samples, a.seed)?;
        let (fit, scan_profile) = if a.scan {
            let s = config.support();
            let h = sample_histogram(&config, uniform_edges(s.lo, s.hi, a.bins)?)?;
            let scan = scan_divergence_center(&h, a.bins_per_side)?;
            // refit at the located center to attach a bootstrap interval
            let best = fit_log_divergence(&h, scan.best.center, scan.best.window, Side::Both)?;
            (best, Some(scan.profile))
        } else {
            let w = window((2e-4, 2e-2))?;
            let h = sample_histogram(&config, geometric_edges(center, w.0, w.1, a.per_side)?)?;
            (fit_log_divergence(&h, center, w, side)?, None)
        };
        FitOutput {
            mode: "monte-carlo",
            alpha: a.alpha,
            samples: Some(a.samples),
            seed: Some(a.seed),
            fit,
            expected_slope,
            scan_profile,
        }
    };
    write_json(&mut *sink(None)?, "fit-divergence", &body)
}

#[derive(Serialize)]
struct CriticalOutput {
    alpha: f64,
    count: usize,
    points: Vec<exact::CriticalPoint>,
}

pub fn critical_points(a: &CriticalArgs) -> Result<(), CliError> {
    let points = exact::critical_points(a.alpha)?;
    let body = CriticalOutput { alpha: a.alpha, count: points.len(), points };
    write_json(&mut *sink(None)?, "critical-points", &body)
}

#[derive(Serialize)]
struct MonteCarloMean {
    samples: u64,
    seed: u64,
    mean: f64,
    standard_error: f64,
    within_3_sigma: bool,
}

#[derive(Serialize)]
struct MeanOutput {
    value: f64,
    unit: &'static str,
    tol: f64,
    monte_carlo: Option<MonteCarloMean>,
}

pub fn mean_sre(a: &MeanSreArgs) -> Result<(), CliError> {
    let base = LogBase::from(a.base);
    let value = base.from_nats(mean_sre_exact(a.tol)?);
    let monte_carlo = match a.mc {
        Some(samples) => {
            let config = SamplerConfig::new(Measure::MAlpha, 2.0, Register::qubits(1)?, samples, a.seed)?;
            let (mean, se) = sample_mean(&config)?;
            let (mean, standard_error) = (base.from_nats(mean), base.from_nats(se));
            Some(MonteCarloMean {
                samples,
                seed: a.seed,
                mean,
                standard_error,
                within_3_sigma: (mean - value).abs() <= 3.0 * standard_error,
            })
        }
        None => None,
    };
    write_json(&mut *sink(None)?, "mean-sre", &MeanOutput { value, unit: base.unit(), tol: a.tol, monte_carlo })
}

#[derive(Serialize)]
struct ManifestEntry {
    file: String,
    sha256: String,
    seed: Option<u64>,
    samples: Option<u64>,
    measure: String,
}

#[derive(Serialize)]
struct Manifest {
    base_seed: u64,
    scale_down: u64,
    files: Vec<ManifestEntry>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn write_artifact(dir: &Path, name: &str, bytes: &[u8]) -> Result<String, CliError> {
    fs::write(dir.join(name), bytes)?;
    Ok(sha256_hex(bytes))
}

pub fn reproduce_figures(a: &FiguresArgs) -> Result<(), CliError> {
    if a.scale_down == 0 {
        return Err(CliError::Usage("--scale-down must be at least 1".into()));
    }
    fs::create_dir_all(&a.out_dir)?;
    let mut files = Vec::new();

    let tol = 1e-10;
    let m_curve = PdfCurve::exact(ExactDensity::M2, 1000, tol)?;
    let csv = exact_curve_csv(&m_curve, tol, Some(m_curve.integral()?))?;
    let svg = curve_plot(&m_curve, String::from_utf8_lossy(&csv).into_owned(), false).render();
    for (name, bytes) in [("fig1_exact_m2.csv", csv), ("fig1_exact_m2.svg", svg.into_bytes())] {
        let sha256 = write_artifact(&a.out_dir, name, &bytes)?;
        files.push(ManifestEntry { file: name.into(), sha256, seed: None, samples: None, measure: "M_2/exact".into() });
    }

    let qubit = Register::qubits(1)?;
    let jobs = [
        ("fig1_sample_m2", SampledMeasure::M, qubit, 10_000_000u64),
        ("fig2_sample_n2", SampledMeasure::N, qubit, 10_000_000),
        ("fig4_sample_n2_q2_n2", SampledMeasure::N, Register::qubits(2)?, 200_000),
        ("fig4_sample_n2_q2_n6", SampledMeasure::N, Register::qubits(6)?, 200_000),
        ("fig5_sample_n2_q3_n1", SampledMeasure::N, Register::qudit(3)?, 400_000),
        ("fig5_sample_n2_q4_n1", SampledMeasure::N, Register::qudit(4)?, 400_000),
    ];
    for (k, (stem, measure, register, samples)) in jobs.into_iter().enumerate() {
        let job = SampleJob {
            measure,
            alpha: 2.0,
            register,
            samples: (samples / a.scale_down).max(1),
            seed: a.seed.wrapping_add(k as u64),
            bins: 200,
            range: None,
        };
        let run = run_sample(&job)?;
        let csv = sample_csv(&run)?;
        let svg = sample_svg(&run, true, false)?;
        for (ext, bytes) in [("csv", csv), ("svg", svg.into_bytes())] {
            let name = format!("{stem}.{ext}");
            let sha256 = write_artifact(&a.out_dir, &name, &bytes)?;
            files.push(ManifestEntry {
                file: name,
                sha256,
                seed: Some(job.seed),
                samples: Some(job.samples),
                measure: run.job_tag.clone(),
            });
        }
    }

    let manifest = Manifest { base_seed: a.seed, scale_down: a.scale_down, files };
    let value = output::envelope("reproduce-figures", &manifest)?;
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    fs::write(a.out_dir.join("manifest.json"), &text)?;
    print!("{text}");
    Ok(())
}
