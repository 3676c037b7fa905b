//! Deterministic Haar-sampling harness.
//!
//! Samples are produced in chunks of [`CHUNK_SIZE`]; chunk `i` draws from
//! the ChaCha20 stream `(seed, i)`, so the sequence does not depend on how
//! many worker threads process the chunks.

pub mod fit;
pub mod gof;
pub mod histogram;

use std::fmt;
use std::sync::Arc;

use log::{info, warn};
use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::clifford;
use crate::measures::{coherence_from_amplitudes, expectation_unchecked, sre_from_xi, xi_from_n, HERMITIAN_TOLERANCE};
use crate::pauli::{fast_spectrum_into, power_sum, weyl_spectrum_into};
use crate::statevec::{fill_haar_amplitudes, Register};
use crate::{Error, Result, SeededRng, C64};

pub use fit::{fit_log_divergence, fit_log_points, scan_divergence_center, CenterScan, DivergenceFit, Side};
pub use gof::{gof_compare, ks_critical_value, ks_two_sample, ks_uniform, GofReport, InverseCdfSampler, KsResult};
pub use histogram::{geometric_edges, uniform_edges, Histogram};

pub const CHUNK_SIZE: u64 = 4096;

/// Largest qubit register accepted by the sampler.
pub const MAX_SAMPLED_QUBITS: usize = 10;

/// Largest single-qudit dimension accepted by the sampler.
pub const MAX_SAMPLED_QUDIT: usize = 16;

/// Tolerance for floating-point excursions past an exact support edge;
/// such samples are clamped onto the edge.
pub const SUPPORT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Measure {
    NAlpha,
    XiAlpha,
    MAlpha,
    Coherence,
    /// Expectation value of a Hermitian observable.
    Observable(Arc<DMatrix<C64>>),
}

impl Measure {
    /// Pauli `X`, `Y` or `Z` (axis 0, 1, 2) on site 0 of a qubit register.
    pub fn pauli_on_site0(axis: usize, register: Register) -> Result<Self> {
        if !register.is_qubits() {
            return Err(Error::DimensionMismatch("Pauli observables need a qubit register".into()));
        }
        let p = clifford::paulis()
            .get(axis)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("Pauli axis {axis} is not 0, 1 or 2")))?;
        let rest = register.dim() / 2;
        let m = clifford::to_dynamic(&p).kronecker(&DMatrix::<C64>::identity(rest, rest));
        Ok(Measure::Observable(Arc::new(m)))
    }

    pub fn name(&self, alpha: f64) -> String {
        match self {
            Measure::NAlpha => format!("N_{alpha}"),
            Measure::XiAlpha => format!("Xi_{alpha}"),
            Measure::MAlpha => format!("M_{alpha}"),
            Measure::Coherence => "Coherence".into(),
            Measure::Observable(_) => "Observable".into(),
        }
    }

    fn needs_alpha(&self) -> bool {
        matches!(self, Measure::NAlpha | Measure::XiAlpha | Measure::MAlpha)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub measure: Measure,
    pub alpha: f64,
    pub register: Register,
    pub n_samples: u64,
    pub seed: u64,
}

impl fmt::Display for SamplerConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())
    }
}

/// Range of values a measure can take, and whether it is exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub lo: f64,
    pub hi: f64,
    /// Exact supports make any excursion a hard error.
    pub exact: bool,
}

impl SamplerConfig {
    pub fn new(measure: Measure, alpha: f64, register: Register, n_samples: u64, seed: u64) -> Result<Self> {
        let config = Self { measure, alpha, register, n_samples, seed };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::InvalidArgument("at least one sample is required".into()));
        }
        let q = self.register.local_dim;
        let n = self.register.num_sites;
        let allowed = (q == 2 && n <= MAX_SAMPLED_QUBITS) || (q <= MAX_SAMPLED_QUDIT && n == 1);
        if !allowed {
            return Err(Error::ResourceLimit(format!(
                "sampling supports up to {MAX_SAMPLED_QUBITS} qubits or one qudit of dimension <= {MAX_SAMPLED_QUDIT}, got q={q}, n={n}"
            )));
        }
        if self.measure.needs_alpha() && !(self.alpha.is_finite() && self.alpha > 1.0) {
            return Err(Error::InvalidOrder(self.alpha));
        }
        if let Measure::Observable(m) = &self.measure {
            let d = self.register.dim();
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::DimensionMismatch(format!("{}x{} observable for dimension {d}", m.nrows(), m.ncols())));
            }
            let deviation = (m.as_ref() - m.adjoint()).iter().map(|e| e.norm()).fold(0.0, f64::max);
            if deviation.is_nan() || deviation > HERMITIAN_TOLERANCE {
                return Err(Error::InvalidObservable(deviation));
            }
        }
        Ok(())
    }

    /// Tag such as `N_2/q2/n1`.
    pub fn tag(&self) -> String {
        format!("{}/{}", self.measure.name(self.alpha), self.register.tag())
    }

    pub fn support(&self) -> Support {
        let d = self.register.dim() as f64;
        let single_qubit = self.register.dim() == 2;
        let a = self.alpha;
        let n_min = 3f64.powf(1.0 - a);
        match &self.measure {
            Measure::NAlpha if single_qubit => Support { lo: n_min, hi: 1.0, exact: true },
            Measure::XiAlpha if single_qubit => Support { lo: 0.5 * (1.0 + n_min), hi: 1.0, exact: true },
            Measure::MAlpha if single_qubit => Support {
                lo: 0.0,
                hi: sre_from_xi(0.5 * (1.0 + n_min), a),
                exact: true,
            },
            Measure::NAlpha => Support { lo: 0.0, hi: d - 1.0, exact: false },
            Measure::XiAlpha => Support { lo: 0.0, hi: 1.0, exact: false },
            Measure::MAlpha => Support { lo: 0.0, hi: f64::INFINITY, exact: false },
            Measure::Coherence => Support { lo: 0.0, hi: d - 1.0, exact: single_qubit },
            Measure::Observable(m) => {
                let eig = m.as_ref().clone().symmetric_eigenvalues();
                let lo = eig.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                Support { lo, hi, exact: true }
            }
        }
    }

    pub fn chunks(&self) -> u64 {
        self.n_samples.div_ceil(CHUNK_SIZE)
    }

    fn chunk_len(&self, chunk: u64) -> usize {
        (self.n_samples - chunk * CHUNK_SIZE).min(CHUNK_SIZE) as usize
    }
}

/// Per-worker buffers for evaluating a measure on fresh Haar states.
struct Evaluator<'a> {
    config: &'a SamplerConfig,
    support: Support,
    amplitudes: Vec<C64>,
    spectrum: Vec<f64>,
    scratch: Vec<C64>,
}

impl<'a> Evaluator<'a> {
    fn new(config: &'a SamplerConfig, support: Support) -> Self {
        Self {
            config,
            support,
            amplitudes: vec![C64::new(0.0, 0.0); config.register.dim()],
            spectrum: Vec::new(),
            scratch: Vec::new(),
        }
    }

    fn n_alpha(&mut self) -> f64 {
        if self.config.register.is_qubits() {
            fast_spectrum_into(&self.amplitudes, &mut self.spectrum, &mut self.scratch);
        } else {
            weyl_spectrum_into(&self.amplitudes, &mut self.spectrum);
        }
        power_sum(&self.spectrum, self.config.alpha)
    }

    fn raw_value(&mut self) -> f64 {
        let d = self.config.register.dim();
        let alpha = self.config.alpha;
        match &self.config.measure {
            Measure::NAlpha => self.n_alpha(),
            Measure::XiAlpha => xi_from_n(self.n_alpha(), d),
            Measure::MAlpha => sre_from_xi(xi_from_n(self.n_alpha(), d), alpha),
            Measure::Coherence => coherence_from_amplitudes(&self.amplitudes),
            Measure::Observable(m) => expectation_unchecked(&self.amplitudes, m),
        }
    }

    fn sample<R: rand::Rng + ?Sized>(&mut self, rng: &mut R) -> Result<f64> {
        fill_haar_amplitudes(rng, &mut self.amplitudes);
        let v = self.raw_value();
        let Support { lo, hi, exact } = self.support;
        let slack = SUPPORT_SLACK * lo.abs().max(hi.abs()).max(1.0);
        if v >= lo && v <= hi {
            Ok(v)
        } else if v >= lo - slack && v <= hi + slack {
            Ok(v.clamp(lo, hi))
        } else if exact || v.is_nan() {
            Err(Error::SupportViolation { measure: self.config.tag(), value: v, lo, hi })
        } else {
            warn!("sample {v} of {} lies outside [{lo}, {hi}]", self.config.tag());
            Ok(v)
        }
    }
}

fn run_chunk(config: &SamplerConfig, support: Support, chunk: u64, out: &mut Vec<f64>) -> Result<()> {
    let mut rng = SeededRng::new(config.seed, chunk).generator();
    let mut eval = Evaluator::new(config, support);
    out.clear();
    for _ in 0..config.chunk_len(chunk) {
        out.push(eval.sample(&mut rng)?);
    }
    Ok(())
}

/// All samples in stream order.
pub fn sample_measure(config: &SamplerConfig) -> Result<Vec<f64>> {
    config.validate()?;
    let support = config.support();
    let chunks: Vec<Vec<f64>> = (0..config.chunks())
        .into_par_iter()
        .map(|chunk| {
            let mut out = Vec::with_capacity(CHUNK_SIZE as usize);
            run_chunk(config, support, chunk, &mut out).map(|_| out)
        })
        .collect::<Result<_>>()?;
    Ok(chunks.concat())
}

/// Streams samples straight into a histogram over `edges` without storing
/// them. Samples outside `edges` are tallied as out of range; for measures
/// with an exact support, a sample outside the support is an error.
pub fn sample_histogram(config: &SamplerConfig, edges: Vec<f64>) -> Result<Histogram> {
    config.validate()?;
    let support = config.support();
    let template = Histogram::new(edges)?.with_provenance(config.seed, config.tag());
    let bins = template.bins();
    let (counts, out_of_range) = (0..config.chunks())
        .into_par_iter()
        .try_fold(
            || (vec![0u64; bins], 0u64, Vec::with_capacity(CHUNK_SIZE as usize)),
            |(mut counts, mut outside, mut buf), chunk| {
                run_chunk(config, support, chunk, &mut buf)?;
                for &v in &buf {
                    match template.bin_index(v) {
                        Some(i) => counts[i] += 1,
                        None => outside += 1,
                    }
                }
                Ok::<_, Error>((counts, outside, buf))
            },
        )
        .map(|r| r.map(|(c, o, _)| (c, o)))
        .try_reduce(
            || (vec![0u64; bins], 0u64),
            |(mut a, oa), (b, ob)| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                Ok((a, oa + ob))
            },
        )?;
    if out_of_range > 0 {
        info!("{out_of_range} of {} samples of {} fell outside the histogram range", config.n_samples, config.tag());
    }
    let mut h = template;
    h.add_counts(&counts, config.n_samples, out_of_range);
    Ok(h)
}

/// Streaming mean and standard error of the mean.
pub fn sample_mean(config: &SamplerConfig) -> Result<(f64, f64)> {
    config.validate()?;
    let support = config.support();
    // per-chunk sums in stream order keep the result independent of threading
    let partial: Vec<(f64, f64)> = (0..config.chunks())
        .into_par_iter()
        .map(|chunk| {
            let mut buf = Vec::with_capacity(CHUNK_SIZE as usize);
            run_chunk(config, support, chunk, &mut buf)?;
            Ok((buf.iter().sum::<f64>(), buf.iter().map(|v| v * v).sum::<f64>()))
        })
        .collect::<Result<_>>()?;
    let n = config.n_samples as f64;
    let sum: f64 = partial.iter().map(|p| p.0).sum();
    let sum_sq: f64 = partial.iter().map(|p| p.1).sum();
    let mean = sum / n;
    let variance = if config.n_samples > 1 { ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
    Ok((mean, (variance / n).sqrt()))
}

/// Largest density after building `bins` uniform bins over `range`, and
/// again with twice the samples and twice the bins. Returns
/// `(peak, refined_peak)`.
pub fn peak_density_refinement(config: &SamplerConfig, range: (f64, f64), bins: usize) -> Result<(f64, f64)> {
    let coarse = sample_histogram(config, uniform_edges(range.0, range.1, bins)?)?;
    let doubled = SamplerConfig { n_samples: 2 * config.n_samples, ..config.clone() };
    let fine = sample_histogram(&doubled, uniform_edges(range.0, range.1, 2 * bins)?)?;
    Ok((coarse.max_density_bin().1, fine.max_density_bin().1))
}
