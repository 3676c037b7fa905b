//! All Pauli (or Weyl-Heisenberg) expectation moduli of a pure state.
//!
//! A spectrum holds `|<psi|X^a Z^b|psi>|^2` for every `(a, b) != (0, 0)`,
//! stored row-major over `(a, b)`: entry `a * d + b - 1`. For qubit
//! registers `a` and `b` are bit masks over the composite index (site 0 is
//! the most significant bit); for a single qudit they are integers mod `q`.
//! Phases are discarded; every downstream quantity only needs the moduli.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::statevec::{PureState, Register};
use crate::{Error, Result, C64};

/// Largest register accepted by [`pauli_spectrum_fast`].
pub const MAX_FAST_QUBITS: usize = 14;

/// Largest register accepted by [`pauli_spectrum_naive`].
pub const MAX_NAIVE_QUBITS: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliSpectrum {
    values: Vec<f64>,
    register: Register,
}

impl PauliSpectrum {
    pub fn from_values(values: Vec<f64>, register: Register) -> Result<Self> {
        let d = register.dim();
        if values.len() != d * d - 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} spectrum entries for dimension {d}",
                values.len()
            )));
        }
        Ok(Self { values, register })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn register(&self) -> Register {
        self.register
    }

    pub fn dim(&self) -> usize {
        self.register.dim()
    }

    /// Entry for `X^a Z^b`; the identity `(0, 0)` returns 1.
    pub fn get(&self, a: usize, b: usize) -> f64 {
        let d = self.dim();
        assert!(a < d && b < d, "Pauli index ({a}, {b}) out of range");
        match a * d + b {
            0 => 1.0,
            k => self.values[k - 1],
        }
    }

    /// Sum of all non-identity entries; equals `d - 1` for a pure state.
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `sum_P |<P>|^(2 alpha)` over non-identity `P`.
    pub fn power_sum(&self, alpha: f64) -> f64 {
        power_sum(&self.values, alpha)
    }
}

pub(crate) fn power_sum(values: &[f64], alpha: f64) -> f64 {
    if alpha == 2.0 {
        values.iter().map(|v| v * v).sum()
    } else {
        values.iter().map(|v| v.powf(alpha)).sum()
    }
}

/// In-place unnormalized Walsh-Hadamard transform; `data.len()` must be a power of two.
pub fn fwht(data: &mut [C64]) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for block in data.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let (a, b) = (*u, *v);
                *u = a + b;
                *v = a - b;
            }
        }
        h *= 2;
    }
}

fn qubit_count(state: &PureState) -> Result<usize> {
    if state.local_dim() != 2 {
        return Err(Error::UseWeylPath(state.local_dim()));
    }
    Ok(state.num_sites())
}

/// All `4^n - 1` moduli in `O(4^n n)`.
///
/// For each X-mask `a`, `w_a(x) = conj(psi(x ^ a)) psi(x)` and its
/// Walsh-Hadamard transform at `b` is `<psi|X^a Z^b|psi>`.
pub fn pauli_spectrum_fast(state: &PureState) -> Result<PauliSpectrum> {
    let n = qubit_count(state)?;
    if n > MAX_FAST_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "{n} qubits exceeds the fast-spectrum limit of {MAX_FAST_QUBITS}"
        )));
    }
    let mut values = Vec::new();
    let mut scratch = Vec::new();
    fast_spectrum_into(state.amplitudes(), &mut values, &mut scratch);
    PauliSpectrum::from_values(values, state.register())
}

/// Buffer-reusing kernel behind [`pauli_spectrum_fast`]; `amplitudes.len()`
/// must be a power of two.
pub(crate) fn fast_spectrum_into(amplitudes: &[C64], out: &mut Vec<f64>, scratch: &mut Vec<C64>) {
    let d = amplitudes.len();
    out.clear();
    out.reserve(d * d - 1);
    scratch.resize(d, C64::new(0.0, 0.0));
    for a in 0..d {
        for (x, w) in scratch.iter_mut().enumerate() {
            *w = amplitudes[x ^ a].conj() * amplitudes[x];
        }
        fwht(scratch);
        let start = usize::from(a == 0);
        out.extend(scratch[start..].iter().map(|v| v.norm_sqr()));
    }
}

#[derive(Clone, Copy)]
enum SiteOp {
    I,
    X,
    Y,
    Z,
}

impl SiteOp {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => SiteOp::I,
            (true, false) => SiteOp::X,
            (true, true) => SiteOp::Y,
            (false, true) => SiteOp::Z,
        }
    }

    /// `(target bit, coefficient)` for the single-site action on basis bit `bit`.
    fn act(self, bit: usize) -> (usize, C64) {
        let one = C64::new(1.0, 0.0);
        match self {
            SiteOp::I => (bit, one),
            SiteOp::X => (bit ^ 1, one),
            // Y|0> = i|1>, Y|1> = -i|0>
            SiteOp::Y => (bit ^ 1, if bit == 0 { C64::new(0.0, 1.0) } else { C64::new(0.0, -1.0) }),
            SiteOp::Z => (bit, if bit == 0 { one } else { -one }),
        }
    }
}

/// Direct evaluation of every Pauli string, site by site, in `O(8^n n)`.
///
/// Independent of the transform in [`pauli_spectrum_fast`]; the string with
/// masks `(a, b)` carries `X`, `Y` or `Z` on each site according to its bits
/// (Y where both are set), which changes only phases.
pub fn pauli_spectrum_naive(state: &PureState) -> Result<PauliSpectrum> {
    let n = qubit_count(state)?;
    if n > MAX_NAIVE_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "{n} qubits exceeds the naive-spectrum limit of {MAX_NAIVE_QUBITS}"
        )));
    }
    let psi = state.amplitudes();
    let d = psi.len();
    let mut values = Vec::with_capacity(d * d - 1);
    let mut image = vec![C64::new(0.0, 0.0); d];
    for a in 0..d {
        for b in 0..d {
            if a == 0 && b == 0 {
                continue;
            }
            let ops: Vec<SiteOp> = (0..n)
                .map(|site| {
                    let shift = n - 1 - site;
                    SiteOp::from_bits((a >> shift) & 1 == 1, (b >> shift) & 1 == 1)
                })
                .collect();
            image.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
            for (x, amp) in psi.iter().enumerate() {
                let mut target = 0usize;
                let mut coeff = C64::new(1.0, 0.0);
                for (site, op) in ops.iter().enumerate() {
                    let shift = n - 1 - site;
                    let (bit, c) = op.act((x >> shift) & 1);
                    target |= bit << shift;
                    coeff *= c;
                }
                image[target] += coeff * amp;
            }
            let expectation: C64 = psi.iter().zip(&image).map(|(p, q)| p.conj() * q).sum();
            values.push(expectation.norm_sqr());
        }
    }
    PauliSpectrum::from_values(values, state.register())
}

/// Displacement-operator moduli `|Tr(D_a psi)|^2` of a single qudit.
///
/// `D_a = w^(a1 a2 / 2) X^a1 Z^a2` with `X|k> = |k+1>`, `Z|k> = w^k |k>`,
/// `w = exp(2 pi i / q)`, and `w^(1/2)` fixed to `exp(i pi / q)`. The
/// prefactor is a pure phase, so the stored moduli are
/// `|sum_k psi(k) w^(a2 k) conj(psi(k + a1))|^2`.
pub fn weyl_spectrum(state: &PureState) -> Result<PauliSpectrum> {
    if state.num_sites() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "Weyl-Heisenberg spectrum needs a single site, got {}",
            state.num_sites()
        )));
    }
    let mut values = Vec::new();
    weyl_spectrum_into(state.amplitudes(), &mut values);
    PauliSpectrum::from_values(values, state.register())
}

pub(crate) fn weyl_spectrum_into(psi: &[C64], out: &mut Vec<f64>) {
    let q = psi.len();
    out.clear();
    out.reserve(q * q - 1);
    let roots: Vec<C64> = (0..q)
        .map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / q as f64))
        .collect();
    for a1 in 0..q {
        for a2 in 0..q {
            if a1 == 0 && a2 == 0 {
                continue;
            }
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..q {
                acc += psi[k] * roots[(a2 * k) % q] * psi[(k + a1) % q].conj();
            }
            out.push(acc.norm_sqr());
        }
    }
}

/// Dispatches to the fast Pauli path for qubits and the Weyl path for a qudit.
pub fn spectrum(state: &PureState) -> Result<PauliSpectrum> {
    if state.local_dim() == 2 {
        pauli_spectrum_fast(state)
    } else {
        weyl_spectrum(state)
    }
}
