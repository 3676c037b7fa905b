//! Pure states of a qubit register or of a single qudit.
//!
//! Amplitudes are stored in the computational basis with site 0 as the most
//! significant digit of the composite index. Every constructor fixes the
//! global phase so that the first nonzero amplitude is real and positive,
//! which makes amplitude-wise equality meaningful.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Tolerance on the squared norm accepted by [`PureState::new`].
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Tolerance on `|n|^2 - 1` accepted by [`PureState::from_bloch`].
pub const BLOCH_TOLERANCE: f64 = 1e-10;

/// Amplitudes with squared modulus below this are treated as zero when the
/// global phase is fixed.
const PHASE_CUTOFF: f64 = 1e-24;

/// Shape of a register: `num_sites` sites of local dimension `local_dim`.
///
/// Registers with `local_dim > 2` are restricted to a single site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Register {
    pub local_dim: usize,
    pub num_sites: usize,
}

impl Register {
    pub fn new(local_dim: usize, num_sites: usize) -> Result<Self> {
        if local_dim < 2 {
            return Err(Error::InvalidDimension(format!(
                "local dimension {local_dim} must be at least 2"
            )));
        }
        if num_sites < 1 {
            return Err(Error::InvalidDimension("register needs at least one site".into()));
        }
        if local_dim > 2 && num_sites != 1 {
            return Err(Error::InvalidDimension(format!(
                "qudit registers (q = {local_dim}) are limited to one site, got {num_sites}"
            )));
        }
        if num_sites >= usize::BITS as usize || local_dim.checked_pow(num_sites as u32).is_none() {
            return Err(Error::ResourceLimit(format!(
                "{local_dim}^{num_sites} amplitudes do not fit in memory"
            )));
        }
        Ok(Self {
            local_dim,
            num_sites,
        })
    }

    pub fn qubits(num_sites: usize) -> Result<Self> {
        Self::new(2, num_sites)
    }

    pub fn qudit(local_dim: usize) -> Result<Self> {
        Self::new(local_dim, 1)
    }

    /// Interprets a bare Hilbert-space dimension: powers of two are qubit
    /// registers, anything else a single qudit.
    pub fn from_dim(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(format!("dimension {d} must be at least 2")));
        }
        if d.is_power_of_two() {
            Self::qubits(d.trailing_zeros() as usize)
        } else {
            Self::qudit(d)
        }
    }

    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.num_sites as u32)
    }

    pub fn is_qubits(&self) -> bool {
        self.local_dim == 2
    }

    /// Short tag such as `q2/n1`.
    pub fn tag(&self) -> String {
        format!("q{}/n{}", self.local_dim, self.num_sites)
    }
}

/// Point on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// Rescales to unit length. Fails on the zero vector or non-finite input.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm_sqr().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidBlochVector {
                x: self.x,
                y: self.y,
                z: self.z,
            });
        }
        Ok(Self::new(self.x / norm, self.y / norm, self.z / norm))
    }

    /// Polar angle measured from +z.
    pub fn polar_angle(&self) -> f64 {
        self.z.clamp(-1.0, 1.0).acos()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        (dx * dx + dy * dy + dz * dz).sqrt()
    }
}

impl From<[f64; 3]> for BlochVector {
    fn from(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    amplitudes: Vec<C64>,
    register: Register,
}

impl PureState {
    /// Wraps already-normalized amplitudes. The squared norm must be within
    /// [`NORM_TOLERANCE`] of one.
    pub fn new(amplitudes: Vec<C64>, register: Register) -> Result<Self> {
        check_length(&amplitudes, register)?;
        let norm_sqr = squared_norm(&amplitudes);
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm_sqr));
        }
        let mut state = Self {
            amplitudes,
            register,
        };
        state.fix_phase();
        Ok(state)
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn from_unnormalized(mut amplitudes: Vec<C64>, register: Register) -> Result<Self> {
        check_length(&amplitudes, register)?;
        let norm_sqr = squared_norm(&amplitudes);
        if !norm_sqr.is_finite() || norm_sqr == 0.0 {
            return Err(Error::NotNormalized(norm_sqr));
        }
        let scale = norm_sqr.sqrt().recip();
        amplitudes.iter_mut().for_each(|a| *a *= scale);
        let mut state = Self {
            amplitudes,
            register,
        };
        state.fix_phase();
        Ok(state)
    }

    /// Computational basis state `|index>`.
    pub fn basis(register: Register, index: usize) -> Result<Self> {
        let d = register.dim();
        if index >= d {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {d}"
            )));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); d];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self {
            amplitudes,
            register,
        })
    }

    /// Single-qubit state with density matrix `(1 + n.sigma) / 2`.
    pub fn from_bloch(b: BlochVector) -> Result<Self> {
        let finite = b.x.is_finite() && b.y.is_finite() && b.z.is_finite();
        if !finite || (b.norm_sqr() - 1.0).abs() > BLOCH_TOLERANCE {
            return Err(Error::InvalidBlochVector {
                x: b.x,
                y: b.y,
                z: b.z,
            });
        }
        // cos(theta/2) = sqrt((1+z)/2) and 2 cos(theta/2) sin(theta/2) e^{i phi} = x + i y.
        let c = ((1.0 + b.z) / 2.0).max(0.0).sqrt();
        let amplitudes = if c > 1e-8 {
            vec![C64::new(c, 0.0), C64::new(b.x, b.y) / (2.0 * c)]
        } else {
            let s = ((1.0 - b.z) / 2.0).max(0.0).sqrt();
            let transverse = b.x.hypot(b.y);
            let phase = if transverse > 0.0 {
                C64::new(b.x, b.y) / transverse
            } else {
                C64::new(1.0, 0.0)
            };
            vec![C64::new(c, 0.0), phase * s]
        };
        Self::from_unnormalized(amplitudes, Register::qubits(1)?)
    }

    /// Bloch vector `(<X>, <Y>, <Z>)` of a single qubit.
    pub fn to_bloch(&self) -> Result<BlochVector> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "Bloch vector needs a single qubit, state has dimension {}",
                self.dim()
            )));
        }
        let (a0, a1) = (self.amplitudes[0], self.amplitudes[1]);
        let off = a0.conj() * a1;
        Ok(BlochVector::new(
            2.0 * off.re,
            2.0 * off.im,
            a0.norm_sqr() - a1.norm_sqr(),
        ))
    }

    /// Kronecker product; site 0 of `self` is the most significant digit.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.register.local_dim != other.register.local_dim {
            return Err(Error::DimensionMismatch(format!(
                "cannot tensor local dimensions {} and {}",
                self.register.local_dim, other.register.local_dim
            )));
        }
        let register = Register::new(
            self.register.local_dim,
            self.register.num_sites + other.register.num_sites,
        )?;
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        let mut state = Self {
            amplitudes,
            register,
        };
        state.fix_phase();
        Ok(state)
    }

    /// Applies a `d x d` matrix and renormalizes.
    pub fn apply(&self, unitary: &DMatrix<C64>) -> Result<Self> {
        let d = self.dim();
        if unitary.nrows() != d || unitary.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}, state has dimension {d}",
                unitary.nrows(),
                unitary.ncols()
            )));
        }
        let amplitudes = (0..d)
            .map(|i| (0..d).map(|j| unitary[(i, j)] * self.amplitudes[j]).sum())
            .collect();
        Self::from_unnormalized(amplitudes, self.register)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn register(&self) -> Register {
        self.register
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn local_dim(&self) -> usize {
        self.register.local_dim
    }

    pub fn num_sites(&self) -> usize {
        self.register.num_sites
    }

    /// `|<i|psi>|^2`.
    pub fn probability(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }

    fn fix_phase(&mut self) {
        fix_global_phase(&mut self.amplitudes);
    }
}

/// Rotates the global phase so the first non-negligible amplitude is real
/// and positive.
pub fn fix_global_phase(amplitudes: &mut [C64]) {
    if let Some(lead) = amplitudes.iter().find(|a| a.norm_sqr() > PHASE_CUTOFF) {
        let phase = lead.conj() / lead.norm();
        amplitudes.iter_mut().for_each(|a| *a *= phase);
        if let Some(lead) = amplitudes.iter_mut().find(|a| a.norm_sqr() > PHASE_CUTOFF) {
            lead.im = 0.0;
        }
    }
}

fn squared_norm(amplitudes: &[C64]) -> f64 {
    amplitudes.iter().map(|a| a.norm_sqr()).sum()
}

fn check_length(amplitudes: &[C64], register: Register) -> Result<()> {
    if amplitudes.len() != register.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} amplitudes for a register of dimension {}",
            amplitudes.len(),
            register.dim()
        )));
    }
    Ok(())
}

/// Fills `out` with a Haar-random unit vector: independent complex Gaussian
/// entries, normalized. The global phase is left as drawn.
pub fn fill_haar_amplitudes<R: Rng + ?Sized>(rng: &mut R, out: &mut [C64]) {
    loop {
        let mut norm_sqr = 0.0;
        for a in out.iter_mut() {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *a = C64::new(re, im);
            norm_sqr += re * re + im * im;
        }
        // Only an all-zero draw is rejected.
        if norm_sqr > 0.0 {
            let scale = norm_sqr.sqrt().recip();
            out.iter_mut().for_each(|a| *a *= scale);
            return;
        }
    }
}

/// Draws a state from the unitarily invariant measure on the register.
pub fn haar_sample<R: Rng + ?Sized>(register: Register, rng: &mut R) -> Result<PureState> {
    let d = register.dim();
    if d < 2 {
        return Err(Error::InvalidDimension(format!("dimension {d} must be at least 2")));
    }
    let mut amplitudes = vec![C64::new(0.0, 0.0); d];
    fill_haar_amplitudes(rng, &mut amplitudes);
    fix_global_phase(&mut amplitudes);
    Ok(PureState {
        amplitudes,
        register,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::SeededRng;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn bloch_z_is_ket_zero() {
        let s = PureState::from_bloch(BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn bloch_h_state() {
        let s = PureState::from_bloch(BlochVector::new(FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2)).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0].re, FRAC_PI_8.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].re, FRAC_PI_8.sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn bloch_x_is_plus() {
        let s = PureState::from_bloch(BlochVector::new(1.0, 0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0].re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].re, FRAC_1_SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn bloch_south_pole() {
        let s = PureState::from_bloch(BlochVector::new(0.0, 0.0, -1.0)).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0].norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitudes()[1].re, 1.0, epsilon = 1e-15);
        let b = s.to_bloch().unwrap();
        assert_abs_diff_eq!(b.z, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn off_sphere_bloch_rejected() {
        let err = PureState::from_bloch(BlochVector::new(0.5, 0.0, 0.5)).unwrap_err();
        assert!(matches!(err, Error::InvalidBlochVector { .. }));
        assert!(PureState::from_bloch(BlochVector::new(f64::NAN, 0.0, 1.0)).is_err());
    }

    #[test]
    fn to_bloch_examples() {
        let zero = PureState::basis(Register::qubits(1).unwrap(), 0).unwrap();
        let b = zero.to_bloch().unwrap();
        assert_eq!(b.components(), [0.0, 0.0, 1.0]);

        let h = PureState::new(
            vec![c(FRAC_1_SQRT_2, 0.0), C64::from_polar(FRAC_1_SQRT_2, FRAC_PI_4)],
            Register::qubits(1).unwrap(),
        )
        .unwrap();
        let b = h.to_bloch().unwrap();
        assert_abs_diff_eq!(b.x, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(b.y, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(b.z, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn to_bloch_rejects_larger_states() {
        let s = PureState::basis(Register::qubits(2).unwrap(), 0).unwrap();
        assert!(matches!(s.to_bloch(), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn haar_bloch_vectors_are_unit() {
        let mut rng = SeededRng::new(1, 0).generator();
        for _ in 0..200 {
            let s = haar_sample(Register::qubits(1).unwrap(), &mut rng).unwrap();
            assert_abs_diff_eq!(s.to_bloch().unwrap().norm_sqr(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn tensor_of_basis_states() {
        let zero = PureState::basis(Register::qubits(1).unwrap(), 0).unwrap();
        let zz = zero.tensor(&zero).unwrap();
        let expected = [1.0, 0.0, 0.0, 0.0];
        for (a, e) in zz.amplitudes().iter().zip(expected) {
            assert_eq!(a.re, e);
            assert_eq!(a.im, 0.0);
        }
        assert_eq!(zz.num_sites(), 2);
    }

    #[test]
    fn tensor_ordering_site0_most_significant() {
        let zero = PureState::basis(Register::qubits(1).unwrap(), 0).unwrap();
        let one = PureState::basis(Register::qubits(1).unwrap(), 1).unwrap();
        // |0> (x) |1> = |01> = index 1.
        assert_eq!(zero.tensor(&one).unwrap().probability(1), 1.0);
        assert_eq!(one.tensor(&zero).unwrap().probability(2), 1.0);
    }

    #[test]
    fn tensor_rejects_mixed_local_dims() {
        let q = PureState::basis(Register::qubits(1).unwrap(), 0).unwrap();
        let t = PureState::basis(Register::qudit(3).unwrap(), 0).unwrap();
        assert!(matches!(q.tensor(&t), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn haar_rejects_tiny_registers() {
        assert!(Register::new(1, 1).is_err());
        assert!(Register::from_dim(1).is_err());
        assert!(Register::new(3, 2).is_err());
    }

    #[test]
    fn new_requires_normalization() {
        let r = Register::qubits(1).unwrap();
        assert!(matches!(
            PureState::new(vec![c(1.0, 0.0), c(1.0, 0.0)], r),
            Err(Error::NotNormalized(_))
        ));
        assert!(PureState::from_unnormalized(vec![c(0.0, 0.0), c(0.0, 0.0)], r).is_err());
        let s = PureState::from_unnormalized(vec![c(0.0, 3.0), c(4.0, 0.0)], r).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0].re, 0.6, epsilon = 1e-15);
        assert_eq!(s.amplitudes()[0].im, 0.0);
    }

    #[test]
    fn register_from_dim() {
        assert_eq!(Register::from_dim(8).unwrap(), Register::qubits(3).unwrap());
        assert_eq!(Register::from_dim(3).unwrap(), Register::qudit(3).unwrap());
    }
}
