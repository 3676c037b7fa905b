//! The single-qubit Clifford group modulo phase.
//!
//! The 24 elements are enumerated as `F_i * S^k` with `i in 0..6`, `k in 0..4`,
//! at index `4 * i + k`, where the six cosets representatives
//!
//! | i | F_i      | image of Z |
//! |---|----------|------------|
//! | 0 | I        | +Z         |
//! | 1 | H        | +X         |
//! | 2 | S H      | +Y         |
//! | 3 | S S H    | -X         |
//! | 4 | S S S H  | -Y         |
//! | 5 | H S S H  | -Z         |
//!
//! fix where `Z` is sent and `S^k` (which commutes with `Z`) fixes where `X`
//! goes. Index 0 is the identity.

use nalgebra::{DMatrix, Matrix2};
use rand::Rng;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::C64;

pub type Mat2 = Matrix2<C64>;

pub const GROUP_ORDER: usize = 24;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity() -> Mat2 {
    Mat2::identity()
}

pub fn pauli_x() -> Mat2 {
    Mat2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
}

pub fn pauli_y() -> Mat2 {
    Mat2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0))
}

pub fn pauli_z() -> Mat2 {
    Mat2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0))
}

/// `[X, Y, Z]`.
pub fn paulis() -> [Mat2; 3] {
    [pauli_x(), pauli_y(), pauli_z()]
}

pub fn hadamard() -> Mat2 {
    let h = FRAC_1_SQRT_2;
    Mat2::new(c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0))
}

pub fn phase_s() -> Mat2 {
    Mat2::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0))
}

/// All 24 elements in the documented order.
pub fn single_qubit_cliffords() -> Vec<Mat2> {
    let h = hadamard();
    let s = phase_s();
    let cosets = [
        identity(),
        h,
        s * h,
        s * s * h,
        s * s * s * h,
        h * s * s * h,
    ];
    let mut out = Vec::with_capacity(GROUP_ORDER);
    for f in cosets {
        let mut power = identity();
        for _ in 0..4 {
            out.push(f * power);
            power *= s;
        }
    }
    out
}

pub fn clifford_by_index(index: usize) -> Option<Mat2> {
    single_qubit_cliffords().get(index).copied()
}

/// Uniform draw from the 24-element group.
pub fn random_single_qubit_clifford<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let index = rng.random_range(0..GROUP_ORDER);
    single_qubit_cliffords()[index]
}

/// Copies a 2x2 matrix into a dynamically sized one, for use with
/// [`crate::PureState::apply`].
pub fn to_dynamic(m: &Mat2) -> DMatrix<C64> {
    DMatrix::from_fn(2, 2, |i, j| m[(i, j)])
}

/// If `m` equals `sign * P` for one of the Pauli matrices up to `tol`,
/// returns `(axis, sign)` with axis 0, 1, 2 for X, Y, Z.
pub fn as_signed_pauli(m: &Mat2, tol: f64) -> Option<(usize, f64)> {
    for (axis, p) in paulis().iter().enumerate() {
        for sign in [1.0, -1.0] {
            if (m - p * c(sign, 0.0)).iter().all(|e| e.norm() <= tol) {
                return Some((axis, sign));
            }
        }
    }
    None
}

/// Signed permutation matrix `R` with `U (n.sigma) U^dag = (R n).sigma`.
pub fn bloch_rotation(u: &Mat2, tol: f64) -> Option<[[f64; 3]; 3]> {
    let mut r = [[0.0; 3]; 3];
    for (j, p) in paulis().iter().enumerate() {
        let image = u * p * u.adjoint();
        let (axis, sign) = as_signed_pauli(&image, tol)?;
        r[axis][j] = sign;
    }
    Some(r)
}
