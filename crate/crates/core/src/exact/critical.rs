//! Critical points of `N_alpha(n) = sum_j |n_j|^(2 alpha)` on the Bloch sphere.

use nalgebra::{Matrix2, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::measures::n_alpha_bloch;
use crate::statevec::BlochVector;
use crate::{Error, Result};

/// Eigenvalues of the constrained Hessian smaller than this in magnitude
/// are treated as zero.
pub const SIGNATURE_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassLabel {
    #[serde(rename = "C1_max")]
    C1Max,
    #[serde(rename = "C2_saddle")]
    C2Saddle,
    #[serde(rename = "C3_min")]
    C3Min,
}

impl ClassLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::C1Max => "C1_max",
            ClassLabel::C2Saddle => "C2_saddle",
            ClassLabel::C3Min => "C3_min",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub bloch: BlochVector,
    pub class_label: ClassLabel,
    pub value: f64,
    /// Size of the point's orbit under the symmetries of `N_alpha`.
    pub multiplicity: usize,
    pub gradient_norm: f64,
    pub hessian_eigenvalues: [f64; 2],
}

fn gradient(n: &Vector3<f64>, alpha: f64) -> Vector3<f64> {
    n.map(|c| 2.0 * alpha * c.signum() * c.abs().powf(2.0 * alpha - 1.0))
}

fn hessian(n: &Vector3<f64>, alpha: f64) -> Matrix3<f64> {
    Matrix3::from_diagonal(&n.map(|c| 2.0 * alpha * (2.0 * alpha - 1.0) * c.abs().powf(2.0 * alpha - 2.0)))
}

/// Orthonormal basis of the tangent plane at `n`.
fn tangent_basis(n: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let seed = if n.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let t1 = (seed - n * n.dot(&seed)).normalize();
    (t1, n.cross(&t1))
}

/// Projected gradient norm and the two eigenvalues of the Riemannian
/// Hessian `P (H - (n . grad) I) P` restricted to the tangent plane.
pub fn constrained_derivatives(b: &BlochVector, alpha: f64) -> (f64, [f64; 2]) {
    let n = Vector3::from(b.components());
    let g = gradient(&n, alpha);
    let projected = g - n * n.dot(&g);
    let shifted = hessian(&n, alpha) - Matrix3::identity() * n.dot(&g);
    let (t1, t2) = tangent_basis(&n);
    let h = Matrix2::new(
        t1.dot(&(shifted * t1)),
        t1.dot(&(shifted * t2)),
        t2.dot(&(shifted * t1)),
        t2.dot(&(shifted * t2)),
    );
    let eig = h.symmetric_eigenvalues();
    let (lo, hi) = if eig[0] <= eig[1] { (eig[0], eig[1]) } else { (eig[1], eig[0]) };
    (projected.norm(), [lo, hi])
}

fn classify(eigs: [f64; 2]) -> Option<ClassLabel> {
    let sign = |v: f64| {
        if v > SIGNATURE_THRESHOLD {
            Some(1)
        } else if v < -SIGNATURE_THRESHOLD {
            Some(-1)
        } else {
            None
        }
    };
    match (sign(eigs[0])?, sign(eigs[1])?) {
        (-1, -1) => Some(ClassLabel::C1Max),
        (1, 1) => Some(ClassLabel::C3Min),
        _ => Some(ClassLabel::C2Saddle),
    }
}

/// Candidate critical points: coordinate axes, two equal nonzero
/// components, three equal components, with every sign pattern.
fn candidates() -> Vec<BlochVector> {
    let mut out = Vec::with_capacity(26);
    for axis in 0..3 {
        for s in [1.0, -1.0] {
            let mut v = [0.0; 3];
            v[axis] = s;
            out.push(BlochVector::from(v));
        }
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for zero in (0..3).rev() {
        for s1 in [1.0, -1.0] {
            for s2 in [1.0, -1.0] {
                let mut v = [0.0; 3];
                let mut signs = [s1, s2].into_iter();
                for (axis, slot) in v.iter_mut().enumerate() {
                    if axis != zero {
                        *slot = h * signs.next().unwrap_or(1.0);
                    }
                }
                out.push(BlochVector::from(v));
            }
        }
    }
    let t = 1.0 / 3f64.sqrt();
    for bits in 0..8u8 {
        let s = |k: u8| if bits >> k & 1 == 0 { t } else { -t };
        out.push(BlochVector::new(s(2), s(1), s(0)));
    }
    out
}

/// All 26 critical points, classified by the signature of the constrained
/// Hessian rather than by construction.
pub fn critical_points(alpha: f64) -> Result<Vec<CriticalPoint>> {
    if !(alpha.is_finite() && alpha > 1.0) {
        return Err(Error::InvalidOrder(alpha));
    }
    let points = candidates();
    let mut out = Vec::with_capacity(points.len());
    for b in points {
        let (gradient_norm, eigs) = constrained_derivatives(&b, alpha);
        let class_label = classify(eigs).ok_or_else(|| {
            Error::InvalidArgument(format!("degenerate Hessian {eigs:?} at {b:?} for alpha {alpha}"))
        })?;
        out.push(CriticalPoint {
            bloch: b,
            class_label,
            value: n_alpha_bloch(&b, alpha),
            multiplicity: 0,
            gradient_norm,
            hessian_eigenvalues: eigs,
        });
    }
    for i in 0..out.len() {
        let label = out[i].class_label;
        out[i].multiplicity = out.iter().filter(|p| p.class_label == label).count();
    }
    Ok(out)
}
