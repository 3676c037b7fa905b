//! Exact single-qubit results: the density of `N_2` and its images under
//! the changes of variable to `Xi_2` and `M_2`, critical points of
//! `N_alpha`, the mean entropy, the characteristic function, and the
//! coherence and observable densities.

pub mod ancillary;
pub mod critical;
pub mod curve;
pub mod fourier;
pub mod n2;

pub use ancillary::{cdf_coherence, mean_sre_exact, mean_sre_integrand, pdf_coherence, pdf_observable};
pub use critical::{critical_points, ClassLabel, CriticalPoint};
pub use curve::{graded_grid, ExactDensity, PdfCurve, PdfVariable};
pub use fourier::{characteristic_function_n2, FourierInversion};
pub use n2::{
    m2_log_model, m2_support, n2_log_model, normalization_m2, normalization_n2, pdf_m, pdf_n2_exact, pdf_xi,
    saddle_value, xi2_log_model, LogModel, Roots2, DIVERGENCE_COEFFICIENT, N2_SUPPORT, NORMALIZATION_WINDOW,
    SINGULAR_GUARD, XI2_SUPPORT,
};
