//! First-order radiative level shifts of hydrogenic levels by
//! group-theoretic generating functions: closed-form matrix elements of
//! boosted time evolution, their spectral decomposition, and the two-fold
//! integral giving the Bethe logarithm and the level shift.

pub mod closed_form;
pub mod integral;
pub mod oracle;
pub mod series;

pub use closed_form::{
    closed_form_mnl, closed_form_mnl_dual, generating_function_coeffs, kernel_derivative,
    spectral_weights,
};
pub use integral::{
    bethe_log, inner_integral, outer_integrand, phi_cutoff, shift_integral, shift_mhz,
    two_s_two_p_splitting_mhz, BetheLog, ShiftIntegral,
};
pub use oracle::{
    ground_weight_form_a, ground_weight_form_b, ground_weight_matrix, matrix_mnl,
};
