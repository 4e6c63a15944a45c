//! Independent matrix-mechanics checks of the generating-function closed
//! forms, using the truncated generator matrices directly.

use crate::algebra::{GenLabel, GeneratorSet};
use crate::error::{Error, Result};
use crate::expm::expm;
use num_complex::Complex64;

/// M_NL(s, phi) evaluated as a matrix element: restrict
/// cosh(phi) Gamma0 - sinh(phi) Gamma4 to the (l = L, m = 0) tower, take
/// exp(-s .) there, and read off the diagonal entry of the |N L 0) state.
///
/// Truncation error decays with the distance from N to n_max, so use
/// n_max >> N.
pub fn matrix_mnl(gens: &GeneratorSet, n: i64, l: i64, s: f64, phi: f64) -> Result<f64> {
    let basis = gens.basis();
    if n < 1 || l < 0 || l > n - 1 || n > basis.n_max() {
        return Err(Error::InvalidParameter(format!(
            "level (N, L) = ({n}, {l}) outside basis with n_max = {}",
            basis.n_max()
        )));
    }
    let tower = basis.tower(l, 0);
    let block = gens
        .get(GenLabel::Gamma0)
        .scale(Complex64::new(phi.cosh(), 0.0))
        .sub(&gens.get(GenLabel::Gamma4).scale(Complex64::new(phi.sinh(), 0.0)))
        .dense_block(&tower)
        * Complex64::new(-s, 0.0);
    let e = expm(&block);
    // tower states are ordered by n: |N l 0) sits at index N - l - 1
    let idx = (n - l - 1) as usize;
    Ok(e[(idx, idx)].re)
}

/// The two printed forms of the ground-state spectral weight
/// w_n(phi) for N = 1, L = 0, which must agree identically:
///   (a) 4 n tanh^{2(n-1)}(phi/2) / (1 + cosh phi)^2
///   (b) 4 n tanh^{2n}(phi/2) / (cosh^2 phi - 1)      (phi != 0)
pub fn ground_weight_form_a(n: i64, phi: f64) -> f64 {
    4.0 * n as f64 * (phi / 2.0).tanh().powi(2 * (n as i32 - 1)) / (1.0 + phi.cosh()).powi(2)
}

pub fn ground_weight_form_b(n: i64, phi: f64) -> f64 {
    4.0 * n as f64 * (phi / 2.0).tanh().powi(2 * n as i32) / (phi.cosh().powi(2) - 1.0)
}

/// The same weight measured on the generator matrices: the squared overlap
/// |(1 0 0| e^{i S phi} |n 0 0)|^2 of the ground state with a scale-changed
/// level-n s-state.
pub fn ground_weight_matrix(gens: &GeneratorSet, n: i64, phi: f64) -> Result<f64> {
    let basis = gens.basis();
    if n < 1 || n > basis.n_max() {
        return Err(Error::InvalidParameter(format!(
            "n = {n} outside basis with n_max = {}",
            basis.n_max()
        )));
    }
    let u = gens.scale_change_matrix(phi);
    let row = basis
        .offset(crate::basis::BasisIndex::new(1, 0, 0)?)
        .expect("ground state present");
    let col = basis
        .offset(crate::basis::BasisIndex::new(n, 0, 0)?)
        .expect("state present");
    Ok(u.get(row, col).norm_sqr())
}
