//! Closed-form evaluation of the generating-function matrix elements
//! M_NL(s, phi) = (NL| exp(-(cosh phi Gamma0 - sinh phi Gamma4) s) |NL).
//!
//! The generating function for the whole tower at fixed L is governed by the
//! pair d = cosh(s/2) + sinh(s/2) cosh(phi), b = cosh(s/2) - sinh(s/2)
//! cosh(phi); the auxiliary series y(w) solves y = (d + b w - w y)^{-1}
//! order by order in the bookkeeping variable w, and
//! M_NL = [w^N] sum_{k=L+1}^{N} (w y^2)^k.
//!
//! Everything is generic over the scalar type: f64 for plain evaluation,
//! dual numbers for d/ds, and Laurent series in y = e^{-s/2} to read off the
//! spectral decomposition M_NL(s) = sum_{j >= L+1} w_j e^{-j s}.

use crate::error::{Error, Result};
use crate::shift::series::{Dual, Laurent, Poly, Scalar};

fn check_level(n: i64, l: i64) -> Result<()> {
    if n < 1 || l < 0 || l > n - 1 {
        return Err(Error::InvalidParameter(format!(
            "invalid level (N, L) = ({n}, {l})"
        )));
    }
    Ok(())
}

/// The truncated series sum_{k=L+1} (w y^2)^k with y from the fixed-point
/// iteration; coefficient co[N] is M_NL.
pub fn mnl_poly<S: Scalar>(d: &S, b: &S, l: i64, order: usize) -> Poly<S> {
    let mut y = Poly::constant(d.inv(), order);
    // one order of w is fixed per iteration
    for _ in 0..=order + 1 {
        let q = Poly::constant(d.clone(), order)
            .add(&Poly::constant(b.clone(), order).sub(&y).times_w());
        y = q.inverse();
    }
    let x = y.mul(&y).times_w();
    // x^{l+1} + x^{l+2} + ... (terms beyond w^order vanish)
    let mut power = x.clone();
    for _ in 0..l {
        power = power.mul(&x);
    }
    let mut total = Poly::constant(S::zero(), order);
    for _ in (l + 1)..=(order as i64) {
        total = total.add(&power);
        power = power.mul(&x);
    }
    total
}

fn db_f64(s: f64, phi: f64) -> (f64, f64) {
    let (sh, ch) = ((s / 2.0).sinh(), (s / 2.0).cosh());
    let cphi = phi.cosh();
    (ch + sh * cphi, ch - sh * cphi)
}

/// M_NL(s, phi) by the generating-function closed form.
pub fn closed_form_mnl(n: i64, l: i64, s: f64, phi: f64) -> Result<f64> {
    check_level(n, l)?;
    if s < 0.0 {
        return Err(Error::InvalidParameter(format!("s must be >= 0, got {s}")));
    }
    let (d, b) = db_f64(s, phi);
    Ok(mnl_poly(&d, &b, l, n as usize).co[n as usize])
}

/// The sequence M_{L+1,L}, ..., M_{N_max,L} extracted from one expansion of
/// the generating function.
pub fn generating_function_coeffs(l: i64, s: f64, phi: f64, n_max: i64) -> Result<Vec<f64>> {
    if n_max < l + 1 {
        return Err(Error::InvalidParameter(format!(
            "N_max must be >= L + 1, got N_max = {n_max}, L = {l}"
        )));
    }
    check_level(n_max, l)?;
    let (d, b) = db_f64(s, phi);
    let total = mnl_poly(&d, &b, l, n_max as usize);
    Ok(total.co[(l + 1) as usize..=n_max as usize].to_vec())
}

/// M_NL and its s-derivative, via dual-number evaluation of the closed form.
pub fn closed_form_mnl_dual(n: i64, l: i64, s: f64, phi: f64) -> Result<Dual> {
    check_level(n, l)?;
    let sv = Dual::variable(s);
    let cphi = Dual::constant(phi.cosh());
    let (sh, ch) = (sv.scale(0.5).sinh(), sv.scale(0.5).cosh());
    let d = ch.add(&sh.mul(&cphi));
    let b = ch.sub(&sh.mul(&cphi));
    Ok(mnl_poly(&d, &b, l, n as usize).co[n as usize])
}

/// d/ds [sinh^2(s/2) M_NL(s)], the inner-integrand kernel of the radiative
/// shift, evaluated with dual numbers (no finite differencing).
pub fn kernel_derivative(n: i64, l: i64, s: f64, phi: f64) -> Result<f64> {
    let sv = Dual::variable(s);
    let sinh2 = sv.scale(0.5).sinh().mul(&sv.scale(0.5).sinh());
    let m = closed_form_mnl_dual(n, l, s, phi)?;
    Ok(sinh2.mul(&m).d)
}

/// Spectral weights w_j, j = L+1 .. k_max, of
/// M_NL(s) = sum_j w_j e^{-j s}, extracted by running the generating-function
/// iteration over Laurent series in y = e^{-s/2}:
/// d = cosh^2(phi/2) y^{-1} - sinh^2(phi/2) y and
/// b = -sinh^2(phi/2) y^{-1} + cosh^2(phi/2) y.
pub fn spectral_weights(n: i64, l: i64, phi: f64, k_max: i64) -> Result<Vec<f64>> {
    check_level(n, l)?;
    if k_max < l + 1 {
        return Err(Error::InvalidParameter(format!(
            "k_max must be >= L + 1, got {k_max}"
        )));
    }
    let c2 = (phi / 2.0).cosh().powi(2);
    let s2 = (phi / 2.0).sinh().powi(2);
    let pmax = 2 * k_max as i32 + 2;
    let d = Laurent::monomial(c2, -1, pmax).add(&Laurent::monomial(-s2, 1, pmax));
    let b = Laurent::monomial(-s2, -1, pmax).add(&Laurent::monomial(c2, 1, pmax));
    let m = &mnl_poly(&d, &b, l, n as usize).co[n as usize];
    Ok(((l + 1)..=k_max).map(|j| m.coeff(2 * j as i32)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Printed building blocks: A = 1/d^2 and
    /// A A_1 = 2 sinh^2(s/2) sinh^2(phi) / d^4.
    fn printed_a(s: f64, phi: f64) -> (f64, f64) {
        let (d, _) = db_f64(s, phi);
        let a = 1.0 / (d * d);
        let aa1 = 2.0 * (s / 2.0).sinh().powi(2) * phi.sinh().powi(2) / d.powi(4);
        (a, aa1)
    }

    #[test]
    fn scalar_pair_identities() {
        for (s, phi) in [(0.3, 0.0), (1.0, 0.7), (2.5, 1.8), (0.05, 3.0)] {
            let (d, b) = db_f64(s, phi);
            assert_relative_eq!(
                b - 1.0 / d,
                -(s / 2.0).sinh().powi(2) * phi.sinh().powi(2) / d,
                max_relative = 1e-11,
                epsilon = 1e-14
            );
            assert_relative_eq!(
                d * b,
                (s / 2.0).cosh().powi(2) - (s / 2.0).sinh().powi(2) * phi.cosh().powi(2),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn low_levels_match_printed_forms() {
        for (s, phi) in [(0.4, 0.0), (1.0, 0.5), (2.0, 1.3), (0.7, 2.4)] {
            let (a, aa1) = printed_a(s, phi);
            assert_relative_eq!(
                closed_form_mnl(1, 0, s, phi).unwrap(),
                a,
                max_relative = 1e-12
            );
            assert_relative_eq!(
                closed_form_mnl(2, 1, s, phi).unwrap(),
                a * a,
                max_relative = 1e-12
            );
            assert_relative_eq!(
                closed_form_mnl(2, 0, s, phi).unwrap(),
                a * a + aa1,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn ground_state_closed_form() {
        // M_10 = (cosh(s/2) + sinh(s/2) cosh phi)^{-2} and
        // sinh^2(s/2) M_10 = (coth(s/2) + cosh phi)^{-2}
        for (s, phi) in [(0.5, 0.9), (1.7, 0.2), (3.0, 2.0)] {
            let m = closed_form_mnl(1, 0, s, phi).unwrap();
            let sh = (s / 2.0_f64).sinh();
            assert_relative_eq!(
                sh * sh * m,
                ((s / 2.0_f64).tanh().recip() + phi.cosh()).powi(-2),
                max_relative = 1e-12
            );
        }
        // phi = 0: M_10 = e^{-s}
        for s in [0.1, 1.0, 4.0] {
            assert_relative_eq!(
                closed_form_mnl(1, 0, s, 0.0).unwrap(),
                (-s).exp(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn splitting_identity_n2() {
        // sinh^2(s/2) (M_20 - M_21) = 2 sinh^2(phi) (coth(s/2) + cosh phi)^{-4}
        for (s, phi) in [(0.6, 0.4), (1.2, 1.5), (2.2, 0.9)] {
            let m20 = closed_form_mnl(2, 0, s, phi).unwrap();
            let m21 = closed_form_mnl(2, 1, s, phi).unwrap();
            let sh2 = (s / 2.0_f64).sinh().powi(2);
            assert_relative_eq!(
                sh2 * (m20 - m21),
                2.0 * phi.sinh().powi(2)
                    * ((s / 2.0_f64).tanh().recip() + phi.cosh()).powi(-4),
                max_relative = 1e-11
            );
        }
    }

    #[test]
    fn normalization_and_slope() {
        for n in 1..=5_i64 {
            for l in 0..n {
                for phi in [0.0, 0.8, 2.1] {
                    assert_relative_eq!(
                        closed_form_mnl(n, l, 0.0, phi).unwrap(),
                        1.0,
                        max_relative = 1e-12
                    );
                    // dM/ds(0) = -N cosh phi
                    let d = closed_form_mnl_dual(n, l, 0.0, phi).unwrap();
                    assert_relative_eq!(d.d, -(n as f64) * phi.cosh(), max_relative = 1e-11);
                }
            }
        }
    }

    #[test]
    fn generating_coeffs_match_single_extraction() {
        let (s, phi) = (0.9, 1.1);
        for l in 0..=3_i64 {
            let coeffs = generating_function_coeffs(l, s, phi, 6).unwrap();
            for (i, c) in coeffs.iter().enumerate() {
                let n = l + 1 + i as i64;
                assert_relative_eq!(
                    *c,
                    closed_form_mnl(n, l, s, phi).unwrap(),
                    max_relative = 1e-10
                );
            }
        }
    }

    #[test]
    fn spectral_weights_reconstruct_mnl() {
        for (n, l) in [(1_i64, 0_i64), (2, 0), (2, 1), (4, 2)] {
            for phi in [0.3, 1.0] {
                let k_max = n + 40;
                let w = spectral_weights(n, l, phi, k_max).unwrap();
                for s in [0.8, 2.0] {
                    let direct = closed_form_mnl(n, l, s, phi).unwrap();
                    let summed: f64 = w
                        .iter()
                        .enumerate()
                        .map(|(i, wj)| wj * (-((l + 1 + i as i64) as f64) * s).exp())
                        .sum();
                    assert_relative_eq!(summed, direct, max_relative = 1e-8);
                }
            }
        }
    }

    #[test]
    fn ground_state_spectral_weights_closed_form() {
        // w_j(N=1) = j tanh^{2(j-1)}(phi/2) / cosh^4(phi/2)
        let phi = 1.4_f64;
        let t = (phi / 2.0).tanh().powi(2);
        let c4 = (phi / 2.0).cosh().powi(4);
        let w = spectral_weights(1, 0, phi, 8).unwrap();
        for (i, wj) in w.iter().enumerate() {
            let j = (i + 1) as f64;
            assert_relative_eq!(*wj, j * t.powi(i as i32) / c4, max_relative = 1e-12);
        }
    }

    #[test]
    fn rejects_invalid_levels() {
        assert!(closed_form_mnl(0, 0, 1.0, 1.0).is_err());
        assert!(closed_form_mnl(2, 2, 1.0, 1.0).is_err());
        assert!(closed_form_mnl(1, 0, -1.0, 1.0).is_err());
        assert!(spectral_weights(2, 1, 1.0, 1).is_err());
    }
}
