//! Special functions and quadrature rules used across the crate:
//! log-factorials, Gauss–Legendre and Gauss–Chebyshev nodes, Gegenbauer
//! polynomials, and 3D spherical harmonics.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::sync::OnceLock;

const LN_FACTORIAL_MAX: usize = 40_000;

fn ln_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACTORIAL_MAX + 1);
        t.push(0.0);
        for n in 1..=LN_FACTORIAL_MAX {
            let last = *t.last().unwrap();
            t.push(last + (n as f64).ln());
        }
        t
    })
}

/// ln(n!), exact-to-rounding for n up to 40 000 (covers Rydberg n ~ 1e4).
pub fn ln_factorial(n: usize) -> f64 {
    let table = ln_factorial_table();
    assert!(
        n <= LN_FACTORIAL_MAX,
        "ln_factorial supports n <= {LN_FACTORIAL_MAX}, got {n}"
    );
    table[n]
}

/// ln Gamma(m + 1/2) for integer m >= 0, via the exact closed form
/// Gamma(m + 1/2) = (2m)! sqrt(pi) / (4^m m!).
pub fn ln_gamma_half_integer(m: usize) -> f64 {
    let ln_pi = std::f64::consts::PI.ln();
    ln_factorial(2 * m) + 0.5 * ln_pi - (m as f64) * 4.0_f64.ln() - ln_factorial(m)
}

/// Gauss–Legendre nodes and weights on [-1, 1] (Newton iteration on the
/// three-term recurrence).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Initial guess (Abramowitz & Stegun 22.16.6).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x).
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Gauss–Legendre nodes and weights mapped to [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        x.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|t| t * half).collect(),
    )
}

/// Gauss–Chebyshev (second kind) rule: integrates f(x) sqrt(1 - x^2) on
/// [-1, 1] exactly for polynomial f of degree <= 2n - 1.
pub fn gauss_chebyshev2(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for j in 1..=n {
        let t = std::f64::consts::PI * j as f64 / (n as f64 + 1.0);
        nodes.push(t.cos());
        weights.push(std::f64::consts::PI / (n as f64 + 1.0) * t.sin() * t.sin());
    }
    (nodes, weights)
}

/// Gegenbauer polynomial C_k^lambda(x) by the standard three-term recurrence
/// k C_k = 2(k + lambda - 1) x C_{k-1} - (k + 2 lambda - 2) C_{k-2}.
pub fn gegenbauer(k: usize, lambda: f64, x: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut c0 = 1.0;
    let mut c1 = 2.0 * lambda * x;
    for j in 2..=k {
        let jf = j as f64;
        let c2 = (2.0 * (jf + lambda - 1.0) * x * c1 - (jf + 2.0 * lambda - 2.0) * c0) / jf;
        c0 = c1;
        c1 = c2;
    }
    c1
}

/// Independent oracle for [`gegenbauer`]: the t^k coefficient of the
/// generating function (1 - 2xt + t^2)^{-lambda}, expanded binomially as
/// (1 - t(2x - t))^{-lambda}. Used in tests only; O(k^2) evaluation.
pub fn gegenbauer_generating_series(k: usize, lambda: f64, x: f64) -> f64 {
    // [t^k] sum_m rising(lambda, m)/m! * t^m (2x - t)^m
    //      = sum_{m=ceil(k/2)}^{k} rising(lambda, m)/m! * C(m, k-m)
    //        * (2x)^{2m-k} * (-1)^{k-m}.
    let mut total = 0.0;
    for m in k.div_ceil(2)..=k {
        let mut rising = 1.0; // lambda (lambda+1) ... (lambda+m-1) / m!
        for j in 0..m {
            rising *= (lambda + j as f64) / (j as f64 + 1.0);
        }
        let j = k - m; // power of (-t) taken from (2x - t)^m
        let mut binom = 1.0;
        for i in 0..j {
            binom *= (m - i) as f64 / (i as f64 + 1.0);
        }
        let sign = if j.is_multiple_of(2) { 1.0 } else { -1.0 };
        total += rising * binom * sign * (2.0 * x).powi((m - j) as i32);
    }
    total
}

/// 3D spherical harmonic Y_l^m(theta, phi) with the Condon–Shortley phase,
/// built from Gegenbauer polynomials:
/// Y_l^m = (-1)^m N2(l, m) sin^m(theta) C_{l-m}^{m+1/2}(cos theta)
///         e^{i m phi} / sqrt(2 pi),  m >= 0,
/// and Y_l^{-m} = (-1)^m conj(Y_l^m).
pub fn spherical_harmonic(l: i64, m: i64, theta: f64, phi: f64) -> Result<Complex64> {
    if l < 0 || m.abs() > l {
        return Err(Error::InvalidParameter(format!(
            "spherical_harmonic: invalid (l, m) = ({l}, {m})"
        )));
    }
    let ma = m.unsigned_abs() as usize;
    let lu = l as usize;
    let n2 = norm_n2(lu, ma);
    let body = n2 * theta.sin().powi(ma as i32) * gegenbauer(lu - ma, ma as f64 + 0.5, theta.cos())
        / (2.0 * std::f64::consts::PI).sqrt();
    let cs = if ma % 2 == 1 { -1.0 } else { 1.0 };
    let val = cs * body * Complex64::new(0.0, ma as f64 * phi).exp();
    Ok(if m >= 0 { val } else { cs * val.conj() })
}

/// Normalization N2(l, m) of the 3D harmonic (m >= 0):
/// N2^2 = 2^{2m}/pi * (l + 1/2) (l - m)! / (l + m)! * Gamma(m + 1/2)^2.
pub fn norm_n2(l: usize, m: usize) -> f64 {
    assert!(m <= l);
    let ln = (2 * m) as f64 * 2.0_f64.ln() - std::f64::consts::PI.ln()
        + (l as f64 + 0.5).ln()
        + ln_factorial(l - m)
        - ln_factorial(l + m)
        + 2.0 * ln_gamma_half_integer(m);
    (0.5 * ln).exp()
}
