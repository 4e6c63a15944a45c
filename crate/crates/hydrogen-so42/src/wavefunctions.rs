//! Four-dimensional spherical harmonics Y_nlm on the unit hypersphere, their
//! Rydberg asymptotics, the momentum-space bound-state wavefunctions obtained
//! by stereographic projection, and a quadrature cross-check of the a3
//! generator as a differential rotation operator on the hypersphere.
//!
//! Coordinates on S^3: U1 = sin(theta4) sin(theta) cos(phi),
//! U2 = sin(theta4) sin(theta) sin(phi), U3 = sin(theta4) cos(theta),
//! U4 = cos(theta4); surface measure sin^2(theta4) sin(theta)
//! d(theta4) d(theta) d(phi), total volume 2 pi^2.
//!
//! Y_nlm = N1(n, l) sin^l(theta4) C_{n-1-l}^{l+1}(cos theta4)
//!         Y_l^m(theta, phi), with the Condon-Shortley 3D harmonic. The phase
//! convention linking these to the algebraic |nlm) basis of the generator
//! matrices is |nlm) = (-i)^l Y_nlm (see [`differential_a3_quadrature`]).

use crate::error::{Error, Result};
use crate::kepler::{project_u, UPoint};
use crate::special::{gauss_legendre, gauss_chebyshev2, gegenbauer, ln_factorial, spherical_harmonic};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Hyperspherical angles.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Angles4D {
    /// Polar angle on S^3, in [0, pi].
    pub theta4: f64,
    /// 3D polar angle, in [0, pi].
    pub theta: f64,
    /// Azimuth, in [0, 2 pi).
    pub phi: f64,
}

impl Angles4D {
    pub fn new(theta4: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta4) || !(0.0..=PI).contains(&theta) || !phi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "invalid angles (theta4, theta, phi) = ({theta4}, {theta}, {phi})"
            )));
        }
        Ok(Self {
            theta4,
            theta,
            phi: phi.rem_euclid(TAU),
        })
    }

    pub fn to_u(&self) -> UPoint {
        let (s4, c4) = self.theta4.sin_cos();
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        UPoint([s4 * st * cp, s4 * st * sp, s4 * ct, c4])
    }

    /// Angles of a unit 4-vector (atan2-based, robust near the poles).
    pub fn from_u(u: &UPoint) -> Self {
        let [u1, u2, u3, u4] = u.0;
        let rho3 = (u1 * u1 + u2 * u2).sqrt();
        Self {
            theta4: f64::atan2((rho3 * rho3 + u3 * u3).sqrt(), u4),
            theta: f64::atan2(rho3, u3),
            phi: f64::atan2(u2, u1).rem_euclid(TAU),
        }
    }
}

fn check_nlm(n: i64, l: i64, m: i64) -> Result<()> {
    if n < 1 || l < 0 || l > n - 1 || m.abs() > l {
        return Err(Error::InvalidParameter(format!(
            "invalid quantum numbers (n, l, m) = ({n}, {l}, {m})"
        )));
    }
    Ok(())
}

/// ln N1(n, l) with N1^2 = 2^{2l+1}/pi * n (n-l-1)! (l!)^2 / (n+l)!.
pub fn ln_norm_n1(n: i64, l: i64) -> f64 {
    let (nu, lu) = (n as usize, l as usize);
    0.5 * ((2 * lu + 1) as f64 * 2.0_f64.ln() - PI.ln()
        + (n as f64).ln()
        + ln_factorial(nu - lu - 1)
        + 2.0 * ln_factorial(lu)
        - ln_factorial(nu + lu))
}

/// Normalization N1(n, l) of the 4D harmonic; log-evaluated so Rydberg n is
/// safe from overflow.
pub fn norm_n1(n: i64, l: i64) -> Result<f64> {
    check_nlm(n, l, 0)?;
    Ok(ln_norm_n1(n, l).exp())
}

pub use crate::special::norm_n2;

/// The 4D spherical harmonic Y_nlm at the given hyperspherical angles.
/// The sin^l(theta4) prefactor is folded into the log-normalization so large
/// (n, l) cannot overflow.
pub fn y4(n: i64, l: i64, m: i64, omega: &Angles4D) -> Result<Complex64> {
    check_nlm(n, l, m)?;
    let s4 = omega.theta4.sin();
    let radial = if l == 0 {
        ln_norm_n1(n, l).exp()
    } else if s4 <= 0.0 {
        0.0
    } else {
        (ln_norm_n1(n, l) + l as f64 * s4.ln()).exp()
    };
    let c = gegenbauer((n - 1 - l) as usize, (l + 1) as f64, omega.theta4.cos());
    Ok(spherical_harmonic(l, m, omega.theta, omega.phi)? * (radial * c))
}

/// Y_nlm evaluated at a point of the unit hypersphere.
pub fn y4_at_u(n: i64, l: i64, m: i64, u: &UPoint) -> Result<Complex64> {
    y4(n, l, m, &Angles4D::from_u(u))
}

/// Asymptotic circular-state harmonic (l = m = n - 1, large n):
/// sqrt(n / 2 pi^2) exp(-n (theta4 - pi/2)^2 / 2) exp(-n (theta - pi/2)^2 / 2)
/// exp(i (n-1) phi). Enforced for n >= 50 where the Gaussian limit holds.
pub fn y4_asymptotic_circular(n: i64, omega: &Angles4D) -> Result<Complex64> {
    if n < 50 {
        return Err(Error::InvalidParameter(format!(
            "asymptotic circular form requires n >= 50, got {n}"
        )));
    }
    let nf = n as f64;
    let d4 = omega.theta4 - PI / 2.0;
    let dt = omega.theta - PI / 2.0;
    let amp = (nf / (2.0 * PI * PI)).sqrt() * (-0.5 * nf * (d4 * d4 + dt * dt)).exp();
    Ok(Complex64::new(0.0, (nf - 1.0) * omega.phi).exp() * amp)
}

/// Momentum-space bound-state wavefunction,
/// psi_nlm(p) = sqrt(a_n) (2 a_n / (p^2 + a_n^2))^2 Y_nlm(U(p)),
/// with U(p) the stereographic image of p. Normalized to unit d^3p integral.
pub fn momentum_wavefunction(n: i64, l: i64, m: i64, p: [f64; 3], a_n: f64) -> Result<Complex64> {
    check_nlm(n, l, m)?;
    if a_n <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "momentum scale must be positive, got {a_n}"
        )));
    }
    let u = project_u(p, a_n)?;
    let p2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
    let envelope = a_n.sqrt() * (2.0 * a_n / (p2 + a_n * a_n)).powi(2);
    Ok(y4_at_u(n, l, m, &u)? * envelope)
}

/// A product quadrature rule over S^3, returning (angles, weight) pairs.
/// cos(theta4): Gauss-Chebyshev second kind (absorbs the sin^2 theta4
/// measure exactly); cos(theta): Gauss-Legendre; phi: uniform (trapezoid,
/// exact for trigonometric polynomials below the node count).
pub fn s3_quadrature(n_polar4: usize, n_polar: usize, n_azimuth: usize) -> Vec<(Angles4D, f64)> {
    let (c4, w4) = gauss_chebyshev2(n_polar4);
    let (ct, wt) = gauss_legendre(n_polar);
    let wphi = TAU / n_azimuth as f64;
    let mut nodes = Vec::with_capacity(n_polar4 * n_polar * n_azimuth);
    for (c4i, w4i) in c4.iter().zip(&w4) {
        for (cti, wti) in ct.iter().zip(&wt) {
            for k in 0..n_azimuth {
                let phi = TAU * k as f64 / n_azimuth as f64;
                nodes.push((
                    Angles4D {
                        theta4: c4i.acos(),
                        theta: cti.acos(),
                        phi,
                    },
                    w4i * wti * wphi,
                ));
            }
        }
    }
    nodes
}

/// A quadrature rule sized for harmonics up to principal quantum number n.
pub fn s3_quadrature_for(n: i64) -> Vec<(Angles4D, f64)> {
    let nu = n.max(1) as usize;
    s3_quadrature(2 * nu + 4, 2 * nu + 4, (4 * nu + 2).max(8))
}

/// Quadrature overlap <Y_{n'l'm'}, Y_{nlm}> over S^3.
pub fn overlap(
    bra: (i64, i64, i64),
    ket: (i64, i64, i64),
    nodes: &[(Angles4D, f64)],
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (omega, w) in nodes {
        let a = y4(bra.0, bra.1, bra.2, omega)?;
        let b = y4(ket.0, ket.1, ket.2, omega)?;
        acc += a.conj() * b * Complex64::new(*w, 0.0);
    }
    Ok(acc)
}

/// The matrix element (n l' m | a3 | n l m) computed by numerical quadrature,
/// as a cross-check of the algebraic ladder coefficients.
///
/// a3 acts on harmonics as the rotation generator in the (U3, U4) plane:
/// under the flow dU3/dalpha = -U4, dU4/dalpha = U3, the derivative
/// -i d/dalpha of Y_nlm is integrated against Y_nl'm^*. The quadrature value
/// is then mapped to the algebraic basis by the phase factor i^{l'-l}
/// (the algebraic states carry the convention |nlm) = (-i)^l Y_nlm, which is
/// what renders the a3 matrix real symmetric). The derivative along the flow
/// uses a five-point stencil (O(h^4), h = 0.02).
pub fn differential_a3_quadrature(n: i64, l: i64, l_prime: i64, m: i64) -> Result<Complex64> {
    check_nlm(n, l, m)?;
    check_nlm(n, l_prime, 0)?;
    if (l - l_prime).abs() != 1 {
        return Err(Error::InvalidParameter(format!(
            "a3 connects |l - l'| = 1 only, got l = {l}, l' = {l_prime}"
        )));
    }
    let h = 0.02;
    let rotate = |u: &UPoint, alpha: f64| -> UPoint {
        let (s, c) = alpha.sin_cos();
        UPoint([u.0[0], u.0[1], u.0[2] * c - u.0[3] * s, u.0[3] * c + u.0[2] * s])
    };
    let nodes = s3_quadrature_for(n);
    let mut acc = Complex64::new(0.0, 0.0);
    for (omega, w) in &nodes {
        let u = omega.to_u();
        let fm2 = y4_at_u(n, l, m, &rotate(&u, -2.0 * h))?;
        let fm1 = y4_at_u(n, l, m, &rotate(&u, -h))?;
        let fp1 = y4_at_u(n, l, m, &rotate(&u, h))?;
        let fp2 = y4_at_u(n, l, m, &rotate(&u, 2.0 * h))?;
        let deriv = (fm2 - fm1 * 8.0 + fp1 * 8.0 - fp2) / (12.0 * h);
        let bra = y4(n, l_prime, m, omega)?;
        acc += bra.conj() * (Complex64::new(0.0, -1.0) * deriv) * *w;
    }
    // Phase relating harmonic and algebraic bases.
    let phase = Complex64::new(0.0, 1.0).powi((l_prime - l) as i32);
    Ok(phase * acc)
}
