//! Classical bound Kepler orbits: the configuration-space ellipse, the
//! momentum-space circle, the stereographic projection onto the unit
//! hypersphere, and the time dependence along the orbit.
//!
//! Conventions. Natural units (hbar = c = 1); `a = sqrt(-2 m E)` is the RMS
//! momentum scale. The orbit lies in the 1-2 plane with the Runge-Lenz vector
//! along the 1-axis and angular momentum along the 3-axis; phi_r = 0 is the
//! perihelion and the traversal is counterclockwise (y > 0 just after
//! perihelion).
//!
//! The stereographic projection maps the momentum plane scaled by `a` to the
//! unit 3-sphere; the momentum-space circle becomes a great circle, tilted
//! out of the U3 = U4 = 0 equator by the eccentricity angle nu (sin nu = e).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Parameters of one bound orbit.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OrbitParams {
    /// RMS momentum, sqrt(-2 m E).
    pub a: f64,
    /// Eccentricity angle, sin(nu) = e.
    pub nu: f64,
    /// Eccentricity.
    pub e: f64,
    /// Semi-major axis, m Zalpha / a^2.
    pub r_c: f64,
    /// Angular momentum magnitude, r_c a cos(nu).
    pub l: f64,
    /// Runge-Lenz magnitude, r_c a sin(nu).
    pub a_rl: f64,
    /// Period, 2 pi / omega_cl.
    pub t_period: f64,
    /// Classical angular frequency, a / (m r_c).
    pub omega_cl: f64,
    /// Mass.
    pub m: f64,
    /// Coupling Z alpha.
    pub z_alpha: f64,
}

/// A point on the unit hypersphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UPoint(pub [f64; 4]);

impl UPoint {
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|u| u * u).sum::<f64>().sqrt()
    }
}

/// One trajectory sample, uniform in time.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OrbitSample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub p1: f64,
    pub p2: f64,
    pub u: UPoint,
}

/// Residuals of the great-circle test for one projected point.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GreatCircleResidual {
    /// U1^2 + (U2 cos nu + U4 sin nu)^2 - 1.
    pub circle: f64,
    /// U4 - U2 tan nu (orbit-plane condition).
    pub plane: f64,
}

/// Build an orbit from the momentum scale and eccentricity.
pub fn orbit_from(a: f64, e: f64, m: f64, z_alpha: f64) -> Result<OrbitParams> {
    if a <= 0.0 || m <= 0.0 || z_alpha <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "a, m, Zalpha must be positive, got a = {a}, m = {m}, Zalpha = {z_alpha}"
        )));
    }
    if !(0.0..1.0).contains(&e) {
        return Err(Error::InvalidParameter(format!(
            "eccentricity must satisfy 0 <= e < 1 for a bound orbit, got {e}"
        )));
    }
    let nu = e.asin();
    let r_c = m * z_alpha / (a * a);
    let omega_cl = a / (m * r_c);
    Ok(OrbitParams {
        a,
        nu,
        e,
        r_c,
        l: r_c * a * nu.cos(),
        a_rl: r_c * a * e,
        t_period: TAU / omega_cl,
        omega_cl,
        m,
        z_alpha,
    })
}

/// Semiclassical orbit for the state (n, l, m): a = m_e Zalpha / n,
/// e = sqrt(1 - l(l+1)/n^2), and the orbit-plane tilt
/// cos(Theta) = sqrt(m^2 / l(l+1)) (absent for l = 0, where the orbit
/// degenerates to a line and no classical plane exists).
pub fn quantized_orbit(
    n: i64,
    l: i64,
    m: i64,
    z_alpha: f64,
    m_e: f64,
) -> Result<(OrbitParams, Option<f64>)> {
    if n < 1 || l < 0 || l > n - 1 || m.abs() > l {
        return Err(Error::InvalidParameter(format!(
            "invalid quantum numbers (n, l, m) = ({n}, {l}, {m})"
        )));
    }
    let nf = n as f64;
    let ll = (l * (l + 1)) as f64;
    let a = m_e * z_alpha / nf;
    let e = (1.0 - ll / (nf * nf)).max(0.0).sqrt();
    let orbit = orbit_from(a, e.min(1.0 - f64::EPSILON), m_e, z_alpha)?;
    let theta = if l >= 1 {
        Some((((m * m) as f64 / ll).sqrt()).acos())
    } else {
        None
    };
    Ok((orbit, theta))
}

/// Ellipse radius r(phi_r) = r_c cos^2(nu) / (1 + sin(nu) cos(phi_r)).
pub fn r_of_phi(orbit: &OrbitParams, phi_r: f64) -> f64 {
    orbit.r_c * orbit.nu.cos().powi(2) / (1.0 + orbit.e * phi_r.cos())
}

/// Position (x, y) at orbit angle phi_r (perihelion at phi_r = 0).
pub fn position_at(orbit: &OrbitParams, phi_r: f64) -> (f64, f64) {
    let r = r_of_phi(orbit, phi_r);
    (r * phi_r.cos(), r * phi_r.sin())
}

/// Momentum (p1, p2) at orbit angle phi_r:
/// p1 = -a sin(phi_r)/cos(nu), p2 = a (cos(phi_r) + sin(nu))/cos(nu).
pub fn momentum_at(orbit: &OrbitParams, phi_r: f64) -> (f64, f64) {
    let c = orbit.nu.cos();
    (
        -orbit.a * phi_r.sin() / c,
        orbit.a * (phi_r.cos() + orbit.e) / c,
    )
}

/// Distance of a momentum-plane point from the orbit circle:
/// p1^2 + (p2 - a tan nu)^2 - a^2/cos^2 nu, zero on the orbit.
pub fn momentum_orbit_residual(orbit: &OrbitParams, p: [f64; 2]) -> f64 {
    let c = orbit.nu.cos();
    let tan = orbit.nu.tan();
    p[0] * p[0] + (p[1] - orbit.a * tan).powi(2) - orbit.a * orbit.a / (c * c)
}

/// Stereographic projection of a momentum vector onto the unit hypersphere:
/// U_i = 2 a p_i / (p^2 + a^2), U4 = (p^2 - a^2) / (p^2 + a^2).
pub fn project_u(p: [f64; 3], a: f64) -> Result<UPoint> {
    if a <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "momentum scale must be positive, got {a}"
        )));
    }
    let p2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
    let d = p2 + a * a;
    Ok(UPoint([
        2.0 * a * p[0] / d,
        2.0 * a * p[1] / d,
        2.0 * a * p[2] / d,
        (p2 - a * a) / d,
    ]))
}

/// Inverse stereographic projection, p_i = a U_i / (1 - U4). The north pole
/// U4 = 1 (infinite momentum) is rejected.
pub fn unproject(u: &UPoint, a: f64) -> Result<[f64; 3]> {
    if a <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "momentum scale must be positive, got {a}"
        )));
    }
    let denom = 1.0 - u.0[3];
    if denom.abs() < 1e-14 {
        return Err(Error::InvalidParameter(
            "cannot unproject the north pole U4 = 1 (infinite momentum)".into(),
        ));
    }
    Ok([
        a * u.0[0] / denom,
        a * u.0[1] / denom,
        a * u.0[2] / denom,
    ])
}

/// Great-circle residuals of a hypersphere point for this orbit.
pub fn great_circle_residual(orbit: &OrbitParams, u: &UPoint) -> GreatCircleResidual {
    let (c, s) = (orbit.nu.cos(), orbit.nu.sin());
    GreatCircleResidual {
        circle: u.0[0] * u.0[0] + (u.0[1] * c + u.0[3] * s).powi(2) - 1.0,
        plane: u.0[3] - u.0[1] * orbit.nu.tan(),
    }
}

/// Eccentric anomaly E at orbit angle phi_r, unwrapped so that E increases
/// continuously with phi_r across revolutions.
fn eccentric_anomaly(orbit: &OrbitParams, phi_r: f64) -> f64 {
    let k = (phi_r / TAU).floor();
    let phi = phi_r - TAU * k;
    let mut e_anom = f64::atan2(orbit.nu.cos() * phi.sin(), orbit.e + phi.cos());
    if e_anom < 0.0 {
        e_anom += TAU;
    }
    e_anom + TAU * k
}

/// Time at orbit angle phi_r from Kepler's equation,
/// omega_cl t = E - e sin E, with E the eccentric anomaly. Monotonic in
/// phi_r; t(0) = 0 at perihelion.
pub fn time_of_position(orbit: &OrbitParams, phi_r: f64) -> f64 {
    let e_anom = eccentric_anomaly(orbit, phi_r);
    (e_anom - orbit.e * e_anom.sin()) / orbit.omega_cl
}

/// Time from a hypersphere point on the orbit (modulo the period):
/// omega_cl t = E + U1 sin nu with E = atan2(-U1, U2 / cos nu).
/// Agrees with [`time_of_position`] on projected orbit samples.
pub fn time_of_u(orbit: &OrbitParams, u: &UPoint) -> f64 {
    let mut e_anom = f64::atan2(-u.0[0], u.0[1] / orbit.nu.cos());
    if e_anom < 0.0 {
        e_anom += TAU;
    }
    (e_anom + u.0[0] * orbit.e) / orbit.omega_cl
}

/// Orbit angle at time t by Newton iteration on Kepler's equation
/// (E - e sin E = omega_cl t), then phi_r = atan2(cos nu sin E, cos E - e),
/// unwrapped across revolutions.
pub fn phi_of_time(orbit: &OrbitParams, t: f64) -> f64 {
    let mean = orbit.omega_cl * t;
    let k = (mean / TAU).floor();
    let m_anom = mean - TAU * k;
    let mut e_anom = if orbit.e > 0.8 { PI } else { m_anom };
    for _ in 0..60 {
        let f = e_anom - orbit.e * e_anom.sin() - m_anom;
        let fp = 1.0 - orbit.e * e_anom.cos();
        let step = f / fp;
        e_anom -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    let mut phi = f64::atan2(orbit.nu.cos() * e_anom.sin(), e_anom.cos() - orbit.e)
        .rem_euclid(TAU);
    // Newton residual can land infinitesimally below a full turn; snap it.
    if TAU - phi < 1e-9 {
        phi = 0.0;
    }
    phi + TAU * k
}

/// Total energy p^2/(2m) - Zalpha/r at orbit angle phi_r; constant at
/// -a^2/(2m) along the orbit.
pub fn energy_at(orbit: &OrbitParams, phi_r: f64) -> f64 {
    let (p1, p2) = momentum_at(orbit, phi_r);
    let r = r_of_phi(orbit, phi_r);
    (p1 * p1 + p2 * p2) / (2.0 * orbit.m) - orbit.z_alpha / r
}

/// Sample the orbit uniformly in time over `revolutions` periods.
pub fn sample_uniform_time(
    orbit: &OrbitParams,
    samples: usize,
    revolutions: f64,
) -> Result<Vec<OrbitSample>> {
    if samples < 2 {
        return Err(Error::InvalidParameter(
            "at least 2 samples required".into(),
        ));
    }
    let t_max = revolutions * orbit.t_period;
    let mut out = Vec::with_capacity(samples);
    for i in 0..samples {
        let t = t_max * i as f64 / (samples - 1) as f64;
        let phi = phi_of_time(orbit, t);
        let (x, y) = position_at(orbit, phi);
        let (p1, p2) = momentum_at(orbit, phi);
        let u = project_u([p1, p2, 0.0], orbit.a)?;
        out.push(OrbitSample { t, x, y, p1, p2, u });
    }
    Ok(out)
}
