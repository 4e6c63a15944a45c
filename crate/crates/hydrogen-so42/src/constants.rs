//! Physical constants (CODATA 2018) and unit conversions.
//!
//! The library computes in natural units (hbar = c = 1) with energies measured
//! in electron masses; every conversion to laboratory units goes through the
//! constants below so there is a single place to audit them.

/// Fine-structure constant alpha (CODATA 2018).
pub const ALPHA: f64 = 7.297_352_569_3e-3;

/// Default coupling Z*alpha for hydrogen (Z = 1).
pub const ZALPHA_HYDROGEN: f64 = ALPHA;

/// Electron rest energy expressed as a frequency, m_e c^2 / h, in Hz.
///
/// m_e c^2 = 8.187_105_776_9e-14 J, h = 6.626_070_15e-34 J s.
pub const ELECTRON_COMPTON_FREQUENCY_HZ: f64 = 1.235_589_964_1e20;

/// Natural unit of time in seconds: hbar / (m_e c^2).
pub const NATURAL_TIME_S: f64 = 1.288_088_667e-21;

/// Natural unit of length in meters: hbar / (m_e c) (reduced Compton length).
pub const NATURAL_LENGTH_M: f64 = 3.861_592_679_6e-13;
