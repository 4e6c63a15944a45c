//! Finite-matrix realization of the SO(4)/SO(4,1)/SO(4,2) dynamical symmetry
//! of the nonrelativistic hydrogen atom.
//!
//! The crate provides:
//!
//! - [`algebra`]: all fifteen SO(4,2) generators as truncated matrices over the
//!   bound-state basis |nlm), with verification of the commutation table,
//!   Casimir invariants, scale/rotation transformation laws, and time
//!   dependence.
//! - [`wavefunctions`]: four-dimensional spherical harmonics on the unit
//!   hypersphere, their Rydberg asymptotics, and the stereographic map to
//!   momentum-space energy eigenfunctions.
//! - [`kepler`]: classical bound Kepler orbits, the momentum-space circle, and
//!   the stereographic projection onto a great circle of the hypersphere.
//! - [`wavepacket`]: Gaussian circular and elliptical Rydberg wavepackets and
//!   their azimuthal spreading.
//! - [`shift`]: first-order radiative level shifts (Lamb shift, Bethe
//!   logarithm) from the group-theoretic generating-function double integral,
//!   with an independent matrix-exponential oracle.
//!
//! Natural units (hbar = c = 1) are used throughout the library; conversion to
//! SI / MHz happens only at the CLI boundary using the constants in
//! [`constants`].

pub mod algebra;
pub mod basis;
pub mod cmatrix;
pub mod constants;
pub mod error;
pub mod expm;
pub mod kepler;
pub mod shift;
pub mod special;
pub mod wavefunctions;
pub mod wavepacket;

pub use error::{Error, Result};
