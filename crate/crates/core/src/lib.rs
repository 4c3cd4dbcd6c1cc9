//! Spectral-domain simulator of spin-orbit state generation for neutral
//! spin-1/2 particles traversing static electric fields.
//!
//! A particle with gyromagnetic ratio `gamma` moving through a uniform field
//! `E_z` acquires a momentum-dependent spin rotation characterized by the
//! coupling constant `C = gamma E_z / c^2` (units 1/m). This crate works in
//! scaled units where `2m/hbar^2 = 1`, so energies are squared wavenumbers
//! and every propagation problem reduces, transverse Fourier mode by mode, to
//! a one-dimensional boundary-value problem that is solved in closed form.
//!
//! Module map:
//! - [`units`]: physical constants, coupling strength, twister design formulas
//! - [`scattering`]: per-mode transmission/reflection at a field boundary
//! - [`transforms`]: azimuthal Fourier + Hankel analysis and synthesis
//! - [`beams`]: incident-beam models (Bessel beams, collimated thermal beams,
//!   Gaussian wavepackets)
//! - [`oam`]: orbital-angular-momentum mode populations and depth scans
//! - [`transverse`]: paraxial time evolution of transverse wavepackets

// Input validation throughout uses `!(x > 0.0)`-style guards on purpose:
// the negated comparison also rejects NaN, which `x <= 0.0` would accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beams;
pub mod error;
pub mod oam;
pub mod scattering;
pub mod transforms;
pub mod transverse;
pub mod units;

pub use error::{Error, Result};

/// Complex double, the working scalar for all wave amplitudes.
pub type C64 = num_complex::Complex64;
