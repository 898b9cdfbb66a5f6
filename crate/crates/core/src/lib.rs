//! Toolkit for cavity-enhanced spontaneous four-wave-mixing (SFWM)
//! photon-pair sources in optical microresonators.
//!
//! The crate is organized around the measurement and design chain of a
//! microresonator pair source:
//!
//! - [`material`] — refractive-index models, effective-index tables,
//!   FSR and integrated-dispersion analysis of resonance grids.
//! - [`spectra`] — mode-split resonance transmission model, dip search
//!   and nonlinear line fitting (κ₀, κ_ex, splitting).
//! - [`sfwm`] — closed-form quantum model: nonlinear coupling, output
//!   spectral density, photon linewidth, pair-generation rate, coupling
//!   optima, OPO threshold and spectral brightness.
//! - [`counting`] — stochastic time-tag simulation of the detection
//!   chain and the analysis pipelines (correlation histograms, CAR,
//!   heralded g², PGR extraction).
//! - [`franson`] — folded Franson interferometer simulation, fringe
//!   fitting, visibility and CHSH margin.
//! - [`link`] — deployment arithmetic: dB chains, thermal stability,
//!   fiber V-number / mode-field / overlap chain, loss budgets.
//!
//! All stored frequencies and rates are ordinary frequencies in Hz
//! (the `/2π` values quoted by experiments); angular quantities are
//! formed only inside formula evaluations.

pub mod counting;
pub mod error;
pub mod fixtures;
pub mod franson;
pub mod link;
pub mod lm;
pub mod material;
pub mod numeric;
pub mod sfwm;
pub mod spectra;

pub use error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
