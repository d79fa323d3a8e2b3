use num_complex::Complex64;
use thiserror::Error;

use crate::bar::ConfigClass;

/// Errors produced by the spectral, response, and FEM operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The eigenvalue formula degenerates when an end coefficient sits at
    /// an absorbing value h = ±1 (the eigenvalue ratio tends to 0 or ∞).
    #[error("degenerate spectrum for {class:?}: h = ±1 makes ln|R| diverge")]
    DegenerateSpectrum { class: ConfigClass },

    /// The biorthogonal normalization L(1 − h1²) vanishes at h1 = ±1.
    #[error("normalization L(1 - h1^2) is singular at h1 = {h1}")]
    NormalizationSingular { h1: f64 },

    /// Response assembly rejects the special boundary classes.
    #[error("configuration class {class:?} is not supported by this operation")]
    UnsupportedConfiguration { class: ConfigClass },

    #[error("coordinate {value} outside [{lo}, {hi}]")]
    OutOfDomain { value: f64, lo: f64, hi: f64 },

    /// Adaptive quadrature stopped before reaching the requested agreement
    /// between successive refinements.
    #[error("quadrature did not converge: achieved {achieved:.3e}, requested {requested:.3e}")]
    QuadratureAccuracy { achieved: f64, requested: f64 },

    #[error("resonant forcing: i*omega coincides with eigenvalue {lambda}")]
    Resonance { lambda: Complex64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
