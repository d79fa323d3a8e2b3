//! Bar descriptions: dimensional parameters, the nondimensional boundary
//! configuration, and classification of the special boundary classes.

use crate::error::{Error, Result};

/// Default tolerance for the degenerate-class predicates.
///
/// Classification is advisory for the spectral formulas (which stay finite on
/// `SumZero` and `ProductMinusOne`) and mandatory for response assembly.
pub const DEFAULT_CLASS_TOL: f64 = 1e-9;

/// Dimensional bar with a viscous damper at each end.
///
/// `damper_left`/`damper_right` are the damper constants (force·time/length).
/// Negative values model energy-feeding boundaries and are only admitted via
/// [`PhysicalBar::with_signed_dampers`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalBar {
    pub density: f64,
    pub area: f64,
    pub modulus: f64,
    pub damper_left: f64,
    pub damper_right: f64,
    pub length: f64,
}

impl PhysicalBar {
    pub fn new(
        density: f64,
        area: f64,
        modulus: f64,
        damper_left: f64,
        damper_right: f64,
        length: f64,
    ) -> Result<Self> {
        if damper_left < 0.0 || damper_right < 0.0 {
            return Err(Error::InvalidInput(format!(
                "negative damper coefficient ({damper_left}, {damper_right}); \
                 use with_signed_dampers to study energy-feeding boundaries"
            )));
        }
        Self::with_signed_dampers(density, area, modulus, damper_left, damper_right, length)
    }

    /// Same as [`PhysicalBar::new`] but admits negative damper coefficients.
    pub fn with_signed_dampers(
        density: f64,
        area: f64,
        modulus: f64,
        damper_left: f64,
        damper_right: f64,
        length: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("density", density),
            ("area", area),
            ("modulus", modulus),
            ("length", length),
        ] {
            if v <= 0.0 || !v.is_finite() {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        if !damper_left.is_finite() || !damper_right.is_finite() {
            return Err(Error::InvalidInput("damper coefficients must be finite".into()));
        }
        Ok(Self { density, area, modulus, damper_left, damper_right, length })
    }

    /// Wave speed c = sqrt(E/ρ).
    pub fn wave_speed(&self) -> f64 {
        (self.modulus / self.density).sqrt()
    }
}

/// Nondimensional configuration: boundary coefficients h1, h2, wave speed,
/// and bar length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BarConfig {
    pub h1: f64,
    pub h2: f64,
    pub wave_speed: f64,
    pub length: f64,
}

impl BarConfig {
    pub fn new(h1: f64, h2: f64, wave_speed: f64, length: f64) -> Result<Self> {
        if wave_speed <= 0.0 || !wave_speed.is_finite() {
            return Err(Error::InvalidInput(format!("wave speed must be positive, got {wave_speed}")));
        }
        if length <= 0.0 || !length.is_finite() {
            return Err(Error::InvalidInput(format!("length must be positive, got {length}")));
        }
        if !h1.is_finite() || !h2.is_finite() {
            return Err(Error::InvalidInput("boundary coefficients must be finite".into()));
        }
        Ok(Self { h1, h2, wave_speed, length })
    }

    /// Classification with the default tolerance.
    pub fn class(&self) -> ConfigClass {
        classify(self, DEFAULT_CLASS_TOL)
    }

    /// The real ratio R = (1−h1)(1−h2) / ((1+h1)(1+h2)) whose logarithm
    /// generates the eigenvalues.
    pub fn eigen_ratio(&self) -> f64 {
        ((1.0 - self.h1) * (1.0 - self.h2)) / ((1.0 + self.h1) * (1.0 + self.h2))
    }
}

/// Boundary classes. `Generic` admits the full spectral machinery; the other
/// classes are detected so that response assembly can reject them (their
/// closed forms are a separate problem not treated here).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConfigClass {
    Generic,
    /// h1 = ±1: left end perfectly absorbing.
    AbsorbingH1,
    /// h2 = ±1: right end perfectly absorbing.
    AbsorbingH2,
    /// h1 + h2 = 0.
    SumZero,
    /// 1 + h1·h2 = 0.
    ProductMinusOne,
}

/// Classify a configuration against the special boundary classes.
///
/// Precedence when several predicates hold within `tol`:
/// `AbsorbingH1 > AbsorbingH2 > SumZero > ProductMinusOne`.
pub fn classify(cfg: &BarConfig, tol: f64) -> ConfigClass {
    assert!(tol > 0.0, "classification tolerance must be positive");
    if (cfg.h1.abs() - 1.0).abs() <= tol {
        ConfigClass::AbsorbingH1
    } else if (cfg.h2.abs() - 1.0).abs() <= tol {
        ConfigClass::AbsorbingH2
    } else if (cfg.h1 + cfg.h2).abs() <= tol {
        ConfigClass::SumZero
    } else if (1.0 + cfg.h1 * cfg.h2).abs() <= tol {
        ConfigClass::ProductMinusOne
    } else {
        ConfigClass::Generic
    }
}

/// Nondimensionalize a physical bar: c = sqrt(E/ρ), h_i = c_i·c/(E·A0).
pub fn derive_config(bar: &PhysicalBar) -> Result<BarConfig> {
    // Re-validate: the fields are public.
    let bar = PhysicalBar::with_signed_dampers(
        bar.density,
        bar.area,
        bar.modulus,
        bar.damper_left,
        bar.damper_right,
        bar.length,
    )?;
    let c = bar.wave_speed();
    let scale = c / (bar.modulus * bar.area);
    BarConfig::new(bar.damper_left * scale, bar.damper_right * scale, c, bar.length)
}
