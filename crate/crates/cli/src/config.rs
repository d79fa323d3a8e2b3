//! JSON run configuration: strict schema (unknown keys rejected), exactly one
//! bar description, and defaults for everything else.

use serde::Deserialize;

use viscobar::bar::{derive_config, BarConfig, PhysicalBar};
use viscobar::excitation::{
    ExcitationSpec, ForcingTerm, Profile, SampledField, SampledProfile, TimeProfile,
};
use viscobar::response::Method;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Nondimensional bar {h1, h2, c, L}.
    pub bar: Option<BarSpec>,
    /// Physical bar {rho, A0, E, c1, c2, L}; converted via c = sqrt(E/rho),
    /// h_i = c_i c/(E A0).
    pub physical: Option<PhysicalSpec>,
    /// Series truncation (sums run over the conjugation-closed set of k).
    #[serde(default = "default_k")]
    pub k: u32,
    /// Uniform spatial grid size on [0, L]; ignored when x_grid is given.
    #[serde(default = "default_x_points")]
    pub x_points: usize,
    /// Explicit strictly increasing spatial grid.
    pub x_grid: Option<Vec<f64>>,
    /// Output times.
    #[serde(default = "default_times")]
    pub times: Vec<f64>,
    #[serde(default)]
    pub method: MethodSpec,
    #[serde(default)]
    pub excitation: ExcitationConfig,
    #[serde(default)]
    pub fem: FemConfig,
    /// Meshes visited by spurious-scan.
    pub scan_elements: Option<Vec<usize>>,
}

fn default_k() -> u32 {
    15
}

fn default_x_points() -> usize {
    200
}

fn default_times() -> Vec<f64> {
    vec![0.3]
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarSpec {
    pub h1: f64,
    pub h2: f64,
    pub c: f64,
    #[serde(rename = "L")]
    pub length: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalSpec {
    pub rho: f64,
    #[serde(rename = "A0")]
    pub area: f64,
    #[serde(rename = "E")]
    pub modulus: f64,
    pub c1: f64,
    pub c2: f64,
    #[serde(rename = "L")]
    pub length: f64,
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodSpec {
    General,
    #[default]
    Simplified,
}

impl From<MethodSpec> for Method {
    fn from(value: MethodSpec) -> Self {
        match value {
            MethodSpec::General => Method::General,
            MethodSpec::Simplified => Method::Simplified,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExcitationConfig {
    #[serde(default)]
    pub f: ProfileConfig,
    #[serde(default)]
    pub g: ProfileConfig,
    #[serde(default)]
    pub p: ForcingConfig,
}

#[derive(Debug, Default, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileConfig {
    #[default]
    Zero,
    Constant {
        value: f64,
    },
    Polynomial {
        coeffs: Vec<f64>,
    },
    Sinusoid {
        amplitude: f64,
        wavenumber: f64,
        #[serde(default)]
        phase: f64,
    },
    Sampled {
        x: Vec<f64>,
        values: Vec<f64>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum TimeProfileConfig {
    Constant {
        value: f64,
    },
    Sinusoid {
        amplitude: f64,
        omega: f64,
        #[serde(default)]
        phase: f64,
    },
    Exponential {
        amplitude: f64,
        rate: f64,
    },
    Sampled {
        t: Vec<f64>,
        values: Vec<f64>,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ForcingConfig {
    #[default]
    Zero,
    Constant {
        value: f64,
    },
    Separable {
        space: ProfileConfig,
        time: TimeProfileConfig,
    },
    Impulse {
        space: ProfileConfig,
        magnitude: f64,
    },
    /// amplitude·e^{iωt}·δ(x − position), amplitude = F0/(ρA0).
    PointHarmonic {
        amplitude: f64,
        omega: f64,
        position: f64,
    },
    Sampled {
        x: Vec<f64>,
        t: Vec<f64>,
        /// Row-major over (t, x).
        values: Vec<f64>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FemConfig {
    #[serde(default = "default_elements")]
    pub elements: usize,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_t_final")]
    pub t_final: f64,
}

fn default_elements() -> usize {
    40
}

fn default_dt() -> f64 {
    1e-3
}

fn default_t_final() -> f64 {
    2.0
}

impl Default for FemConfig {
    fn default() -> Self {
        Self { elements: default_elements(), dt: default_dt(), t_final: default_t_final() }
    }
}

/// Configuration errors carry the exit-code-2 semantics.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let cfg: RunConfig = serde_json::from_str(text)
        .map_err(|e| ConfigError(format!("config parse error: {e}")))?;
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &RunConfig) -> Result<(), ConfigError> {
    match (&cfg.bar, &cfg.physical) {
        (Some(_), Some(_)) => {
            return Err(ConfigError(
                "exactly one of `bar` and `physical` must be present, found both".into(),
            ))
        }
        (None, None) => {
            return Err(ConfigError(
                "exactly one of `bar` and `physical` must be present, found neither".into(),
            ))
        }
        _ => {}
    }
    if let Some(grid) = &cfg.x_grid {
        if grid.len() < 2 || !grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(ConfigError("x_grid must be strictly increasing with >= 2 points".into()));
        }
    } else if cfg.x_points < 2 {
        return Err(ConfigError("x_points must be at least 2".into()));
    }
    if cfg.times.is_empty() {
        return Err(ConfigError("times must not be empty".into()));
    }
    if cfg.fem.dt <= 0.0 || cfg.fem.dt.is_nan() {
        return Err(ConfigError(format!("fem.dt must be positive, got {}", cfg.fem.dt)));
    }
    if cfg.fem.elements < 1 {
        return Err(ConfigError("fem.elements must be at least 1".into()));
    }
    Ok(())
}

impl RunConfig {
    pub fn bar_config(&self) -> Result<BarConfig, ConfigError> {
        match (&self.bar, &self.physical) {
            (Some(bar), None) => BarConfig::new(bar.h1, bar.h2, bar.c, bar.length)
                .map_err(|e| ConfigError(e.to_string())),
            (None, Some(phys)) => {
                let bar = PhysicalBar::with_signed_dampers(
                    phys.rho,
                    phys.area,
                    phys.modulus,
                    phys.c1,
                    phys.c2,
                    phys.length,
                )
                .map_err(|e| ConfigError(e.to_string()))?;
                derive_config(&bar).map_err(|e| ConfigError(e.to_string()))
            }
            _ => unreachable!("validated on parse"),
        }
    }

    pub fn spatial_grid(&self, length: f64) -> Vec<f64> {
        match &self.x_grid {
            Some(grid) => grid.clone(),
            None => {
                let n = self.x_points;
                (0..n).map(|i| length * i as f64 / (n - 1) as f64).collect()
            }
        }
    }

    pub fn excitation(&self) -> Result<ExcitationSpec, ConfigError> {
        Ok(ExcitationSpec {
            f: profile(&self.excitation.f)?,
            g: profile(&self.excitation.g)?,
            p: forcing(&self.excitation.p)?,
        })
    }
}

fn profile(cfg: &ProfileConfig) -> Result<Profile, ConfigError> {
    Ok(match cfg {
        ProfileConfig::Zero => Profile::Zero,
        ProfileConfig::Constant { value } => Profile::Constant(*value),
        ProfileConfig::Polynomial { coeffs } => Profile::Polynomial(coeffs.clone()),
        ProfileConfig::Sinusoid { amplitude, wavenumber, phase } => {
            Profile::Sinusoid { amplitude: *amplitude, wavenumber: *wavenumber, phase: *phase }
        }
        ProfileConfig::Sampled { x, values } => Profile::Sampled(
            SampledProfile::new(x.clone(), values.clone())
                .map_err(|e| ConfigError(e.to_string()))?,
        ),
    })
}

fn time_profile(cfg: &TimeProfileConfig) -> Result<TimeProfile, ConfigError> {
    Ok(match cfg {
        TimeProfileConfig::Constant { value } => TimeProfile::Constant(*value),
        TimeProfileConfig::Sinusoid { amplitude, omega, phase } => {
            TimeProfile::Sinusoid { amplitude: *amplitude, omega: *omega, phase: *phase }
        }
        TimeProfileConfig::Exponential { amplitude, rate } => {
            TimeProfile::Exponential { amplitude: *amplitude, rate: *rate }
        }
        TimeProfileConfig::Sampled { t, values } => TimeProfile::Sampled(
            SampledProfile::new(t.clone(), values.clone())
                .map_err(|e| ConfigError(e.to_string()))?,
        ),
    })
}

fn forcing(cfg: &ForcingConfig) -> Result<ForcingTerm, ConfigError> {
    Ok(match cfg {
        ForcingConfig::Zero => ForcingTerm::Zero,
        ForcingConfig::Constant { value } => ForcingTerm::Constant(*value),
        ForcingConfig::Separable { space, time } => {
            ForcingTerm::Separable { space: profile(space)?, time: time_profile(time)? }
        }
        ForcingConfig::Impulse { space, magnitude } => {
            ForcingTerm::TimeImpulse { space: profile(space)?, magnitude: *magnitude }
        }
        ForcingConfig::PointHarmonic { amplitude, omega, position } => {
            ForcingTerm::PointHarmonic { amplitude: *amplitude, omega: *omega, position: *position }
        }
        ForcingConfig::Sampled { x, t, values } => ForcingTerm::Sampled(
            SampledField::new(x.clone(), t.clone(), values.clone())
                .map_err(|e| ConfigError(e.to_string()))?,
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config(r#"{"bar": {"h1": 0.3, "h2": 0.7, "c": 1.8, "L": 1.5}}"#).unwrap();
        assert_eq!(cfg.k, 15);
        assert_eq!(cfg.x_points, 200);
        assert_eq!(cfg.spatial_grid(1.5).len(), 200);
        let bar = cfg.bar_config().unwrap();
        assert_eq!(bar.h1, 0.3);
        assert!(cfg.excitation().unwrap().is_zero());
    }

    #[test]
    fn both_bar_blocks_rejected() {
        let err = parse_config(
            r#"{"bar": {"h1": 0, "h2": 0, "c": 1, "L": 1},
                "physical": {"rho": 1, "A0": 1, "E": 1, "c1": 0, "c2": 0, "L": 1}}"#,
        )
        .unwrap_err();
        assert!(err.0.contains("both"));
    }

    #[test]
    fn neither_bar_block_rejected() {
        let err = parse_config(r#"{"k": 4}"#).unwrap_err();
        assert!(err.0.contains("neither"));
    }

    #[test]
    fn unknown_keys_rejected_with_name() {
        let err = parse_config(
            r#"{"bar": {"h1": 0, "h2": 0.5, "c": 1, "L": 1}, "truncation": 4}"#,
        )
        .unwrap_err();
        assert!(err.0.contains("truncation"), "{}", err.0);
    }

    #[test]
    fn physical_block_derives_h() {
        let cfg = parse_config(
            r#"{"physical": {"rho": 1, "A0": 1, "E": 1, "c1": 0.3, "c2": 0.7, "L": 1.5}}"#,
        )
        .unwrap();
        let bar = cfg.bar_config().unwrap();
        assert!((bar.h1 - 0.3).abs() < 1e-14);
        assert!((bar.h2 - 0.7).abs() < 1e-14);
        assert!((bar.wave_speed - 1.0).abs() < 1e-14);
    }

    #[test]
    fn excitation_round_trips() {
        let cfg = parse_config(
            r#"{
                "bar": {"h1": 0.3, "h2": 0.7, "c": 1.8, "L": 1.5},
                "excitation": {
                    "f": {"type": "polynomial", "coeffs": [0.0, 0.15, -0.05]},
                    "g": {"type": "constant", "value": 1.0},
                    "p": {"type": "separable",
                          "space": {"type": "sinusoid", "amplitude": 1.0, "wavenumber": 12.566},
                          "time": {"type": "sinusoid", "amplitude": 1.0, "omega": 2.094}}
                }
            }"#,
        )
        .unwrap();
        let exc = cfg.excitation().unwrap();
        assert!(matches!(exc.f, Profile::Polynomial(_)));
        assert!(matches!(exc.p, ForcingTerm::Separable { .. }));
    }

    #[test]
    fn bad_grid_rejected() {
        let err = parse_config(
            r#"{"bar": {"h1": 0, "h2": 0.5, "c": 1, "L": 1}, "x_grid": [0.5, 0.5]}"#,
        )
        .unwrap_err();
        assert!(err.0.contains("strictly increasing"));
    }
}
