//! Command implementations: each produces one or more named result tables.

use viscobar::bar::BarConfig;
use viscobar::excitation::ExcitationSpec;
use viscobar::fem;
use viscobar::response::{self, Method};
use viscobar::spectral::{self, ModeIndex};
use viscobar::verify;

use crate::config::RunConfig;
use crate::table::{Cell, ResultTable};

/// Errors split by exit-code semantics: bad configuration (2) vs numerical
/// failure (3).
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "invalid configuration: {msg}"),
            CliError::Numerical(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl From<viscobar::Error> for CliError {
    fn from(e: viscobar::Error) -> Self {
        use viscobar::Error::*;
        match e {
            InvalidInput(_) | DegenerateSpectrum { .. } | NormalizationSingular { .. }
            | UnsupportedConfiguration { .. } | OutOfDomain { .. } => {
                CliError::Config(e.to_string())
            }
            QuadratureAccuracy { .. } | Resonance { .. } | Numerical(_) => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

impl From<crate::config::ConfigError> for CliError {
    fn from(e: crate::config::ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

pub type Tables = Vec<(String, ResultTable)>;

fn index_cell(index: ModeIndex) -> Cell {
    match index {
        ModeIndex::RigidBody => Cell::from("rigid"),
        ModeIndex::Mode(n) => Cell::Int(n),
    }
}

pub fn spectrum(cfg: &BarConfig, k: u32) -> Result<Tables, CliError> {
    let mut table = ResultTable::new(vec!["n", "re", "im"]);
    for pair in spectral::spectrum(cfg, k)? {
        table.push(vec![index_cell(pair.index), pair.lambda.re.into(), pair.lambda.im.into()]);
    }
    Ok(vec![("spectrum".into(), table)])
}

pub fn modes(cfg: &BarConfig, k: u32, xs: &[f64]) -> Result<Tables, CliError> {
    let mut table = ResultTable::new(vec!["x", "n", "u1_re", "u1_im", "u2_re", "u2_im"]);
    for pair in spectral::spectrum(cfg, k)? {
        for &x in xs {
            let (u1, u2) = spectral::mode(cfg, &pair, x)?;
            table.push(vec![
                x.into(),
                index_cell(pair.index),
                u1.re.into(),
                u1.im.into(),
                u2.re.into(),
                u2.im.into(),
            ]);
        }
    }
    Ok(vec![("modes".into(), table)])
}

pub fn respond(
    cfg: &BarConfig,
    exc: &ExcitationSpec,
    k: u32,
    xs: &[f64],
    ts: &[f64],
    method: Method,
) -> Result<Tables, CliError> {
    let field = response::response(cfg, exc, k, xs, ts, method)?;
    let mut table = ResultTable::new(vec!["x", "t", "u", "im_diag"]);
    for (it, &t) in ts.iter().enumerate() {
        for (ix, &x) in xs.iter().enumerate() {
            let sample = field.at(it, ix);
            table.push(vec![x.into(), t.into(), sample.re.into(), sample.im.into()]);
        }
    }
    Ok(vec![("respond".into(), table)])
}

pub fn fem_trajectory(
    cfg: &BarConfig,
    exc: &ExcitationSpec,
    elements: usize,
    dt: f64,
    t_final: f64,
) -> Result<Tables, CliError> {
    let sys = fem::assemble(cfg, elements, exc.p.clone())?;
    let trajectory = fem::fem_integrate(&sys, exc, dt, t_final)?;
    let mut table = ResultTable::new(vec!["t", "node", "x", "u", "v"]);
    for step in 0..trajectory.steps() {
        let t = trajectory.time(step);
        for (node, &x) in trajectory.nodes.iter().enumerate() {
            table.push(vec![
                t.into(),
                Cell::Int(node as i64),
                x.into(),
                trajectory.displacement[step][node].into(),
                trajectory.velocity[step][node].into(),
            ]);
        }
    }
    Ok(vec![("fem".into(), table)])
}

fn eig_rows(table: &mut ResultTable, elements: usize, eigs: &[viscobar::Complex64]) {
    for (idx, lambda) in eigs.iter().enumerate() {
        table.push(vec![
            Cell::Int(elements as i64),
            Cell::Int(idx as i64),
            lambda.re.into(),
            lambda.im.into(),
        ]);
    }
}

pub fn fem_eigs(cfg: &BarConfig, elements: usize) -> Result<Tables, CliError> {
    let sys = fem::assemble(cfg, elements, viscobar::ForcingTerm::Zero)?;
    let eigs = fem::fem_spectrum(&sys)?;
    let mut table = ResultTable::new(vec!["element_count", "idx", "re", "im"]);
    eig_rows(&mut table, elements, &eigs);
    Ok(vec![("fem-eigs".into(), table)])
}

pub fn compare(
    cfg: &BarConfig,
    exc: &ExcitationSpec,
    k: u32,
    elements: usize,
    dt: f64,
    ts: &[f64],
    method: Method,
) -> Result<Tables, CliError> {
    let t_final = ts.iter().copied().fold(0.0, f64::max).max(dt);
    let sys = fem::assemble(cfg, elements, exc.p.clone())?;
    let trajectory = fem::fem_integrate(&sys, exc, dt, t_final)?;
    // Requested times snap to the nearest trajectory step.
    let snapped: Vec<(usize, f64)> = ts
        .iter()
        .map(|&t| {
            let step = ((t / dt).round() as usize).min(trajectory.steps() - 1);
            (step, trajectory.time(step))
        })
        .collect();
    let times: Vec<f64> = snapped.iter().map(|&(_, t)| t).collect();
    let field = response::response(cfg, exc, k, &trajectory.nodes, &times, method)?;
    let mut table = ResultTable::new(vec!["x", "t", "u_series", "u_fem", "abs_diff"]);
    for (it, &(step, t)) in snapped.iter().enumerate() {
        for (ix, &x) in trajectory.nodes.iter().enumerate() {
            let series = field.real_at(it, ix);
            let fem_value = trajectory.displacement[step][ix];
            table.push(vec![
                x.into(),
                t.into(),
                series.into(),
                fem_value.into(),
                (series - fem_value).abs().into(),
            ]);
        }
    }
    Ok(vec![("compare".into(), table)])
}

pub fn spurious_scan(cfg: &BarConfig, element_counts: &[usize]) -> Result<Tables, CliError> {
    let report = fem::spurious_scan(cfg, element_counts, fem::INSTABILITY_TOL)?;
    let mut table = ResultTable::new(vec!["element_count", "max_re", "unstable"]);
    for entry in &report.entries {
        table.push(vec![
            Cell::Int(entry.elements as i64),
            entry.max_real_part.into(),
            entry.unstable.into(),
        ]);
    }
    Ok(vec![("spurious-scan".into(), table)])
}

/// Returns the tables plus whether every check passed.
pub fn verify_checks(cfg: &BarConfig) -> Result<(Tables, bool), CliError> {
    let results = verify::standard_checks(cfg)?;
    let mut table = ResultTable::new(vec!["check", "measured", "threshold", "pass"]);
    let mut all_pass = true;
    for r in &results {
        all_pass &= r.pass;
        table.push(vec![r.name.into(), r.measured.into(), r.threshold.into(), r.pass.into()]);
    }
    Ok((vec![("verify".into(), table)], all_pass))
}

/// Figure presets: canned parameter studies emitted as plot-ready tables.
pub mod figures {
    use super::*;
    use viscobar::excitation::{ForcingTerm, Profile, TimeProfile};

    pub fn fig2_config() -> BarConfig {
        BarConfig::new(0.3, 0.7, 1.8, 1.5).unwrap()
    }

    pub fn unstable_config() -> BarConfig {
        BarConfig::new(0.7, -1.5, 1.5, 1.8).unwrap()
    }

    pub fn fig7_config() -> BarConfig {
        BarConfig::new(3.0, 1.2, 1.0, 1.0).unwrap()
    }

    /// The forced problem behind the FEM comparison studies:
    /// p = sin(6πx/L)·sin(πt/L), f = 0.1x(L − x/2), g = 0.
    pub fn forced_study_excitation(length: f64) -> ExcitationSpec {
        ExcitationSpec {
            f: Profile::Polynomial(vec![0.0, 0.1 * length, -0.05]),
            g: Profile::Zero,
            p: ForcingTerm::Separable {
                space: Profile::Sinusoid {
                    amplitude: 1.0,
                    wavenumber: 6.0 * std::f64::consts::PI / length,
                    phase: 0.0,
                },
                time: TimeProfile::Sinusoid {
                    amplitude: 1.0,
                    omega: std::f64::consts::PI / length,
                    phase: 0.0,
                },
            },
        }
    }

    /// Manufactured-solution error curves ε(x, 0.3) for k = 3, 6, 9, 12, 15.
    pub fn fig2() -> Result<Tables, CliError> {
        let cfg = fig2_config();
        let case = verify::manufactured_pair(&cfg)?;
        let exc = case.excitation();
        let xs: Vec<f64> = (0..201).map(|i| cfg.length * i as f64 / 200.0).collect();
        let mut table = ResultTable::new(vec!["k", "x", "eps"]);
        for k in [3u32, 6, 9, 12, 15] {
            let field = response::response(&cfg, &exc, k, &xs, &[0.3], Method::Simplified)?;
            for (ix, &x) in xs.iter().enumerate() {
                let eps = case.displacement(x, 0.3) - field.real_at(0, ix);
                table.push(vec![Cell::Int(k as i64), x.into(), eps.into()]);
            }
        }
        Ok(vec![("fig2".into(), table)])
    }

    /// Max-abs difference between the series and the n-element FEM solution
    /// at t = 0.5 as the series truncation grows.
    pub fn fig5(elements: usize) -> Result<Tables, CliError> {
        let cfg = fig2_config();
        let exc = forced_study_excitation(cfg.length);
        let sys = fem::assemble(&cfg, elements, exc.p.clone())?;
        let trajectory = fem::fem_integrate(&sys, &exc, 5e-4, 0.5)?;
        let last = trajectory.last_displacement();
        let mut table = ResultTable::new(vec!["k", "max_abs_diff"]);
        for k in (3..=38).step_by(1) {
            let field =
                response::response(&cfg, &exc, k, &trajectory.nodes, &[0.5], Method::Simplified)?;
            let diff = (0..trajectory.nodes.len())
                .map(|ix| (field.real_at(0, ix) - last[ix]).abs())
                .fold(0.0, f64::max);
            table.push(vec![Cell::Int(k as i64), diff.into()]);
        }
        Ok(vec![("fig5".into(), table)])
    }

    /// FEM root locus for 1..=60 elements next to the exact eigenvalues.
    pub fn fig7() -> Result<Tables, CliError> {
        let cfg = fig7_config();
        let mut fem_table = ResultTable::new(vec!["element_count", "idx", "re", "im"]);
        for elements in 1..=60 {
            let sys = fem::assemble(&cfg, elements, ForcingTerm::Zero)?;
            let eigs = fem::fem_spectrum(&sys)?;
            eig_rows(&mut fem_table, elements, &eigs);
        }
        let mut exact = ResultTable::new(vec!["n", "re", "im"]);
        for pair in spectral::spectrum(&cfg, 40)? {
            exact.push(vec![index_cell(pair.index), pair.lambda.re.into(), pair.lambda.im.into()]);
        }
        Ok(vec![("fig7_fem".into(), fem_table), ("fig7_exact".into(), exact)])
    }

    /// Spurious-eigenvalue scan of the unstable study configuration.
    pub fn fig8() -> Result<Tables, CliError> {
        let counts: Vec<usize> = (1..=60).collect();
        let tables = spurious_scan(&unstable_config(), &counts)?;
        Ok(tables.into_iter().map(|(_, t)| ("fig8".into(), t)).collect())
    }
}

/// Top-level dispatch used by `main`; `verify` additionally reports whether
/// all checks passed.
#[derive(Debug)]
pub struct CommandOutcome {
    pub tables: Tables,
    pub verify_passed: Option<bool>,
}

impl From<Tables> for CommandOutcome {
    fn from(tables: Tables) -> Self {
        Self { tables, verify_passed: None }
    }
}

pub fn run_with_config(
    command: &str,
    config: &RunConfig,
    k: u32,
    elements: usize,
    dt: f64,
    t_final: f64,
) -> Result<CommandOutcome, CliError> {
    let bar = config.bar_config()?;
    let xs = config.spatial_grid(bar.length);
    let exc = config.excitation()?;
    let method: Method = config.method.into();
    Ok(match command {
        "spectrum" => spectrum(&bar, k)?.into(),
        "modes" => modes(&bar, k, &xs)?.into(),
        "respond" => respond(&bar, &exc, k, &xs, &config.times, method)?.into(),
        "fem" => fem_trajectory(&bar, &exc, elements, dt, t_final)?.into(),
        "fem-eigs" => fem_eigs(&bar, elements)?.into(),
        "compare" => compare(&bar, &exc, k, elements, dt, &config.times, method)?.into(),
        "spurious-scan" => {
            let counts = config.scan_elements.clone().unwrap_or_else(|| (1..=60).collect());
            spurious_scan(&bar, &counts)?.into()
        }
        "verify" => {
            let (tables, passed) = verify_checks(&bar)?;
            CommandOutcome { tables, verify_passed: Some(passed) }
        }
        other => return Err(CliError::Config(format!("unknown command {other}"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_table_free_free() {
        let cfg = BarConfig::new(0.0, 0.0, 1.0, 1.0).unwrap();
        let tables = spectrum(&cfg, 1).unwrap();
        let table = &tables[0].1;
        assert_eq!(table.rows().len(), 4); // rigid + n in {-1, 0, 1}
        assert_eq!(table.rows()[0][0], Cell::Text("rigid".into()));
        match (&table.rows()[1][2], &table.rows()[3][2]) {
            (Cell::Float(a), Cell::Float(b)) => {
                assert!((a + std::f64::consts::PI).abs() < 1e-14);
                assert!((b - std::f64::consts::PI).abs() < 1e-14);
            }
            other => panic!("unexpected cells {other:?}"),
        }
    }

    #[test]
    fn verify_passes_on_reference_config() {
        let cfg = figures::fig2_config();
        let (tables, passed) = verify_checks(&cfg).unwrap();
        assert!(passed);
        let table = &tables[0].1;
        assert!(table.rows().iter().any(|row| row[0] == Cell::Text("fig2-k15-error".into())));
    }

    #[test]
    fn unknown_command_is_config_error() {
        let config = crate::config::parse_config(
            r#"{"bar": {"h1": 0.3, "h2": 0.7, "c": 1.8, "L": 1.5}}"#,
        )
        .unwrap();
        let err = run_with_config("zap", &config, 15, 40, 1e-3, 1.0).unwrap_err();
        assert!(matches!(err, CliError::Config(_)));
    }
}
