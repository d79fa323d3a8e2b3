//! Closed catalog of initial conditions and distributed forcing terms.
//!
//! Spatial profiles serve as initial displacement f(x) and velocity g(x);
//! forcing terms p(x, t) combine a spatial profile with a temporal law. The
//! analytic temporal laws carry exact running integrals and exponential
//! convolutions so that the modal series never needs numeric time quadrature
//! for them; sampled data falls back to trapezoids on its own grid.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Spatial profile on [0, L].
#[derive(Clone, Debug, PartialEq)]
pub enum Profile {
    Zero,
    Constant(f64),
    /// Coefficients in ascending powers of x.
    Polynomial(Vec<f64>),
    /// amplitude · sin(wavenumber·x + phase)
    Sinusoid { amplitude: f64, wavenumber: f64, phase: f64 },
    Sampled(SampledProfile),
}

impl Profile {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Profile::Zero => 0.0,
            Profile::Constant(a) => *a,
            Profile::Polynomial(coeffs) => {
                coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
            }
            Profile::Sinusoid { amplitude, wavenumber, phase } => {
                amplitude * (wavenumber * x + phase).sin()
            }
            Profile::Sampled(s) => s.eval(x),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Profile::Zero => true,
            Profile::Constant(a) => *a == 0.0,
            Profile::Polynomial(coeffs) => coeffs.iter().all(|&c| c == 0.0),
            Profile::Sinusoid { amplitude, .. } => *amplitude == 0.0,
            Profile::Sampled(s) => s.values.iter().all(|&v| v == 0.0),
        }
    }
}

/// Piecewise-linear samples on a strictly increasing grid; evaluation clamps
/// outside the sampled range.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledProfile {
    xs: Vec<f64>,
    values: Vec<f64>,
}

impl SampledProfile {
    pub fn new(xs: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "sampled profile needs n >= 2 matching points, got {} abscissae and {} values",
                xs.len(),
                values.len()
            )));
        }
        if !xs.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput("sample grid must be strictly increasing".into()));
        }
        if xs.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("sampled data must be finite".into()));
        }
        Ok(Self { xs, values })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.values[0];
        }
        if x >= self.xs[n - 1] {
            return self.values[n - 1];
        }
        let j = match self.xs.binary_search_by(|probe| probe.total_cmp(&x)) {
            Ok(j) => return self.values[j],
            Err(j) => j,
        };
        let (x0, x1) = (self.xs[j - 1], self.xs[j]);
        let w = (x - x0) / (x1 - x0);
        self.values[j - 1] * (1.0 - w) + self.values[j] * w
    }

    pub fn grid(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// ∫_0^t e^{λ(t−τ)} e^{sτ} dτ, the building block of the exact temporal
/// convolutions; collapses to t·e^{λt} at s = λ.
pub(crate) fn exp_convolution(s: Complex64, lambda: Complex64, t: f64) -> Complex64 {
    let d = s - lambda;
    if d.norm() < 1e-12 * (1.0 + lambda.norm()) {
        return t * (lambda * t).exp();
    }
    ((s * t).exp() - (lambda * t).exp()) / d
}

/// Temporal law of a separable forcing term.
#[derive(Clone, Debug, PartialEq)]
pub enum TimeProfile {
    Constant(f64),
    /// amplitude · sin(omega·t + phase)
    Sinusoid { amplitude: f64, omega: f64, phase: f64 },
    /// amplitude · e^{rate·t}
    Exponential { amplitude: f64, rate: f64 },
    Sampled(SampledProfile),
}

impl TimeProfile {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            TimeProfile::Constant(a) => *a,
            TimeProfile::Sinusoid { amplitude, omega, phase } => {
                amplitude * (omega * t + phase).sin()
            }
            TimeProfile::Exponential { amplitude, rate } => amplitude * (rate * t).exp(),
            TimeProfile::Sampled(s) => s.eval(t),
        }
    }

    /// Running integral ∫_0^t T(τ) dτ.
    pub fn integral(&self, t: f64) -> f64 {
        match self {
            TimeProfile::Constant(a) => a * t,
            TimeProfile::Sinusoid { amplitude, omega, phase } => {
                if omega.abs() < 1e-300 {
                    amplitude * phase.sin() * t
                } else {
                    amplitude * (phase.cos() - (omega * t + phase).cos()) / omega
                }
            }
            TimeProfile::Exponential { amplitude, rate } => {
                if rate.abs() < 1e-300 {
                    amplitude * t
                } else {
                    amplitude * ((rate * t).exp() - 1.0) / rate
                }
            }
            TimeProfile::Sampled(s) => trapezoid_to(s, t, |tau| s.eval(tau)),
        }
    }

    /// Exponential convolution ∫_0^t e^{λ(t−τ)} T(τ) dτ.
    pub fn convolution(&self, lambda: Complex64, t: f64) -> Complex64 {
        match self {
            TimeProfile::Constant(a) => *a * exp_convolution(Complex64::new(0.0, 0.0), lambda, t),
            TimeProfile::Sinusoid { amplitude, omega, phase } => {
                // sin(ωτ+φ) = (e^{i(ωτ+φ)} − e^{−i(ωτ+φ)}) / 2i
                let iw = Complex64::new(0.0, *omega);
                let pos = Complex64::new(0.0, *phase).exp() * exp_convolution(iw, lambda, t);
                let neg = Complex64::new(0.0, -*phase).exp() * exp_convolution(-iw, lambda, t);
                *amplitude * (pos - neg) / Complex64::new(0.0, 2.0)
            }
            TimeProfile::Exponential { amplitude, rate } => {
                *amplitude * exp_convolution(Complex64::new(*rate, 0.0), lambda, t)
            }
            TimeProfile::Sampled(s) => {
                complex_trapezoid_to(s, t, |tau| (lambda * (t - tau)).exp() * s.eval(tau))
            }
        }
    }
}

/// Trapezoid on the sample grid restricted to [0, t], with a partial last cell.
fn trapezoid_to<F: Fn(f64) -> f64>(s: &SampledProfile, t: f64, f: F) -> f64 {
    nodes_up_to(s, t)
        .windows(2)
        .map(|w| 0.5 * (w[1] - w[0]) * (f(w[0]) + f(w[1])))
        .sum()
}

fn complex_trapezoid_to<F: Fn(f64) -> Complex64>(s: &SampledProfile, t: f64, f: F) -> Complex64 {
    nodes_up_to(s, t)
        .windows(2)
        .map(|w| 0.5 * (w[1] - w[0]) * (f(w[0]) + f(w[1])))
        .sum()
}

fn nodes_up_to(s: &SampledProfile, t: f64) -> Vec<f64> {
    let mut nodes = vec![0.0];
    nodes.extend(s.grid().iter().copied().filter(|&tau| tau > 0.0 && tau < t));
    if t > 0.0 {
        nodes.push(t);
    }
    nodes
}

/// Distributed forcing p(x, t). All variants are real-valued except
/// [`ForcingTerm::PointHarmonic`], which uses the complex convention
/// amplitude·e^{iωt}·δ(x − x_f); its physical response is the real part.
#[derive(Clone, Debug, PartialEq)]
pub enum ForcingTerm {
    Zero,
    Constant(f64),
    Separable { space: Profile, time: TimeProfile },
    /// magnitude · space(x) · δ(t): an impulsive blow at t = 0.
    TimeImpulse { space: Profile, magnitude: f64 },
    /// amplitude · e^{iωt} · δ(x − position) with amplitude = F0/(ρA0).
    PointHarmonic { amplitude: f64, omega: f64, position: f64 },
    Sampled(SampledField),
}

impl ForcingTerm {
    pub fn is_zero(&self) -> bool {
        match self {
            ForcingTerm::Zero => true,
            ForcingTerm::Constant(a) => *a == 0.0,
            ForcingTerm::Separable { space, .. } => space.is_zero(),
            ForcingTerm::TimeImpulse { space, magnitude } => *magnitude == 0.0 || space.is_zero(),
            ForcingTerm::PointHarmonic { amplitude, .. } => *amplitude == 0.0,
            ForcingTerm::Sampled(field) => field.values.iter().all(|&v| v == 0.0),
        }
    }

    /// False for the complex point-harmonic convention.
    pub fn is_real(&self) -> bool {
        !matches!(self, ForcingTerm::PointHarmonic { .. })
    }
}

/// p(x, t) sampled on a rectangular grid, bilinearly interpolated.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    xs: Vec<f64>,
    ts: Vec<f64>,
    /// Row-major: values[j * xs.len() + i] = p(xs[i], ts[j]).
    values: Vec<f64>,
}

impl SampledField {
    pub fn new(xs: Vec<f64>, ts: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || ts.len() < 2 {
            return Err(Error::InvalidInput("sampled field needs at least a 2x2 grid".into()));
        }
        if values.len() != xs.len() * ts.len() {
            return Err(Error::InvalidInput(format!(
                "sampled field needs {} values, got {}",
                xs.len() * ts.len(),
                values.len()
            )));
        }
        if !xs.windows(2).all(|w| w[0] < w[1]) || !ts.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput("sample grids must be strictly increasing".into()));
        }
        Ok(Self { xs, ts, values })
    }

    pub fn time_grid(&self) -> &[f64] {
        &self.ts
    }

    /// Spatial slice at grid row j as a piecewise-linear profile.
    pub fn row(&self, j: usize) -> SampledProfile {
        let n = self.xs.len();
        SampledProfile {
            xs: self.xs.clone(),
            values: self.values[j * n..(j + 1) * n].to_vec(),
        }
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        let j = clamp_cell(&self.ts, t);
        let w = ((t - self.ts[j]) / (self.ts[j + 1] - self.ts[j])).clamp(0.0, 1.0);
        let lo = self.row(j).eval(x);
        let hi = self.row(j + 1).eval(x);
        lo * (1.0 - w) + hi * w
    }
}

fn clamp_cell(grid: &[f64], v: f64) -> usize {
    let n = grid.len();
    if v <= grid[0] {
        return 0;
    }
    if v >= grid[n - 1] {
        return n - 2;
    }
    match grid.binary_search_by(|probe| probe.total_cmp(&v)) {
        Ok(j) => j.min(n - 2),
        Err(j) => j - 1,
    }
}

/// Initial displacement, initial velocity, and distributed forcing.
#[derive(Clone, Debug, PartialEq)]
pub struct ExcitationSpec {
    pub f: Profile,
    pub g: Profile,
    pub p: ForcingTerm,
}

impl ExcitationSpec {
    pub fn zero() -> Self {
        Self { f: Profile::Zero, g: Profile::Zero, p: ForcingTerm::Zero }
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero() && self.g.is_zero() && self.p.is_zero()
    }

    /// Whether the response must be real (complex forcing conventions excluded).
    pub fn is_real(&self) -> bool {
        self.p.is_real()
    }
}
