//! Eigenvalues, direct and adjoint modes, and the biorthogonal expansion for
//! the damper-damper bar.
//!
//! The boundary value problem is non-self-adjoint: its eigenvalues
//!
//! λ_n = (c/2L)·[ln|R| + i(Arg R + 2nπ)],  R = (1−h1)(1−h2)/((1+h1)(1+h2)),
//!
//! share one real part and come in conjugate pairs, and the modes are not
//! orthogonal to each other. Orthogonality is recovered against the modes of
//! the adjoint operator, which makes the expansion coefficients a single
//! inner product per mode.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bar::{BarConfig, ConfigClass};
use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureSpec};

/// Label of one member of the spectrum.
///
/// The rigid-body mode is kept distinct from the integer-indexed branch: at
/// λ = 0 the first-order eigenvalue problem only has the trivial solution, so
/// the constant mode never participates in the modal sums and is handled by
/// the constant terms of the response instead.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModeIndex {
    RigidBody,
    Mode(i64),
}

/// A mode label paired with its complex eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenPair {
    pub index: ModeIndex,
    pub lambda: Complex64,
}

fn require_nondegenerate(cfg: &BarConfig) -> Result<()> {
    match cfg.class() {
        ConfigClass::AbsorbingH1 | ConfigClass::AbsorbingH2 => {
            Err(Error::DegenerateSpectrum { class: cfg.class() })
        }
        _ => Ok(()),
    }
}

/// Principal argument of the real eigenvalue ratio: 0 for R > 0, π for R < 0.
fn ratio_arg(ratio: f64) -> f64 {
    if ratio < 0.0 {
        PI
    } else {
        0.0
    }
}

/// n-th eigenvalue of the damper-damper bar.
///
/// The argument branch is the principal value in (−π, π], which makes n = 0
/// the slowest oscillating mode.
pub fn eigenvalue(cfg: &BarConfig, n: i64) -> Result<Complex64> {
    require_nondegenerate(cfg)?;
    let ratio = cfg.eigen_ratio();
    let theta = ratio_arg(ratio) + 2.0 * n as f64 * PI;
    let scale = cfg.wave_speed / (2.0 * cfg.length);
    Ok(Complex64::new(scale * ratio.abs().ln(), scale * theta))
}

/// Integer indices of the truncated spectrum, closed under conjugation.
///
/// Conjugation pairs n ↔ −n when Arg R = 0 and n ↔ −n−1 when Arg R = π, so
/// for a negative ratio the symmetric range −k..k is extended by −k−1.
pub fn mode_indices(cfg: &BarConfig, k: u32) -> Result<Vec<i64>> {
    require_nondegenerate(cfg)?;
    let k = k as i64;
    let lo = if cfg.eigen_ratio() < 0.0 { -k - 1 } else { -k };
    Ok((lo..=k).collect())
}

/// Rigid-body pair plus the eigenvalues for the conjugation-closed index set
/// of truncation `k`, in ascending index order.
pub fn spectrum(cfg: &BarConfig, k: u32) -> Result<Vec<EigenPair>> {
    let mut pairs = vec![EigenPair { index: ModeIndex::RigidBody, lambda: Complex64::new(0.0, 0.0) }];
    for n in mode_indices(cfg, k)? {
        pairs.push(EigenPair { index: ModeIndex::Mode(n), lambda: eigenvalue(cfg, n)? });
    }
    Ok(pairs)
}

/// First component of the mode, u1 = cosh(λx/c) + h1·sinh(λx/c), evaluated in
/// the exponential form ((1+h1)e^z + (1−h1)e^{−z})/2.
pub(crate) fn eval_u1(h1: f64, wave_speed: f64, lambda: Complex64, x: f64) -> Complex64 {
    let z = lambda * x / wave_speed;
    0.5 * ((1.0 + h1) * z.exp() + (1.0 - h1) * (-z).exp())
}

/// Second component, u2 = (sinh(λx/c) + h1·cosh(λx/c))/c.
pub(crate) fn eval_u2(h1: f64, wave_speed: f64, lambda: Complex64, x: f64) -> Complex64 {
    let z = lambda * x / wave_speed;
    0.5 * ((1.0 + h1) * z.exp() - (1.0 - h1) * (-z).exp()) / wave_speed
}

fn check_domain(cfg: &BarConfig, x: f64) -> Result<()> {
    if !(0.0..=cfg.length).contains(&x) {
        return Err(Error::OutOfDomain { value: x, lo: 0.0, hi: cfg.length });
    }
    Ok(())
}

/// Direct mode (u1, u2) at x; the rigid-body mode is the constant (1, 0).
pub fn mode(cfg: &BarConfig, pair: &EigenPair, x: f64) -> Result<(Complex64, Complex64)> {
    check_domain(cfg, x)?;
    Ok(match pair.index {
        ModeIndex::RigidBody => (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)),
        ModeIndex::Mode(_) => (
            eval_u1(cfg.h1, cfg.wave_speed, pair.lambda, x),
            eval_u2(cfg.h1, cfg.wave_speed, pair.lambda, x),
        ),
    })
}

/// Adjoint mode (v1, v2) = (conj u1, −c²·conj u2) at x.
pub fn adjoint_mode(cfg: &BarConfig, pair: &EigenPair, x: f64) -> Result<(Complex64, Complex64)> {
    let (u1, u2) = mode(cfg, pair, x)?;
    let c2 = cfg.wave_speed * cfg.wave_speed;
    Ok((u1.conj(), -c2 * u2.conj()))
}

/// Two-component complex field on [0, length], the element type of the inner
/// product space.
pub struct StateVector<'a> {
    eval: Box<dyn Fn(f64) -> (Complex64, Complex64) + Send + Sync + 'a>,
    length: f64,
}

impl<'a> StateVector<'a> {
    pub fn new(
        length: f64,
        eval: impl Fn(f64) -> (Complex64, Complex64) + Send + Sync + 'a,
    ) -> Self {
        Self { eval: Box::new(eval), length }
    }

    pub fn constant(length: f64, u1: Complex64, u2: Complex64) -> StateVector<'static> {
        StateVector { eval: Box::new(move |_| (u1, u2)), length }
    }

    /// The direct mode of `pair` as a state vector.
    pub fn mode(cfg: &BarConfig, pair: &EigenPair) -> StateVector<'static> {
        let (cfg, pair) = (*cfg, *pair);
        StateVector {
            eval: Box::new(move |x| mode(&cfg, &pair, x).expect("x within [0, L]")),
            length: cfg.length,
        }
    }

    /// The adjoint mode of `pair` as a state vector.
    pub fn adjoint_mode(cfg: &BarConfig, pair: &EigenPair) -> StateVector<'static> {
        let (cfg, pair) = (*cfg, *pair);
        StateVector {
            eval: Box::new(move |x| adjoint_mode(&cfg, &pair, x).expect("x within [0, L]")),
            length: cfg.length,
        }
    }

    pub fn eval(&self, x: f64) -> (Complex64, Complex64) {
        (self.eval)(x)
    }

    pub fn length(&self) -> f64 {
        self.length
    }
}

/// ⟨a, b⟩ = ∫_0^L [conj(a1)·b1 + conj(a2)·b2] dx.
///
/// Conjugate-linear in the first argument; `quad` must resolve the fastest
/// oscillation present (see [`QuadratureSpec::for_mode_index`]).
pub fn inner_product(a: &StateVector, b: &StateVector, quad: &QuadratureSpec) -> Result<Complex64> {
    if a.length() != b.length() {
        return Err(Error::InvalidInput(format!(
            "state vectors live on different intervals: {} vs {}",
            a.length(),
            b.length()
        )));
    }
    quadrature::integrate(
        |x| {
            let (a1, a2) = a.eval(x);
            let (b1, b2) = b.eval(x);
            a1.conj() * b1 + a2.conj() * b2
        },
        0.0,
        a.length(),
        quad,
    )
}

/// Biorthogonal normalization ⟨v_n, u_n⟩ = L(1 − h1²), exact for every mode.
pub fn normalization(cfg: &BarConfig) -> f64 {
    cfg.length * (1.0 - cfg.h1 * cfg.h1)
}

fn require_normalizable(cfg: &BarConfig) -> Result<()> {
    if let ConfigClass::AbsorbingH1 = cfg.class() {
        return Err(Error::NormalizationSingular { h1: cfg.h1 });
    }
    Ok(())
}

/// Generalized Fourier coefficients α_n = ⟨v_n, F⟩ / (L(1−h1²)) over the
/// conjugation-closed index set of truncation `k`, returned as (n, α_n) in
/// ascending index order.
pub fn expand(cfg: &BarConfig, field: &StateVector, k: u32) -> Result<Vec<(i64, Complex64)>> {
    require_normalizable(cfg)?;
    let norm = normalization(cfg);
    let mut coeffs = Vec::new();
    for n in mode_indices(cfg, k)? {
        let pair = EigenPair { index: ModeIndex::Mode(n), lambda: eigenvalue(cfg, n)? };
        let adjoint = StateVector::adjoint_mode(cfg, &pair);
        let quad = QuadratureSpec::for_mode_index(n);
        let alpha = inner_product(&adjoint, field, &quad)? / norm;
        coeffs.push((n, alpha));
    }
    Ok(coeffs)
}
