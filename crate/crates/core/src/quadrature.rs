//! Composite Gauss-Legendre quadrature with adaptive panel refinement.
//!
//! The mode shapes oscillate like exp(i·Im(λ_n)·x/c), so the panel count is
//! scaled with the mode index and the result accepted once two successive
//! refinements agree.

use std::f64::consts::PI;

use num_complex::Complex64;
use once_cell::sync::Lazy;

use crate::error::{Error, Result};

/// Points per panel. 12-point Gauss-Legendre integrates degree-23
/// polynomials exactly on each panel.
const PANEL_ORDER: usize = 12;

static PANEL_RULE: Lazy<Vec<(f64, f64)>> = Lazy::new(|| legendre_rule(PANEL_ORDER));

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// by Newton iteration on P_n with Chebyshev initial guesses.
fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..64 {
            let (p, dp) = legendre_with_derivative(n, x);
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 1.0_f64;
    let mut cur = x;
    for k in 2..=n {
        let k = k as f64;
        let next = ((2.0 * k - 1.0) * x * cur - (k - 1.0) * prev) / k;
        prev = cur;
        cur = next;
    }
    let dp = n as f64 * (x * cur - prev) / (x * x - 1.0);
    (cur, dp)
}

/// Panel layout and stopping rule for one integral.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureSpec {
    pub panels: usize,
    /// Accept once successive refinements differ by less than this,
    /// relative to max(|integral|, 1).
    pub rel_tol: f64,
    pub max_refinements: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { panels: 16, rel_tol: 1e-10, max_refinements: 6 }
    }
}

impl QuadratureSpec {
    /// Panel count able to resolve the oscillation of mode index `n`:
    /// at least 8·(|n| + 2) panels.
    pub fn for_mode_index(n: i64) -> Self {
        Self { panels: (8 * (n.unsigned_abs() as usize + 2)).max(16), ..Self::default() }
    }
}

fn panel_sum<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, panels: usize) -> Complex64 {
    let width = (b - a) / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let left = a + p as f64 * width;
        let mid = left + 0.5 * width;
        let half = 0.5 * width;
        let mut acc = Complex64::new(0.0, 0.0);
        for &(node, weight) in PANEL_RULE.iter() {
            acc += weight * f(mid + half * node);
        }
        total += half * acc;
    }
    total
}

/// ∫_a^b f(x) dx with panel doubling until two successive refinements agree.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    if b < a || a.is_nan() || b.is_nan() {
        return Err(Error::InvalidInput(format!("bad integration interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut panels = spec.panels.max(1);
    let mut prev = panel_sum(&f, a, b, panels);
    let mut achieved = f64::INFINITY;
    for _ in 0..spec.max_refinements {
        panels *= 2;
        let next = panel_sum(&f, a, b, panels);
        achieved = (next - prev).norm() / next.norm().max(1.0);
        if achieved < spec.rel_tol {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureAccuracy { achieved, requested: spec.rel_tol })
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    integrate(|x| Complex64::new(f(x), 0.0), a, b, spec).map(|v| v.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rule_nodes_match_reference() {
        // 12-point rule: outermost node and weight (Abramowitz & Stegun 25.4.30).
        let rule = legendre_rule(12);
        assert_relative_eq!(rule[0].0, -0.981560634246719, epsilon = 1e-13);
        assert_relative_eq!(rule[0].1, 0.047175336386512, epsilon = 1e-13);
        let wsum: f64 = rule.iter().map(|&(_, w)| w).sum();
        assert_relative_eq!(wsum, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn integrates_oscillatory_exponential() {
        // ∫_0^1 e^{i w x} dx = (e^{i w} - 1)/(i w)
        let w = 40.0;
        let exact = ((Complex64::i() * w).exp() - 1.0) / (Complex64::i() * w);
        let got = integrate(
            |x| (Complex64::i() * w * x).exp(),
            0.0,
            1.0,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!((got - exact).norm() < 1e-12);
    }

    #[test]
    fn polynomial_is_exact() {
        let got = integrate_real(|x| 3.0 * x * x, 0.0, 2.0, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(got, 8.0, epsilon = 1e-13);
    }

    #[test]
    fn empty_interval_is_zero() {
        let got = integrate(|_| Complex64::new(1.0, 0.0), 1.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert_eq!(got, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn nonconvergence_reports_achieved_accuracy() {
        // A kink the fixed refinement budget cannot settle.
        let spec = QuadratureSpec { panels: 1, rel_tol: 1e-15, max_refinements: 1 };
        let err = integrate(
            |x| Complex64::new((x - 0.3711).abs().powf(0.31), 0.0),
            0.0,
            1.0,
            &spec,
        )
        .unwrap_err();
        match err {
            Error::QuadratureAccuracy { achieved, requested } => {
                assert!(achieved > requested);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }
}
