//! Linear finite-element reference model.
//!
//! The bar is split into n equal linear elements. In nondimensional form the
//! assembled system is
//!
//! (L/6nc)·tri[1, 4, 1]·Ü + diag(h1, 0, …, 0, h2)·U̇ + (nc/L)·tri[−1, 2, −1]·U
//!   = (1/c)·(consistent load of p),
//!
//! which equals the dimensional assembly scaled by 1/(ρA0c); the common
//! factor leaves the state-matrix spectrum untouched. The module provides
//! eigenvalues of the first-order state matrix, an average-acceleration time
//! march, and the scan that exposes the spurious positive-real eigenvalue the
//! discretization can introduce even when the continuous spectrum is stable.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::bar::BarConfig;
use crate::error::{Error, Result};
use crate::excitation::{ExcitationSpec, ForcingTerm};
use crate::quadrature::{self, QuadratureSpec};

/// Assembled mass, damping, and stiffness with the forcing functional.
#[derive(Clone, Debug)]
pub struct FemSystem {
    cfg: BarConfig,
    elements: usize,
    mass: DMatrix<f64>,
    damping: DMatrix<f64>,
    stiffness: DMatrix<f64>,
    forcing: ForcingTerm,
}

/// Dense first-order form [[0, I], [−M⁻¹K, −M⁻¹C]].
#[derive(Clone, Debug)]
pub struct StateMatrix {
    matrix: DMatrix<f64>,
}

impl StateMatrix {
    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn order(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Nodal displacement and velocity histories of one time march.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub dt: f64,
    pub nodes: Vec<f64>,
    /// One snapshot per step, including t = 0.
    pub displacement: Vec<DVector<f64>>,
    pub velocity: Vec<DVector<f64>>,
}

impl Trajectory {
    pub fn steps(&self) -> usize {
        self.displacement.len()
    }

    pub fn time(&self, step: usize) -> f64 {
        step as f64 * self.dt
    }

    pub fn last_displacement(&self) -> &DVector<f64> {
        self.displacement.last().expect("trajectory holds the initial state")
    }
}

/// Assemble the n-element system for `cfg` with load functional `p`.
pub fn assemble(cfg: &BarConfig, elements: usize, forcing: ForcingTerm) -> Result<FemSystem> {
    if elements < 1 {
        return Err(Error::InvalidInput("element count must be at least 1".into()));
    }
    let n = elements;
    let dofs = n + 1;
    let (c, length) = (cfg.wave_speed, cfg.length);
    let el = length / n as f64;

    let mut mass = DMatrix::zeros(dofs, dofs);
    let mut stiffness = DMatrix::zeros(dofs, dofs);
    let m_scale = el / (6.0 * c);
    let k_scale = c / el;
    for e in 0..n {
        mass[(e, e)] += 2.0 * m_scale;
        mass[(e, e + 1)] += m_scale;
        mass[(e + 1, e)] += m_scale;
        mass[(e + 1, e + 1)] += 2.0 * m_scale;
        stiffness[(e, e)] += k_scale;
        stiffness[(e, e + 1)] -= k_scale;
        stiffness[(e + 1, e)] -= k_scale;
        stiffness[(e + 1, e + 1)] += k_scale;
    }
    let mut damping = DMatrix::zeros(dofs, dofs);
    damping[(0, 0)] = cfg.h1;
    damping[(dofs - 1, dofs - 1)] = cfg.h2;

    Ok(FemSystem { cfg: *cfg, elements, mass, damping, stiffness, forcing })
}

impl FemSystem {
    pub fn config(&self) -> &BarConfig {
        &self.cfg
    }

    pub fn elements(&self) -> usize {
        self.elements
    }

    pub fn dofs(&self) -> usize {
        self.elements + 1
    }

    pub fn mass(&self) -> &DMatrix<f64> {
        &self.mass
    }

    pub fn damping(&self) -> &DMatrix<f64> {
        &self.damping
    }

    pub fn stiffness(&self) -> &DMatrix<f64> {
        &self.stiffness
    }

    pub fn element_length(&self) -> f64 {
        self.cfg.length / self.elements as f64
    }

    pub fn node_positions(&self) -> Vec<f64> {
        let el = self.element_length();
        (0..self.dofs()).map(|i| i as f64 * el).collect()
    }

    /// Consistent nodal load at time t: element e contributes
    /// ∫_0^l (1−s/l)·p(x_e+s) ds to its left node and ∫_0^l (s/l)·p(x_e+s) ds
    /// to its right node, all scaled by 1/c.
    pub fn load_vector(&self, t: f64) -> Result<DVector<f64>> {
        let mut load = DVector::zeros(self.dofs());
        if self.forcing.is_zero() {
            return Ok(load);
        }
        match &self.forcing {
            ForcingTerm::TimeImpulse { .. } => {
                return Err(Error::InvalidInput(
                    "impulsive forcing cannot be time-marched; convert it to an initial velocity"
                        .into(),
                ))
            }
            ForcingTerm::PointHarmonic { .. } => {
                return Err(Error::InvalidInput(
                    "complex point-harmonic forcing is not supported by the FEM march".into(),
                ))
            }
            _ => {}
        }
        let el = self.element_length();
        let quad = QuadratureSpec { panels: 2, ..Default::default() };
        let p = |x: f64| -> f64 {
            match &self.forcing {
                ForcingTerm::Zero => 0.0,
                ForcingTerm::Constant(a) => *a,
                ForcingTerm::Separable { space, time } => space.eval(x) * time.eval(t),
                ForcingTerm::Sampled(field) => field.eval(x, t),
                ForcingTerm::TimeImpulse { .. } | ForcingTerm::PointHarmonic { .. } => {
                    unreachable!("rejected above")
                }
            }
        };
        for e in 0..self.elements {
            let xe = e as f64 * el;
            let left =
                quadrature::integrate_real(|s| (1.0 - s / el) * p(xe + s), 0.0, el, &quad)?;
            let right = quadrature::integrate_real(|s| (s / el) * p(xe + s), 0.0, el, &quad)?;
            load[e] += left;
            load[e + 1] += right;
        }
        Ok(load / self.cfg.wave_speed)
    }

    /// First-order state matrix; M is applied through its LU factorization.
    pub fn state_matrix(&self) -> Result<StateMatrix> {
        let dofs = self.dofs();
        let lu = self.mass.clone().lu();
        let minv_k = lu
            .solve(&self.stiffness)
            .ok_or_else(|| Error::Numerical("mass matrix factorization failed".into()))?;
        let minv_c = lu
            .solve(&self.damping)
            .ok_or_else(|| Error::Numerical("mass matrix factorization failed".into()))?;
        let mut a = DMatrix::zeros(2 * dofs, 2 * dofs);
        for i in 0..dofs {
            a[(i, dofs + i)] = 1.0;
            for j in 0..dofs {
                a[(dofs + i, j)] = -minv_k[(i, j)];
                a[(dofs + i, dofs + j)] = -minv_c[(i, j)];
            }
        }
        Ok(StateMatrix { matrix: a })
    }
}

/// All 2(n+1) state-matrix eigenvalues, sorted by imaginary then real part.
pub fn fem_spectrum(sys: &FemSystem) -> Result<Vec<Complex64>> {
    let state = sys.state_matrix()?;
    spectrum_of(&state)
}

/// Parlett-Reinsch balancing: diagonal similarity scaling by radix powers
/// until row and column norms agree. The velocity and acceleration blocks of
/// the state matrix differ by O(n²) in scale, which costs the unbalanced QR
/// iteration several digits on the real parts.
fn balanced(matrix: &DMatrix<f64>) -> DMatrix<f64> {
    const RADIX: f64 = 2.0;
    let mut a = matrix.clone();
    let n = a.nrows();
    loop {
        let mut done = true;
        for i in 0..n {
            let mut row = 0.0;
            let mut col = 0.0;
            for j in 0..n {
                if j != i {
                    row += a[(i, j)].abs();
                    col += a[(j, i)].abs();
                }
            }
            if row == 0.0 || col == 0.0 {
                continue;
            }
            let total = row + col;
            let mut factor = 1.0;
            while col < row / RADIX {
                col *= RADIX;
                row /= RADIX;
                factor *= RADIX;
            }
            while col >= row * RADIX {
                col /= RADIX;
                row *= RADIX;
                factor /= RADIX;
            }
            if col + row < 0.95 * total {
                done = false;
                for j in 0..n {
                    a[(i, j)] /= factor;
                    a[(j, i)] *= factor;
                }
            }
        }
        if done {
            return a;
        }
    }
}

/// Eigenvalues of an already-built state matrix: balancing followed by the
/// Schur decomposition.
pub fn spectrum_of(state: &StateMatrix) -> Result<Vec<Complex64>> {
    let eigs = balanced(&state.matrix).complex_eigenvalues();
    let mut out: Vec<Complex64> = eigs.iter().copied().collect();
    if out.iter().any(|l| !l.re.is_finite() || !l.im.is_finite()) {
        return Err(Error::Numerical(format!(
            "eigensolver returned non-finite values (order {}, condition estimate unavailable)",
            state.order()
        )));
    }
    out.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
    Ok(out)
}

/// Average-acceleration (Newmark β = 1/4, γ = 1/2) implicit march from the
/// initial state sampled off `exc`; unconditionally stable and second-order
/// for this linear system. The forcing comes from the assembled system.
pub fn fem_integrate(sys: &FemSystem, exc: &ExcitationSpec, dt: f64, t_final: f64) -> Result<Trajectory> {
    if dt <= 0.0 || dt.is_nan() {
        return Err(Error::InvalidInput(format!("time step must be positive, got {dt}")));
    }
    if t_final < dt {
        return Err(Error::InvalidInput(format!(
            "final time {t_final} must be at least one step {dt}"
        )));
    }
    const BETA: f64 = 0.25;
    const GAMMA: f64 = 0.5;

    let nodes = sys.node_positions();
    let mut u = DVector::from_iterator(nodes.len(), nodes.iter().map(|&x| exc.f.eval(x)));
    let mut v = DVector::from_iterator(nodes.len(), nodes.iter().map(|&x| exc.g.eval(x)));

    let mass_lu = sys.mass.clone().lu();
    let rhs0 = sys.load_vector(0.0)? - &sys.damping * &v - &sys.stiffness * &u;
    let mut a = mass_lu
        .solve(&rhs0)
        .ok_or_else(|| Error::Numerical("initial acceleration solve failed".into()))?;

    let effective = &sys.mass + GAMMA * dt * &sys.damping + BETA * dt * dt * &sys.stiffness;
    let effective_lu = effective.lu();

    let steps = (t_final / dt).round() as usize;
    let mut displacement = Vec::with_capacity(steps + 1);
    let mut velocity = Vec::with_capacity(steps + 1);
    displacement.push(u.clone());
    velocity.push(v.clone());

    for step in 1..=steps {
        let t_next = step as f64 * dt;
        let u_pred = &u + dt * &v + (0.5 - BETA) * dt * dt * &a;
        let v_pred = &v + (1.0 - GAMMA) * dt * &a;
        let rhs = sys.load_vector(t_next)? - &sys.damping * &v_pred - &sys.stiffness * &u_pred;
        let a_next = effective_lu
            .solve(&rhs)
            .ok_or_else(|| Error::Numerical("effective stiffness solve failed".into()))?;
        u = u_pred + BETA * dt * dt * &a_next;
        v = v_pred + GAMMA * dt * &a_next;
        a = a_next;
        displacement.push(u.clone());
        velocity.push(v.clone());
    }

    Ok(Trajectory { dt, nodes, displacement, velocity })
}

/// Default threshold above which a state-matrix eigenvalue counts as
/// unstable.
pub const INSTABILITY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug)]
pub struct SpuriousEntry {
    pub elements: usize,
    pub max_real_part: f64,
    pub unstable: bool,
}

/// Scan result: per-mesh largest real parts plus a growth summary.
#[derive(Clone, Debug)]
pub struct SpuriousReport {
    pub entries: Vec<SpuriousEntry>,
    pub tolerance: f64,
    /// Whether max Re grows monotonically over the scanned meshes.
    pub monotone_growth: bool,
}

impl SpuriousReport {
    pub fn any_unstable(&self) -> bool {
        self.entries.iter().any(|e| e.unstable)
    }
}

/// For each mesh size, report the largest real part over the state-matrix
/// spectrum and flag it against `tolerance`.
pub fn spurious_scan(cfg: &BarConfig, element_counts: &[usize], tolerance: f64) -> Result<SpuriousReport> {
    let mut entries = Vec::with_capacity(element_counts.len());
    for &n in element_counts {
        let sys = assemble(cfg, n, ForcingTerm::Zero)?;
        let spectrum = fem_spectrum(&sys)?;
        let max_real_part = spectrum.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
        entries.push(SpuriousEntry { elements: n, max_real_part, unstable: max_real_part > tolerance });
    }
    let monotone_growth = entries.windows(2).all(|w| w[1].max_real_part >= w[0].max_real_part);
    Ok(SpuriousReport { entries, tolerance, monotone_growth })
}
