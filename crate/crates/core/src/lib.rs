//! Longitudinal vibrations of a bar with a viscous damper at each end.
//!
//! The damper boundary conditions make the wave operator non-self-adjoint:
//! eigenvalues are complex (one shared real part, imaginary parts spaced by
//! πc/L) and the modes are orthogonal only against the modes of the adjoint
//! operator. This crate computes that spectrum, the biorthogonal expansion,
//! and the vibratory response, together with a linear finite-element
//! reference model used for convergence and spurious-eigenvalue studies.
//!
//! - [`bar`]: physical parameters, nondimensionalization, boundary classes.
//! - [`spectral`]: eigenvalues, direct/adjoint modes, inner product,
//!   expansion coefficients.
//! - [`excitation`]: the closed catalog of initial conditions and forcing.
//! - [`response`]: modal series assembly (general and simplified paths),
//!   the fixed-damper harmonic series, and the rigid-bar limit.
//! - [`fem`]: assembled mass/damping/stiffness, state-matrix eigenvalues,
//!   Newmark time march, spurious-eigenvalue scan.
//! - [`verify`]: manufactured solution, limit-case spectra, identity and
//!   Parseval residuals, and the named check battery.

pub mod bar;
pub mod error;
pub mod excitation;
pub mod fem;
pub mod quadrature;
pub mod response;
pub mod spectral;
pub mod verify;

pub use bar::{classify, derive_config, BarConfig, ConfigClass, PhysicalBar};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use excitation::{ExcitationSpec, ForcingTerm, Profile, TimeProfile};
pub use response::{response, FieldResult, Method};
pub use spectral::{eigenvalue, spectrum, EigenPair, ModeIndex};
