//! Damped Euler toolkit.
//!
//! Exact reference solutions for the one-dimensional compressible Euler
//! equations with linear frictional damping (isothermal `P = ρ` and
//! isentropic `P = ρ^γ`), a finite-volume simulator for the same system, and
//! the functionals used to compare the two:
//!
//! * [`specfun`]: log-gamma, Wallis integrals, Kummer `M` / Tricomi `U` and
//!   the fundamental solutions of `t f'' + t f' + f/4 = 0`.
//! * [`profiles`]: Barenblatt profiles of the porous-medium equation and
//!   their Gaussian limit as `γ → 1`.
//! * [`gaussdyn`]: the dispersion ODE for `τ` and the exact Gaussian
//!   solutions of the damped isothermal system.
//! * [`solver`]: Rusanov finite volumes with exact Strang-split damping.
//! * [`diagnostics`]: self-similar rescaling, moments, energies, relative
//!   entropy, Fokker–Planck residuals and weighted-decay monitors.
//! * [`expcli`]: config parsing and the canned experiments behind the `del`
//!   binary.

pub mod diagnostics;
pub mod error;
pub mod expcli;
pub mod gaussdyn;
pub mod mesh;
pub mod ode;
pub mod profiles;
pub mod quadrature;
pub mod solver;
pub mod specfun;

pub use error::{Error, Result};
pub use mesh::Mesh;
