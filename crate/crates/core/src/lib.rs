//! Exponential integrators for semilinear evolution equations `U' = AU + B(U)`
//! on periodic Fourier-Galerkin spaces.
//!
//! The crate is `no_std` + `alloc`. With the default `std` feature the
//! spectral transforms run through `rustfft`; without it a direct DFT is used
//! and the `libm` feature must be enabled for the floating point intrinsics.
//!
//! Layout:
//! - [`spectral`]: mode grids, spectral states, diagonal operators, `𝒴_ℓ` norms
//!   and the projections `P_m`, `Q_m`.
//! - [`phi`]: the `φ_k` functions on scalars, diagonal operators and dense
//!   matrices (augmented-exponential route).
//! - [`linalg`]: the small dense complex matrix kernel behind the matrix `φ_k`.
//! - [`tableau`]: exponential Runge-Kutta / Rosenbrock coefficient tableaus.
//! - [`exprk`]: exponential Runge-Kutta stepping and trajectories.
//! - [`rosenbrock`]: exponential Rosenbrock stepping on the active Galerkin space.
//! - [`problems`]: semilinear wave, cubic NLS, the linear commuting example and
//!   low-regularity initial data.

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_debug_implementations)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::wrong_self_convention)]

extern crate alloc;

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("expint-core needs either the `std` or the `libm` feature for float intrinsics");

mod error;

pub mod exprk;
pub mod linalg;
pub mod phi;
pub mod problems;
pub mod rosenbrock;
pub mod spectral;
pub mod tableau;

pub use error::{Error, Result};

/// Version of this crate.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use num_complex::Complex64;

pub use exprk::{integrate, solve_stages, step, ExpRkStepper, StageSolveConfig, StepReport};
pub use linalg::DenseMatrix;
pub use phi::{phi_diag, phi_matvec, phi_scalar, PhiOrder, SpectrumPolicy};
pub use problems::{Problem, ProblemKind};
pub use rosenbrock::{
    assemble_jacobian, remainder_g, rosenbrock_step, JacobianOperator, RosenbrockConfig,
    RosenbrockTableau,
};
pub use spectral::{
    apply_diag, project_pm, project_qm, to_physical, to_spectral, y_ell_norm, DiagonalOperator,
    FractionalExponent, ModeGrid, SpectralState,
};
pub use tableau::{builtin_tableaus, ExponentialTableau, PhiCombination, PhiTerm};
