//! Fourier-spectral function spaces on the periodic interval `[0, 2π)`.
//!
//! All states are stored as dense complex Fourier coefficients. The forward
//! transform divides by `n_phys`, so a constant field `c` maps to a single
//! `k = 0` coefficient equal to `c` and the `ℓ = 0` norm is the Parseval norm of
//! the coefficient vector.

mod grid;
mod norm;
mod operator;
mod state;
mod transform;

pub use grid::ModeGrid;
pub use norm::{project_pm, project_qm, y_ell_norm, FractionalExponent};
pub use operator::{apply_diag, DiagonalOperator};
pub use state::SpectralState;
pub use transform::{to_physical, to_spectral, to_spectral_real};

pub(crate) use transform::{forward_in_place, inverse_in_place};
