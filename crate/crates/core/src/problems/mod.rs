//! Model problems `U' = AU + B(U)` with `A` diagonal and skew in the stored basis.

mod data;
mod galerkin;
mod linear;
mod nls;
mod wave;

pub use data::y_ell_initial_data;
pub use galerkin::Projected;
pub use linear::{make_linear_commuting, LinearCommuting};
pub use nls::{make_nls, Nls};
pub use wave::{make_wave, Wave, WaveOptions, WaveSpace};

use alloc::boxed::Box;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::str::FromStr;

use num_complex::Complex64;

use crate::spectral::{forward_in_place, inverse_in_place, DiagonalOperator, ModeGrid, SpectralState};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    Wave,
    Nls,
    Linear,
}

impl ProblemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProblemKind::Wave => "wave",
            ProblemKind::Nls => "nls",
            ProblemKind::Linear => "linear",
        }
    }
}

impl FromStr for ProblemKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wave" => Ok(ProblemKind::Wave),
            "nls" => Ok(ProblemKind::Nls),
            "linear" => Ok(ProblemKind::Linear),
            other => Err(Error::InvalidArgument(format!(
                "unknown problem '{other}'; available: wave, nls, linear"
            ))),
        }
    }
}

/// A semilinear evolution equation `U' = AU + B(U)` discretized on a mode grid.
///
/// `A` must be diagonal with `Re ≤ 0`; `|A|` supplies the scale used by the
/// `𝒴_ℓ` norms and the projections.
pub trait Problem: Debug + Send + Sync {
    fn name(&self) -> &str;

    fn kind(&self) -> ProblemKind;

    fn grid(&self) -> &Arc<ModeGrid>;

    fn n_comp(&self) -> usize;

    /// `A` in the diagonalizing basis.
    fn linear(&self) -> &DiagonalOperator;

    /// `|A|` (nonnegative real eigenvalues).
    fn abs_linear(&self) -> &DiagonalOperator;

    fn nonlinearity(&self, u: &SpectralState) -> Result<SpectralState>;

    /// Exact derivative action `DB(u0) v`.
    fn derivative_action(&self, u0: &SpectralState, v: &SpectralState) -> Result<SpectralState>;

    /// `M'[R]`: bound of `‖DB(U)‖_{𝒴→𝒴}` over the ball of radius `R`, if known.
    fn lipschitz_bound(&self, _radius: f64) -> Option<f64> {
        None
    }

    /// Whether `DB(u0)` is complex-linear, which the dense Jacobian needs.
    fn derivative_is_complex_linear(&self) -> bool {
        true
    }

    /// Growth exponent `d` of `|A|` in the wavenumber, `|A|_k ~ |k|^d`.
    fn symbol_degree(&self) -> f64 {
        1.0
    }

    /// Maps Fourier coefficients of the physical fields (one block of
    /// `n_phys` per field, FFT order) to the stored basis.
    fn from_fields(&self, fields: &[Vec<Complex64>]) -> Result<SpectralState> {
        let n = self.grid().len();
        let coeffs: Vec<Complex64> = fields.iter().flat_map(|f| f.iter().copied()).collect();
        if fields.len() != self.n_comp() || fields.iter().any(|f| f.len() != n) {
            return Err(Error::Dimension {
                expected: self.n_comp() * n,
                found: coeffs.len(),
            });
        }
        SpectralState::from_coeffs(self.grid(), self.n_comp(), coeffs)
    }

    /// Inverse of [`Problem::from_fields`].
    fn to_fields(&self, state: &SpectralState) -> Result<Vec<Vec<Complex64>>> {
        self.check_state(state)?;
        Ok((0..state.n_comp()).map(|c| state.component(c).to_vec()).collect())
    }

    fn check_state(&self, state: &SpectralState) -> Result<()> {
        self.linear().ensure_compatible(state.grid(), state.n_comp())
    }
}

/// Builds a problem by CLI name on a grid of `n_phys` points. The linear
/// commuting problem uses the constant spectrum `λ_k = lambda`.
pub fn problem_by_name(name: &str, n_phys: usize, lambda: f64) -> Result<Box<dyn Problem>> {
    Ok(match name.parse::<ProblemKind>()? {
        ProblemKind::Wave => Box::new(make_wave(n_phys)?),
        ProblemKind::Nls => Box::new(make_nls(n_phys)?),
        ProblemKind::Linear => Box::new(make_linear_commuting(n_phys, |_| Complex64::new(lambda, 0.0))?),
    })
}

/// Physical samples of one coefficient block.
pub(crate) fn physical(block: &[Complex64]) -> Vec<Complex64> {
    let mut buf = block.to_vec();
    inverse_in_place(&mut buf);
    buf
}

/// Normalized coefficients of one block of physical samples.
pub(crate) fn spectral(mut buf: Vec<Complex64>) -> Vec<Complex64> {
    forward_in_place(&mut buf);
    buf
}

/// Zeroes wavenumbers above `n/3` (the 2/3 rule).
pub(crate) fn dealias(grid: &ModeGrid, block: &mut [Complex64]) {
    let cutoff = grid.n_phys() as i64 / 3;
    for (c, &k) in block.iter_mut().zip(grid.wavenumbers()) {
        if k.abs() > cutoff {
            *c = Complex64::new(0.0, 0.0);
        }
    }
}

/// `sqrt(Σ_k 1/(1+k²)) = sqrt(π coth π)`, the constant of `‖u‖_∞ ≤ C‖u‖_{H¹}`.
pub(crate) const SOBOLEV_SUP_CONSTANT: f64 = 1.775_766_903_322_945;
