use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{ModeGrid, SpectralState};
use crate::{Error, Result};

/// Operator that is diagonal in the stored Fourier/characteristic basis, and
/// therefore normal. Eigenvalues share the layout of [`SpectralState`].
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOperator {
    grid: Arc<ModeGrid>,
    n_comp: usize,
    eigenvalues: Vec<Complex64>,
}

impl DiagonalOperator {
    pub fn new(grid: &Arc<ModeGrid>, n_comp: usize, eigenvalues: Vec<Complex64>) -> Result<Self> {
        let expected = n_comp * grid.len();
        if eigenvalues.len() != expected {
            return Err(Error::Dimension {
                expected,
                found: eigenvalues.len(),
            });
        }
        if eigenvalues.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("diagonal operator eigenvalues"));
        }
        Ok(Self {
            grid: grid.clone(),
            n_comp,
            eigenvalues,
        })
    }

    /// Builds the eigenvalues from `(component, wavenumber)`.
    pub fn from_fn(
        grid: &Arc<ModeGrid>,
        n_comp: usize,
        mut f: impl FnMut(usize, i64) -> Complex64,
    ) -> Result<Self> {
        let eigenvalues = (0..n_comp)
            .flat_map(|c| grid.wavenumbers().iter().map(move |&k| (c, k)))
            .map(|(c, k)| f(c, k))
            .collect();
        Self::new(grid, n_comp, eigenvalues)
    }

    pub fn identity(grid: &Arc<ModeGrid>, n_comp: usize) -> Self {
        Self::constant(grid, n_comp, Complex64::new(1.0, 0.0))
    }

    pub fn constant(grid: &Arc<ModeGrid>, n_comp: usize, value: Complex64) -> Self {
        Self {
            grid: grid.clone(),
            n_comp,
            eigenvalues: alloc::vec![value; n_comp * grid.len()],
        }
    }

    #[inline]
    pub fn grid(&self) -> &Arc<ModeGrid> {
        &self.grid
    }

    #[inline]
    pub fn n_comp(&self) -> usize {
        self.n_comp
    }

    #[inline]
    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn eigenvalue(&self, comp: usize, k: i64) -> Option<Complex64> {
        let j = self.grid.index_of(k)?;
        (comp < self.n_comp).then(|| self.eigenvalues[comp * self.grid.len() + j])
    }

    /// Largest real part over the spectrum.
    pub fn max_real_part(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest eigenvalue modulus (the operator norm of a normal operator).
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Functional calculus: applies `f` to every eigenvalue.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> DiagonalOperator {
        DiagonalOperator {
            grid: self.grid.clone(),
            n_comp: self.n_comp,
            eigenvalues: self.eigenvalues.iter().map(|&z| f(z)).collect(),
        }
    }

    pub(crate) fn try_map(
        &self,
        mut f: impl FnMut(Complex64) -> Result<Complex64>,
    ) -> Result<DiagonalOperator> {
        let eigenvalues = self
            .eigenvalues
            .iter()
            .map(|&z| f(z))
            .collect::<Result<Vec<_>>>()?;
        Ok(DiagonalOperator {
            grid: self.grid.clone(),
            n_comp: self.n_comp,
            eigenvalues,
        })
    }

    pub fn scale(&self, alpha: Complex64) -> DiagonalOperator {
        self.map(|z| alpha * z)
    }

    /// Operator product; diagonal operators commute.
    pub fn compose(&self, other: &DiagonalOperator) -> Result<DiagonalOperator> {
        self.ensure_compatible(other.grid(), other.n_comp)?;
        Ok(DiagonalOperator {
            grid: self.grid.clone(),
            n_comp: self.n_comp,
            eigenvalues: self
                .eigenvalues
                .iter()
                .zip(&other.eigenvalues)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn add(&self, other: &DiagonalOperator) -> Result<DiagonalOperator> {
        self.ensure_compatible(other.grid(), other.n_comp)?;
        Ok(DiagonalOperator {
            grid: self.grid.clone(),
            n_comp: self.n_comp,
            eigenvalues: self
                .eigenvalues
                .iter()
                .zip(&other.eigenvalues)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn apply(&self, state: &SpectralState) -> Result<SpectralState> {
        apply_diag(self, state)
    }

    pub(crate) fn ensure_compatible(&self, grid: &Arc<ModeGrid>, n_comp: usize) -> Result<()> {
        if self.n_comp == n_comp && (Arc::ptr_eq(&self.grid, grid) || *self.grid == **grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

/// Elementwise product of eigenvalues and coefficients.
pub fn apply_diag(op: &DiagonalOperator, state: &SpectralState) -> Result<SpectralState> {
    op.ensure_compatible(state.grid(), state.n_comp())?;
    let mut out = state.clone();
    for (c, z) in out.coeffs_mut().iter_mut().zip(&op.eigenvalues) {
        *c *= z;
    }
    out.check_finite("apply_diag")?;
    Ok(out)
}
