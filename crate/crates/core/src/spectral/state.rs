use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::ModeGrid;
use crate::{Error, Result};

/// Complex Fourier coefficients of all solution components.
///
/// Coefficients are laid out component-major: entry `(c, j)` lives at
/// `c * n_phys + j`, with `j` the storage index on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    grid: Arc<ModeGrid>,
    n_comp: usize,
    coeffs: Vec<Complex64>,
}

impl SpectralState {
    pub fn zeros(grid: &Arc<ModeGrid>, n_comp: usize) -> Self {
        assert!(n_comp > 0, "a state needs at least one component");
        Self {
            grid: grid.clone(),
            n_comp,
            coeffs: vec![Complex64::new(0.0, 0.0); n_comp * grid.len()],
        }
    }

    pub fn from_coeffs(grid: &Arc<ModeGrid>, n_comp: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if n_comp == 0 {
            return Err(Error::InvalidArgument("n_comp must be positive".into()));
        }
        let expected = n_comp * grid.len();
        if coeffs.len() != expected {
            return Err(Error::Dimension {
                expected,
                found: coeffs.len(),
            });
        }
        let state = Self {
            grid: grid.clone(),
            n_comp,
            coeffs,
        };
        state.check_finite("state construction")?;
        Ok(state)
    }

    /// State with a single nonzero coefficient at wavenumber `k` of component `comp`.
    pub fn single_mode(
        grid: &Arc<ModeGrid>,
        n_comp: usize,
        comp: usize,
        k: i64,
        value: Complex64,
    ) -> Result<Self> {
        let mut s = Self::zeros(grid, n_comp);
        s.set(comp, k, value)?;
        Ok(s)
    }

    /// Builds a state coefficient by coefficient from `(component, wavenumber)`.
    pub fn from_fn(
        grid: &Arc<ModeGrid>,
        n_comp: usize,
        mut f: impl FnMut(usize, i64) -> Complex64,
    ) -> Result<Self> {
        let coeffs = (0..n_comp)
            .flat_map(|c| grid.wavenumbers().iter().map(move |&k| (c, k)))
            .map(|(c, k)| f(c, k))
            .collect();
        Self::from_coeffs(grid, n_comp, coeffs)
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
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Mutable coefficient access. Callers must keep entries finite.
    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn component(&self, comp: usize) -> &[Complex64] {
        let n = self.grid.len();
        &self.coeffs[comp * n..(comp + 1) * n]
    }

    pub fn component_mut(&mut self, comp: usize) -> &mut [Complex64] {
        let n = self.grid.len();
        &mut self.coeffs[comp * n..(comp + 1) * n]
    }

    pub fn get(&self, comp: usize, k: i64) -> Option<Complex64> {
        let j = self.grid.index_of(k)?;
        (comp < self.n_comp).then(|| self.coeffs[comp * self.grid.len() + j])
    }

    pub fn set(&mut self, comp: usize, k: i64, value: Complex64) -> Result<()> {
        if comp >= self.n_comp {
            return Err(Error::InvalidArgument(alloc::format!(
                "component {comp} out of range ({} components)",
                self.n_comp
            )));
        }
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::NonFinite("coefficient assignment"));
        }
        let j = self
            .grid
            .index_of(k)
            .ok_or_else(|| Error::InvalidArgument(alloc::format!("wavenumber {k} not on grid")))?;
        let n = self.grid.len();
        self.coeffs[comp * n + j] = value;
        Ok(())
    }

    /// True when both states live on the same grid with the same component count.
    pub fn same_space(&self, other: &SpectralState) -> bool {
        self.n_comp == other.n_comp
            && (Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid)
    }

    pub(crate) fn ensure_same_space(&self, other: &SpectralState) -> Result<()> {
        if self.same_space(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub(crate) fn check_finite(&self, what: &'static str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite(what))
        }
    }

    /// Plain `𝒴` norm (Euclidean norm of the coefficient vector).
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn add(&self, other: &SpectralState) -> Result<SpectralState> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SpectralState) -> Result<SpectralState> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `self + alpha * x`.
    pub fn axpy(&self, alpha: Complex64, x: &SpectralState) -> Result<SpectralState> {
        self.zip_with(x, |a, b| a + alpha * b)
    }

    pub fn add_scaled_in_place(&mut self, alpha: Complex64, x: &SpectralState) -> Result<()> {
        self.ensure_same_space(x)?;
        for (a, b) in self.coeffs.iter_mut().zip(&x.coeffs) {
            *a += alpha * b;
        }
        Ok(())
    }

    pub fn scale(&self, alpha: Complex64) -> SpectralState {
        self.map(|c| alpha * c)
    }

    /// `𝒴` distance `‖self − other‖`.
    pub fn distance(&self, other: &SpectralState) -> Result<f64> {
        self.ensure_same_space(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> SpectralState {
        SpectralState {
            grid: self.grid.clone(),
            n_comp: self.n_comp,
            coeffs: self.coeffs.iter().map(|&c| f(c)).collect(),
        }
    }

    fn zip_with(
        &self,
        other: &SpectralState,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<SpectralState> {
        self.ensure_same_space(other)?;
        Ok(SpectralState {
            grid: self.grid.clone(),
            n_comp: self.n_comp,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }
}
