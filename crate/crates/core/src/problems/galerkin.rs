use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{Problem, ProblemKind};
use crate::spectral::{project_pm, DiagonalOperator, ModeGrid, SpectralState};
use crate::{Error, Result};

/// Galerkin-truncated problem `u' = Au + P_m B(P_m u)`.
///
/// Solutions started in the range of `P_m` stay there, because `A` is diagonal.
#[derive(Debug, Clone)]
pub struct Projected<P> {
    inner: P,
    cutoff: f64,
    name: String,
}

impl<P: Problem> Projected<P> {
    /// Fails when `cutoff` is not below the largest `|A|`-eigenvalue on the
    /// grid; beyond that the truncation is the identity and resolves nothing.
    pub fn new(inner: P, cutoff: f64) -> Result<Self> {
        let top = inner.abs_linear().spectral_radius();
        if !(cutoff > 0.0 && cutoff < top) {
            return Err(Error::InvalidArgument(format!(
                "Galerkin cutoff {cutoff} outside the resolvable range (0, {top})"
            )));
        }
        let name = format!("{}|P_{cutoff}", inner.name());
        Ok(Self { inner, cutoff, name })
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn inner(&self) -> &P {
        &self.inner
    }

    pub fn project(&self, u: &SpectralState) -> Result<SpectralState> {
        project_pm(u, self.inner.abs_linear(), self.cutoff)
    }
}

impl<P: Problem> Problem for Projected<P> {
    fn name(&self) -> &str {
        &self.name
    }

    fn kind(&self) -> ProblemKind {
        self.inner.kind()
    }

    fn grid(&self) -> &Arc<ModeGrid> {
        self.inner.grid()
    }

    fn n_comp(&self) -> usize {
        self.inner.n_comp()
    }

    fn linear(&self) -> &DiagonalOperator {
        self.inner.linear()
    }

    fn abs_linear(&self) -> &DiagonalOperator {
        self.inner.abs_linear()
    }

    fn nonlinearity(&self, u: &SpectralState) -> Result<SpectralState> {
        self.project(&self.inner.nonlinearity(&self.project(u)?)?)
    }

    fn derivative_action(&self, u0: &SpectralState, v: &SpectralState) -> Result<SpectralState> {
        self.project(&self.inner.derivative_action(&self.project(u0)?, &self.project(v)?)?)
    }

    fn lipschitz_bound(&self, radius: f64) -> Option<f64> {
        self.inner.lipschitz_bound(radius)
    }

    fn derivative_is_complex_linear(&self) -> bool {
        self.inner.derivative_is_complex_linear()
    }

    fn symbol_degree(&self) -> f64 {
        self.inner.symbol_degree()
    }

    fn from_fields(&self, fields: &[Vec<Complex64>]) -> Result<SpectralState> {
        self.inner.from_fields(fields)
    }

    fn to_fields(&self, state: &SpectralState) -> Result<Vec<Vec<Complex64>>> {
        self.inner.to_fields(state)
    }
}

impl<P: Problem + ?Sized> Problem for &P {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn kind(&self) -> ProblemKind {
        (**self).kind()
    }
    fn grid(&self) -> &Arc<ModeGrid> {
        (**self).grid()
    }
    fn n_comp(&self) -> usize {
        (**self).n_comp()
    }
    fn linear(&self) -> &DiagonalOperator {
        (**self).linear()
    }
    fn abs_linear(&self) -> &DiagonalOperator {
        (**self).abs_linear()
    }
    fn nonlinearity(&self, u: &SpectralState) -> Result<SpectralState> {
        (**self).nonlinearity(u)
    }
    fn derivative_action(&self, u0: &SpectralState, v: &SpectralState) -> Result<SpectralState> {
        (**self).derivative_action(u0, v)
    }
    fn lipschitz_bound(&self, radius: f64) -> Option<f64> {
        (**self).lipschitz_bound(radius)
    }
    fn derivative_is_complex_linear(&self) -> bool {
        (**self).derivative_is_complex_linear()
    }
    fn symbol_degree(&self) -> f64 {
        (**self).symbol_degree()
    }
    fn from_fields(&self, fields: &[Vec<Complex64>]) -> Result<SpectralState> {
        (**self).from_fields(fields)
    }
    fn to_fields(&self, state: &SpectralState) -> Result<Vec<Vec<Complex64>>> {
        (**self).to_fields(state)
    }
}
