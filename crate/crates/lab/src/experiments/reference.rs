use expint_core::problems::Problem;
use expint_core::tableau::cox_matthews_4;
use expint_core::{integrate, SpectralState, StageSolveConfig};
use serde::Serialize;

use super::Method;
use crate::error::{LabError, LabResult};

/// How a reference solution is resolved and checked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceSpec {
    /// Smallest step of the experiment the reference serves.
    pub h_min: f64,
    /// `h_ref = h_min / refine`.
    pub refine: usize,
    /// Largest accepted change when the step count is doubled.
    pub tol: f64,
}

impl ReferenceSpec {
    pub fn for_h_min(h_min: f64) -> Self {
        Self {
            h_min,
            refine: 32,
            tol: 1e-10,
        }
    }

    pub fn n_steps(&self, t_final: f64) -> usize {
        let h_ref = self.h_min / self.refine as f64;
        ((t_final / h_ref) - 1e-9).ceil().max(1.0) as usize
    }
}

#[derive(Debug, Clone)]
pub struct Reference {
    pub state: SpectralState,
    /// Steps of the returned (finer) solution.
    pub n_steps: usize,
    /// `𝒴` distance between the solutions with `n_steps / 2` and `n_steps` steps.
    pub validation_diff: f64,
}

/// Fourth-order Cox-Matthews solution at `T`, checked by doubling the step count.
pub fn reference_solution(
    problem: &dyn Problem,
    u0: &SpectralState,
    t_final: f64,
    spec: &ReferenceSpec,
) -> LabResult<Reference> {
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(LabError::Config(format!("T must be > 0, got {t_final}")));
    }
    if !(spec.h_min > 0.0) || spec.refine == 0 || !(spec.tol > 0.0) {
        return Err(LabError::Config(format!("invalid reference spec {spec:?}")));
    }
    let tab = cox_matthews_4();
    let cfg = StageSolveConfig::default();
    let n = spec.n_steps(t_final);
    let (coarse, _) = integrate(problem, &tab, u0, t_final, n, &cfg)?;
    let (fine, _) = integrate(problem, &tab, u0, t_final, 2 * n, &cfg)?;
    let diff = coarse.distance(&fine)?;
    if !(diff <= spec.tol) {
        return Err(LabError::UnreliableReference { diff, tol: spec.tol });
    }
    Ok(Reference {
        state: fine,
        n_steps: 2 * n,
        validation_diff: diff,
    })
}

/// `‖U_ref − (Ψ^h)^n U⁰‖_𝒴` with `h = T / n_steps`.
pub fn trajectory_error(
    problem: &dyn Problem,
    method: &Method,
    u0: &SpectralState,
    t_final: f64,
    n_steps: usize,
    reference: &SpectralState,
    stage: &StageSolveConfig,
) -> LabResult<f64> {
    if n_steps == 0 {
        return Err(LabError::Config("n_steps must be >= 1".into()));
    }
    let un = method.integrate(problem, u0, t_final, n_steps, stage)?;
    Ok(un.distance(reference)?)
}
