use expint_core::problems::{Problem, Projected};
use expint_core::tableau::cox_matthews_4;
use expint_core::{integrate, SpectralState, StageSolveConfig};
use rayon::prelude::*;
use serde::Serialize;

use super::{fit_line, reference_solution, ReferenceSpec, NOISE_FLOOR};
use crate::error::{LabError, LabResult};

/// Reference resolution of Galerkin scans: `h_min = T / 64`, so the full and
/// projected systems take `2 · 32 · 64` Cox-Matthews steps.
pub fn galerkin_reference_spec(t_final: f64) -> ReferenceSpec {
    ReferenceSpec::for_h_min(t_final / 64.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GalerkinScan {
    pub m_values: Vec<f64>,
    pub errors: Vec<f64>,
    /// Slope of `log(error)` against `log(m)` over the errors above the noise
    /// floor; `None` with fewer than two such points.
    pub fitted_slope: Option<f64>,
    pub reference_steps: usize,
    pub reference_diff: f64,
}

/// Distance at `T` between the full solution and the Galerkin systems
/// `u' = Au + P_m B(P_m u)` started from `P_m U⁰`, both integrated with the
/// reference method at the reference resolution.
pub fn galerkin_scan(
    problem: &dyn Problem,
    u0: &SpectralState,
    t_final: f64,
    m_list: &[f64],
    spec: &ReferenceSpec,
) -> LabResult<GalerkinScan> {
    if m_list.len() < 2 {
        return Err(LabError::Config("Galerkin scan needs at least two cutoffs".into()));
    }
    if m_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(LabError::Config("cutoffs must be strictly increasing".into()));
    }
    let projected = m_list
        .iter()
        .map(|&m| Projected::new(problem, m).map_err(LabError::from))
        .collect::<LabResult<Vec<_>>>()?;
    let truth = reference_solution(problem, u0, t_final, spec)?;
    let tab = cox_matthews_4();
    let cfg = StageSolveConfig::default();
    let errors = projected
        .par_iter()
        .map(|p| {
            let um0 = p.project(u0)?;
            let (um, _) = integrate(p, &tab, &um0, t_final, truth.n_steps, &cfg)?;
            Ok(um.distance(&truth.state)?)
        })
        .collect::<LabResult<Vec<f64>>>()?;
    if let Some(e) = errors.iter().find(|e| !e.is_finite()) {
        return Err(LabError::DegenerateLadder(format!("Galerkin error {e} is not finite")));
    }
    let (x, y): (Vec<f64>, Vec<f64>) = m_list
        .iter()
        .zip(&errors)
        .filter(|(_, &e)| e >= NOISE_FLOOR)
        .map(|(m, e)| (m.ln(), e.ln()))
        .unzip();
    let fitted_slope = (x.len() >= 2).then(|| fit_line(&x, &y).0);
    Ok(GalerkinScan {
        m_values: m_list.to_vec(),
        errors,
        fitted_slope,
        reference_steps: truth.n_steps,
        reference_diff: truth.validation_diff,
    })
}
