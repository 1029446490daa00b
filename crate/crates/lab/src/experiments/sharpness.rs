use expint_core::problems::{make_linear_commuting, Problem};
use expint_core::tableau::exponential_euler;
use expint_core::{integrate, Complex64, SpectralState, StageSolveConfig};
use serde::Serialize;

use crate::error::{LabError, LabResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SharpnessRow {
    pub k: i64,
    pub h: f64,
    pub n_steps: usize,
    pub error: f64,
}

/// Exponential Euler on `u' = iku + λu` with the resonant step `h = π/k`,
/// `n = k` steps, from `U⁰ = e_k` or `U⁰ = k^{−ℓ} e_k`; error against the
/// exact flow at `T = π`.
pub fn sharpness_probe(k_list: &[i64], lambda: f64, weight_ell: Option<f64>) -> LabResult<Vec<SharpnessRow>> {
    if k_list.is_empty() {
        return Err(LabError::Config("k list is empty".into()));
    }
    if let Some(&k) = k_list.iter().find(|&&k| k < 1) {
        return Err(LabError::Config(format!("wavenumbers must be >= 1, got {k}")));
    }
    if !(lambda <= 0.0) {
        return Err(LabError::Config(format!("lambda must be <= 0, got {lambda}")));
    }
    if let Some(ell) = weight_ell {
        if !(ell >= 0.0 && ell.is_finite()) {
            return Err(LabError::Config(format!("weight exponent must be >= 0, got {ell}")));
        }
    }
    let k_max = *k_list.iter().max().expect("non-empty");
    let problem = make_linear_commuting(4 * k_max as usize, |_| Complex64::new(lambda, 0.0))?;
    let tab = exponential_euler();
    let cfg = StageSolveConfig::default();
    k_list
        .iter()
        .map(|&k| {
            let amp = weight_ell.map_or(1.0, |ell| (k as f64).powf(-ell));
            let u0 = SpectralState::single_mode(problem.grid(), 1, 0, k, Complex64::new(amp, 0.0))?;
            let n = k as usize;
            let t = std::f64::consts::PI;
            let (un, _) = integrate(&problem, &tab, &u0, t, n, &cfg)?;
            let exact = problem.exact_flow(&u0, t)?;
            Ok(SharpnessRow {
                k,
                h: t / n as f64,
                n_steps: n,
                error: un.distance(&exact)?,
            })
        })
        .collect()
}
