use expint_core::problems::{y_ell_initial_data, Problem};
use expint_core::{FractionalExponent, SpectralState, StageSolveConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{estimate_order, reference_solution, trajectory_error, ErrorLadder, LadderMeta, Method, OrderEstimate, ReferenceSpec};
use crate::error::{LabError, LabResult};

/// Step sizes of a convergence study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HLadder {
    /// `h_j = T / 2^j` for `j = j_min..=j_max`.
    Dyadic { j_min: u32, j_max: u32 },
    /// Explicit step sizes; each must divide `T`.
    Explicit(Vec<f64>),
}

impl Default for HLadder {
    fn default() -> Self {
        HLadder::Dyadic { j_min: 4, j_max: 9 }
    }
}

impl HLadder {
    /// Parses `jmin:jmax`.
    pub fn parse_dyadic(s: &str) -> LabResult<Self> {
        let bad = || LabError::Config(format!("ladder must look like 'jmin:jmax', got '{s}'"));
        let (a, b) = s.split_once(':').ok_or_else(bad)?;
        let j_min = a.trim().parse().map_err(|_| bad())?;
        let j_max = b.trim().parse().map_err(|_| bad())?;
        Ok(HLadder::Dyadic { j_min, j_max })
    }

    /// `(h, n)` pairs with `n h = T`, `h` strictly decreasing.
    pub fn steps(&self, t_final: f64) -> LabResult<Vec<(f64, usize)>> {
        let out: Vec<(f64, usize)> = match self {
            HLadder::Dyadic { j_min, j_max } => {
                if j_min > j_max || *j_max > 30 {
                    return Err(LabError::Config(format!("bad dyadic ladder {j_min}:{j_max}")));
                }
                (*j_min..=*j_max)
                    .map(|j| {
                        let n = 1usize << j;
                        (t_final / n as f64, n)
                    })
                    .collect()
            }
            HLadder::Explicit(hs) => hs
                .iter()
                .map(|&h| {
                    if !(h > 0.0 && h.is_finite()) {
                        return Err(LabError::Config(format!("step size must be > 0, got {h}")));
                    }
                    let n = (t_final / h).round();
                    if n < 1.0 || (n * h - t_final).abs() > 1e-9 * t_final {
                        return Err(LabError::Config(format!("step size {h} does not divide T = {t_final}")));
                    }
                    Ok((h, n as usize))
                })
                .collect::<LabResult<_>>()?,
        };
        if out.len() < 3 {
            return Err(LabError::Config(format!("ladder needs at least 3 step sizes, got {}", out.len())));
        }
        if out.windows(2).any(|w| w[1].0 >= w[0].0) {
            return Err(LabError::Config("ladder step sizes must be strictly decreasing".into()));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanEntry {
    pub ell: f64,
    pub ladder: ErrorLadder,
    pub estimate: OrderEstimate,
    pub reference_steps: usize,
    pub reference_diff: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderScan {
    pub method: String,
    pub classical_order: u32,
    pub entries: Vec<ScanEntry>,
}

/// Empirical order for `𝒴_ℓ` initial data, one ladder per `ℓ`.
pub fn order_scan(
    problem: &dyn Problem,
    method: &Method,
    ells: &[f64],
    t_final: f64,
    ladder: &HLadder,
    epsilon: f64,
    stage: &StageSolveConfig,
) -> LabResult<OrderScan> {
    if ells.is_empty() {
        return Err(LabError::Config("ell list is empty".into()));
    }
    let steps = ladder.steps(t_final)?;
    let target = method.target(problem)?;
    let tp = target.problem();
    let h_min = steps.last().expect("non-empty ladder").0;
    let spec = ReferenceSpec::for_h_min(h_min);
    let entries = ells
        .par_iter()
        .map(|&ell| {
            let data = y_ell_initial_data(problem, FractionalExponent::new(ell)?, epsilon, &[])?;
            let u0 = target.initial(&data)?;
            let meta = LadderMeta {
                problem: problem.name().to_string(),
                method: method.name().to_string(),
                ell: Some(ell),
                t_final,
            };
            ladder_for(tp, method, &u0, t_final, &steps, &spec, stage, meta).map(|(ladder, estimate, r)| ScanEntry {
                ell,
                ladder,
                estimate,
                reference_steps: r.0,
                reference_diff: r.1,
            })
        })
        .collect::<LabResult<Vec<_>>>()?;
    Ok(OrderScan {
        method: method.name().to_string(),
        classical_order: method.classical_order(),
        entries,
    })
}

/// Ladder and fit for one initial datum; also returns the reference's step
/// count and validation difference.
#[allow(clippy::too_many_arguments)]
pub(crate) fn ladder_for(
    problem: &dyn Problem,
    method: &Method,
    u0: &SpectralState,
    t_final: f64,
    steps: &[(f64, usize)],
    spec: &ReferenceSpec,
    stage: &StageSolveConfig,
    meta: LadderMeta,
) -> LabResult<(ErrorLadder, OrderEstimate, (usize, f64))> {
    let reference = reference_solution(problem, u0, t_final, spec)?;
    let errors = steps
        .par_iter()
        .map(|&(_, n)| trajectory_error(problem, method, u0, t_final, n, &reference.state, stage))
        .collect::<LabResult<Vec<_>>>()?;
    let ladder = ErrorLadder::new(
        steps.iter().map(|s| s.0).collect(),
        steps.iter().map(|s| s.1).collect(),
        errors,
        meta,
    )?;
    let estimate = estimate_order(&ladder)?;
    Ok((ladder, estimate, (reference.n_steps, reference.validation_diff)))
}

/// Ladder and fit for a single initial datum.
pub fn single_ladder(
    problem: &dyn Problem,
    method: &Method,
    u0: &SpectralState,
    t_final: f64,
    ladder: &HLadder,
    stage: &StageSolveConfig,
) -> LabResult<(ErrorLadder, OrderEstimate)> {
    let steps = ladder.steps(t_final)?;
    let target = method.target(problem)?;
    let u0 = target.initial(u0)?;
    let spec = ReferenceSpec::for_h_min(steps.last().expect("non-empty ladder").0);
    let meta = LadderMeta {
        problem: problem.name().to_string(),
        method: method.name().to_string(),
        ell: None,
        t_final,
    };
    let (l, e, _) = ladder_for(target.problem(), method, &u0, t_final, &steps, &spec, stage, meta)?;
    Ok((l, e))
}
