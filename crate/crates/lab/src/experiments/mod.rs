//! Reference solutions, trajectory errors, order fits and the three studies
//! (order scan, sharpness probe, Galerkin scan).

mod galerkin;
mod order;
mod reference;
mod scan;
mod sharpness;

pub use galerkin::{galerkin_reference_spec, galerkin_scan, GalerkinScan};
pub use order::{estimate_order, fit_line, ErrorLadder, LadderMeta, OrderEstimate, NOISE_FLOOR};
pub use reference::{reference_solution, trajectory_error, Reference, ReferenceSpec};
pub use scan::{order_scan, single_ladder, HLadder, OrderScan, ScanEntry};
pub use sharpness::{sharpness_probe, SharpnessRow};

use expint_core::problems::{
    make_linear_commuting, Nls, Problem, ProblemKind, Projected, Wave, WaveOptions,
};
use expint_core::exprk::{ExpRkStepper, OneStepMethod, Trajectory};
use expint_core::rosenbrock::{rosenbrock_integrate, RosenbrockStepper, RosenbrockTableau};
use expint_core::tableau::{tableau_by_name, ExponentialTableau};
use expint_core::{integrate, Complex64, RosenbrockConfig, SpectralState, StageSolveConfig};

use crate::error::{LabError, LabResult};

/// A time integrator selectable by name.
#[derive(Debug, Clone)]
pub enum Method {
    ExpRk(ExponentialTableau),
    /// Rosenbrock steps on the modes with `|A| ≤ m_active`.
    Rosenbrock {
        tableau: RosenbrockTableau,
        m_active: usize,
    },
}

impl Method {
    pub fn exprk(name: &str) -> LabResult<Self> {
        Ok(Method::ExpRk(tableau_by_name(name).map_err(config)?))
    }

    pub fn rosenbrock(name: &str, m_active: usize) -> LabResult<Self> {
        let tableau = RosenbrockTableau::by_name(name).map_err(config)?;
        Ok(Method::Rosenbrock { tableau, m_active })
    }

    pub fn name(&self) -> &str {
        match self {
            Method::ExpRk(t) => t.name(),
            Method::Rosenbrock { tableau, .. } => tableau.name(),
        }
    }

    pub fn classical_order(&self) -> u32 {
        match self {
            Method::ExpRk(t) => t.order(),
            Method::Rosenbrock { tableau, .. } => tableau.tableau().order(),
        }
    }

    /// The problem this method actually discretizes: Rosenbrock methods work
    /// on the Galerkin system of their active modes.
    pub fn target<'a>(&self, problem: &'a dyn Problem) -> LabResult<Target<'a>> {
        match self {
            Method::ExpRk(_) => Ok(Target::Full(problem)),
            Method::Rosenbrock { m_active, .. } => Ok(Target::Projected(Projected::new(problem, *m_active as f64)?)),
        }
    }

    /// `n_steps` steps of size `t_final / n_steps`.
    pub fn integrate(
        &self,
        problem: &dyn Problem,
        u0: &SpectralState,
        t_final: f64,
        n_steps: usize,
        stage: &StageSolveConfig,
    ) -> LabResult<SpectralState> {
        let out = match self {
            Method::ExpRk(t) => integrate(problem, t, u0, t_final, n_steps, stage)?.0,
            Method::Rosenbrock { tableau, m_active } => {
                let cfg = RosenbrockConfig {
                    m_active: *m_active,
                    stage: *stage,
                };
                rosenbrock_integrate(problem, tableau, u0, t_final, n_steps, &cfg)?.0
            }
        };
        Ok(out)
    }

    /// `n_steps` steps of size `h` with the `𝒴`-norm trace recorded.
    pub fn trajectory(
        &self,
        problem: &dyn Problem,
        u0: &SpectralState,
        h: f64,
        n_steps: usize,
        stage: &StageSolveConfig,
    ) -> LabResult<Trajectory> {
        let traj = match self {
            Method::ExpRk(t) => ExpRkStepper::new(problem, t, h, *stage)?.run(u0, n_steps, true)?,
            Method::Rosenbrock { tableau, m_active } => {
                let cfg = RosenbrockConfig {
                    m_active: *m_active,
                    stage: *stage,
                };
                RosenbrockStepper::new(problem, tableau, h, cfg)?.run(u0, n_steps, true)?
            }
        };
        Ok(traj)
    }
}

/// Either the problem itself or its Galerkin truncation.
#[derive(Debug)]
pub enum Target<'a> {
    Full(&'a dyn Problem),
    Projected(Projected<&'a dyn Problem>),
}

impl Target<'_> {
    pub fn problem(&self) -> &dyn Problem {
        match self {
            Target::Full(p) => *p,
            Target::Projected(p) => p,
        }
    }

    /// Initial data as seen by the target (projected for Galerkin targets).
    pub fn initial(&self, u0: &SpectralState) -> LabResult<SpectralState> {
        match self {
            Target::Full(_) => Ok(u0.clone()),
            Target::Projected(p) => Ok(p.project(u0)?),
        }
    }
}

fn config(e: expint_core::Error) -> LabError {
    LabError::Config(e.to_string())
}

/// Builds a problem by name; the linear commuting problem gets the constant
/// spectrum `λ_k = lambda`.
pub fn build_problem(name: &str, n_phys: usize, dealias: bool, lambda: f64) -> LabResult<Box<dyn Problem>> {
    let kind: ProblemKind = name.parse().map_err(config)?;
    let p: Box<dyn Problem> = match kind {
        ProblemKind::Wave => Box::new(Wave::new(
            n_phys,
            WaveOptions {
                dealias,
                ..Default::default()
            },
        )?),
        ProblemKind::Nls => Box::new(Nls::new(n_phys, dealias)?),
        ProblemKind::Linear => Box::new(make_linear_commuting(n_phys, |_| Complex64::new(lambda, 0.0))?),
    };
    Ok(p)
}

/// Smooth data: physical field `f` is `amplitudes[f] · cos x`.
pub fn single_mode_data(problem: &dyn Problem, amplitudes: &[f64]) -> LabResult<SpectralState> {
    if amplitudes.len() != problem.n_comp() {
        return Err(LabError::Config(format!(
            "{} field amplitudes given, problem has {} fields",
            amplitudes.len(),
            problem.n_comp()
        )));
    }
    let grid = problem.grid();
    let fields: Vec<Vec<Complex64>> = amplitudes
        .iter()
        .map(|&a| {
            grid.wavenumbers()
                .iter()
                .map(|&k| {
                    if k.abs() == 1 {
                        Complex64::new(0.5 * a, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect();
    Ok(problem.from_fields(&fields)?)
}
