//! Exponential Runge-Kutta methods
//!
//! ```text
//! W  = e^{chA} U⁰𝟙 + h a(hA) B(W)
//! U¹ = e^{hA} U⁰ + h bᵀ(hA) B(W)
//! ```
//!
//! Explicit tableaus are solved by forward substitution. Implicit ones iterate
//! the map `Π(W) = e^{chA}U⁰𝟙 + h a(hA)B(W)` from `W⁽⁰⁾ = e^{chA}U⁰𝟙`, which is
//! a contraction in `𝒴ˢ` (max norm over stages) once `h M_a M'[R] ≤ 1/2`.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::phi::SpectrumPolicy;
use crate::problems::Problem;
use crate::spectral::{DiagonalOperator, SpectralState};
use crate::tableau::ExponentialTableau;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageSolveConfig {
    /// Fixed-point residual tolerance in the `𝒴` norm.
    pub tol: f64,
    pub max_iter: usize,
    /// Refuse implicit steps with `h M_a M'[R] > 1/2`.
    pub contraction_guard: bool,
    /// Radius `R` fed to the Lipschitz estimate; `None` uses `2‖U⁰‖`.
    pub guard_radius: Option<f64>,
    pub spectrum_policy: SpectrumPolicy,
}

impl Default for StageSolveConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 50,
            contraction_guard: false,
            guard_radius: None,
            spectrum_policy: SpectrumPolicy::Reject,
        }
    }
}

impl StageSolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || self.max_iter == 0 {
            return Err(Error::InvalidArgument(format!(
                "stage solver needs tol > 0 and max_iter >= 1 (tol {}, max_iter {})",
                self.tol, self.max_iter
            )));
        }
        Ok(())
    }

    pub fn with_guard(mut self) -> Self {
        self.contraction_guard = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StepReport {
    pub iterations_used: usize,
    pub residual: f64,
    pub accepted: bool,
    /// Residual after each fixed-point sweep (empty for explicit tableaus).
    pub residual_history: Vec<f64>,
}

impl StepReport {
    pub(crate) fn explicit() -> Self {
        Self {
            iterations_used: 1,
            residual: 0.0,
            accepted: true,
            residual_history: Vec::new(),
        }
    }
}

/// A one-step map `U⁰ ↦ U¹` with fixed step size.
pub trait OneStepMethod {
    fn step_size(&self) -> f64;

    fn advance(&self, u0: &SpectralState) -> Result<(SpectralState, StepReport)>;

    /// `n_steps` applications of [`OneStepMethod::advance`]; the first failing
    /// step aborts with its (zero-based) index.
    fn run(&self, u0: &SpectralState, n_steps: usize, trace_norms: bool) -> Result<Trajectory> {
        let mut state = u0.clone();
        let mut reports = Vec::with_capacity(n_steps);
        let mut norm_trace = trace_norms.then(|| {
            let mut v = Vec::with_capacity(n_steps + 1);
            v.push(u0.norm());
            v
        });
        for step in 0..n_steps {
            let (next, report) = self.advance(&state).map_err(|e| Error::StepFailed {
                step,
                source: Box::new(e),
            })?;
            state = next;
            if let Some(trace) = norm_trace.as_mut() {
                trace.push(state.norm());
            }
            reports.push(report);
        }
        Ok(Trajectory {
            state,
            reports,
            norm_trace,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub state: SpectralState,
    pub reports: Vec<StepReport>,
    /// `‖Uⁿ‖_𝒴` for `n = 0..=N` when requested.
    pub norm_trace: Option<Vec<f64>>,
}

/// Exponential Runge-Kutta step with all coefficient operators precomputed for
/// one step size.
#[derive(Debug, Clone)]
pub struct ExpRkStepper<'a, P: ?Sized> {
    problem: &'a P,
    tableau: ExponentialTableau,
    h: f64,
    cfg: StageSolveConfig,
    exp_h: DiagonalOperator,
    exp_ch: Vec<DiagonalOperator>,
    a: Vec<Option<DiagonalOperator>>,
    b: Vec<Option<DiagonalOperator>>,
}

impl<'a, P: Problem + ?Sized> ExpRkStepper<'a, P> {
    pub fn new(problem: &'a P, tableau: &ExponentialTableau, h: f64, cfg: StageSolveConfig) -> Result<Self> {
        cfg.validate()?;
        if !(h >= 0.0 && h.is_finite()) {
            return Err(Error::InvalidArgument(format!("step size must be finite and >= 0, got {h}")));
        }
        let ha = problem.linear().scale(Complex64::new(h, 0.0));
        crate::phi::check_spectrum(&ha, cfg.spectrum_policy)?;
        let policy = SpectrumPolicy::Allow;
        let exp_h = ha.map(|z| z.exp());
        let exp_ch = tableau
            .nodes()
            .iter()
            .map(|&c| ha.map(|z| (z * c).exp()))
            .collect();
        let s = tableau.stages();
        let coeff = |f: &crate::tableau::PhiCombination| -> Result<Option<DiagonalOperator>> {
            if f.is_zero() {
                Ok(None)
            } else {
                f.eval_diag(&ha, policy).map(Some)
            }
        };
        let a = (0..s * s)
            .map(|ij| coeff(tableau.a(ij / s, ij % s)))
            .collect::<Result<Vec<_>>>()?;
        let b = (0..s).map(|i| coeff(tableau.b(i))).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            problem,
            tableau: tableau.clone(),
            h,
            cfg,
            exp_h,
            exp_ch,
            a,
            b,
        })
    }

    pub fn tableau(&self) -> &ExponentialTableau {
        &self.tableau
    }

    fn eval_b(&self, w: &SpectralState) -> Result<SpectralState> {
        let out = self.problem.nonlinearity(w)?;
        out.check_finite("nonlinearity (blow-up)")?;
        Ok(out)
    }

    /// `e^{c_i hA}U⁰ + h Σ_j a_ij(hA) B_j` over the supplied `B_j`.
    fn stage_value(&self, i: usize, u0: &SpectralState, bw: &[SpectralState]) -> Result<SpectralState> {
        let s = self.tableau.stages();
        let mut w = self.exp_ch[i].apply(u0)?;
        let h = Complex64::new(self.h, 0.0);
        for (j, bj) in bw.iter().enumerate() {
            if let Some(aij) = &self.a[i * s + j] {
                w.add_scaled_in_place(h, &aij.apply(bj)?)?;
            }
        }
        Ok(w)
    }

    /// Stage vectors `W¹…Wˢ`, the nonlinearity at each, and the solve report.
    fn stages_with_rhs(&self, u0: &SpectralState) -> Result<(Vec<SpectralState>, Vec<SpectralState>, StepReport)> {
        self.problem.check_state(u0)?;
        let s = self.tableau.stages();
        if self.tableau.is_explicit() {
            let mut stages = Vec::with_capacity(s);
            let mut bw: Vec<SpectralState> = Vec::with_capacity(s);
            for i in 0..s {
                let w = self.stage_value(i, u0, &bw)?;
                bw.push(self.eval_b(&w)?);
                stages.push(w);
            }
            return Ok((stages, bw, StepReport::explicit()));
        }

        if self.cfg.contraction_guard {
            let radius = self.cfg.guard_radius.unwrap_or(2.0 * u0.norm());
            let lip = self
                .problem
                .lipschitz_bound(radius)
                .ok_or(Error::MissingLipschitz)?;
            let bound = self.h * self.tableau.a_bound() * lip;
            if bound > 0.5 {
                return Err(Error::ContractionGuard { h: self.h, bound });
            }
        }

        let mut stages: Vec<SpectralState> = self
            .exp_ch
            .iter()
            .map(|e| e.apply(u0))
            .collect::<Result<_>>()?;
        let mut history = Vec::new();
        for iter in 1..=self.cfg.max_iter {
            let bw = stages
                .iter()
                .map(|w| self.eval_b(w))
                .collect::<Result<Vec<_>>>()?;
            let next = (0..s)
                .map(|i| self.stage_value(i, u0, &bw))
                .collect::<Result<Vec<_>>>()?;
            let mut residual = 0.0f64;
            for (a, b) in next.iter().zip(&stages) {
                residual = residual.max(a.distance(b)?);
            }
            stages = next;
            history.push(residual);
            if !residual.is_finite() {
                return Err(Error::NonFinite("stage iteration"));
            }
            if residual <= self.cfg.tol {
                let bw = stages
                    .iter()
                    .map(|w| self.eval_b(w))
                    .collect::<Result<Vec<_>>>()?;
                let report = StepReport {
                    iterations_used: iter,
                    residual,
                    accepted: true,
                    residual_history: history,
                };
                return Ok((stages, bw, report));
            }
        }
        Err(Error::StageDivergence {
            iterations: self.cfg.max_iter,
            residual: history.last().copied().unwrap_or(f64::NAN),
        })
    }

    pub fn solve_stages(&self, u0: &SpectralState) -> Result<(Vec<SpectralState>, StepReport)> {
        let (stages, _, report) = self.stages_with_rhs(u0)?;
        Ok((stages, report))
    }

    pub fn step(&self, u0: &SpectralState) -> Result<(SpectralState, StepReport)> {
        if self.h == 0.0 {
            self.problem.check_state(u0)?;
            return Ok((u0.clone(), StepReport::explicit()));
        }
        let (_, bw, report) = self.stages_with_rhs(u0)?;
        let h = Complex64::new(self.h, 0.0);
        let mut u1 = self.exp_h.apply(u0)?;
        for (bi, b_val) in self.b.iter().zip(&bw) {
            if let Some(bi) = bi {
                u1.add_scaled_in_place(h, &bi.apply(b_val)?)?;
            }
        }
        u1.check_finite("exponential Runge-Kutta update")?;
        Ok((u1, report))
    }
}

impl<P: Problem + ?Sized> OneStepMethod for ExpRkStepper<'_, P> {
    fn step_size(&self) -> f64 {
        self.h
    }

    fn advance(&self, u0: &SpectralState) -> Result<(SpectralState, StepReport)> {
        self.step(u0)
    }
}

pub fn solve_stages<P: Problem + ?Sized>(
    problem: &P,
    tableau: &ExponentialTableau,
    u0: &SpectralState,
    h: f64,
    cfg: &StageSolveConfig,
) -> Result<(Vec<SpectralState>, StepReport)> {
    ExpRkStepper::new(problem, tableau, h, *cfg)?.solve_stages(u0)
}

pub fn step<P: Problem + ?Sized>(
    problem: &P,
    tableau: &ExponentialTableau,
    u0: &SpectralState,
    h: f64,
    cfg: &StageSolveConfig,
) -> Result<(SpectralState, StepReport)> {
    ExpRkStepper::new(problem, tableau, h, *cfg)?.step(u0)
}

/// `n_steps` steps of size `T / n_steps`.
pub fn integrate<P: Problem + ?Sized>(
    problem: &P,
    tableau: &ExponentialTableau,
    u0: &SpectralState,
    t_final: f64,
    n_steps: usize,
    cfg: &StageSolveConfig,
) -> Result<(SpectralState, Vec<StepReport>)> {
    if n_steps == 0 || !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "integrate needs T > 0 and n_steps >= 1 (T {t_final}, n_steps {n_steps})"
        )));
    }
    let stepper = ExpRkStepper::new(problem, tableau, t_final / n_steps as f64, *cfg)?;
    let traj = stepper.run(u0, n_steps, false)?;
    Ok((traj.state, traj.reports))
}
