//! Exponential Rosenbrock methods on the active Galerkin space
//!
//! ```text
//! J = A + DB(U⁰),   G(U, U⁰) = B(U) − DB(U⁰)U
//! W  = e^{chJ} U⁰𝟙 + h a(hJ) G(W, U⁰)
//! U¹ = e^{hJ} U⁰ + h bᵀ(hJ) G(W, U⁰)
//! ```
//!
//! Everything is restricted to the modes with `|A| ≤ m_active`, where `J` is
//! assembled densely by probing the analytic derivative action with basis
//! vectors. All operator functions go through the augmented exponential, one
//! exponential per distinct argument scaling.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::exprk::{OneStepMethod, StageSolveConfig, StepReport};
use crate::linalg::{DenseMatrix, MAX_DENSE_DIM};
use crate::phi::{phi_linear_combination, MAX_PHI_ORDER};
use crate::problems::Problem;
use crate::spectral::SpectralState;
use crate::tableau::{exponential_euler, ExponentialTableau};
use crate::{Error, Result};

#[cfg(not(feature = "std"))]
use num_traits::Float;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// An exponential tableau used with `hJ` in place of `hA`.
#[derive(Debug, Clone, PartialEq)]
pub struct RosenbrockTableau(ExponentialTableau);

impl RosenbrockTableau {
    pub fn new(tableau: ExponentialTableau) -> Self {
        Self(tableau)
    }

    /// `U¹ = e^{hJ}U⁰ + hφ₁(hJ)G(U⁰, U⁰)`.
    pub fn rosenbrock_euler() -> Self {
        let base = exponential_euler();
        let t = ExponentialTableau::new(
            "rosenbrock-euler",
            base.nodes().to_vec(),
            vec![base.a(0, 0).clone()],
            vec![base.b(0).clone()],
            2,
        )
        .expect("valid tableau");
        Self(t)
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "rosenbrock-euler" => Ok(Self::rosenbrock_euler()),
            other => Err(Error::InvalidArgument(format!(
                "unknown Rosenbrock tableau '{other}'; available: rosenbrock-euler"
            ))),
        }
    }

    pub fn tableau(&self) -> &ExponentialTableau {
        &self.0
    }

    pub fn name(&self) -> &str {
        self.0.name()
    }
}

impl Default for RosenbrockTableau {
    fn default() -> Self {
        Self::rosenbrock_euler()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RosenbrockConfig {
    /// Modes with `|A| ≤ m_active` are kept.
    pub m_active: usize,
    pub stage: StageSolveConfig,
}

impl RosenbrockConfig {
    pub fn new(m_active: usize) -> Self {
        Self {
            m_active,
            stage: StageSolveConfig::default(),
        }
    }
}

/// `J(U⁰)` restricted to the active modes.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobianOperator {
    matrix: DenseMatrix,
    active: Vec<usize>,
}

impl JacobianOperator {
    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    /// Storage indices (component-major) of the active coefficients.
    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn dim(&self) -> usize {
        self.active.len()
    }

    /// `hJ`.
    pub fn scaled(&self, h: f64) -> DenseMatrix {
        self.matrix.scale(Complex64::new(h, 0.0))
    }

    pub fn restrict(&self, state: &SpectralState) -> Vec<Complex64> {
        self.active.iter().map(|&i| state.coeffs()[i]).collect()
    }

    /// Embeds active coefficients into a zero state shaped like `like`.
    pub fn lift(&self, like: &SpectralState, v: &[Complex64]) -> SpectralState {
        let mut out = SpectralState::zeros(like.grid(), like.n_comp());
        let coeffs = out.coeffs_mut();
        for (&i, &x) in self.active.iter().zip(v) {
            coeffs[i] = x;
        }
        out
    }
}

fn active_indices<P: Problem + ?Sized>(problem: &P, m_active: usize) -> Result<Vec<usize>> {
    if m_active == 0 {
        return Err(Error::InvalidArgument("m_active must be positive".into()));
    }
    let m = m_active as f64;
    let active: Vec<usize> = problem
        .abs_linear()
        .eigenvalues()
        .iter()
        .enumerate()
        .filter(|(_, w)| w.re <= m)
        .map(|(i, _)| i)
        .collect();
    if active.len() > MAX_DENSE_DIM {
        return Err(Error::DimensionOverflow {
            dim: active.len(),
            max: MAX_DENSE_DIM,
        });
    }
    if active.is_empty() {
        return Err(Error::InvalidArgument(format!("no modes with |A| <= {m_active}")));
    }
    Ok(active)
}

/// Assembles `J = A + DB(U⁰)` on the modes with `|A| ≤ m_active`, one
/// derivative probe per active basis vector.
pub fn assemble_jacobian<P: Problem + ?Sized>(
    problem: &P,
    u0: &SpectralState,
    m_active: usize,
) -> Result<JacobianOperator> {
    problem.check_state(u0)?;
    if !problem.derivative_is_complex_linear() {
        return Err(Error::NotComplexLinear);
    }
    let active = active_indices(problem, m_active)?;
    let d = active.len();
    let a = problem.linear().eigenvalues();
    let mut matrix = DenseMatrix::zeros(d)?;
    let mut probe = SpectralState::zeros(u0.grid(), u0.n_comp());
    for (col, &j) in active.iter().enumerate() {
        probe.coeffs_mut()[j] = Complex64::new(1.0, 0.0);
        let db = problem.derivative_action(u0, &probe)?;
        probe.coeffs_mut()[j] = ZERO;
        for (row, &i) in active.iter().enumerate() {
            matrix.set(row, col, db.coeffs()[i]);
        }
        matrix.set(col, col, matrix.get(col, col) + a[j]);
    }
    if !matrix.is_finite() {
        return Err(Error::NonFinite("Jacobian"));
    }
    Ok(JacobianOperator { matrix, active })
}

/// `G(U, U⁰) = B(U) − DB(U⁰)U`.
pub fn remainder_g<P: Problem + ?Sized>(problem: &P, u: &SpectralState, u0: &SpectralState) -> Result<SpectralState> {
    let b = problem.nonlinearity(u)?;
    let lin = problem.derivative_action(u0, u)?;
    b.sub(&lin)
}

struct Linearization<'a, P: ?Sized> {
    problem: &'a P,
    jac: JacobianOperator,
    u0: SpectralState,
    h: f64,
}

impl<P: Problem + ?Sized> Linearization<'_, P> {
    /// Active part of `G(W, U⁰)` for active coefficients `w`.
    fn g(&self, w: &[Complex64]) -> Result<Vec<Complex64>> {
        let full = self.jac.lift(&self.u0, w);
        let g = remainder_g(self.problem, &full, &self.u0)?;
        g.check_finite("Rosenbrock remainder (blow-up)")?;
        Ok(self.jac.restrict(&g))
    }

    /// `e^{c hJ}U⁰ + h Σ_j a_j(hJ) G_j`, grouping the φ-terms by argument scale.
    fn combine(
        &self,
        node: f64,
        u0: &[Complex64],
        coeffs: &[&crate::tableau::PhiCombination],
        gs: &[Vec<Complex64>],
    ) -> Result<Vec<Complex64>> {
        let d = self.jac.dim();
        let mut groups: Vec<ScaleGroup> = Vec::new();
        accumulate(&mut groups, d, node, 0, Complex64::new(1.0, 0.0), u0);
        for (f, g) in coeffs.iter().zip(gs) {
            for term in f.terms() {
                accumulate(&mut groups, d, term.scale, term.order.get(), Complex64::new(self.h * term.weight, 0.0), g);
            }
        }
        let mut out = vec![ZERO; d];
        for (scale, weights) in &groups {
            let top = weights.iter().rposition(|w| !w.is_empty()).unwrap_or(0);
            let refs: Vec<&[Complex64]> = weights[..=top].iter().map(|w| w.as_slice()).collect();
            let m = self.jac.scaled(self.h * scale);
            let part = phi_linear_combination(&m, &refs)?;
            for (o, x) in out.iter_mut().zip(part) {
                *o += x;
            }
        }
        Ok(out)
    }

    fn stage(&self, tab: &ExponentialTableau, i: usize, u0: &[Complex64], gs: &[Vec<Complex64>]) -> Result<Vec<Complex64>> {
        let coeffs: Vec<&crate::tableau::PhiCombination> = (0..gs.len()).map(|j| tab.a(i, j)).collect();
        self.combine(tab.nodes()[i], u0, &coeffs, gs)
    }
}

/// Argument scale and the weight vector of each φ-order at that scale.
type ScaleGroup = (f64, Vec<Vec<Complex64>>);

fn accumulate(groups: &mut Vec<ScaleGroup>, d: usize, scale: f64, order: usize, alpha: Complex64, v: &[Complex64]) {
    let g = match groups.iter().position(|(s, _)| *s == scale) {
        Some(i) => i,
        None => {
            groups.push((scale, vec![Vec::new(); MAX_PHI_ORDER + 1]));
            groups.len() - 1
        }
    };
    let w = &mut groups[g].1[order];
    if w.is_empty() {
        *w = vec![ZERO; d];
    }
    for (o, x) in w.iter_mut().zip(v) {
        *o += alpha * x;
    }
}

fn max_distance(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            x.iter()
                .zip(y)
                .map(|(p, q)| (p - q).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

/// One exponential Rosenbrock step. `U⁰` is projected onto the active modes
/// and `U¹` is zero outside them.
pub fn rosenbrock_step<P: Problem + ?Sized>(
    problem: &P,
    tab: &RosenbrockTableau,
    u0: &SpectralState,
    h: f64,
    cfg: &RosenbrockConfig,
) -> Result<(SpectralState, StepReport)> {
    cfg.stage.validate()?;
    if !(h >= 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("step size must be finite and >= 0, got {h}")));
    }
    crate::phi::check_spectrum(problem.linear(), cfg.stage.spectrum_policy)?;
    let jac = assemble_jacobian(problem, u0, cfg.m_active)?;
    let v0 = jac.restrict(u0);
    let u0p = jac.lift(u0, &v0);
    if h == 0.0 {
        return Ok((u0p, StepReport::explicit()));
    }
    let lin = Linearization {
        problem,
        jac,
        u0: u0p,
        h,
    };
    let t = tab.tableau();
    let s = t.stages();

    let (gs, report) = if t.is_explicit() {
        let mut gs: Vec<Vec<Complex64>> = Vec::with_capacity(s);
        for i in 0..s {
            let w = lin.stage(t, i, &v0, &gs)?;
            gs.push(lin.g(&w)?);
        }
        (gs, StepReport::explicit())
    } else {
        if cfg.stage.contraction_guard {
            let radius = cfg.stage.guard_radius.unwrap_or(2.0 * lin.u0.norm());
            let lip = problem.lipschitz_bound(radius).ok_or(Error::MissingLipschitz)?;
            let bound = h * t.a_bound() * 2.0 * lip;
            if bound > 0.5 {
                return Err(Error::ContractionGuard { h, bound });
            }
        }
        let empty: Vec<Vec<Complex64>> = Vec::new();
        let mut ws = (0..s)
            .map(|i| lin.combine(t.nodes()[i], &v0, &[], &empty))
            .collect::<Result<Vec<_>>>()?;
        let mut history = Vec::new();
        let mut done = None;
        for iter in 1..=cfg.stage.max_iter {
            let gs = ws.iter().map(|w| lin.g(w)).collect::<Result<Vec<_>>>()?;
            let next = (0..s).map(|i| lin.stage(t, i, &v0, &gs)).collect::<Result<Vec<_>>>()?;
            let residual = max_distance(&next, &ws);
            ws = next;
            history.push(residual);
            if !residual.is_finite() {
                return Err(Error::NonFinite("Rosenbrock stage iteration"));
            }
            if residual <= cfg.stage.tol {
                done = Some(iter);
                break;
            }
        }
        let Some(iterations_used) = done else {
            return Err(Error::StageDivergence {
                iterations: cfg.stage.max_iter,
                residual: history.last().copied().unwrap_or(f64::NAN),
            });
        };
        let gs = ws.iter().map(|w| lin.g(w)).collect::<Result<Vec<_>>>()?;
        let report = StepReport {
            iterations_used,
            residual: history.last().copied().unwrap_or(0.0),
            accepted: true,
            residual_history: history,
        };
        (gs, report)
    };

    let coeffs: Vec<&crate::tableau::PhiCombination> = (0..s).map(|i| t.b(i)).collect();
    let v1 = lin.combine(1.0, &v0, &coeffs, &gs)?;
    let u1 = lin.jac.lift(&lin.u0, &v1);
    u1.check_finite("Rosenbrock update")?;
    Ok((u1, report))
}

/// Fixed-step driver re-linearizing at every step.
#[derive(Debug, Clone)]
pub struct RosenbrockStepper<'a, P: ?Sized> {
    problem: &'a P,
    tableau: RosenbrockTableau,
    h: f64,
    cfg: RosenbrockConfig,
}

impl<'a, P: Problem + ?Sized> RosenbrockStepper<'a, P> {
    pub fn new(problem: &'a P, tableau: &RosenbrockTableau, h: f64, cfg: RosenbrockConfig) -> Result<Self> {
        cfg.stage.validate()?;
        active_indices(problem, cfg.m_active)?;
        if !(h >= 0.0 && h.is_finite()) {
            return Err(Error::InvalidArgument(format!("step size must be finite and >= 0, got {h}")));
        }
        Ok(Self {
            problem,
            tableau: tableau.clone(),
            h,
            cfg,
        })
    }
}

impl<P: Problem + ?Sized> OneStepMethod for RosenbrockStepper<'_, P> {
    fn step_size(&self) -> f64 {
        self.h
    }

    fn advance(&self, u0: &SpectralState) -> Result<(SpectralState, StepReport)> {
        rosenbrock_step(self.problem, &self.tableau, u0, self.h, &self.cfg)
    }
}

/// `n_steps` Rosenbrock steps of size `T / n_steps`.
pub fn rosenbrock_integrate<P: Problem + ?Sized>(
    problem: &P,
    tab: &RosenbrockTableau,
    u0: &SpectralState,
    t_final: f64,
    n_steps: usize,
    cfg: &RosenbrockConfig,
) -> Result<(SpectralState, Vec<StepReport>)> {
    if n_steps == 0 || !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "integrate needs T > 0 and n_steps >= 1 (T {t_final}, n_steps {n_steps})"
        )));
    }
    let stepper = RosenbrockStepper::new(problem, tab, t_final / n_steps as f64, *cfg)?;
    let traj = stepper.run(u0, n_steps, false).map_err(|e| match e {
        Error::StepFailed { .. } => e,
        other => Error::StepFailed {
            step: 0,
            source: Box::new(other),
        },
    })?;
    Ok((traj.state, traj.reports))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprk::step;
    use crate::problems::{make_linear_commuting, make_nls, make_wave, Projected};
    use crate::tableau::implicit_lawson_euler;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn smooth_wave_state(w: &impl Problem, amp: f64) -> SpectralState {
        let fields = {
            let g = w.grid();
            let n = g.len();
            let mut u = vec![ZERO; n];
            let v = vec![ZERO; n];
            u[g.index_of(1).unwrap()] = c(0.5 * amp, 0.0);
            u[g.index_of(-1).unwrap()] = c(0.5 * amp, 0.0);
            vec![u, v]
        };
        w.from_fields(&fields).unwrap()
    }

    #[test]
    fn jacobian_of_zero_state_is_a() {
        let w = make_wave(64).unwrap();
        let u0 = SpectralState::zeros(w.grid(), 2);
        let jac = assemble_jacobian(&w, &u0, 9).unwrap();
        assert_eq!(jac.dim(), 34);
        for (row, &i) in jac.active().iter().enumerate() {
            for col in 0..jac.dim() {
                let want = if row == col { w.linear().eigenvalues()[i] } else { ZERO };
                assert_eq!(jac.matrix().get(row, col), want);
            }
        }
    }

    #[test]
    fn linear_b_shifts_jacobian() {
        let lambda = c(-0.3, 0.2);
        let p = make_linear_commuting(32, |_| lambda).unwrap();
        let u0 = SpectralState::zeros(p.grid(), 1);
        let jac = assemble_jacobian(&p, &u0, 5).unwrap();
        assert_eq!(jac.dim(), 11);
        for (row, &i) in jac.active().iter().enumerate() {
            let k = p.grid().wavenumber(i) as f64;
            assert_eq!(jac.matrix().get(row, row), c(0.0, k) + lambda);
        }
    }

    #[test]
    fn probing_is_deterministic() {
        let w = make_wave(64).unwrap();
        let u0 = smooth_wave_state(&w, 0.3);
        let a = assemble_jacobian(&w, &u0, 9).unwrap();
        let b = assemble_jacobian(&w, &u0, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn nls_jacobian_is_rejected() {
        let p = make_nls(32).unwrap();
        let u0 = SpectralState::zeros(p.grid(), 1);
        assert!(matches!(assemble_jacobian(&p, &u0, 4), Err(Error::NotComplexLinear)));
    }

    #[test]
    fn remainder_identities() {
        let w = make_wave(32).unwrap();
        let u0 = smooth_wave_state(&w, 0.4);
        let zero = SpectralState::zeros(w.grid(), 2);
        let g0 = remainder_g(&w, &zero, &u0).unwrap();
        assert!(g0.distance(&w.nonlinearity(&zero).unwrap()).unwrap() < 1e-15);

        let p = make_linear_commuting(32, |k| c(-0.1 * k.abs() as f64, 0.0)).unwrap();
        let u = SpectralState::from_fn(p.grid(), 1, |_, k| c(1.0, k as f64)).unwrap();
        let g = remainder_g(&p, &u, &u0_like(&p)).unwrap();
        assert!(g.norm() < 1e-14);
    }

    fn u0_like(p: &impl Problem) -> SpectralState {
        SpectralState::from_fn(p.grid(), p.n_comp(), |_, k| c(0.5, -(k as f64))).unwrap()
    }

    #[test]
    fn exact_on_linear_problem() {
        let p = make_linear_commuting(64, |k| c(-0.05 * (k * k) as f64, 0.3)).unwrap();
        let cfg = RosenbrockConfig::new(16);
        let u0 = SpectralState::from_fn(p.grid(), 1, |_, k| {
            if k.abs() <= 16 {
                c(1.0 / (1 + k.abs()) as f64, 0.2)
            } else {
                ZERO
            }
        })
        .unwrap();
        let exact = p.exact_flow(&u0, 1.0).unwrap();
        for n in [1, 2, 8] {
            let (un, _) = rosenbrock_integrate(&p, &RosenbrockTableau::default(), &u0, 1.0, n, &cfg).unwrap();
            assert!(un.distance(&exact).unwrap() < 1e-10, "n={n}");
        }
    }

    #[derive(Debug)]
    struct Forced<P>(P, SpectralState);

    impl<P: Problem> Problem for Forced<P> {
        fn name(&self) -> &str {
            "forced"
        }
        fn kind(&self) -> crate::problems::ProblemKind {
            self.0.kind()
        }
        fn grid(&self) -> &alloc::sync::Arc<crate::spectral::ModeGrid> {
            self.0.grid()
        }
        fn n_comp(&self) -> usize {
            self.0.n_comp()
        }
        fn linear(&self) -> &crate::spectral::DiagonalOperator {
            self.0.linear()
        }
        fn abs_linear(&self) -> &crate::spectral::DiagonalOperator {
            self.0.abs_linear()
        }
        fn nonlinearity(&self, _u: &SpectralState) -> Result<SpectralState> {
            Ok(self.1.clone())
        }
        fn derivative_action(&self, u0: &SpectralState, _v: &SpectralState) -> Result<SpectralState> {
            Ok(SpectralState::zeros(u0.grid(), u0.n_comp()))
        }
    }

    #[test]
    fn vanishing_derivative_matches_exp_euler() {
        let w = make_wave(64).unwrap();
        let cutoff = 12.0;
        let f = SpectralState::from_fn(w.grid(), 2, |cc, k| {
            if ((k * k + 1) as f64).sqrt() <= cutoff {
                c(0.1 / (1 + k * k) as f64, 0.05 * cc as f64)
            } else {
                ZERO
            }
        })
        .unwrap();
        let forced = Forced(w, f);
        let u0 = smooth_wave_state(&forced, 0.2);
        let cfg = RosenbrockConfig::new(12);
        let (ur, _) = rosenbrock_step(&forced, &RosenbrockTableau::default(), &u0, 0.1, &cfg).unwrap();
        let (ue, _) = step(&forced, &exponential_euler(), &u0, 0.1, &StageSolveConfig::default()).unwrap();
        assert!(ur.distance(&ue).unwrap() < 1e-11);
    }

    #[test]
    fn matches_galerkin_exp_euler_to_second_order() {
        // one step against a fine reference on the projected problem
        let w = make_wave(64).unwrap();
        let pw = Projected::new(&w, 12.0).unwrap();
        let u0 = smooth_wave_state(&w, 0.5);
        let cfg = RosenbrockConfig::new(12);
        let tab = RosenbrockTableau::default();
        let reference = {
            let (u, _) = crate::exprk::integrate(
                &pw,
                &crate::tableau::cox_matthews_4(),
                &u0,
                0.2,
                64,
                &StageSolveConfig::default(),
            )
            .unwrap();
            u
        };
        let e1 = rosenbrock_integrate(&pw, &tab, &u0, 0.2, 4, &cfg).unwrap().0.distance(&reference).unwrap();
        let e2 = rosenbrock_integrate(&pw, &tab, &u0, 0.2, 8, &cfg).unwrap().0.distance(&reference).unwrap();
        assert!((e1 / e2).log2() > 1.7, "ratio {}", e1 / e2);
    }

    #[test]
    fn implicit_tableau_converges() {
        let w = make_wave(32).unwrap();
        let u0 = smooth_wave_state(&w, 0.2);
        let tab = RosenbrockTableau::new(implicit_lawson_euler());
        let mut cfg = RosenbrockConfig::new(8);
        cfg.stage = cfg.stage.with_guard();
        let (_, rep) = rosenbrock_step(&w, &tab, &u0, 0.01, &cfg).unwrap();
        assert!(rep.iterations_used <= 50 && rep.residual <= 1e-12);
    }

    #[test]
    fn zero_step_projects() {
        let w = make_wave(32).unwrap();
        let u0 = smooth_wave_state(&w, 0.2);
        let (u1, _) = rosenbrock_step(&w, &RosenbrockTableau::default(), &u0, 0.0, &RosenbrockConfig::new(8)).unwrap();
        assert_eq!(u1, u0);
    }
}
