//! The `expint` command line.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use expint_core::problems::{y_ell_initial_data, Problem};
use expint_core::{FractionalExponent, SpectralState, StageSolveConfig};
use serde::Serialize;

use crate::config::{Overrides, RunConfig};
use crate::error::{LabError, LabResult};
use crate::experiments::{
    build_problem, galerkin_reference_spec, galerkin_scan, order_scan, reference_solution, sharpness_probe,
    single_mode_data, ReferenceSpec, NOISE_FLOOR,
};
use crate::output::{fmt_f64, ErrorReport, Gate, Manifest, OutputDir, Versions};
use crate::quadrature::{phi_selftest, standard_z_grid};

/// Largest accepted relative error of the φ self-test.
pub const PHI_SELFTEST_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "expint", version, about = "Convergence experiments for exponential integrators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Flat JSON config file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub problem: Option<String>,
    #[arg(long, global = true)]
    pub method: Option<String>,
    /// Comma-separated regularity exponents.
    #[arg(long, global = true, value_delimiter = ',')]
    pub ell: Option<Vec<f64>>,
    #[arg(long, global = true)]
    pub tmax: Option<f64>,
    /// Number of physical grid points.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Dyadic ladder `jmin:jmax` (h = T/2^j).
    #[arg(long, global = true, value_parser = parse_ladder)]
    pub ladder: Option<(u32, u32)>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Use the exponential Rosenbrock stepper.
    #[arg(long, global = true)]
    pub rosenbrock: bool,
    /// Step count of `run`.
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Step size of `run` (then T = steps · h).
    #[arg(long, global = true)]
    pub h: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Empirical order q(ℓ) for low-regularity data.
    OrderScan,
    /// Resonant-step example where the global error does not decay.
    Sharpness,
    /// Projection error of Galerkin truncations against the cutoff.
    GalerkinScan,
    /// A single trajectory with its error against a reference.
    Run,
    /// φ-functions against quadrature of their integral form.
    PhiSelftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::OrderScan => "order-scan",
            Command::Sharpness => "sharpness",
            Command::GalerkinScan => "galerkin-scan",
            Command::Run => "run",
            Command::PhiSelftest => "phi-selftest",
        }
    }
}

fn parse_ladder(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected jmin:jmax, got '{s}'"))?;
    let a = a.trim().parse().map_err(|e| format!("bad jmin: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("bad jmax: {e}"))?;
    Ok((a, b))
}

impl Cli {
    /// File config (or defaults) with the flags applied on top.
    pub fn resolve_config(&self) -> LabResult<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        cfg.apply(Overrides {
            problem: self.problem.clone(),
            method: self.method.clone(),
            ell: self.ell.clone(),
            t_max: self.tmax,
            n_phys: self.grid,
            ladder: self.ladder,
            output_dir: self.out.clone(),
            rosenbrock: self.rosenbrock,
            n_steps: self.steps,
            h: self.h,
        });
        Ok(cfg)
    }
}

/// Parses `args`, runs the command and returns the process exit status.
/// Errors go to stderr as one JSON object (and to `error.json` when the
/// output directory is known).
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let cfg = match cli.resolve_config() {
        Ok(c) => c,
        Err(e) => return report(&e, None),
    };
    match execute(cli.command, &cfg) {
        Ok(gates) => {
            for g in &gates {
                println!("{}: {} ({})", g.name, if g.passed { "pass" } else { "FAIL" }, g.detail);
            }
            println!("results in {}", cfg.output_dir.display());
            0
        }
        Err(e) => report(&e, Some(&cfg)),
    }
}

fn report(err: &LabError, cfg: Option<&RunConfig>) -> i32 {
    let rep = ErrorReport::new(err);
    eprintln!("{}", rep.to_json());
    if let Some(cfg) = cfg {
        if cfg.output_dir.is_dir() {
            if let Ok(mut out) = OutputDir::create(&cfg.output_dir) {
                let _ = out.write_json("error.json", &serde_json::json!({ "error": rep }));
            }
        }
    }
    err.exit_code()
}

/// Validates `cfg`, runs `command`, writes its files plus `config.json` and
/// `manifest.json`. Failed gates turn into [`LabError::Gate`] after the
/// files are written.
pub fn execute(command: Command, cfg: &RunConfig) -> LabResult<Vec<Gate>> {
    cfg.validate()?;
    let start = Instant::now();
    let mut out = OutputDir::create(&cfg.output_dir)?;
    out.write_json("config.json", cfg)?;
    let gates = match command {
        Command::OrderScan => cmd_order_scan(cfg, &mut out)?,
        Command::Sharpness => cmd_sharpness(cfg, &mut out)?,
        Command::GalerkinScan => cmd_galerkin_scan(cfg, &mut out)?,
        Command::Run => cmd_run(cfg, &mut out)?,
        Command::PhiSelftest => cmd_phi_selftest(cfg, &mut out)?,
    };
    let mut outputs = out.files().to_vec();
    outputs.push("manifest.json".into());
    let manifest = Manifest {
        command: command.name(),
        rerun: format!("expint {} --config config.json", command.name()),
        config: cfg,
        versions: Versions::default(),
        wall_time_s: start.elapsed().as_secs_f64(),
        gates: &gates,
        outputs,
    };
    out.write_json("manifest.json", &manifest)?;
    let failed: Vec<&str> = gates.iter().filter(|g| !g.passed).map(|g| g.name.as_str()).collect();
    if !failed.is_empty() {
        return Err(LabError::Gate(failed.join(", ")));
    }
    Ok(gates)
}

fn stage_config(cfg: &RunConfig) -> StageSolveConfig {
    StageSolveConfig {
        contraction_guard: cfg.contraction_guard,
        ..Default::default()
    }
}

fn problem_of(cfg: &RunConfig) -> LabResult<Box<dyn Problem>> {
    build_problem(&cfg.problem, cfg.n_phys, cfg.dealias, cfg.lambda)
}

#[derive(Serialize)]
struct OrderRow {
    ell: f64,
    q: f64,
    theory: f64,
    intercept: f64,
    max_residual: f64,
    n_fitted: usize,
    reference_steps: usize,
    reference_diff: f64,
}

fn cmd_order_scan(cfg: &RunConfig, out: &mut OutputDir) -> LabResult<Vec<Gate>> {
    let problem = problem_of(cfg)?;
    let method = cfg.resolve_method()?;
    let scan = order_scan(
        problem.as_ref(),
        &method,
        &cfg.ell_list,
        cfg.t_max,
        &cfg.ladder(),
        cfg.epsilon,
        &stage_config(cfg),
    )?;
    let p = scan.classical_order as f64;
    let mut rows = Vec::new();
    for e in &scan.entries {
        let l = &e.ladder;
        for (i, excluded) in l.excluded().into_iter().enumerate() {
            rows.push(vec![
                fmt_f64(e.ell),
                fmt_f64(l.h_values[i]),
                l.n_steps[i].to_string(),
                fmt_f64(l.errors[i]),
                excluded.to_string(),
            ]);
        }
    }
    out.write_csv("order_scan.csv", &["ell", "h", "n_steps", "error", "excluded"], rows)?;
    out.write_csv(
        "q_of_ell.csv",
        &["ell", "q"],
        scan.entries.iter().map(|e| vec![fmt_f64(e.ell), fmt_f64(e.estimate.slope)]),
    )?;
    out.write_csv(
        "q_theory.csv",
        &["ell", "min_ell_p"],
        scan.entries.iter().map(|e| vec![fmt_f64(e.ell), fmt_f64(e.ell.min(p))]),
    )?;
    let summary: Vec<OrderRow> = scan
        .entries
        .iter()
        .map(|e| OrderRow {
            ell: e.ell,
            q: e.estimate.slope,
            theory: e.ell.min(p),
            intercept: e.estimate.intercept,
            max_residual: e.estimate.max_residual,
            n_fitted: e.estimate.n_fitted,
            reference_steps: e.reference_steps,
            reference_diff: e.reference_diff,
        })
        .collect();
    out.write_json(
        "order_scan_summary.json",
        &serde_json::json!({
            "problem": cfg.problem,
            "method": scan.method,
            "classical_order": scan.classical_order,
            "noise_floor": NOISE_FLOOR,
            "estimates": summary,
            "config": cfg,
            "version": env!("CARGO_PKG_VERSION"),
        }),
    )?;
    let monotone = scan.entries.iter().all(|e| {
        let errs: Vec<f64> = e.ladder.errors.iter().copied().filter(|&x| x >= NOISE_FLOOR).collect();
        errs.windows(2).all(|w| w[1] < w[0])
    });
    let worst_ref = scan.entries.iter().map(|e| e.reference_diff).fold(0.0, f64::max);
    Ok(vec![
        Gate::new("reference-self-check", true, format!("max doubling difference {worst_ref:e}")),
        Gate::new(
            "ladder-monotone",
            monotone,
            "errors above the noise floor decrease with h",
        ),
    ])
}

fn cmd_sharpness(cfg: &RunConfig, out: &mut OutputDir) -> LabResult<Vec<Gate>> {
    let rows = sharpness_probe(&cfg.k_list, cfg.lambda, cfg.weight_ell)?;
    out.write_csv(
        "sharpness.csv",
        &["k", "h", "n_steps", "error"],
        rows.iter()
            .map(|r| vec![r.k.to_string(), fmt_f64(r.h), r.n_steps.to_string(), fmt_f64(r.error)]),
    )?;
    let max = rows.iter().map(|r| r.error).fold(0.0, f64::max);
    let min = rows.iter().map(|r| r.error).fold(f64::INFINITY, f64::min);
    let log2_ratios: Vec<f64> = rows.windows(2).map(|w| (w[0].error / w[1].error).log2()).collect();
    out.write_json(
        "sharpness_summary.json",
        &serde_json::json!({
            "lambda": cfg.lambda,
            "weight_ell": cfg.weight_ell,
            "rows": rows,
            "max_over_min": max / min,
            "log2_ratios": log2_ratios,
            "version": env!("CARGO_PKG_VERSION"),
        }),
    )?;
    let finite = rows.iter().all(|r| r.error.is_finite());
    Ok(vec![Gate::new("finite-errors", finite, format!("max/min error ratio {:.6}", max / min))])
}

fn cmd_galerkin_scan(cfg: &RunConfig, out: &mut OutputDir) -> LabResult<Vec<Gate>> {
    let problem = problem_of(cfg)?;
    let spec = galerkin_reference_spec(cfg.t_max);
    let mut rows = Vec::new();
    let mut scans = Vec::new();
    for &ell in &cfg.ell_list {
        let u0 = y_ell_initial_data(problem.as_ref(), FractionalExponent::new(ell)?, cfg.epsilon, &[])?;
        let scan = galerkin_scan(problem.as_ref(), &u0, cfg.t_max, &cfg.m_list, &spec)?;
        for (m, e) in scan.m_values.iter().zip(&scan.errors) {
            rows.push(vec![fmt_f64(ell), fmt_f64(*m), fmt_f64(*e)]);
        }
        scans.push(serde_json::json!({ "ell": ell, "scan": scan }));
    }
    out.write_csv("galerkin.csv", &["ell", "m", "error"], rows)?;
    out.write_json(
        "galerkin_summary.json",
        &serde_json::json!({
            "problem": cfg.problem,
            "t_final": cfg.t_max,
            "scans": scans,
            "config": cfg,
            "version": env!("CARGO_PKG_VERSION"),
        }),
    )?;
    Ok(vec![Gate::new("reference-self-check", true, format!("tolerance {:e}", spec.tol))])
}

fn run_data(cfg: &RunConfig, problem: &dyn Problem) -> LabResult<SpectralState> {
    if cfg.smooth_data {
        let amps: Vec<f64> = (0..problem.n_comp()).map(|c| if c == 0 { 1.0 } else { 0.0 }).collect();
        single_mode_data(problem, &amps)
    } else {
        Ok(y_ell_initial_data(
            problem,
            FractionalExponent::new(cfg.ell_list[0])?,
            cfg.epsilon,
            &[],
        )?)
    }
}

fn cmd_run(cfg: &RunConfig, out: &mut OutputDir) -> LabResult<Vec<Gate>> {
    let problem = problem_of(cfg)?;
    let method = cfg.resolve_method()?;
    let target = method.target(problem.as_ref())?;
    let u0 = target.initial(&run_data(cfg, problem.as_ref())?)?;
    let (t_final, n) = cfg.run_horizon();
    let h = t_final / n as f64;
    let stage = stage_config(cfg);
    let traj = method.trajectory(target.problem(), &u0, h, n, &stage)?;
    let reference = reference_solution(target.problem(), &u0, t_final, &ReferenceSpec::for_h_min(h))?;
    let error = traj.state.distance(&reference.state)?;
    let trace = traj.norm_trace.clone().unwrap_or_default();
    out.write_csv(
        "run.csv",
        &["step", "t", "norm"],
        trace
            .iter()
            .enumerate()
            .map(|(i, v)| vec![i.to_string(), fmt_f64(i as f64 * h), fmt_f64(*v)]),
    )?;
    let max_iter = traj.reports.iter().map(|r| r.iterations_used).max().unwrap_or(0);
    out.write_json(
        "run_summary.json",
        &serde_json::json!({
            "problem": cfg.problem,
            "method": method.name(),
            "t_final": t_final,
            "n_steps": n,
            "h": h,
            "final_norm": traj.state.norm(),
            "error": error,
            "max_stage_iterations": max_iter,
            "reference_steps": reference.n_steps,
            "reference_diff": reference.validation_diff,
            "version": env!("CARGO_PKG_VERSION"),
        }),
    )?;
    Ok(vec![Gate::new(
        "reference-self-check",
        true,
        format!("doubling difference {:e}", reference.validation_diff),
    )])
}

fn cmd_phi_selftest(cfg: &RunConfig, out: &mut OutputDir) -> LabResult<Vec<Gate>> {
    let report = phi_selftest(cfg.phi_max_order, &standard_z_grid())?;
    out.write_csv(
        "phi_selftest.csv",
        &["k", "z_re", "z_im", "rel_err"],
        report
            .samples
            .iter()
            .map(|s| vec![s.k.to_string(), fmt_f64(s.z_re), fmt_f64(s.z_im), fmt_f64(s.rel_err)]),
    )?;
    out.write_json(
        "phi_selftest_summary.json",
        &serde_json::json!({
            "max_order": report.max_order,
            "n_points": report.n_points,
            "max_rel_err": report.max_rel_err,
            "worst": report.worst,
            "tolerance": PHI_SELFTEST_TOL,
            "version": env!("CARGO_PKG_VERSION"),
        }),
    )?;
    Ok(vec![Gate::new(
        "phi-accuracy",
        report.max_rel_err <= PHI_SELFTEST_TOL,
        format!("max relative error {:e}", report.max_rel_err),
    )])
}
