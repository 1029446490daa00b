//! Acceptance criteria A1-A8. Prints one line per criterion and fails on any
//! red criterion that is not listed in `KNOWN_RED`.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use expint_core::exprk::{ExpRkStepper, OneStepMethod};
use expint_core::phi::{phi_diag, PhiOrder, SpectrumPolicy};
use expint_core::problems::{make_linear_commuting, make_nls, make_wave, y_ell_initial_data, Problem};
use expint_core::rosenbrock::{rosenbrock_integrate, RosenbrockTableau};
use expint_core::spectral::{project_pm, project_qm, to_physical, to_spectral, y_ell_norm, ModeGrid};
use expint_core::tableau::{implicit_lawson_euler, tableau_by_name};
use expint_core::{Complex64, FractionalExponent, RosenbrockConfig, SpectralState, StageSolveConfig};
use expint_lab::experiments::{
    galerkin_reference_spec, galerkin_scan, order_scan, sharpness_probe, single_ladder, single_mode_data, HLadder,
    Method,
};
use expint_lab::quadrature::{phi_selftest, standard_z_grid};
use expint_lab::{execute, Command, RunConfig};

// A1
const A1_ELLS: [f64; 6] = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0];
const A1_TOL: f64 = 0.25;
// A2
const A2_LAMBDA: f64 = -0.5;
const A2_K: [i64; 4] = [8, 16, 32, 64];
const A2_MAX_RATIO: f64 = 4.0;
const A2_WEIGHT_ELL: f64 = 1.5;
const A2_LOG2_TOL: f64 = 0.2;
// A3
const A3_EULER_TOL: f64 = 0.1;
const A3_CM4_MIN: f64 = 3.7;
// A4
const A4_TOL: f64 = 1e-10;
// A5
const A5_ELLS: [f64; 3] = [0.5, 1.0, 1.5];
const A5_M: [f64; 4] = [8.0, 16.0, 32.0, 64.0];
const A5_T: f64 = 0.25;
const A5_TOL: f64 = 0.3;
// A6
const A6_M_ACTIVE: usize = 32;
const A6_N_PHYS: usize = 128;
const A6_MIN_ORDER: f64 = 1.85;
const A6_LINEAR_TOL: f64 = 1e-9;
// A7
const A7_MAX_ITER: usize = 50;
const A7_MAX_RATIO: f64 = 0.6;
const A7_AFFINE_TOL: f64 = 1e-12;

const N_PHYS: usize = 512;
const T_FINAL: f64 = 0.5;
const EPSILON: f64 = 1e-8;

/// Parts that are expected to fail on this implementation, as `(criterion, part)`.
/// A listed part that passes is itself an error, so the list cannot go stale.
const KNOWN_RED: [(&str, &str); 1] = [("A1", "ell=0.5")];

struct Part {
    name: String,
    passed: bool,
    detail: String,
}

fn part(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Part {
    Part {
        name: name.into(),
        passed,
        detail: detail.into(),
    }
}

type Outcome = Result<Vec<Part>, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn stage() -> StageSolveConfig {
    StageSolveConfig::default()
}

fn y_ell(p: &dyn Problem, ell: f64) -> SpectralState {
    y_ell_initial_data(p, FractionalExponent::new(ell).unwrap(), EPSILON, &[]).unwrap()
}

fn a1() -> Outcome {
    let wave = make_wave(N_PHYS).map_err(|e| e.to_string())?;
    let scan = order_scan(
        &wave,
        &Method::exprk("exp-euler").unwrap(),
        &A1_ELLS,
        T_FINAL,
        &HLadder::Dyadic { j_min: 4, j_max: 9 },
        EPSILON,
        &stage(),
    )
    .map_err(|e| e.to_string())?;
    Ok(scan
        .entries
        .iter()
        .map(|e| {
            let want = e.ell.min(1.0);
            let q = e.estimate.slope;
            part(
                format!("ell={}", e.ell),
                (q - want).abs() <= A1_TOL,
                format!("q={q:.3} want {want}±{A1_TOL}"),
            )
        })
        .collect())
}

fn a2() -> Outcome {
    let rows = sharpness_probe(&A2_K, A2_LAMBDA, None).map_err(|e| e.to_string())?;
    let max = rows.iter().map(|r| r.error).fold(0.0, f64::max);
    let min = rows.iter().map(|r| r.error).fold(f64::INFINITY, f64::min);
    let weighted = sharpness_probe(&A2_K, A2_LAMBDA, Some(A2_WEIGHT_ELL)).map_err(|e| e.to_string())?;
    let ratios: Vec<f64> = weighted.windows(2).map(|w| (w[0].error / w[1].error).log2()).collect();
    let ok = ratios.iter().all(|r| (r - A2_WEIGHT_ELL).abs() <= A2_LOG2_TOL);
    Ok(vec![
        part(
            "unweighted",
            max / min <= A2_MAX_RATIO,
            format!("errors in [{min:.3}, {max:.3}], ratio {:.3}", max / min),
        ),
        part("weighted", ok, format!("log2 ratios {ratios:.3?}")),
    ])
}

fn a3() -> Outcome {
    let wave = make_wave(N_PHYS).map_err(|e| e.to_string())?;
    let u0 = single_mode_data(&wave, &[1.0, 0.0]).map_err(|e| e.to_string())?;
    let ladder = HLadder::Dyadic { j_min: 4, j_max: 9 };
    let mut parts = Vec::new();
    for (name, check) in [("exp-euler", 0), ("cox-matthews-4", 1)] {
        let (_, est) = single_ladder(&wave, &Method::exprk(name).unwrap(), &u0, T_FINAL, &ladder, &stage())
            .map_err(|e| e.to_string())?;
        let q = est.slope;
        let (ok, want) = if check == 0 {
            ((q - 1.0).abs() <= A3_EULER_TOL, format!("1±{A3_EULER_TOL}"))
        } else {
            (q >= A3_CM4_MIN, format!(">= {A3_CM4_MIN}"))
        };
        parts.push(part(name, ok, format!("q={q:.3} want {want} ({} points)", est.n_fitted)));
    }
    Ok(parts)
}

fn a4() -> Outcome {
    let r = phi_selftest(4, &standard_z_grid()).map_err(|e| e.to_string())?;
    Ok(vec![part(
        "phi",
        r.max_rel_err <= A4_TOL,
        format!("max rel err {:.2e} over {} points", r.max_rel_err, r.n_points),
    )])
}

fn a5() -> Outcome {
    let wave = make_wave(N_PHYS).map_err(|e| e.to_string())?;
    let spec = galerkin_reference_spec(A5_T);
    let mut parts = Vec::new();
    let mut slopes = Vec::new();
    for ell in A5_ELLS {
        let scan = galerkin_scan(&wave, &y_ell(&wave, ell), A5_T, &A5_M, &spec).map_err(|e| e.to_string())?;
        let s = scan.fitted_slope.ok_or("no Galerkin slope")?;
        slopes.push(s);
        parts.push(part(
            format!("ell={ell}"),
            (s + ell).abs() <= A5_TOL,
            format!("slope {s:.3} want {}±{A5_TOL}", -ell),
        ));
    }
    let decreasing = slopes.windows(2).all(|w| w[1] < w[0]);
    parts.push(part("monotone", decreasing, format!("slopes {slopes:.3?}")));
    Ok(parts)
}

fn a6() -> Outcome {
    let wave = make_wave(A6_N_PHYS).map_err(|e| e.to_string())?;
    let u0 = single_mode_data(&wave, &[1.0, 0.0]).map_err(|e| e.to_string())?;
    let method = Method::rosenbrock("rosenbrock-euler", A6_M_ACTIVE).unwrap();
    let (_, est) = single_ladder(&wave, &method, &u0, T_FINAL, &HLadder::Dyadic { j_min: 3, j_max: 7 }, &stage())
        .map_err(|e| e.to_string())?;
    let lin = make_linear_commuting(64, |k| Complex64::new(A2_LAMBDA, 0.1 * k as f64)).map_err(|e| e.to_string())?;
    let v0 = y_ell(&lin, 1.0);
    let exact = lin.exact_flow(&v0, T_FINAL).map_err(|e| e.to_string())?;
    let cfg = RosenbrockConfig::new(A6_M_ACTIVE);
    let mut worst = 0.0f64;
    for n in [1, 4, 16, 64] {
        let (u, _) = rosenbrock_integrate(&lin, &RosenbrockTableau::rosenbrock_euler(), &v0, T_FINAL, n, &cfg)
            .map_err(|e| e.to_string())?;
        worst = worst.max(u.distance(&exact).map_err(|e| e.to_string())?);
    }
    Ok(vec![
        part(
            "wave order",
            est.slope >= A6_MIN_ORDER,
            format!("q={:.3} want >= {A6_MIN_ORDER}", est.slope),
        ),
        part(
            "linear exactness",
            worst <= A6_LINEAR_TOL,
            format!("max error {worst:.2e} over n in {{1,4,16,64}}"),
        ),
    ])
}

fn a7() -> Outcome {
    let wave = make_wave(N_PHYS).map_err(|e| e.to_string())?;
    let tab = implicit_lawson_euler();
    let u0 = y_ell(&wave, 1.0);
    let lip = wave.lipschitz_bound(2.0 * u0.norm()).ok_or("no Lipschitz bound")?;
    // largest dyadic step under the guard h M_a M' ≤ 1/2
    let h_max = 0.5 / (tab.a_bound() * lip);
    let h = 2f64.powi(h_max.log2().floor() as i32);
    let traj = ExpRkStepper::new(&wave, &tab, h, stage().with_guard())
        .and_then(|s| s.run(&u0, 8, false))
        .map_err(|e| e.to_string())?;
    let iters = traj.reports.iter().map(|r| r.iterations_used).max().unwrap_or(0);
    let ratio = traj
        .reports
        .iter()
        .flat_map(|r| r.residual_history.windows(2).filter(|w| w[0] > 1e-13).map(|w| w[1] / w[0]))
        .fold(0.0, f64::max);

    // u' = iku + λ_k u: the stage solves W = e^{ihk}U⁰ + hλ_k W
    let lin = make_linear_commuting(64, |k| Complex64::new(-0.5 - 0.01 * k.abs() as f64, 0.0)).map_err(|e| e.to_string())?;
    let v0 = y_ell(&lin, 0.5);
    let hl = 0.3;
    let (stages, _) = ExpRkStepper::new(&lin, &tab, hl, stage())
        .and_then(|s| s.solve_stages(&v0))
        .map_err(|e| e.to_string())?;
    let closed = SpectralState::from_fn(lin.grid(), 1, |_, k| {
        let lam = -0.5 - 0.01 * k.abs() as f64;
        let idx = lin.grid().index_of(k).unwrap();
        Complex64::new(0.0, hl * k as f64).exp() * v0.coeffs()[idx] / (1.0 - hl * lam)
    })
    .unwrap();
    let affine_err = stages[0].distance(&closed).unwrap();
    Ok(vec![
        part(
            "wave fixed point",
            iters <= A7_MAX_ITER && ratio <= A7_MAX_RATIO,
            format!("h={h:.3e}, max iterations {iters}, max residual ratio {ratio:.2e}"),
        ),
        part(
            "affine closed form",
            affine_err <= A7_AFFINE_TOL,
            format!("stage error {affine_err:.2e}"),
        ),
    ])
}

fn a8() -> Outcome {
    let mut parts = Vec::new();

    let mut worst_dft = 0.0f64;
    for n in (8..=1024).step_by(8) {
        let grid = Arc::new(ModeGrid::new(n).unwrap());
        let x: Vec<Complex64> = (0..n).map(|j| Complex64::new((j as f64 * 0.7).sin(), (j as f64 * 0.3).cos())).collect();
        let back = to_physical(&to_spectral(&x, &grid, 1).unwrap());
        let err = x.iter().zip(&back).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        worst_dft = worst_dft.max(err);
    }
    parts.push(part("dft round trip", worst_dft <= 1e-12, format!("max error {worst_dft:.2e}")));

    let wave = make_wave(128).unwrap();
    let u = y_ell(&wave, 1.0);
    let abs_a = wave.abs_linear();
    let split_ok = [0.5, 1.0, 7.0, 20.0].iter().all(|&m| {
        let p = project_pm(&u, abs_a, m).unwrap();
        let q = project_qm(&u, abs_a, m).unwrap();
        p.add(&q).unwrap() == u && project_qm(&p, abs_a, m).unwrap().norm() == 0.0
    });
    parts.push(part("projections", split_ok, "P_m + Q_m = id, Q_m P_m = 0"));

    let norms: Vec<f64> = [0.0, 0.25, 0.5, 1.0, 1.5, 2.0]
        .iter()
        .map(|&l| y_ell_norm(&u, abs_a, FractionalExponent::new(l).unwrap()).unwrap())
        .collect();
    let mono = norms.windows(2).all(|w| w[0] <= w[1]);
    parts.push(part("norm monotonicity", mono, format!("{norms:.3?}")));

    let mut unitary = 0.0f64;
    for p in [&wave as &dyn Problem, &make_nls(128).unwrap()] {
        let e = phi_diag(PhiOrder::new(0).unwrap(), &p.linear().scale(Complex64::new(1.7, 0.0)), SpectrumPolicy::Reject).unwrap();
        let v = y_ell(p, 0.5);
        unitary = unitary.max((e.apply(&v).unwrap().norm() - v.norm()).abs());
    }
    parts.push(part("unitary flow", unitary <= 1e-13, format!("norm drift {unitary:.2e}")));

    let nls = make_nls(64).unwrap();
    let u = y_ell(&nls, 1.0).scale(Complex64::new(2.0, 0.0));
    let v = y_ell(&nls, 1.0).scale(Complex64::new(0.0, 3.0));
    let exact = nls.derivative_action(&u, &v).unwrap();
    let fd = |d: f64| {
        let plus = nls.nonlinearity(&u.axpy(Complex64::new(d, 0.0), &v).unwrap()).unwrap();
        let minus = nls.nonlinearity(&u.axpy(Complex64::new(-d, 0.0), &v).unwrap()).unwrap();
        plus.sub(&minus).unwrap().scale(Complex64::new(0.5 / d, 0.0)).distance(&exact).unwrap()
    };
    let reduction = fd(1e-4) / fd(1e-5);
    parts.push(part(
        "derivative differences",
        (80.0..=120.0).contains(&reduction),
        format!("error reduction {reduction:.1} for a 10x smaller step"),
    ));

    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |dir: &str| -> Result<Vec<u8>, String> {
        let cfg = RunConfig {
            n_phys: 64,
            ell_list: vec![1.0],
            j_min: 3,
            j_max: 6,
            output_dir: tmp.path().join(dir),
            ..Default::default()
        };
        execute(Command::OrderScan, &cfg).map_err(|e| e.to_string())?;
        std::fs::read(cfg.output_dir.join("order_scan.csv")).map_err(|e| e.to_string())
    };
    let same = run("a")? == run("b")?;
    let tab = tableau_by_name("cox-matthews-4").unwrap();
    let stepper = ExpRkStepper::new(&wave, &tab, 0.01, stage()).unwrap();
    let u = y_ell(&wave, 1.0);
    let same_step = stepper.run(&u, 5, true).unwrap() == stepper.run(&u, 5, true).unwrap();
    parts.push(part("determinism", same && same_step, "byte-identical reruns"));
    Ok(parts)
}

fn is_known_red(criterion: &str, part: &str) -> bool {
    KNOWN_RED.iter().any(|&(c, p)| c == criterion && p == part)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("A1", a1),
        ("A2", a2),
        ("A3", a3),
        ("A4", a4),
        ("A5", a5),
        ("A6", a6),
        ("A7", a7),
        ("A8", a8),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut bad = Vec::new();
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let parts = match outcome {
            Ok(p) => p,
            Err(e) => {
                println!("{name} FAIL [{secs:.1}s] error: {e}");
                bad.push(name.to_string());
                continue;
            }
        };
        let red: Vec<&Part> = parts.iter().filter(|p| !p.passed).collect();
        let unexpected: Vec<&&Part> = red.iter().filter(|p| !is_known_red(name, &p.name)).collect();
        let stale: Vec<&Part> = parts.iter().filter(|p| p.passed && is_known_red(name, &p.name)).collect();
        let status = if red.is_empty() { "PASS" } else { "FAIL" };
        let known = if !red.is_empty() && unexpected.is_empty() { " (known red)" } else { "" };
        println!("{name} {status}{known} [{secs:.1}s]");
        for p in &parts {
            println!("    {} {}: {}", if p.passed { "ok  " } else { "FAIL" }, p.name, p.detail);
        }
        if !unexpected.is_empty() {
            bad.push(name.to_string());
        }
        for p in stale {
            println!("    {} is listed as known red but passed", p.name);
            bad.push(format!("{name} {}", p.name));
        }
    }
    if bad.is_empty() {
        println!("acceptance: ok");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed ({})", bad.join(", "));
        ExitCode::FAILURE
    }
}
