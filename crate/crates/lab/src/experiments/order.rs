use serde::Serialize;

use crate::error::{LabError, LabResult};

/// Ladder points with smaller errors are below the reference accuracy and
/// are left out of fits.
pub const NOISE_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderMeta {
    pub problem: String,
    pub method: String,
    pub ell: Option<f64>,
    pub t_final: f64,
}

/// Errors against step sizes, `h` strictly decreasing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorLadder {
    pub h_values: Vec<f64>,
    pub n_steps: Vec<usize>,
    pub errors: Vec<f64>,
    pub meta: LadderMeta,
}

impl ErrorLadder {
    pub fn new(h_values: Vec<f64>, n_steps: Vec<usize>, errors: Vec<f64>, meta: LadderMeta) -> LabResult<Self> {
        if h_values.len() != errors.len() || n_steps.len() != errors.len() {
            return Err(LabError::DegenerateLadder(format!(
                "{} step sizes, {} step counts, {} errors",
                h_values.len(),
                n_steps.len(),
                errors.len()
            )));
        }
        if h_values.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
            return Err(LabError::DegenerateLadder("step sizes must be finite and positive".into()));
        }
        if h_values.windows(2).any(|w| w[1] >= w[0]) {
            return Err(LabError::DegenerateLadder("step sizes must be strictly decreasing".into()));
        }
        Ok(Self {
            h_values,
            n_steps,
            errors,
            meta,
        })
    }

    pub fn len(&self) -> usize {
        self.errors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.errors.is_empty()
    }

    /// Whether each point falls below [`NOISE_FLOOR`].
    pub fn excluded(&self) -> Vec<bool> {
        self.errors.iter().map(|&e| e < NOISE_FLOOR).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderEstimate {
    pub slope: f64,
    pub intercept: f64,
    /// Largest `|fit − data|` in log space over the fitted points.
    pub max_residual: f64,
    pub n_fitted: usize,
}

/// Least-squares line through `(x, y)`: `(slope, intercept, max |residual|)`.
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = x
        .iter()
        .zip(y)
        .map(|(a, b)| (intercept + slope * a - b).abs())
        .fold(0.0, f64::max);
    (slope, intercept, max_residual)
}

/// Slope of `log(error)` against `log(h)`, skipping points under the noise floor.
pub fn estimate_order(ladder: &ErrorLadder) -> LabResult<OrderEstimate> {
    if ladder.len() < 3 {
        return Err(LabError::DegenerateLadder(format!(
            "need at least 3 ladder points, got {}",
            ladder.len()
        )));
    }
    if let Some(bad) = ladder.errors.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(LabError::DegenerateLadder(format!("error entry {bad} is not positive")));
    }
    let (x, y): (Vec<f64>, Vec<f64>) = ladder
        .h_values
        .iter()
        .zip(&ladder.errors)
        .filter(|(_, &e)| e >= NOISE_FLOOR)
        .map(|(h, e)| (h.ln(), e.ln()))
        .unzip();
    if x.len() < 2 {
        return Err(LabError::DegenerateLadder(format!(
            "only {} point(s) above the noise floor {NOISE_FLOOR:e}",
            x.len()
        )));
    }
    let (slope, intercept, max_residual) = fit_line(&x, &y);
    Ok(OrderEstimate {
        slope,
        intercept,
        max_residual,
        n_fitted: x.len(),
    })
}
