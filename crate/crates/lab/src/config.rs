//! Flat JSON run configuration; command-line flags override file values.

use std::path::{Path, PathBuf};

use expint_core::problems::ProblemKind;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};
use crate::experiments::{HLadder, Method};

/// Galerkin dimension cap per component for Rosenbrock runs.
pub const MAX_M_ACTIVE: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub problem: String,
    /// Tableau name; `None` picks `exp-euler` (or `rosenbrock-euler`).
    pub method: Option<String>,
    pub ell_list: Vec<f64>,
    pub t_max: f64,
    pub n_phys: usize,
    /// Dyadic ladder `h = T/2^j`, `j = j_min..=j_max`, unless `h_list` is set.
    pub j_min: u32,
    pub j_max: u32,
    pub h_list: Option<Vec<f64>>,
    pub epsilon: f64,
    pub output_dir: PathBuf,
    pub dealias: bool,
    pub contraction_guard: bool,
    pub rosenbrock: bool,
    pub m_active: usize,
    /// Constant `λ` of the linear commuting problem.
    pub lambda: f64,
    pub k_list: Vec<i64>,
    /// Sharpness probe with data `k^{−ℓ} e_k`.
    pub weight_ell: Option<f64>,
    pub m_list: Vec<f64>,
    /// Single-trajectory runs: step count and optional step size (then `T = n h`).
    pub n_steps: usize,
    pub h: Option<f64>,
    /// Single-trajectory runs start from `cos x` data instead of `𝒴_ℓ` data.
    pub smooth_data: bool,
    pub phi_max_order: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            problem: "wave".into(),
            method: None,
            ell_list: (0..=6).map(|j| j as f64 / 2.0).collect(),
            t_max: 0.5,
            n_phys: 512,
            j_min: 4,
            j_max: 9,
            h_list: None,
            epsilon: 1e-8,
            output_dir: PathBuf::from("expint-out"),
            dealias: false,
            contraction_guard: false,
            rosenbrock: false,
            m_active: 32,
            lambda: -0.5,
            k_list: vec![8, 16, 32, 64],
            weight_ell: None,
            m_list: vec![8.0, 16.0, 32.0, 64.0],
            n_steps: 64,
            h: None,
            smooth_data: false,
            phi_max_order: 4,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> LabResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| LabError::Config(format!("bad config {}: {e}", path.display())))
    }

    pub fn method_name(&self) -> &str {
        match (&self.method, self.rosenbrock) {
            (Some(m), _) => m,
            (None, true) => "rosenbrock-euler",
            (None, false) => "exp-euler",
        }
    }

    pub fn resolve_method(&self) -> LabResult<Method> {
        if self.rosenbrock {
            Method::rosenbrock(self.method_name(), self.m_active)
        } else {
            Method::exprk(self.method_name())
        }
    }

    pub fn ladder(&self) -> HLadder {
        match &self.h_list {
            Some(hs) => HLadder::Explicit(hs.clone()),
            None => HLadder::Dyadic {
                j_min: self.j_min,
                j_max: self.j_max,
            },
        }
    }

    /// Checks everything that does not need a numerical run.
    pub fn validate(&self) -> LabResult<()> {
        let bad = |msg: String| Err(LabError::Config(msg));
        self.problem
            .parse::<ProblemKind>()
            .map_err(|e| LabError::Config(e.to_string()))?;
        self.resolve_method()?;
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return bad(format!("t_max must be > 0, got {}", self.t_max));
        }
        if self.n_phys < 8 || self.n_phys % 2 != 0 {
            return bad(format!("n_phys must be even and >= 8, got {}", self.n_phys));
        }
        if self.ell_list.is_empty() {
            return bad("ell_list is empty".into());
        }
        if let Some(ell) = self.ell_list.iter().find(|l| !(**l >= 0.0 && l.is_finite())) {
            return bad(format!("ell values must be finite and >= 0, got {ell}"));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be >= 0, got {}", self.epsilon));
        }
        if self.rosenbrock && !(1..=MAX_M_ACTIVE).contains(&self.m_active) {
            return bad(format!("m_active must be in 1..={MAX_M_ACTIVE}, got {}", self.m_active));
        }
        if self.n_steps == 0 {
            return bad("n_steps must be >= 1".into());
        }
        if let Some(h) = self.h {
            if !(h > 0.0 && h.is_finite()) {
                return bad(format!("h must be > 0, got {h}"));
            }
        }
        self.ladder().steps(self.t_max)?;
        Ok(())
    }

    /// `(T, n)` of a single-trajectory run.
    pub fn run_horizon(&self) -> (f64, usize) {
        match self.h {
            Some(h) => (h * self.n_steps as f64, self.n_steps),
            None => (self.t_max, self.n_steps),
        }
    }
}

/// Command-line overrides; `None` keeps the file (or default) value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub problem: Option<String>,
    pub method: Option<String>,
    pub ell: Option<Vec<f64>>,
    pub t_max: Option<f64>,
    pub n_phys: Option<usize>,
    pub ladder: Option<(u32, u32)>,
    pub output_dir: Option<PathBuf>,
    pub rosenbrock: bool,
    pub n_steps: Option<usize>,
    pub h: Option<f64>,
}

impl RunConfig {
    pub fn apply(&mut self, o: Overrides) {
        if let Some(v) = o.problem {
            self.problem = v;
        }
        if let Some(v) = o.method {
            self.method = Some(v);
        }
        if let Some(v) = o.ell {
            self.ell_list = v;
        }
        if let Some(v) = o.t_max {
            self.t_max = v;
        }
        if let Some(v) = o.n_phys {
            self.n_phys = v;
        }
        if let Some((a, b)) = o.ladder {
            self.j_min = a;
            self.j_max = b;
            self.h_list = None;
        }
        if let Some(v) = o.output_dir {
            self.output_dir = v;
        }
        if o.rosenbrock {
            self.rosenbrock = true;
        }
        if let Some(v) = o.n_steps {
            self.n_steps = v;
        }
        if let Some(v) = o.h {
            self.h = Some(v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
        assert_eq!(RunConfig::default().method_name(), "exp-euler");
    }

    #[test]
    fn flat_json_and_overrides() {
        let mut c: RunConfig = serde_json::from_str(r#"{"problem": "nls", "t_max": 0.25, "ell_list": [1.0]}"#).unwrap();
        assert_eq!(c.problem, "nls");
        c.apply(Overrides {
            t_max: Some(0.125),
            ..Default::default()
        });
        assert_eq!(c.t_max, 0.125);
        assert_eq!(c.ell_list, vec![1.0]);
        assert!(serde_json::from_str::<RunConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn invalid_values() {
        let cases = [
            RunConfig {
                ell_list: vec![],
                ..Default::default()
            },
            RunConfig {
                method: Some("rk4".into()),
                ..Default::default()
            },
            RunConfig {
                t_max: 0.0,
                ..Default::default()
            },
            RunConfig {
                h: Some(0.0),
                n_steps: 1,
                ..Default::default()
            },
            RunConfig {
                rosenbrock: true,
                m_active: 65,
                ..Default::default()
            },
        ];
        for c in cases {
            assert!(matches!(c.validate(), Err(LabError::Config(_))), "{c:?}");
        }
        let err = RunConfig {
            method: Some("rk4".into()),
            ..Default::default()
        }
        .validate()
        .unwrap_err();
        assert!(err.to_string().contains("exp-euler"));
    }
}
