//! Linear problem `U' = AU + BU` with `Ae_k = ik e_k`, `Be_k = λ_k e_k`, so `[A, B] = 0`.

use alloc::string::String;
use alloc::sync::Arc;

use num_complex::Complex64;

use super::{Problem, ProblemKind};
use crate::spectral::{DiagonalOperator, ModeGrid, SpectralState};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct LinearCommuting {
    name: String,
    grid: Arc<ModeGrid>,
    a: DiagonalOperator,
    abs_a: DiagonalOperator,
    lambda: DiagonalOperator,
}

/// `lambda(k)` must have `Re ≤ 0` (real nonpositive or purely imaginary).
pub fn make_linear_commuting(
    n_phys: usize,
    lambda: impl Fn(i64) -> Complex64,
) -> Result<LinearCommuting> {
    let grid = Arc::new(ModeGrid::new(n_phys)?);
    let lambda = DiagonalOperator::from_fn(&grid, 1, |_, k| lambda(k))?;
    if lambda.max_real_part() > 0.0 {
        return Err(Error::InvalidArgument(
            "lambda spectrum must have nonpositive real part".into(),
        ));
    }
    let a = DiagonalOperator::from_fn(&grid, 1, |_, k| Complex64::new(0.0, k as f64))?;
    let abs_a = DiagonalOperator::from_fn(&grid, 1, |_, k| Complex64::new(k.abs() as f64, 0.0))?;
    Ok(LinearCommuting {
        name: "linear".into(),
        grid,
        a,
        abs_a,
        lambda,
    })
}

impl LinearCommuting {
    pub fn lambda(&self) -> &DiagonalOperator {
        &self.lambda
    }

    /// Exact flow: coefficient `k` is multiplied by `e^{t(ik + λ_k)}`.
    pub fn exact_flow(&self, u0: &SpectralState, t: f64) -> Result<SpectralState> {
        let gen = self.a.add(&self.lambda)?;
        gen.map(|z| (z * t).exp()).apply(u0)
    }
}

impl Problem for LinearCommuting {
    fn name(&self) -> &str {
        &self.name
    }

    fn kind(&self) -> ProblemKind {
        ProblemKind::Linear
    }

    fn grid(&self) -> &Arc<ModeGrid> {
        &self.grid
    }

    fn n_comp(&self) -> usize {
        1
    }

    fn linear(&self) -> &DiagonalOperator {
        &self.a
    }

    fn abs_linear(&self) -> &DiagonalOperator {
        &self.abs_a
    }

    fn nonlinearity(&self, u: &SpectralState) -> Result<SpectralState> {
        self.lambda.apply(u)
    }

    fn derivative_action(&self, _u0: &SpectralState, v: &SpectralState) -> Result<SpectralState> {
        self.lambda.apply(v)
    }

    fn lipschitz_bound(&self, _radius: f64) -> Option<f64> {
        Some(self.lambda.spectral_radius())
    }
}
