//! `𝒴_ℓ` norms and spectral projections.
//!
//! With `|A|` diagonal, `P₁` keeps the modes whose `|A|`-eigenvalue is at most
//! one (closed ball, so ties at exactly 1 belong to `P₁`) and
//! `‖U‖²_{𝒴_ℓ} = ‖P₁U‖² + ‖|A|^ℓ Q₁U‖²`.

use alloc::format;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::{DiagonalOperator, SpectralState};
use crate::{Error, Result};

/// Regularity index `ℓ ≥ 0` of the scale `𝒴_ℓ = D(A^ℓ)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FractionalExponent(f64);

impl FractionalExponent {
    pub const ZERO: FractionalExponent = FractionalExponent(0.0);

    pub fn new(ell: f64) -> Result<Self> {
        if ell.is_finite() && ell >= 0.0 {
            Ok(Self(ell))
        } else {
            Err(Error::InvalidArgument(format!("ell must be finite and >= 0, got {ell}")))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

fn abs_eigenvalues(abs_a: &DiagonalOperator) -> Result<impl Iterator<Item = f64> + '_> {
    if let Some(z) = abs_a
        .eigenvalues()
        .iter()
        .find(|z| z.im != 0.0 || z.re < 0.0 || !z.re.is_finite())
    {
        return Err(Error::Invariant(format!(
            "|A| must have nonnegative real eigenvalues, found {z}"
        )));
    }
    Ok(abs_a.eigenvalues().iter().map(|z| z.re))
}

pub fn y_ell_norm(state: &SpectralState, abs_a: &DiagonalOperator, ell: FractionalExponent) -> Result<f64> {
    abs_a.ensure_compatible(state.grid(), state.n_comp())?;
    let two_ell = 2.0 * ell.value();
    let sum: f64 = abs_eigenvalues(abs_a)?
        .zip(state.coeffs())
        .map(|(w, c)| {
            let c2 = c.norm_sqr();
            if w <= 1.0 {
                c2
            } else {
                w.powf(two_ell) * c2
            }
        })
        .sum();
    Ok(sum.sqrt())
}

fn check_cutoff(m: f64) -> Result<()> {
    if m > 0.0 && !m.is_nan() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("projection cutoff must be > 0, got {m}")))
    }
}

/// `P_m`: keeps modes with `|A|`-eigenvalue `≤ m`.
pub fn project_pm(state: &SpectralState, abs_a: &DiagonalOperator, m: f64) -> Result<SpectralState> {
    mask(state, abs_a, m, true)
}

/// `Q_m = id − P_m`: keeps modes with `|A|`-eigenvalue `> m`.
pub fn project_qm(state: &SpectralState, abs_a: &DiagonalOperator, m: f64) -> Result<SpectralState> {
    mask(state, abs_a, m, false)
}

fn mask(state: &SpectralState, abs_a: &DiagonalOperator, m: f64, keep_low: bool) -> Result<SpectralState> {
    check_cutoff(m)?;
    abs_a.ensure_compatible(state.grid(), state.n_comp())?;
    let mut out = state.clone();
    for (c, w) in out.coeffs_mut().iter_mut().zip(abs_eigenvalues(abs_a)?) {
        if (w <= m) != keep_low {
            *c = num_complex::Complex64::new(0.0, 0.0);
        }
    }
    Ok(out)
}
