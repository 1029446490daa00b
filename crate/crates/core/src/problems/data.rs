use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::Problem;
use crate::spectral::{y_ell_norm, FractionalExponent, SpectralState};
use crate::{Error, Result};

/// Low-regularity initial data normalized to `‖U⁰‖_{𝒴_ℓ} = 1`.
///
/// Every physical field gets
/// `f(x) = c_f Σ_{k=1}^{n/2−1} k^{−(dℓ + 1/2 + ε)} (cos kx + sin kx)`, where
/// `d` is the growth exponent of `|A|` (1 for the wave equation, 2 for NLS).
/// The ratios `c_f` come from `field_weights` (empty means all equal) and a
/// single common factor fixes the norm.
pub fn y_ell_initial_data<P: Problem + ?Sized>(
    problem: &P,
    ell: FractionalExponent,
    epsilon: f64,
    field_weights: &[f64],
) -> Result<SpectralState> {
    let n_fields = problem.n_comp();
    let weights: Vec<f64> = if field_weights.is_empty() {
        vec![1.0; n_fields]
    } else if field_weights.len() == n_fields {
        field_weights.to_vec()
    } else {
        return Err(Error::Dimension {
            expected: n_fields,
            found: field_weights.len(),
        });
    };
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be >= 0, got {epsilon}")));
    }
    let grid = problem.grid();
    let exponent = problem.symbol_degree() * ell.value() + 0.5 + epsilon;
    let k_top = grid.k_max() - 1;
    let fields: Vec<Vec<Complex64>> = weights
        .iter()
        .map(|&w| {
            let mut hat = vec![Complex64::new(0.0, 0.0); grid.len()];
            for k in 1..=k_top {
                let a = w / (k as f64).powf(exponent);
                // cos kx + sin kx = ((1 − i)/2) e^{ikx} + ((1 + i)/2) e^{−ikx}
                hat[grid.index_of(k).unwrap()] = Complex64::new(0.5 * a, -0.5 * a);
                hat[grid.index_of(-k).unwrap()] = Complex64::new(0.5 * a, 0.5 * a);
            }
            hat
        })
        .collect();
    let raw = problem.from_fields(&fields)?;
    let norm = y_ell_norm(&raw, problem.abs_linear(), ell)?;
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "initial data has degenerate 𝒴_ℓ norm {norm} for ell = {}",
            ell.value()
        )));
    }
    Ok(raw.scale(Complex64::new(1.0 / norm, 0.0)))
}
