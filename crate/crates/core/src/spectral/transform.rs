use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{ModeGrid, SpectralState};
use crate::{Error, Result};

/// Forward transform of physical samples, one block of `n_phys` per component.
///
/// Normalized by `1/n_phys`, so `u(x) = Σ_k û_k e^{ikx}`.
pub fn to_spectral(samples: &[Complex64], grid: &Arc<ModeGrid>, n_comp: usize) -> Result<SpectralState> {
    let n = grid.n_phys();
    if n_comp == 0 || samples.len() != n_comp * n {
        return Err(Error::Dimension {
            expected: n_comp.max(1) * n,
            found: samples.len(),
        });
    }
    let mut coeffs = samples.to_vec();
    for block in coeffs.chunks_exact_mut(n) {
        forward_in_place(block);
    }
    SpectralState::from_coeffs(grid, n_comp, coeffs)
}

pub fn to_spectral_real(samples: &[f64], grid: &Arc<ModeGrid>, n_comp: usize) -> Result<SpectralState> {
    let buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    to_spectral(&buf, grid, n_comp)
}

/// Inverse transform: physical samples at `x_j = 2πj/n`, component-major.
pub fn to_physical(state: &SpectralState) -> Vec<Complex64> {
    let n = state.grid().n_phys();
    let mut out = state.coeffs().to_vec();
    for block in out.chunks_exact_mut(n) {
        inverse_in_place(block);
    }
    out
}

/// Normalized forward DFT `û_k = (1/n) Σ_j u_j e^{−2πijk/n}` in FFT order.
pub(crate) fn forward_in_place(buf: &mut [Complex64]) {
    let n = buf.len();
    backend::forward(buf);
    let scale = 1.0 / n as f64;
    for c in buf.iter_mut() {
        *c *= scale;
    }
}

/// Unnormalized inverse DFT `u_j = Σ_k û_k e^{2πijk/n}`.
pub(crate) fn inverse_in_place(buf: &mut [Complex64]) {
    backend::inverse(buf);
}

#[cfg(feature = "std")]
mod backend {
    use std::sync::{Arc, Mutex, OnceLock};

    use num_complex::Complex64;
    use rustfft::{Fft, FftPlanner};

    fn planner() -> &'static Mutex<FftPlanner<f64>> {
        static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
        PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
    }

    fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
        // the planner caches plans, so this is a hash lookup after the first call
        let mut p = planner().lock().unwrap_or_else(|e| e.into_inner());
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    }

    pub(super) fn forward(buf: &mut [Complex64]) {
        plan(buf.len(), false).process(buf);
    }

    pub(super) fn inverse(buf: &mut [Complex64]) {
        plan(buf.len(), true).process(buf);
    }
}

#[cfg(not(feature = "std"))]
mod backend {
    use num_complex::Complex64;

    pub(super) fn forward(buf: &mut [Complex64]) {
        super::direct_dft(buf, -1.0);
    }

    pub(super) fn inverse(buf: &mut [Complex64]) {
        super::direct_dft(buf, 1.0);
    }
}

/// O(n²) DFT used when no FFT backend is available.
#[cfg_attr(feature = "std", allow(dead_code))]
pub(crate) fn direct_dft(buf: &mut [Complex64], sign: f64) {
    #[cfg(not(feature = "std"))]
    use num_traits::Float;
    let n = buf.len();
    let input = buf.to_vec();
    let w = sign * 2.0 * core::f64::consts::PI / n as f64;
    for (k, out) in buf.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, x) in input.iter().enumerate() {
            // reduce j*k mod n before forming the angle to keep it small
            let phase = w * ((j * k) % n) as f64;
            acc += x * Complex64::new(phase.cos(), phase.sin());
        }
        *out = acc;
    }
}
