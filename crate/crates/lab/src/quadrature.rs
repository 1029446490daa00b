//! Quadrature oracle for `φ_k(z) = ∫₀¹ e^{(1−s)z} s^{k−1}/(k−1)! ds` and the φ self-test.

use expint_core::phi::{phi_scalar, PhiOrder};
use expint_core::Complex64;
use serde::Serialize;

use crate::error::{LabError, LabResult};

/// `φ_k(z)` by composite double-exponential quadrature of the defining integral.
/// `φ₀` is `e^z`.
pub fn phi_quadrature(k: usize, z: Complex64) -> Complex64 {
    if k == 0 {
        return z.exp();
    }
    let fact: f64 = (1..k).map(|j| j as f64).product();
    let integrand = |s: f64| ((1.0 - s) * z).exp() * s.powi(k as i32 - 1) / fact;
    // panels keep the oscillation and the boundary layer at s = 1 resolved
    let panels = (z.norm() / 2.0).ceil().max(8.0) as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let a = p as f64 / panels as f64;
        let b = (p + 1) as f64 / panels as f64;
        let re = quadrature::integrate(|s| integrand(s).re, a, b, 1e-18).integral;
        let im = quadrature::integrate(|s| integrand(s).im, a, b, 1e-18).integral;
        acc += Complex64::new(re, im);
    }
    acc
}

/// The standard self-test points: a 20×20 grid over `Re ∈ [−50, 0]`,
/// `Im ∈ [−50, 50]` plus points with `|z| ≤ 1e−3`.
pub fn standard_z_grid() -> Vec<Complex64> {
    let lin = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / 19.0;
    let mut zs: Vec<Complex64> = (0..20)
        .flat_map(|i| (0..20).map(move |j| Complex64::new(lin(-50.0, 0.0, i), lin(-50.0, 50.0, j))))
        .collect();
    for r in [1e-3, 1e-5, 1e-8, 1e-12] {
        for t in 0..8 {
            let theta = std::f64::consts::FRAC_PI_2 + t as f64 * std::f64::consts::PI / 7.0;
            let z = Complex64::from_polar(r, theta);
            zs.push(Complex64::new(z.re.min(0.0), z.im));
        }
    }
    zs.push(Complex64::new(0.0, 0.0));
    zs
}

#[derive(Debug, Clone, Serialize)]
pub struct PhiSample {
    pub k: usize,
    pub z_re: f64,
    pub z_im: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PhiSelftest {
    pub max_order: usize,
    pub n_points: usize,
    pub max_rel_err: f64,
    pub worst: PhiSample,
    pub samples: Vec<PhiSample>,
}

/// Compares [`phi_scalar`] with the quadrature oracle for `k = 0..=max_order`.
pub fn phi_selftest(max_order: usize, zs: &[Complex64]) -> LabResult<PhiSelftest> {
    if zs.is_empty() {
        return Err(LabError::Config("phi self-test needs at least one point".into()));
    }
    let mut samples = Vec::with_capacity(zs.len() * (max_order + 1));
    for k in 0..=max_order {
        let order = PhiOrder::new(k)?;
        for &z in zs {
            let got = phi_scalar(order, z);
            let want = phi_quadrature(k, z);
            samples.push(PhiSample {
                k,
                z_re: z.re,
                z_im: z.im,
                rel_err: (got - want).norm() / want.norm(),
            });
        }
    }
    let worst = samples
        .iter()
        .max_by(|a, b| a.rel_err.total_cmp(&b.rel_err))
        .cloned()
        .expect("non-empty");
    Ok(PhiSelftest {
        max_order,
        n_points: samples.len(),
        max_rel_err: worst.rel_err,
        worst,
        samples,
    })
}
