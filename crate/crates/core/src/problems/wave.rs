//! Semilinear wave equation `u_tt = u_xx − V'(u)`, `V'(u) = u − 4u²`, on `[0, 2π)`.
//!
//! As a first-order system `u_t = v`, `v_t = u_xx − u + 4u²`. The linear term
//! of `V'` is absorbed into `A`, so every mode block `[[0, 1], [−ω², 0]]` has
//! `ω_k = √(k² + 1) ≥ 1` and is diagonalized by the characteristic variables
//!
//! ```text
//! p_k = (v̂_k + iω_k û_k) / (√2 s_k),   q_k = (v̂_k − iω_k û_k) / (√2 s_k)
//! ```
//!
//! with eigenvalues `+iω_k` (component 0) and `−iω_k` (component 1). The
//! scaling `s_k` fixes which space the plain coefficient norm realizes:
//! `s_k = 1` gives the energy space `H¹ × L²`, `s_k = ω_k` gives `L² × H⁻¹`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::SQRT_2;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::{dealias, physical, spectral, Problem, ProblemKind, SOBOLEV_SUP_CONSTANT};
use crate::spectral::{DiagonalOperator, ModeGrid, SpectralState};
use crate::{Error, Result};

/// Space realized by the Euclidean norm of the characteristic coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WaveSpace {
    /// `𝒴 = L² × H⁻¹`.
    #[default]
    Weak,
    /// `𝒴 = H¹ × L²`.
    Energy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WaveOptions {
    pub space: WaveSpace,
    /// Apply the 2/3 rule to the quadratic nonlinearity.
    pub dealias: bool,
}

#[derive(Debug, Clone)]
pub struct Wave {
    name: String,
    grid: Arc<ModeGrid>,
    a: DiagonalOperator,
    abs_a: DiagonalOperator,
    omega: Vec<f64>,
    scale: Vec<f64>,
    options: WaveOptions,
}

pub fn make_wave(n_phys: usize) -> Result<Wave> {
    Wave::new(n_phys, WaveOptions::default())
}

impl Wave {
    pub fn new(n_phys: usize, options: WaveOptions) -> Result<Self> {
        if n_phys < 8 {
            return Err(Error::InvalidGrid(alloc::format!(
                "wave problem needs n_phys >= 8, got {n_phys}"
            )));
        }
        let grid = Arc::new(ModeGrid::new(n_phys)?);
        let omega: Vec<f64> = grid
            .wavenumbers()
            .iter()
            .map(|&k| ((k * k + 1) as f64).sqrt())
            .collect();
        let scale = omega
            .iter()
            .map(|&w| match options.space {
                WaveSpace::Weak => w,
                WaveSpace::Energy => 1.0,
            })
            .collect();
        let n = grid.len();
        let a = DiagonalOperator::new(
            &grid,
            2,
            (0..2 * n)
                .map(|i| {
                    let sign = if i < n { 1.0 } else { -1.0 };
                    Complex64::new(0.0, sign * omega[i % n])
                })
                .collect(),
        )?;
        let abs_a = DiagonalOperator::new(
            &grid,
            2,
            (0..2 * n).map(|i| Complex64::new(omega[i % n], 0.0)).collect(),
        )?;
        Ok(Self {
            name: "wave".into(),
            grid,
            a,
            abs_a,
            omega,
            scale,
            options,
        })
    }

    pub fn options(&self) -> WaveOptions {
        self.options
    }

    /// `ω_k` at storage index `j`.
    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    /// Fourier coefficients of the displacement `u`.
    fn displacement(&self, state: &SpectralState) -> Vec<Complex64> {
        let (p, q) = (state.component(0), state.component(1));
        (0..self.grid.len())
            .map(|j| (p[j] - q[j]) * self.scale[j] / (Complex64::new(0.0, SQRT_2 * self.omega[j])))
            .collect()
    }

    /// Characteristic state of a pure velocity forcing `(0, f̂)`.
    fn forcing_state(&self, mut f_hat: Vec<Complex64>) -> Result<SpectralState> {
        if self.options.dealias {
            dealias(&self.grid, &mut f_hat);
        }
        let n = self.grid.len();
        let mut coeffs = Vec::with_capacity(2 * n);
        for _ in 0..2 {
            coeffs.extend(f_hat.iter().zip(&self.scale).map(|(f, s)| f / (SQRT_2 * s)));
        }
        SpectralState::from_coeffs(&self.grid, 2, coeffs)
    }

    fn physical_displacement(&self, state: &SpectralState) -> Vec<Complex64> {
        let mut u_hat = self.displacement(state);
        if self.options.dealias {
            dealias(&self.grid, &mut u_hat);
        }
        physical(&u_hat)
    }
}

impl Problem for Wave {
    fn name(&self) -> &str {
        &self.name
    }

    fn kind(&self) -> ProblemKind {
        ProblemKind::Wave
    }

    fn grid(&self) -> &Arc<ModeGrid> {
        &self.grid
    }

    fn n_comp(&self) -> usize {
        2
    }

    fn linear(&self) -> &DiagonalOperator {
        &self.a
    }

    fn abs_linear(&self) -> &DiagonalOperator {
        &self.abs_a
    }

    /// `B(U) = (0, 4u²)`, squared pointwise on the collocation grid.
    fn nonlinearity(&self, state: &SpectralState) -> Result<SpectralState> {
        self.check_state(state)?;
        let u = self.physical_displacement(state);
        let w = u.iter().map(|x| x * x * 4.0).collect();
        self.forcing_state(spectral(w))
    }

    /// `DB(U⁰)V = (0, 8u⁰u_V)`.
    fn derivative_action(&self, u0: &SpectralState, v: &SpectralState) -> Result<SpectralState> {
        self.check_state(u0)?;
        self.check_state(v)?;
        let a = self.physical_displacement(u0);
        let b = self.physical_displacement(v);
        let w = a.iter().zip(&b).map(|(x, y)| x * y * 8.0).collect();
        self.forcing_state(spectral(w))
    }

    /// `8 C R` with `C = √(π coth π)`: `‖u‖_∞ ≤ C‖u‖_{H¹}` in the energy space,
    /// `‖f‖_{H⁻¹} ≤ C‖f‖_{L¹}` in the weak space.
    fn lipschitz_bound(&self, radius: f64) -> Option<f64> {
        Some(8.0 * SOBOLEV_SUP_CONSTANT * radius)
    }

    fn from_fields(&self, fields: &[Vec<Complex64>]) -> Result<SpectralState> {
        let n = self.grid.len();
        if fields.len() != 2 || fields.iter().any(|f| f.len() != n) {
            return Err(Error::Dimension {
                expected: 2 * n,
                found: fields.iter().map(|f| f.len()).sum(),
            });
        }
        let (u, v) = (&fields[0], &fields[1]);
        let mut coeffs = Vec::with_capacity(2 * n);
        for sign in [1.0, -1.0] {
            coeffs.extend((0..n).map(|j| {
                let iwu = Complex64::new(0.0, sign * self.omega[j]) * u[j];
                (v[j] + iwu) / (SQRT_2 * self.scale[j])
            }));
        }
        SpectralState::from_coeffs(&self.grid, 2, coeffs)
    }

    fn to_fields(&self, state: &SpectralState) -> Result<Vec<Vec<Complex64>>> {
        self.check_state(state)?;
        let u = self.displacement(state);
        let (p, q) = (state.component(0), state.component(1));
        let v = (0..self.grid.len())
            .map(|j| (p[j] + q[j]) * self.scale[j] / SQRT_2)
            .collect();
        Ok(alloc::vec![u, v])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprk::{integrate, StageSolveConfig};
    use crate::tableau::exponential_euler;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cos_state(w: &Wave, amp: f64) -> SpectralState {
        let n = w.grid().len();
        let mut u = alloc::vec![c(0.0, 0.0); n];
        u[w.grid().index_of(1).unwrap()] = c(0.5 * amp, 0.0);
        u[w.grid().index_of(-1).unwrap()] = c(0.5 * amp, 0.0);
        w.from_fields(&[u, alloc::vec![c(0.0, 0.0); n]]).unwrap()
    }

    #[test]
    fn spectrum_is_plus_minus_i_omega() {
        let w = make_wave(16).unwrap();
        let ten = 10f64.sqrt();
        assert!((w.linear().eigenvalue(0, 3).unwrap() - c(0.0, ten)).norm() < 1e-15);
        assert!((w.linear().eigenvalue(1, 3).unwrap() - c(0.0, -ten)).norm() < 1e-15);
        assert!((w.abs_linear().eigenvalue(1, -3).unwrap() - c(ten, 0.0)).norm() < 1e-15);
        assert_eq!(w.linear().max_real_part(), 0.0);
    }

    #[test]
    fn zero_is_fixed_point() {
        let w = make_wave(16).unwrap();
        let z = SpectralState::zeros(w.grid(), 2);
        assert_eq!(w.nonlinearity(&z).unwrap().norm(), 0.0);
        assert_eq!(w.linear().apply(&z).unwrap().norm(), 0.0);
    }

    #[test]
    fn square_of_cosine_has_modes_zero_and_two() {
        for space in [WaveSpace::Weak, WaveSpace::Energy] {
            let w = Wave::new(16, WaveOptions { space, dealias: false }).unwrap();
            let b = w.nonlinearity(&cos_state(&w, 1.0)).unwrap();
            let fields = w.to_fields(&b).unwrap();
            // 4cos²x = 2 + 2cos2x lands in the velocity component
            for (j, &k) in w.grid().wavenumbers().iter().enumerate() {
                let want = match k {
                    0 => 2.0,
                    2 | -2 => 1.0,
                    _ => 0.0,
                };
                assert!((fields[1][j] - c(want, 0.0)).norm() < 1e-14, "k={k}");
                assert!(fields[0][j].norm() < 1e-14);
            }
        }
    }

    #[test]
    fn field_round_trip() {
        let w = make_wave(32).unwrap();
        let n = w.grid().len();
        let u: Vec<Complex64> = (0..n).map(|j| c(j as f64, -0.5 * j as f64)).collect();
        let v: Vec<Complex64> = (0..n).map(|j| c(1.0 / (1 + j) as f64, 0.25)).collect();
        let s = w.from_fields(&[u.clone(), v.clone()]).unwrap();
        let back = w.to_fields(&s).unwrap();
        for j in 0..n {
            assert!((back[0][j] - u[j]).norm() < 1e-12);
            assert!((back[1][j] - v[j]).norm() < 1e-12);
        }
    }

    #[test]
    fn energy_space_norm_is_h1_l2() {
        let w = Wave::new(16, WaveOptions { space: WaveSpace::Energy, dealias: false }).unwrap();
        let n = w.grid().len();
        let mut u = alloc::vec![c(0.0, 0.0); n];
        let mut v = alloc::vec![c(0.0, 0.0); n];
        u[w.grid().index_of(3).unwrap()] = c(0.2, 0.1);
        v[w.grid().index_of(-2).unwrap()] = c(0.0, 0.7);
        let s = w.from_fields(&[u, v]).unwrap();
        let want = (10.0 * 0.05 + 0.49f64).sqrt();
        assert!((s.norm() - want).abs() < 1e-14);
    }

    #[test]
    fn real_states_stay_real_through_exp_euler() {
        let w = make_wave(32).unwrap();
        let n = w.grid().len();
        let u: Vec<f64> = w.grid().points().map(|x| 0.3 * x.cos() + 0.1 * (3.0 * x).sin()).collect();
        let v: Vec<f64> = w.grid().points().map(|x| 0.2 * (2.0 * x).sin()).collect();
        let to_hat = |f: &[f64]| spectral(f.iter().map(|&x| c(x, 0.0)).collect());
        let s = w.from_fields(&[to_hat(&u), to_hat(&v)]).unwrap();
        let (out, _) = integrate(&w, &exponential_euler(), &s, 0.3, 3, &StageSolveConfig::default()).unwrap();
        let fields = w.to_fields(&out).unwrap();
        for f in &fields {
            let phys = physical(f);
            assert!(phys.iter().all(|z| z.im.abs() < 1e-12));
        }
        assert_eq!(fields[0].len(), n);
    }
}
