//! Defocusing cubic Schrödinger equation `u_t = i u_xx − i|u|²u`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{dealias, physical, spectral, Problem, ProblemKind};
use crate::spectral::{DiagonalOperator, ModeGrid, SpectralState};
use crate::Result;

const MINUS_I: Complex64 = Complex64::new(0.0, -1.0);

#[derive(Debug, Clone)]
pub struct Nls {
    name: String,
    grid: Arc<ModeGrid>,
    a: DiagonalOperator,
    abs_a: DiagonalOperator,
    dealias: bool,
}

pub fn make_nls(n_phys: usize) -> Result<Nls> {
    Nls::new(n_phys, false)
}

impl Nls {
    pub fn new(n_phys: usize, dealias: bool) -> Result<Self> {
        let grid = Arc::new(ModeGrid::new(n_phys)?);
        let a = DiagonalOperator::from_fn(&grid, 1, |_, k| Complex64::new(0.0, -((k * k) as f64)))?;
        let abs_a = DiagonalOperator::from_fn(&grid, 1, |_, k| Complex64::new((k * k) as f64, 0.0))?;
        Ok(Self {
            name: "nls".into(),
            grid,
            a,
            abs_a,
            dealias,
        })
    }

    fn samples(&self, state: &SpectralState) -> Vec<Complex64> {
        let mut hat = state.component(0).to_vec();
        if self.dealias {
            dealias(&self.grid, &mut hat);
        }
        physical(&hat)
    }

    fn finish(&self, w: Vec<Complex64>) -> Result<SpectralState> {
        let mut hat = spectral(w);
        if self.dealias {
            dealias(&self.grid, &mut hat);
        }
        SpectralState::from_coeffs(&self.grid, 1, hat)
    }

    /// Exact solution from the plane wave `c e^{ix}`: `c e^{ix} e^{−i(1+|c|²)t}`.
    pub fn plane_wave(&self, amplitude: Complex64, t: f64) -> Result<SpectralState> {
        let phase = Complex64::new(0.0, -(1.0 + amplitude.norm_sqr()) * t).exp();
        SpectralState::single_mode(&self.grid, 1, 0, 1, amplitude * phase)
    }
}

impl Problem for Nls {
    fn name(&self) -> &str {
        &self.name
    }

    fn kind(&self) -> ProblemKind {
        ProblemKind::Nls
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

    fn nonlinearity(&self, state: &SpectralState) -> Result<SpectralState> {
        self.check_state(state)?;
        let u = self.samples(state);
        self.finish(u.iter().map(|x| MINUS_I * x.norm_sqr() * x).collect())
    }

    /// `−i(2|u⁰|²v + (u⁰)² v̄)`; real-linear only.
    fn derivative_action(&self, u0: &SpectralState, v: &SpectralState) -> Result<SpectralState> {
        self.check_state(u0)?;
        self.check_state(v)?;
        let a = self.samples(u0);
        let b = self.samples(v);
        self.finish(
            a.iter()
                .zip(&b)
                .map(|(x, y)| MINUS_I * (y * 2.0 * x.norm_sqr() + x * x * y.conj()))
                .collect(),
        )
    }

    fn derivative_is_complex_linear(&self) -> bool {
        false
    }

    fn symbol_degree(&self) -> f64 {
        2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_symbol_and_zero_nonlinearity() {
        let p = make_nls(16).unwrap();
        assert_eq!(p.linear().eigenvalue(0, 3).unwrap(), Complex64::new(0.0, -9.0));
        assert_eq!(p.abs_linear().eigenvalue(0, -3).unwrap(), Complex64::new(9.0, 0.0));
        let z = SpectralState::zeros(p.grid(), 1);
        assert_eq!(p.nonlinearity(&z).unwrap().norm(), 0.0);
    }

    #[test]
    fn plane_wave_satisfies_the_equation() {
        // d/dt of the ansatz equals A u + B(u) on the single mode
        let p = make_nls(16).unwrap();
        let amp = Complex64::new(0.6, -0.3);
        let u = p.plane_wave(amp, 0.0).unwrap();
        let rhs = p.linear().apply(&u).unwrap().add(&p.nonlinearity(&u).unwrap()).unwrap();
        let dudt = u.scale(Complex64::new(0.0, -(1.0 + amp.norm_sqr())));
        assert!(rhs.distance(&dudt).unwrap() < 1e-14);
    }
}
