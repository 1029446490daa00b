use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Result};

/// Truncated set of Fourier wavenumbers on a periodic domain.
///
/// Wavenumbers are stored explicitly, in FFT order
/// `0, 1, …, n/2, −n/2+1, …, −1`, so storage index `j` of every state and
/// operator on this grid refers to `wavenumbers()[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeGrid {
    n_phys: usize,
    wavenumbers: Vec<i64>,
    domain_length: f64,
}

impl ModeGrid {
    pub fn new(n_phys: usize) -> Result<Self> {
        if n_phys < 2 || n_phys % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "n_phys must be even and at least 2, got {n_phys}"
            )));
        }
        let half = (n_phys / 2) as i64;
        let n = n_phys as i64;
        let wavenumbers = (0..n).map(|j| if j <= half { j } else { j - n }).collect();
        Ok(Self {
            n_phys,
            wavenumbers,
            domain_length: 2.0 * PI,
        })
    }

    #[inline]
    pub fn n_phys(&self) -> usize {
        self.n_phys
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.wavenumbers.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.wavenumbers.is_empty()
    }

    #[inline]
    pub fn wavenumbers(&self) -> &[i64] {
        &self.wavenumbers
    }

    #[inline]
    pub fn wavenumber(&self, index: usize) -> i64 {
        self.wavenumbers[index]
    }

    pub fn domain_length(&self) -> f64 {
        self.domain_length
    }

    /// Largest resolved wavenumber `n/2`.
    pub fn k_max(&self) -> i64 {
        (self.n_phys / 2) as i64
    }

    /// Storage index of wavenumber `k`, if it is on the grid.
    pub fn index_of(&self, k: i64) -> Option<usize> {
        let half = self.k_max();
        if k > half || k <= -half {
            return None;
        }
        let j = if k >= 0 { k } else { k + self.n_phys as i64 };
        Some(j as usize)
    }

    /// Physical collocation points `x_j = 2πj/n`.
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let dx = self.domain_length / self.n_phys as f64;
        (0..self.n_phys).map(move |j| j as f64 * dx)
    }
}
