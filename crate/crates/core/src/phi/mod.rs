//! The entire functions `φ₀(z) = e^z`,
//! `φ_k(z) = ∫₀¹ e^{(1−s)z} s^{k−1}/(k−1)! ds` for `k ≥ 1`.
//!
//! They satisfy `φ_k(0) = 1/k!` and `φ_{k+1}(z) = (φ_k(z) − 1/k!)/z`.

mod matrix;
mod scalar;

pub use matrix::{phi_linear_combination, phi_matvec};
pub use scalar::{phi_diag, phi_scalar, SpectrumPolicy};

pub(crate) use scalar::check_spectrum;

use alloc::format;

use crate::{Error, Result};

/// Highest supported order.
pub const MAX_PHI_ORDER: usize = 8;

/// Order `k` of a `φ_k` function, `0 ≤ k ≤ 8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhiOrder(u8);

impl PhiOrder {
    pub fn new(k: usize) -> Result<Self> {
        if k > MAX_PHI_ORDER {
            return Err(Error::UnsupportedOrder(k));
        }
        Ok(Self(k as u8))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0 as usize
    }
}

impl TryFrom<usize> for PhiOrder {
    type Error = Error;
    fn try_from(k: usize) -> Result<Self> {
        Self::new(k)
    }
}

impl core::fmt::Display for PhiOrder {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "phi_{}", self.0)
    }
}

/// `1/n!` for `n` up to 170.
pub(crate) fn inv_factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, j| acc / j as f64)
}

pub(crate) fn order_error(k: usize) -> Error {
    Error::InvalidArgument(format!("phi order {k} exceeds {MAX_PHI_ORDER}"))
}
