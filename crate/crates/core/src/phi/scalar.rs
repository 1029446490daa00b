use num_complex::Complex64;

use super::{inv_factorial, PhiOrder};
use crate::spectral::DiagonalOperator;
use crate::{Error, Result};

/// What to do with eigenvalues in the open right half-plane, where the
/// coefficient bounds of an exponential method no longer hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpectrumPolicy {
    #[default]
    Reject,
    Warn,
    Allow,
}

/// Below this modulus the Taylor series is summed for every order; beyond it
/// the series is still used for orders `k` with `|z| < k`, where the upward
/// recurrence would cancel.
const TAYLOR_RADIUS: f64 = 0.5;
const MIN_TAYLOR_TERMS: usize = 20;
const MAX_TAYLOR_TERMS: usize = 200;

pub fn phi_scalar(k: PhiOrder, z: Complex64) -> Complex64 {
    let k = k.get();
    if k == 0 {
        return z.exp();
    }
    let r = z.norm();
    if r < TAYLOR_RADIUS || r < k as f64 {
        taylor(k, z)
    } else {
        upward(k, z)
    }
}

/// `Σ_j z^j/(j+k)!`.
fn taylor(k: usize, z: Complex64) -> Complex64 {
    let mut term = Complex64::new(inv_factorial(k), 0.0);
    let mut sum = term;
    for j in 1..MAX_TAYLOR_TERMS {
        term = term * z / (j + k) as f64;
        sum += term;
        if j >= MIN_TAYLOR_TERMS && term.norm() <= f64::EPSILON * 1e-3 * sum.norm() {
            break;
        }
    }
    sum
}

fn upward(k: usize, z: Complex64) -> Complex64 {
    let mut phi = z.exp();
    for j in 0..k {
        phi = (phi - inv_factorial(j)) / z;
    }
    phi
}

/// `φ_k` of a diagonal operator (typically `hA`), eigenvalue by eigenvalue.
pub fn phi_diag(k: PhiOrder, op: &DiagonalOperator, policy: SpectrumPolicy) -> Result<DiagonalOperator> {
    check_spectrum(op, policy)?;
    op.try_map(|z| {
        let v = phi_scalar(k, z);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite("phi_diag"))
        }
    })
}

pub(crate) fn check_spectrum(op: &DiagonalOperator, policy: SpectrumPolicy) -> Result<()> {
    let re = op.max_real_part();
    if re > 0.0 {
        match policy {
            SpectrumPolicy::Reject => return Err(Error::PositiveSpectrum { re }),
            SpectrumPolicy::Warn => {
                log::warn!("operator spectrum reaches Re z = {re:e} > 0; coefficient bounds void")
            }
            SpectrumPolicy::Allow => {}
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::ModeGrid;
    use alloc::sync::Arc;
    use core::f64::consts::{E, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn order(k: usize) -> PhiOrder {
        PhiOrder::new(k).unwrap()
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn phi0_is_exponential() {
        let z = c(-1.0, 2.0);
        assert_eq!(phi_scalar(order(0), z), z.exp());
    }

    #[test]
    fn phi1_closed_form() {
        assert!(rel(phi_scalar(order(1), c(1.0, 0.0)), c(E - 1.0, 0.0)) < 1e-15);
        let z = c(-3.0, 4.0);
        assert!(rel(phi_scalar(order(1), z), (z.exp() - 1.0) / z) < 1e-14);
    }

    #[test]
    fn values_at_origin_are_inverse_factorials() {
        let mut fact = 1.0;
        for k in 0..=8 {
            if k > 0 {
                fact *= k as f64;
            }
            assert_eq!(phi_scalar(order(k), c(0.0, 0.0)), c(1.0 / fact, 0.0));
        }
    }

    #[test]
    fn order_above_eight_rejected() {
        assert_eq!(PhiOrder::new(9), Err(Error::UnsupportedOrder(9)));
    }

    #[test]
    fn recurrence_holds_in_both_forms() {
        let points = [
            c(-1e-4, 3e-5),
            c(2e-3, -1e-3),
            c(-0.3, 0.2),
            c(-0.7, 0.1),
            c(-2.0, 5.0),
            c(-12.0, -30.0),
            c(0.0, 7.5),
            c(-60.0, 0.0),
        ];
        for z in points {
            for k in 0..8 {
                let pk = phi_scalar(order(k), z);
                let pk1 = phi_scalar(order(k + 1), z);
                if z.norm() >= 1e-2 {
                    let rhs = (pk - inv_factorial(k)) / z;
                    assert!(rel(pk1, rhs) < 1e-11, "k={k} z={z} {pk1} vs {rhs}");
                } else {
                    let lhs = z * pk1 + inv_factorial(k);
                    assert!(rel(lhs, pk) < 1e-13, "k={k} z={z}");
                }
            }
        }
    }

    #[test]
    fn bounded_by_value_at_origin_on_negative_axis() {
        for k in 0..=8 {
            for i in 0..200 {
                let x = -(i as f64) * 0.37;
                assert!(phi_scalar(order(k), c(x, 0.0)).norm() <= inv_factorial(k) * (1.0 + 1e-15));
            }
        }
    }

    #[test]
    fn diag_of_zero_operator() {
        let g = Arc::new(ModeGrid::new(8).unwrap());
        let zero = DiagonalOperator::constant(&g, 2, c(0.0, 0.0));
        for k in 0..=4 {
            let d = phi_diag(order(k), &zero, SpectrumPolicy::Reject).unwrap();
            assert!(d.eigenvalues().iter().all(|&e| e == c(inv_factorial(k), 0.0)));
        }
    }

    #[test]
    fn diag_at_i_pi() {
        let g = Arc::new(ModeGrid::new(8).unwrap());
        let op = DiagonalOperator::constant(&g, 1, c(0.0, PI));
        let d = phi_diag(order(1), &op, SpectrumPolicy::Reject).unwrap();
        assert!((d.eigenvalues()[0] - c(0.0, 2.0 / PI)).norm() < 1e-15);
    }

    #[test]
    fn diag_matches_scalar_loop() {
        let g = Arc::new(ModeGrid::new(32).unwrap());
        let op = DiagonalOperator::from_fn(&g, 2, |comp, k| {
            c(-((k * k) as f64) * 0.01 - comp as f64, 0.9 * k as f64)
        })
        .unwrap();
        for k in 0..=5 {
            let d = phi_diag(order(k), &op, SpectrumPolicy::Reject).unwrap();
            for (out, z) in d.eigenvalues().iter().zip(op.eigenvalues()) {
                assert_eq!(*out, phi_scalar(order(k), *z));
            }
        }
    }

    #[test]
    fn positive_spectrum_policy() {
        let g = Arc::new(ModeGrid::new(8).unwrap());
        let op = DiagonalOperator::constant(&g, 1, c(0.5, 1.0));
        assert!(matches!(
            phi_diag(order(1), &op, SpectrumPolicy::Reject),
            Err(Error::PositiveSpectrum { .. })
        ));
        assert!(phi_diag(order(1), &op, SpectrumPolicy::Allow).is_ok());
        assert!(phi_diag(order(1), &op, SpectrumPolicy::Warn).is_ok());
    }
}
