//! `φ_k(M)v` for dense `M` through one exponential of an augmented matrix.
//!
//! For `Ã = [[M, W], [0, S]]`, with `S` the `p×p` upper shift and
//! `W = [w_p, …, w_1]`, the last column of the top-right block of `e^Ã` equals
//! `Σ_{k=1}^p φ_k(M) w_k`, and the top-left block is `e^M`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{PhiOrder, MAX_PHI_ORDER};
use crate::linalg::{expm, DenseMatrix};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Returns `φ_k(M) v` for each requested order, from a single exponential of
/// dimension `dim(M) + max k`.
pub fn phi_matvec(
    orders: &[PhiOrder],
    m: &DenseMatrix,
    v: &[Complex64],
) -> Result<BTreeMap<usize, Vec<Complex64>>> {
    let n = m.dim();
    if v.len() != n {
        return Err(Error::Dimension {
            expected: n,
            found: v.len(),
        });
    }
    check_finite(m, &[v])?;
    let p = orders.iter().map(|k| k.get()).max().unwrap_or(0);
    let tau = column_scale(&[v]);
    // single column block: column n+j-1 of the top rows holds φ_j(M)·(τv)
    let mut columns = vec![vec![ZERO; n]; p];
    if p > 0 {
        columns[0] = v.iter().map(|x| x * tau).collect();
    }
    let e = augmented_exponential(m, &columns, true)?;
    let size = n + p;
    let mut out = BTreeMap::new();
    for k in orders.iter().map(|k| k.get()) {
        let col: Vec<Complex64> = if k == 0 {
            let top_left = (0..n)
                .map(|i| {
                    e[i * size..i * size + n]
                        .iter()
                        .zip(v)
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect();
            top_left
        } else {
            (0..n).map(|i| e[i * size + n + k - 1] / tau).collect()
        };
        out.insert(k, col);
    }
    Ok(out)
}

/// `Σ_k φ_k(M) w_k` where `weights[k]` multiplies `φ_k` (empty slices skip the order).
pub fn phi_linear_combination(m: &DenseMatrix, weights: &[&[Complex64]]) -> Result<Vec<Complex64>> {
    let n = m.dim();
    if weights.len() > MAX_PHI_ORDER + 1 {
        return Err(super::order_error(weights.len() - 1));
    }
    for w in weights {
        if !w.is_empty() && w.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: w.len(),
            });
        }
    }
    check_finite(m, weights)?;
    let p = weights.len().saturating_sub(1);
    let present: Vec<&[Complex64]> = weights.iter().skip(1).copied().filter(|w| !w.is_empty()).collect();
    let tau = column_scale(&present);
    // column j (0-based) of W carries w_{p-j}
    let columns: Vec<Vec<Complex64>> = (0..p)
        .map(|j| {
            let w = weights[p - j];
            if w.is_empty() {
                vec![ZERO; n]
            } else {
                w.iter().map(|x| x * tau).collect()
            }
        })
        .collect();
    let need_exp = weights.first().is_some_and(|w| !w.is_empty());
    if p == 0 && !need_exp {
        return Ok(vec![ZERO; n]);
    }
    let e = augmented_exponential(m, &columns, false)?;
    let size = n + p;
    let mut out = vec![ZERO; n];
    if p > 0 {
        for (i, o) in out.iter_mut().enumerate() {
            *o = e[i * size + size - 1] / tau;
        }
    }
    if need_exp {
        let w0 = weights[0];
        for (i, o) in out.iter_mut().enumerate() {
            *o += e[i * size..i * size + n]
                .iter()
                .zip(w0)
                .map(|(a, b)| a * b)
                .sum::<Complex64>();
        }
    }
    Ok(out)
}

fn check_finite(m: &DenseMatrix, vs: &[&[Complex64]]) -> Result<()> {
    if !m.is_finite() || vs.iter().flat_map(|v| v.iter()).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite("phi_matvec input"));
    }
    Ok(())
}

/// Scales the vector columns to unit 1-norm so they do not inflate `‖Ã‖₁`.
fn column_scale(vs: &[&[Complex64]]) -> f64 {
    let norm = vs
        .iter()
        .map(|v| v.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    if norm > 0.0 {
        1.0 / norm
    } else {
        1.0
    }
}

/// Exponential of `[[M, W], [0, S]]`, returned row-major with side `n + p`.
///
/// With `first_column_only` the vector sits in the first column of the block
/// (`W = [v, 0, …]`), which puts `φ_j(M)v` in column `n + j − 1`.
fn augmented_exponential(
    m: &DenseMatrix,
    columns: &[Vec<Complex64>],
    first_column_only: bool,
) -> Result<Vec<Complex64>> {
    let n = m.dim();
    let p = columns.len();
    let size = n + p;
    let mut a = DenseMatrix::zeros(size)?;
    for i in 0..n {
        for (j, &z) in m.row(i).iter().enumerate() {
            a.set(i, j, z);
        }
    }
    for (j, col) in columns.iter().enumerate() {
        if first_column_only && j > 0 {
            break;
        }
        for (i, &z) in col.iter().enumerate() {
            a.set(i, n + j, z);
        }
    }
    for i in 0..p.saturating_sub(1) {
        a.set(n + i, n + i + 1, Complex64::new(1.0, 0.0));
    }
    let e = expm(&a)?;
    Ok(e.entries().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi::{inv_factorial, phi_scalar};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn orders(ks: &[usize]) -> Vec<PhiOrder> {
        ks.iter().map(|&k| PhiOrder::new(k).unwrap()).collect()
    }

    #[test]
    fn zero_matrix_gives_scaled_vector() {
        let m = DenseMatrix::zeros(3).unwrap();
        let v = [c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 0.0)];
        let out = phi_matvec(&orders(&[0, 1, 2, 3]), &m, &v).unwrap();
        for (k, col) in &out {
            for (x, y) in col.iter().zip(&v) {
                assert!((x - y * inv_factorial(*k)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn diagonal_matrix_matches_scalar_phi() {
        let d: Vec<Complex64> = (0..7).map(|i| c(-0.8 * i as f64, 2.5 * i as f64 - 6.0)).collect();
        let m = DenseMatrix::from_diagonal(&d).unwrap();
        let v: Vec<Complex64> = (0..7).map(|i| c(1.0 + i as f64, -(i as f64))).collect();
        let out = phi_matvec(&orders(&[0, 1, 2, 4]), &m, &v).unwrap();
        for (k, col) in &out {
            for i in 0..7 {
                let want = phi_scalar(PhiOrder::new(*k).unwrap(), d[i]) * v[i];
                assert!((col[i] - want).norm() <= 1e-11 * want.norm().max(1e-12), "k={k} i={i}");
            }
        }
    }

    #[test]
    fn linear_combination_matches_separate_products() {
        let m = DenseMatrix::from_fn(5, |i, j| {
            if i == j {
                c(-1.0 - i as f64, 0.5)
            } else {
                c(0.1 * (i as f64 - j as f64), 0.05 * (i + j) as f64)
            }
        })
        .unwrap();
        let w0: Vec<Complex64> = (0..5).map(|i| c(i as f64, 1.0)).collect();
        let w2: Vec<Complex64> = (0..5).map(|i| c(-1.0, 0.3 * i as f64)).collect();
        let combo = phi_linear_combination(&m, &[&w0, &[], &w2]).unwrap();
        let a = phi_matvec(&orders(&[0]), &m, &w0).unwrap();
        let b = phi_matvec(&orders(&[2]), &m, &w2).unwrap();
        for i in 0..5 {
            let want = a[&0][i] + b[&2][i];
            assert!((combo[i] - want).norm() < 1e-13);
        }
    }

    #[test]
    fn dimension_checks() {
        let m = DenseMatrix::zeros(3).unwrap();
        assert!(matches!(
            phi_matvec(&orders(&[1]), &m, &[c(0.0, 0.0); 2]),
            Err(Error::Dimension { .. })
        ));
        assert!(matches!(
            phi_matvec(&orders(&[1]), &m, &[c(f64::NAN, 0.0); 3]),
            Err(Error::NonFinite(_))
        ));
    }
}
