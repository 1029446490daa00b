//! Dense complex matrices and the scaling-and-squaring matrix exponential.
//!
//! Only what the matrix `φ_k` route needs: products, a partial-pivoting LU
//! solve and `expm` with a degree-adaptive Padé core (Higham 2005 thresholds).

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::{Error, Result};

/// Largest dimension accepted by the dense path.
pub const MAX_DENSE_DIM: usize = 4096;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            entries: vec![ZERO; dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.entries[i * dim + i] = ONE;
        }
        Ok(m)
    }

    pub fn from_row_major(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("dense matrix entries"));
        }
        Ok(Self { dim, entries })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        check_dim(dim)?;
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self::from_row_major(dim, entries)
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * diag.len() + i] = d;
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.entries[i * self.dim + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        let n = self.dim;
        let mut col = vec![0.0; n];
        for row in self.entries.chunks_exact(n) {
            for (acc, z) in col.iter_mut().zip(row) {
                *acc += z.norm();
            }
        }
        col.into_iter().fold(0.0, f64::max)
    }

    pub fn scale(&self, alpha: Complex64) -> DenseMatrix {
        DenseMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|z| alpha * z).collect(),
        }
    }

    pub fn matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(self
            .entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if other.dim != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: other.dim,
            });
        }
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for (out_row, a_row) in out.chunks_exact_mut(n).zip(self.entries.chunks_exact(n)) {
            for (k, &a) in a_row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let b_row = &other.entries[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(DenseMatrix { dim: n, entries: out })
    }

    /// `Σ c_j M_j + identity_coeff · I`; all terms share one dimension.
    fn linear_combination(terms: &[(&DenseMatrix, f64)], identity_coeff: f64) -> DenseMatrix {
        let n = terms[0].0.dim;
        let mut entries = vec![ZERO; n * n];
        for (m, c) in terms {
            for (e, z) in entries.iter_mut().zip(&m.entries) {
                *e += z * *c;
            }
        }
        for i in 0..n {
            entries[i * n + i] += identity_coeff;
        }
        DenseMatrix { dim: n, entries }
    }

    /// Solves `self · X = rhs` by LU with partial pivoting.
    pub fn solve(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.dim;
        if rhs.dim != n {
            return Err(Error::Dimension {
                expected: n,
                found: rhs.dim,
            });
        }
        let mut lu = self.entries.clone();
        let mut x = rhs.entries.clone();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&a, &b| {
                    lu[a * n + col]
                        .norm()
                        .partial_cmp(&lu[b * n + col].norm())
                        .unwrap_or(core::cmp::Ordering::Equal)
                })
                .unwrap_or(col);
            let p = lu[pivot * n + col];
            if p.norm() == 0.0 || !p.norm().is_finite() {
                return Err(Error::Singular("dense solve"));
            }
            if pivot != col {
                for j in 0..n {
                    lu.swap(pivot * n + j, col * n + j);
                    x.swap(pivot * n + j, col * n + j);
                }
            }
            let inv = ONE / p;
            for row in col + 1..n {
                let factor = lu[row * n + col] * inv;
                if factor == ZERO {
                    continue;
                }
                lu[row * n + col] = ZERO;
                for j in col + 1..n {
                    let t = lu[col * n + j];
                    lu[row * n + j] -= factor * t;
                }
                for j in 0..n {
                    let t = x[col * n + j];
                    x[row * n + j] -= factor * t;
                }
            }
        }
        for col in (0..n).rev() {
            let inv = ONE / lu[col * n + col];
            for j in 0..n {
                x[col * n + j] *= inv;
            }
            for row in 0..col {
                let factor = lu[row * n + col];
                if factor == ZERO {
                    continue;
                }
                for j in 0..n {
                    let t = x[col * n + j];
                    x[row * n + j] -= factor * t;
                }
            }
        }
        let out = DenseMatrix { dim: n, entries: x };
        if !out.is_finite() {
            return Err(Error::NonFinite("dense solve"));
        }
        Ok(out)
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidArgument("matrix dimension must be positive".into()));
    }
    if dim > MAX_DENSE_DIM {
        return Err(Error::DimensionOverflow {
            dim,
            max: MAX_DENSE_DIM,
        });
    }
    Ok(())
}

const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.539_398_330_063_23e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068e0;
const THETA_13: f64 = 5.371920351148152e0;

const PADE_3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE_5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE_7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const PADE_9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Matrix exponential by scaling and squaring.
///
/// The Padé degree is picked from the 1-norm; above `θ₁₃` the matrix is
/// scaled by `2^{-s}` with `s = ⌈log₂(‖M‖₁/θ₁₃)⌉` and squared back.
pub fn expm(m: &DenseMatrix) -> Result<DenseMatrix> {
    if !m.is_finite() {
        return Err(Error::NonFinite("expm input"));
    }
    let n = m.dim;
    let norm = m.norm1();
    if norm == 0.0 {
        return DenseMatrix::identity(n);
    }
    for (theta, coeffs) in [
        (THETA_3, &PADE_3[..]),
        (THETA_5, &PADE_5[..]),
        (THETA_7, &PADE_7[..]),
        (THETA_9, &PADE_9[..]),
    ] {
        if norm <= theta {
            let (u, v) = pade_low(m, coeffs)?;
            return pade_solve(&u, &v);
        }
    }
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = m.scale(Complex64::new(2f64.powi(-s), 0.0));
    let (u, v) = pade_13(&scaled)?;
    let mut e = pade_solve(&u, &v)?;
    for _ in 0..s {
        e = e.matmul(&e)?;
    }
    if !e.is_finite() {
        return Err(Error::NonFinite("expm (overflow while squaring)"));
    }
    Ok(e)
}

fn pade_low(a: &DenseMatrix, b: &[f64]) -> Result<(DenseMatrix, DenseMatrix)> {
    let degree = b.len() - 1;
    let a2 = a.matmul(a)?;
    // even powers A^2, A^4, ... up to A^{degree-1}
    let mut powers = vec![a2.clone()];
    while 2 * (powers.len() + 1) < degree + 1 {
        let next = powers.last().unwrap().matmul(&a2)?;
        powers.push(next);
    }
    let odd: Vec<(&DenseMatrix, f64)> = powers
        .iter()
        .enumerate()
        .map(|(i, p)| (p, b[2 * i + 3]))
        .collect();
    let even: Vec<(&DenseMatrix, f64)> = powers
        .iter()
        .enumerate()
        .map(|(i, p)| (p, b[2 * i + 2]))
        .collect();
    let u = a.matmul(&DenseMatrix::linear_combination(&odd, b[1]))?;
    let v = DenseMatrix::linear_combination(&even, b[0]);
    Ok((u, v))
}

fn pade_13(a: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    let b = &PADE_13;
    let a2 = a.matmul(a)?;
    let a4 = a2.matmul(&a2)?;
    let a6 = a4.matmul(&a2)?;
    let inner_u = a6.matmul(&DenseMatrix::linear_combination(
        &[(&a6, b[13]), (&a4, b[11]), (&a2, b[9])],
        0.0,
    ))?;
    let u = a.matmul(&DenseMatrix::linear_combination(
        &[(&inner_u, 1.0), (&a6, b[7]), (&a4, b[5]), (&a2, b[3])],
        b[1],
    ))?;
    let inner_v = a6.matmul(&DenseMatrix::linear_combination(
        &[(&a6, b[12]), (&a4, b[10]), (&a2, b[8])],
        0.0,
    ))?;
    let v = DenseMatrix::linear_combination(
        &[(&inner_v, 1.0), (&a6, b[6]), (&a4, b[4]), (&a2, b[2])],
        b[0],
    );
    Ok((u, v))
}

fn pade_solve(u: &DenseMatrix, v: &DenseMatrix) -> Result<DenseMatrix> {
    let p = DenseMatrix::linear_combination(&[(v, 1.0), (u, 1.0)], 0.0);
    let q = DenseMatrix::linear_combination(&[(v, 1.0), (u, -1.0)], 0.0);
    q.solve(&p)
}
