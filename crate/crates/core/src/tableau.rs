//! Coefficient tableaus of exponential one-step methods.
//!
//! Every coefficient function is a finite combination `Σ γ_j φ_{k_j}(λ_j z)`
//! with `λ_j ≥ 0`. Such functions are analytic and bounded on the closed left
//! half-plane (`|φ_k(z)| ≤ 1/k!` there), and they can be evaluated both on
//! diagonal operators and, through the augmented exponential, on dense
//! Jacobians.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::phi::{inv_factorial, phi_scalar, PhiOrder, SpectrumPolicy};
use crate::spectral::DiagonalOperator;
use crate::{Error, Result};

/// One term `weight · φ_order(scale · z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiTerm {
    pub weight: f64,
    pub order: PhiOrder,
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PhiCombination {
    terms: Vec<PhiTerm>,
}

impl PhiCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The constant function `value` (written as `value · φ₀(0·z)`).
    pub fn constant(value: f64) -> Self {
        Self::zero().with(value, 0, 0.0)
    }

    pub fn phi(k: usize) -> Self {
        Self::zero().with(1.0, k, 1.0)
    }

    /// Adds `weight · φ_k(scale · z)`. Panics on `k > 8` or a negative scale;
    /// use [`PhiCombination::try_with`] for untrusted input.
    pub fn with(self, weight: f64, k: usize, scale: f64) -> Self {
        self.try_with(weight, k, scale).expect("invalid phi term")
    }

    pub fn try_with(mut self, weight: f64, k: usize, scale: f64) -> Result<Self> {
        let order = PhiOrder::new(k)?;
        if !(scale >= 0.0 && scale.is_finite() && weight.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "phi term needs finite weight and scale >= 0 (weight {weight}, scale {scale})"
            )));
        }
        if weight != 0.0 {
            self.terms.push(PhiTerm { weight, order, scale });
        }
        Ok(self)
    }

    pub fn terms(&self) -> &[PhiTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_order(&self) -> usize {
        self.terms.iter().map(|t| t.order.get()).max().unwrap_or(0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|t| phi_scalar(t.order, z * t.scale) * t.weight)
            .sum()
    }

    /// Upper bound of `|f(z)|` over `Re z ≤ 0`.
    pub fn sup_bound(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.weight.abs() * inv_factorial(t.order.get()))
            .sum()
    }

    /// Functional calculus on a diagonal operator such as `hA`.
    pub fn eval_diag(&self, op: &DiagonalOperator, policy: SpectrumPolicy) -> Result<DiagonalOperator> {
        crate::phi::check_spectrum(op, policy)?;
        op.try_map(|z| {
            let v = self.eval(z);
            if v.re.is_finite() && v.im.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFinite("coefficient function"))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialTableau {
    name: String,
    nodes: Vec<f64>,
    a: Vec<PhiCombination>,
    b: Vec<PhiCombination>,
    order: u32,
    explicit: bool,
}

impl ExponentialTableau {
    /// `a` is row-major `s × s`, `b` and `nodes` have length `s`.
    pub fn new(
        name: impl Into<String>,
        nodes: Vec<f64>,
        a: Vec<PhiCombination>,
        b: Vec<PhiCombination>,
        order: u32,
    ) -> Result<Self> {
        let s = nodes.len();
        if s == 0 {
            return Err(Error::InvalidArgument("tableau needs at least one stage".into()));
        }
        if a.len() != s * s {
            return Err(Error::Dimension {
                expected: s * s,
                found: a.len(),
            });
        }
        if b.len() != s {
            return Err(Error::Dimension {
                expected: s,
                found: b.len(),
            });
        }
        if nodes.iter().any(|c| !(0.0..=1.0).contains(c)) || nodes.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument(format!(
                "nodes must be nondecreasing in [0, 1], got {nodes:?}"
            )));
        }
        if order == 0 {
            return Err(Error::InvalidArgument("classical order must be positive".into()));
        }
        let explicit = (0..s).all(|i| (i..s).all(|j| a[i * s + j].is_zero()));
        Ok(Self {
            name: name.into(),
            nodes,
            a,
            b,
            order,
            explicit,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn stages(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn a(&self, i: usize, j: usize) -> &PhiCombination {
        &self.a[i * self.stages() + j]
    }

    pub fn b(&self, i: usize) -> &PhiCombination {
        &self.b[i]
    }

    pub fn is_explicit(&self) -> bool {
        self.explicit
    }

    /// Classical order `p`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// `M_a`: bound of `‖a(z)‖_∞` (max row sum) over the closed left half-plane.
    pub fn a_bound(&self) -> f64 {
        let s = self.stages();
        (0..s)
            .map(|i| (0..s).map(|j| self.a(i, j).sup_bound()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `M_b`: bound of `‖b(z)‖₁`.
    pub fn b_bound(&self) -> f64 {
        self.b.iter().map(|f| f.sup_bound()).sum()
    }

    pub fn max_phi_order(&self) -> usize {
        self.a
            .iter()
            .chain(&self.b)
            .map(|f| f.max_order())
            .max()
            .unwrap_or(0)
    }
}

/// `U¹ = e^{hA}U⁰ + hφ₁(hA)B(U⁰)`.
pub fn exponential_euler() -> ExponentialTableau {
    ExponentialTableau::new(
        "exp-euler",
        vec![0.0],
        vec![PhiCombination::zero()],
        vec![PhiCombination::phi(1)],
        1,
    )
    .expect("valid tableau")
}

/// `U¹ = e^{hA}U⁰ + h e^{hA}B(U⁰)`.
pub fn euler_larson() -> ExponentialTableau {
    ExponentialTableau::new(
        "euler-larson",
        vec![0.0],
        vec![PhiCombination::zero()],
        vec![PhiCombination::phi(0)],
        1,
    )
    .expect("valid tableau")
}

/// `U¹ = e^{hA}U⁰ + hB(U¹)`; the single stage equals `U¹`.
pub fn implicit_lawson_euler() -> ExponentialTableau {
    ExponentialTableau::new(
        "implicit-lawson-euler",
        vec![1.0],
        vec![PhiCombination::constant(1.0)],
        vec![PhiCombination::constant(1.0)],
        1,
    )
    .expect("valid tableau")
}

/// Fourth-order ETDRK4 of Cox and Matthews, written in stage form.
///
/// `a₄₁ = ½φ₁(z/2)(e^{z/2} − 1)` is rewritten as `φ₁(z) − φ₁(z/2)`.
pub fn cox_matthews_4() -> ExponentialTableau {
    let z = PhiCombination::zero;
    let half_phi1 = || PhiCombination::zero().with(0.5, 1, 0.5);
    let a = vec![
        z(),
        z(),
        z(),
        z(),
        half_phi1(),
        z(),
        z(),
        z(),
        z(),
        half_phi1(),
        z(),
        z(),
        PhiCombination::zero().with(1.0, 1, 1.0).with(-1.0, 1, 0.5),
        z(),
        PhiCombination::zero().with(1.0, 1, 0.5),
        z(),
    ];
    let middle = || PhiCombination::zero().with(2.0, 2, 1.0).with(-4.0, 3, 1.0);
    let b = vec![
        PhiCombination::zero()
            .with(1.0, 1, 1.0)
            .with(-3.0, 2, 1.0)
            .with(4.0, 3, 1.0),
        middle(),
        middle(),
        PhiCombination::zero().with(-1.0, 2, 1.0).with(4.0, 3, 1.0),
    ];
    ExponentialTableau::new("cox-matthews-4", vec![0.0, 0.5, 0.5, 1.0], a, b, 4).expect("valid tableau")
}

/// Built-in exponential Runge-Kutta tableaus by name.
pub fn builtin_tableaus() -> BTreeMap<String, ExponentialTableau> {
    [exponential_euler(), euler_larson(), implicit_lawson_euler(), cox_matthews_4()]
        .into_iter()
        .map(|t| (t.name().to_string(), t))
        .collect()
}

/// Looks a built-in tableau up by name; the error lists the available names.
pub fn tableau_by_name(name: &str) -> Result<ExponentialTableau> {
    let mut all = builtin_tableaus();
    all.remove(name).ok_or_else(|| {
        let names: Vec<String> = builtin_tableaus().into_keys().collect();
        Error::InvalidArgument(format!(
            "unknown method '{name}'; available: {}",
            names.join(", ")
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exp_euler_weight_is_phi1() {
        let t = exponential_euler();
        for z in [c(-1.0, 0.5), c(0.0, 3.0), c(-1e-6, 0.0)] {
            assert_eq!(t.b(0).eval(z), phi_scalar(PhiOrder::new(1).unwrap(), z));
        }
        assert!(t.is_explicit());
        assert_eq!(t.nodes(), &[0.0]);
        assert!(t.a(0, 0).is_zero());
    }

    #[test]
    fn implicit_lawson_is_implicit_with_unit_coefficients() {
        let t = implicit_lawson_euler();
        assert!(!t.is_explicit());
        assert_eq!(t.a(0, 0).eval(c(-3.0, 2.0)), c(1.0, 0.0));
        assert_eq!(t.b(0).eval(c(-3.0, 2.0)), c(1.0, 0.0));
        assert_eq!(t.a_bound(), 1.0);
    }

    #[test]
    fn euler_larson_weight_is_exponential() {
        let z = c(-0.4, 1.1);
        assert_eq!(euler_larson().b(0).eval(z), z.exp());
    }

    #[test]
    fn etdrk4_a41_rewrite_matches_product_form() {
        let t = cox_matthews_4();
        for z in [c(-2.0, 1.0), c(-0.01, 0.3), c(0.0, 20.0)] {
            let half = z * 0.5;
            let want = phi_scalar(PhiOrder::new(1).unwrap(), half) * ((half).exp() - 1.0) * 0.5;
            assert!((t.a(3, 0).eval(z) - want).norm() < 1e-13);
        }
        assert!(t.is_explicit());
        assert_eq!(t.order(), 4);
    }

    #[test]
    fn weights_sum_to_phi1_for_consistency() {
        // Σ b_i = φ₁ for every exponential RK method of order >= 1
        for t in [exponential_euler(), cox_matthews_4()] {
            let z = c(-0.7, 0.4);
            let sum: Complex64 = (0..t.stages()).map(|i| t.b(i).eval(z)).sum();
            assert!((sum - phi_scalar(PhiOrder::new(1).unwrap(), z)).norm() < 1e-14, "{}", t.name());
        }
    }

    #[test]
    fn invalid_tableaus_rejected() {
        let f = PhiCombination::zero;
        assert!(ExponentialTableau::new("x", vec![0.5, 0.2], vec![f(), f(), f(), f()], vec![f(), f()], 1).is_err());
        assert!(ExponentialTableau::new("x", vec![1.5], vec![f()], vec![f()], 1).is_err());
        assert!(ExponentialTableau::new("x", vec![0.0], vec![f(), f()], vec![f()], 1).is_err());
        assert!(PhiCombination::zero().try_with(1.0, 2, -1.0).is_err());
        assert!(PhiCombination::zero().try_with(1.0, 9, 1.0).is_err());
    }

    #[test]
    fn unknown_name_lists_available() {
        let err = tableau_by_name("rk4").unwrap_err().to_string();
        assert!(err.contains("exp-euler") && err.contains("cox-matthews-4"), "{err}");
    }
}
