//! Closed-form analytic functions with exact derivatives of any supported order.
//!
//! Near the unit circle a truncated series is only as good as its tail, and the
//! quantities this crate measures live exactly there. [`FunctionSpec`] keeps the
//! symbol functions and test functions in closed form so they can be evaluated
//! at `|z| = 0.995` without truncation error, and expands them to an
//! [`AnalyticFn`] only when coefficient arithmetic is needed.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::taylor::{check_in_disk, falling_factorial, AnalyticFn, MAX_TAIL_HINT};

/// Highest derivative order served by [`FunctionSpec::eval_deriv`].
pub const MAX_DERIVATIVE_ORDER: usize = 12;

/// A closed-form function on the unit disk.
///
/// Kernel parameters `w` may sit on the unit circle itself (`|w| = 1`): the
/// kernel is then still analytic in the open disk, with its singularity on the
/// boundary. This is how symbols such as `1/(1-z)^s` are expressed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    /// `Σ c_k z^k`.
    Poly { coeffs: Vec<Complex64> },
    /// `z^i (1 - conj(w) z)^(-s)`.
    BinomialPower { w: Complex64, s: f64, i: usize },
    /// `log(2 / (1 - conj(w) z))`.
    LogKernel { w: Complex64 },
    /// `log(2 / (1 - conj(w) z))^2`.
    LogKernelSq { w: Complex64 },
    Scaled { c: Complex64, inner: Box<FunctionSpec> },
    Sum { terms: Vec<FunctionSpec> },
    DerivativeOf { inner: Box<FunctionSpec>, order: usize },
}

impl FunctionSpec {
    pub fn constant(c: Complex64) -> Self {
        FunctionSpec::Poly { coeffs: vec![c] }
    }

    pub fn zero() -> Self {
        Self::constant(Complex64::new(0.0, 0.0))
    }

    pub fn poly(coeffs: Vec<Complex64>) -> Self {
        FunctionSpec::Poly { coeffs }
    }

    pub fn poly_real(coeffs: &[f64]) -> Self {
        Self::poly(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn binomial_power(w: Complex64, s: f64, i: usize) -> Result<Self> {
        let spec = FunctionSpec::BinomialPower { w, s, i };
        spec.validate()?;
        Ok(spec)
    }

    /// `(1 - z)^(-s)`, singular at `z = 1`.
    pub fn boundary_pole(s: f64) -> Result<Self> {
        Self::binomial_power(Complex64::new(1.0, 0.0), s, 0)
    }

    pub fn log_kernel(w: Complex64) -> Result<Self> {
        let spec = FunctionSpec::LogKernel { w };
        spec.validate()?;
        Ok(spec)
    }

    pub fn log_kernel_sq(w: Complex64) -> Result<Self> {
        let spec = FunctionSpec::LogKernelSq { w };
        spec.validate()?;
        Ok(spec)
    }

    pub fn scaled(c: Complex64, inner: FunctionSpec) -> Self {
        FunctionSpec::Scaled { c, inner: Box::new(inner) }
    }

    pub fn sum(terms: Vec<FunctionSpec>) -> Self {
        FunctionSpec::Sum { terms }
    }

    pub fn derivative(self, order: usize) -> Self {
        if order == 0 {
            return self;
        }
        FunctionSpec::DerivativeOf { inner: Box::new(self), order }
    }

    /// Checks the parameter constraints of every node.
    pub fn validate(&self) -> Result<()> {
        match self {
            FunctionSpec::Poly { coeffs } => {
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::Domain("non-finite polynomial coefficient".into()));
                }
                Ok(())
            }
            FunctionSpec::BinomialPower { w, s, .. } => {
                check_kernel(*w)?;
                if !(s.is_finite() && *s > 0.0) {
                    return Err(Error::Domain(format!("exponent s = {s} must be positive")));
                }
                Ok(())
            }
            FunctionSpec::LogKernel { w } | FunctionSpec::LogKernelSq { w } => check_kernel(*w),
            FunctionSpec::Scaled { c, inner } => {
                if !c.is_finite() {
                    return Err(Error::Domain("non-finite scale".into()));
                }
                inner.validate()
            }
            FunctionSpec::Sum { terms } => terms.iter().try_for_each(|t| t.validate()),
            FunctionSpec::DerivativeOf { inner, .. } => inner.validate(),
        }
    }

    /// Value of the `order`-th derivative at `z`.
    ///
    /// `order` counts derivatives already requested through `DerivativeOf`
    /// nodes, so the total may not exceed [`MAX_DERIVATIVE_ORDER`].
    pub fn eval_deriv(&self, z: Complex64, order: usize) -> Result<Complex64> {
        check_in_disk(z)?;
        self.deriv_at(z, order)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.eval_deriv(z, 0)
    }

    fn deriv_at(&self, z: Complex64, m: usize) -> Result<Complex64> {
        if m > MAX_DERIVATIVE_ORDER {
            return Err(Error::UnsupportedOrder { order: m, max: MAX_DERIVATIVE_ORDER });
        }
        match self {
            FunctionSpec::Poly { coeffs } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in (m..coeffs.len()).rev() {
                    acc = acc * z + coeffs[k] * falling_factorial(k, m);
                }
                Ok(acc)
            }
            FunctionSpec::BinomialPower { w, s, i } => {
                check_kernel(*w)?;
                Ok(binomial_power_deriv(w.conj(), *s, *i, z, m))
            }
            FunctionSpec::LogKernel { w } => {
                check_kernel(*w)?;
                Ok(log_kernel_deriv(w.conj(), z, m))
            }
            FunctionSpec::LogKernelSq { w } => {
                check_kernel(*w)?;
                let wc = w.conj();
                let derivs: Vec<Complex64> = (0..=m).map(|l| log_kernel_deriv(wc, z, l)).collect();
                Ok((0..=m).map(|l| binomial(m, l) * derivs[l] * derivs[m - l]).sum())
            }
            FunctionSpec::Scaled { c, inner } => Ok(c * inner.deriv_at(z, m)?),
            FunctionSpec::Sum { terms } => {
                terms.iter().map(|t| t.deriv_at(z, m)).sum::<Result<Complex64>>()
            }
            FunctionSpec::DerivativeOf { inner, order } => inner.deriv_at(z, m + order),
        }
    }

    /// Taylor expansion about 0 up to `degree_cap`.
    ///
    /// Kernel variants carry `tail_hint = |w|` (clamped below 1 for kernels on
    /// the circle).
    pub fn to_taylor(&self, degree_cap: usize) -> Result<AnalyticFn> {
        let zero = Complex64::new(0.0, 0.0);
        match self {
            FunctionSpec::Poly { coeffs } => {
                let mut c = coeffs.clone();
                c.resize(degree_cap + 1, zero);
                Ok(AnalyticFn::polynomial(c))
            }
            FunctionSpec::BinomialPower { w, s, i } => {
                check_kernel(*w)?;
                let wc = w.conj();
                let mut c = vec![zero; degree_cap + 1];
                let mut term = Complex64::new(1.0, 0.0);
                for k in 0..=degree_cap.saturating_sub(*i) {
                    if k > 0 {
                        term *= wc * ((s + (k - 1) as f64) / k as f64);
                    }
                    if i + k <= degree_cap {
                        c[i + k] = term;
                    }
                }
                AnalyticFn::new(c, kernel_tail_hint(*w))
            }
            FunctionSpec::LogKernel { w } => {
                check_kernel(*w)?;
                log_kernel_series(w.conj(), degree_cap, kernel_tail_hint(*w))
            }
            FunctionSpec::LogKernelSq { w } => {
                check_kernel(*w)?;
                let l = log_kernel_series(w.conj(), degree_cap, kernel_tail_hint(*w))?;
                Ok(l.mul(&l))
            }
            FunctionSpec::Scaled { c, inner } => Ok(inner.to_taylor(degree_cap)?.scale(*c)),
            FunctionSpec::Sum { terms } => terms
                .iter()
                .try_fold(AnalyticFn::zero(degree_cap), |acc, t| Ok(acc.add(&t.to_taylor(degree_cap)?))),
            FunctionSpec::DerivativeOf { inner, order } => {
                inner.to_taylor(degree_cap + order)?.derivative(*order)
            }
        }
    }
}

fn check_kernel(w: Complex64) -> Result<()> {
    if w.is_finite() && w.norm() <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("kernel parameter |w| = {} exceeds 1", w.norm())))
    }
}

fn kernel_tail_hint(w: Complex64) -> f64 {
    w.norm().min(MAX_TAIL_HINT)
}

fn log_kernel_series(wc: Complex64, cap: usize, tail: f64) -> Result<AnalyticFn> {
    let mut c = Vec::with_capacity(cap + 1);
    c.push(Complex64::new(LN_2, 0.0));
    let mut pow = Complex64::new(1.0, 0.0);
    for k in 1..=cap {
        pow *= wc;
        c.push(pow / k as f64);
    }
    AnalyticFn::new(c, tail)
}

/// m-th derivative of `z^i (1 - wc z)^(-s)` by the Leibniz rule.
fn binomial_power_deriv(wc: Complex64, s: f64, i: usize, z: Complex64, m: usize) -> Complex64 {
    let u = Complex64::new(1.0, 0.0) - wc * z;
    let base = u.powf(-s);
    let inv = u.inv();
    (0..=m.min(i))
        .map(|l| {
            let j = m - l;
            let mono = falling_factorial(i, l) * z.powu((i - l) as u32);
            let kernel = rising_factorial(s, j) * wc.powu(j as u32) * base * inv.powu(j as u32);
            binomial(m, l) * mono * kernel
        })
        .sum()
}

fn log_kernel_deriv(wc: Complex64, z: Complex64, m: usize) -> Complex64 {
    let u = Complex64::new(1.0, 0.0) - wc * z;
    if m == 0 {
        return Complex64::new(LN_2, 0.0) - u.ln();
    }
    falling_factorial(m - 1, m - 1) * (wc / u).powu(m as u32)
}

/// `s (s+1) ... (s+j-1)`.
pub(crate) fn rising_factorial(s: f64, j: usize) -> f64 {
    (0..j).map(|t| s + t as f64).product()
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}
