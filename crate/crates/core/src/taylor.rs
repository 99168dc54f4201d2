//! Truncated Taylor series about the origin.
//!
//! An [`AnalyticFn`] stores the coefficients `a_0 ..= a_N` of a function
//! analytic in the unit disk together with a `tail_hint`, an estimate of the
//! geometric decay ratio of the discarded coefficients. A zero hint means the
//! stored polynomial *is* the function.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Degree cap used when callers do not choose one.
pub const DEFAULT_DEGREE_CAP: usize = 256;

/// Absolute tail bound that defines the reliability radius.
pub const TAIL_TOLERANCE: f64 = 1e-9;

/// A truncated power series `Σ_{k≤N} a_k z^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSeries")]
pub struct AnalyticFn {
    coeffs: Vec<Complex64>,
    tail_hint: f64,
}

#[derive(Deserialize)]
struct RawSeries {
    coeffs: Vec<Complex64>,
    #[serde(default)]
    tail_hint: f64,
}

impl TryFrom<RawSeries> for AnalyticFn {
    type Error = Error;

    fn try_from(raw: RawSeries) -> Result<Self> {
        AnalyticFn::new(raw.coeffs, raw.tail_hint)
    }
}

impl AnalyticFn {
    /// Builds a series from its coefficients. `coeffs` must be non-empty and
    /// `tail_hint` must lie in `[0, 1)`.
    pub fn new(coeffs: Vec<Complex64>, tail_hint: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Degenerate("series needs at least one coefficient".into()));
        }
        if !(0.0..1.0).contains(&tail_hint) {
            return Err(Error::Domain(format!("tail_hint {tail_hint} outside [0, 1)")));
        }
        Ok(Self { coeffs, tail_hint })
    }

    /// An exact polynomial.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            return Self::zero(0);
        }
        Self { coeffs, tail_hint: 0.0 }
    }

    /// An exact polynomial with real coefficients.
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::polynomial(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(degree_cap: usize) -> Self {
        Self { coeffs: vec![Complex64::new(0.0, 0.0); degree_cap + 1], tail_hint: 0.0 }
    }

    pub fn constant(c: Complex64, degree_cap: usize) -> Self {
        let mut f = Self::zero(degree_cap);
        f.coeffs[0] = c;
        f
    }

    /// `z^k` stored with cap `max(k, degree_cap)`.
    pub fn monomial(k: usize, degree_cap: usize) -> Self {
        let mut f = Self::zero(degree_cap.max(k));
        f.coeffs[k] = Complex64::new(1.0, 0.0);
        f
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the cap.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn degree_cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tail_hint(&self) -> f64 {
        self.tail_hint
    }

    pub fn is_exact(&self) -> bool {
        self.tail_hint == 0.0
    }

    pub fn with_tail_hint(mut self, tail_hint: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&tail_hint) {
            return Err(Error::Domain(format!("tail_hint {tail_hint} outside [0, 1)")));
        }
        self.tail_hint = tail_hint;
        Ok(self)
    }

    /// Pads with zeros or drops coefficients so the cap becomes `degree_cap`.
    pub fn with_cap(&self, degree_cap: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(degree_cap + 1, Complex64::new(0.0, 0.0));
        Self { coeffs, tail_hint: self.tail_hint }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect(), tail_hint: self.tail_hint }
    }

    /// Coefficientwise sum up to the larger of the two caps.
    pub fn add(&self, other: &Self) -> Self {
        let cap = self.degree_cap().max(other.degree_cap());
        let coeffs = (0..=cap).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self { coeffs, tail_hint: self.tail_hint.max(other.tail_hint) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Cauchy product truncated at the smaller cap.
    pub fn mul(&self, other: &Self) -> Self {
        let cap = self.degree_cap().min(other.degree_cap());
        let a = &self.coeffs;
        let b = &other.coeffs;
        let coeffs = (0..=cap)
            .map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum())
            .collect();
        Self { coeffs, tail_hint: self.tail_hint.max(other.tail_hint) }
    }

    /// The `order`-th derivative; the cap drops by `order`.
    pub fn derivative(&self, order: usize) -> Result<Self> {
        let cap = self.degree_cap();
        if order > cap {
            return Err(Error::Degenerate(format!(
                "derivative of order {order} exceeds degree cap {cap}"
            )));
        }
        let coeffs = (0..=cap - order)
            .map(|k| self.coeffs[k + order] * falling_factorial(k + order, order))
            .collect();
        Ok(Self { coeffs, tail_hint: self.tail_hint })
    }

    /// `iterations`-fold integration from 0; the cap grows by `iterations`.
    pub fn integrate(&self, iterations: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); iterations];
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, a)| a / falling_factorial(k + iterations, iterations)),
        );
        Self { coeffs, tail_hint: self.tail_hint }
    }

    /// Horner evaluation of the stored polynomial.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.eval_deriv(z, 0)
    }

    /// Value of the `order`-th derivative at `z`, without materialising the
    /// derivative series.
    pub fn eval_deriv(&self, z: Complex64, order: usize) -> Result<Complex64> {
        check_in_disk(z)?;
        let cap = self.degree_cap();
        if order > cap {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (order..=cap).rev() {
            acc = acc * z + self.coeffs[k] * falling_factorial(k, order);
        }
        Ok(acc)
    }

    /// Largest radius on which the geometric tail bound
    /// `(t r)^{N+1} max|a_k| / (1 - t r)` stays below [`TAIL_TOLERANCE`].
    pub fn reliability_radius(&self) -> f64 {
        let t = self.tail_hint;
        if t == 0.0 {
            return 1.0;
        }
        let amax = self.coeffs.iter().map(|a| a.norm()).fold(0.0, f64::max);
        if amax == 0.0 {
            return 1.0;
        }
        let n1 = (self.degree_cap() + 1) as f64;
        let log_bound = |r: f64| n1 * (t * r).ln() + amax.ln() - (1.0 - t * r).ln();
        let target = TAIL_TOLERANCE.ln();
        if log_bound(1.0) < target {
            return 1.0;
        }
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if mid > 0.0 && log_bound(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    pub fn is_reliable_at(&self, z: Complex64) -> bool {
        z.norm() <= self.reliability_radius()
    }

    /// Root-test estimate of the decay ratio over the upper half of the stored
    /// coefficients, clamped below 1. Returns 0 if that half vanishes.
    pub fn estimate_tail_hint(&self) -> f64 {
        let cap = self.degree_cap();
        let start = (cap / 2).max(1);
        let t = (start..=cap)
            .filter(|&k| self.coeffs[k] != Complex64::new(0.0, 0.0))
            .map(|k| self.coeffs[k].norm().powf(1.0 / k as f64))
            .fold(0.0, f64::max);
        t.min(MAX_TAIL_HINT)
    }
}

/// Upper clamp for tail hints of series whose coefficients do not decay.
pub const MAX_TAIL_HINT: f64 = 1.0 - 1e-12;

pub(crate) fn check_in_disk(z: Complex64) -> Result<()> {
    if z.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("|z| = {} is not inside the unit disk", z.norm())))
    }
}

/// `k (k-1) ... (k-m+1)`, i.e. `k!/(k-m)!`.
pub(crate) fn falling_factorial(k: usize, m: usize) -> f64 {
    (0..m).map(|j| (k - j) as f64).product()
}

impl Add for &AnalyticFn {
    type Output = AnalyticFn;
    fn add(self, rhs: Self) -> AnalyticFn {
        AnalyticFn::add(self, rhs)
    }
}

impl Sub for &AnalyticFn {
    type Output = AnalyticFn;
    fn sub(self, rhs: Self) -> AnalyticFn {
        AnalyticFn::sub(self, rhs)
    }
}

impl Mul for &AnalyticFn {
    type Output = AnalyticFn;
    fn mul(self, rhs: Self) -> AnalyticFn {
        AnalyticFn::mul(self, rhs)
    }
}

impl Neg for &AnalyticFn {
    type Output = AnalyticFn;
    fn neg(self) -> AnalyticFn {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}
