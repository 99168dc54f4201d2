//! Volterra-type integral operators acting on truncated series.
//!
//! Every operator here is a finite sum of building blocks
//! `I^N (f^(k) · g)`, where `I` integrates from 0. [`OperatorSpec::terms`]
//! exposes that decomposition; [`apply`] evaluates it exactly at the
//! coefficient level, and [`output_derivative`] evaluates derivatives of the
//! output in closed form when `f` is itself a [`FunctionSpec`].

use std::collections::HashSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspec::{binomial, FunctionSpec};
use crate::taylor::AnalyticFn;

/// `f ↦ I^n (f^(k) · g)`. `n = 0` is plain multiplication after `k`
/// derivatives.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenTerm {
    pub n: usize,
    pub k: usize,
    pub g: FunctionSpec,
}

impl GenTerm {
    /// `t = n - k`, the net smoothing of the term.
    pub fn smoothing(&self) -> isize {
        self.n as isize - self.k as isize
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorSpec {
    /// `f ↦ ∫_0^z f g'`.
    Volterra { g: FunctionSpec },
    /// `f ↦ ∫_0^z f' g`.
    Companion { g: FunctionSpec },
    /// `f ↦ g f`.
    Mult { g: FunctionSpec },
    /// `f ↦ I^n (f^(k) g)` with `0 ≤ k < n`.
    Gen { n: usize, k: usize, g: FunctionSpec },
    /// `f ↦ I^n (Σ_k a_k f^(k) g^(n-k))`.
    Chalmoukis { n: usize, a: Vec<Complex64>, g: FunctionSpec },
    /// `f ↦ I^n (Σ_k f^(k) g_k)` with `g = (g_0, ..., g_{n-1})`.
    Vector { n: usize, g: Vec<FunctionSpec> },
    /// `f ↦ Σ_i I^{N_i} (f^(k_i) g_i)` with pairwise distinct `t_i = N_i - k_i`
    /// and `0 < t_i < N_i`.
    SumGen { terms: Vec<GenTerm> },
}

impl OperatorSpec {
    pub fn gen(n: usize, k: usize, g: FunctionSpec) -> Result<Self> {
        let op = OperatorSpec::Gen { n, k, g };
        op.validate()?;
        Ok(op)
    }

    pub fn chalmoukis(a: Vec<Complex64>, g: FunctionSpec) -> Result<Self> {
        let op = OperatorSpec::Chalmoukis { n: a.len(), a, g };
        op.validate()?;
        Ok(op)
    }

    /// The Chalmoukis operator with `a_k = C(n-1, k)`, which equals
    /// `f ↦ I^n ((f g')^(n-1))`.
    pub fn chalmoukis_binomial(n: usize, g: FunctionSpec) -> Result<Self> {
        let a = (0..n).map(|k| Complex64::new(binomial(n.saturating_sub(1), k), 0.0)).collect();
        Self::chalmoukis(a, g)
    }

    pub fn vector(g: Vec<FunctionSpec>) -> Result<Self> {
        let op = OperatorSpec::Vector { n: g.len(), g };
        op.validate()?;
        Ok(op)
    }

    pub fn sum_gen(terms: Vec<GenTerm>) -> Result<Self> {
        let op = OperatorSpec::SumGen { terms };
        op.validate()?;
        Ok(op)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            OperatorSpec::Volterra { g } | OperatorSpec::Companion { g } | OperatorSpec::Mult { g } => {
                g.validate()
            }
            OperatorSpec::Gen { n, k, g } => {
                if *n == 0 || k >= n {
                    return Err(Error::Precondition(format!("need 0 <= k < n, got n = {n}, k = {k}")));
                }
                g.validate()
            }
            OperatorSpec::Chalmoukis { n, a, g } => {
                if *n == 0 || a.len() != *n {
                    return Err(Error::Precondition(format!(
                        "scalar vector has length {} but n = {n}",
                        a.len()
                    )));
                }
                g.validate()
            }
            OperatorSpec::Vector { n, g } => {
                if *n == 0 || g.len() != *n {
                    return Err(Error::Precondition(format!("symbol vector has length {} but n = {n}", g.len())));
                }
                g.iter().try_for_each(FunctionSpec::validate)
            }
            OperatorSpec::SumGen { terms } => {
                if terms.is_empty() {
                    return Err(Error::Precondition("sum needs at least one term".into()));
                }
                let mut seen = HashSet::new();
                for t in terms {
                    let s = t.smoothing();
                    if !(s > 0 && (s as usize) < t.n) {
                        return Err(Error::Precondition(format!(
                            "term (N = {}, k = {}) needs 0 < N - k < N",
                            t.n, t.k
                        )));
                    }
                    if !seen.insert(s) {
                        return Err(Error::Precondition(format!("N - k = {s} occurs twice")));
                    }
                    t.g.validate()?;
                }
                Ok(())
            }
        }
    }

    /// The operator as a sum of `I^N (f^(k) g)` blocks.
    pub fn terms(&self) -> Vec<GenTerm> {
        match self {
            OperatorSpec::Volterra { g } => vec![GenTerm { n: 1, k: 0, g: g.clone().derivative(1) }],
            OperatorSpec::Companion { g } => vec![GenTerm { n: 1, k: 1, g: g.clone() }],
            OperatorSpec::Mult { g } => vec![GenTerm { n: 0, k: 0, g: g.clone() }],
            OperatorSpec::Gen { n, k, g } => vec![GenTerm { n: *n, k: *k, g: g.clone() }],
            OperatorSpec::Chalmoukis { n, a, g } => (0..*n)
                .map(|k| GenTerm {
                    n: *n,
                    k,
                    g: FunctionSpec::scaled(a[k], g.clone().derivative(n - k)),
                })
                .collect(),
            OperatorSpec::Vector { n, g } => {
                g.iter().enumerate().map(|(k, gk)| GenTerm { n: *n, k, g: gk.clone() }).collect()
            }
            OperatorSpec::SumGen { terms } => terms.clone(),
        }
    }

    /// Highest integration order among the blocks.
    pub fn integration_order(&self) -> usize {
        self.terms().iter().map(|t| t.n).max().unwrap_or(0)
    }

    /// Degree up to which `apply` output is exact for input cap `f_cap`.
    pub fn valid_degree(&self, f_cap: usize) -> Result<usize> {
        self.terms()
            .iter()
            .map(|t| {
                if t.k > f_cap {
                    Err(Error::Degenerate(format!("degree cap {f_cap} too small for f^({})", t.k)))
                } else {
                    Ok(f_cap - t.k + t.n)
                }
            })
            .try_fold(usize::MAX, |acc, d| Ok(acc.min(d?)))
    }

    /// Expands every symbol once for inputs of cap `f_cap`.
    pub fn prepare(&self, f_cap: usize) -> Result<PreparedOperator> {
        self.validate()?;
        let out_cap = self.valid_degree(f_cap)?;
        let expand_cap = f_cap + self.integration_order();
        let terms = self
            .terms()
            .into_iter()
            .map(|t| Ok((t.n, t.k, t.g.to_taylor(expand_cap)?)))
            .collect::<Result<_>>()?;
        Ok(PreparedOperator { f_cap, out_cap, terms })
    }
}

/// An operator whose symbols have been expanded to series.
#[derive(Clone, Debug)]
pub struct PreparedOperator {
    f_cap: usize,
    out_cap: usize,
    terms: Vec<(usize, usize, AnalyticFn)>,
}

impl PreparedOperator {
    pub fn output_cap(&self) -> usize {
        self.out_cap
    }

    pub fn apply(&self, f: &AnalyticFn) -> Result<AnalyticFn> {
        if f.degree_cap() != self.f_cap {
            return Err(Error::Degenerate(format!(
                "operator prepared for cap {} applied to cap {}",
                self.f_cap,
                f.degree_cap()
            )));
        }
        let mut out = AnalyticFn::zero(self.out_cap);
        for (n, k, g) in &self.terms {
            let block = f.derivative(*k)?.mul(g).integrate(*n).with_cap(self.out_cap);
            out = out.add(&block);
        }
        Ok(out)
    }
}

/// Applies `op` to `f`; the result has cap [`OperatorSpec::valid_degree`].
pub fn apply(op: &OperatorSpec, f: &AnalyticFn) -> Result<AnalyticFn> {
    op.prepare(f.degree_cap())?.apply(f)
}

/// `((I_g^{n,k} f)^(n), f^(k) g)`; the two agree for every `f`.
pub fn nth_derivative_identity(
    n: usize,
    k: usize,
    g: &FunctionSpec,
    f: &AnalyticFn,
) -> Result<(AnalyticFn, AnalyticFn)> {
    let op = OperatorSpec::gen(n, k, g.clone())?;
    let lhs = apply(&op, f)?.derivative(n)?;
    let fk = f.derivative(k)?;
    let rhs = fk.mul(&g.to_taylor(fk.degree_cap())?);
    Ok((lhs, rhs))
}

/// `(I_{g,a} f, I^n ((f g')^(n-1)))` for binomial `a`; the two agree.
pub fn leibniz_equivalence(n: usize, g: &FunctionSpec, f: &AnalyticFn) -> Result<(AnalyticFn, AnalyticFn)> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let lhs = apply(&OperatorSpec::chalmoukis_binomial(n, g.clone())?, f)?;
    let cap = f.degree_cap();
    let gprime = g.to_taylor(cap + 1)?.derivative(1)?;
    let rhs = f.mul(&gprime).derivative(n - 1)?.integrate(n);
    Ok((lhs, rhs))
}

/// The components `I_{g_k}^{n,k}` of a vector-symbol operator.
pub fn decompose_vector(op: &OperatorSpec) -> Result<Vec<OperatorSpec>> {
    match op {
        OperatorSpec::Vector { .. } => {
            op.validate()?;
            Ok(op.terms().into_iter().map(|t| OperatorSpec::Gen { n: t.n, k: t.k, g: t.g }).collect())
        }
        _ => Err(Error::Precondition("only vector-symbol operators decompose into components".into())),
    }
}

/// `(op f)^(order)(z)` in closed form.
///
/// Needs `order ≥ N` for every block `I^N` unless `z = 0`, where the lower
/// derivatives of `I^N h` vanish.
pub fn output_derivative(op: &OperatorSpec, f: &FunctionSpec, z: Complex64, order: usize) -> Result<Complex64> {
    terms_output_derivative(&op.terms(), f, z, order)
}

pub(crate) fn terms_output_derivative(
    terms: &[GenTerm],
    f: &FunctionSpec,
    z: Complex64,
    order: usize,
) -> Result<Complex64> {
    let origin = z == Complex64::new(0.0, 0.0);
    let mut total = Complex64::new(0.0, 0.0);
    for t in terms {
        if order < t.n {
            if origin {
                continue;
            }
            return Err(Error::Precondition(format!(
                "derivative {order} of an {}-fold integral has no closed form away from 0",
                t.n
            )));
        }
        let m = order - t.n;
        for l in 0..=m {
            total += binomial(m, l) * f.eval_deriv(z, t.k + l)? * t.g.eval_deriv(z, m - l)?;
        }
    }
    Ok(total)
}
