//! Linear ODEs `f^(n) + g_{n-1} f^(n-1) + ... + g_0 f = F` with a prescribed
//! initial jet.
//!
//! Integrating `n` times turns the equation into `f + I_g f = F_0`, where
//! `I_g f = I^n (Σ_k f^(k) g_k)` and `F_0 = I^n F + Σ_j f^(j)(0) z^j / j!`.
//! [`solve_neumann`] iterates `f ← F_0 - I_g f`; [`solve_recurrence`] solves the
//! coefficient recurrence directly and serves as an independent check.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch::{self, weight, BlochParams, NormEstimate, ALPHA_ONE_TOL};
use crate::criteria::{opnorm_probe, ProbeConfig, ProbeMethod};
use crate::error::{Error, Result};
use crate::funcspec::FunctionSpec;
use crate::grid::{weighted_sup, DiskGrid};
use crate::operators::OperatorSpec;
use crate::taylor::{falling_factorial, AnalyticFn};
use crate::testfns::FamilyKind;

pub const DEFAULT_WORKING_CAP: usize = 128;
pub const DEFAULT_MAX_ITER: usize = 500;
pub const DEFAULT_TOL: f64 = 1e-13;
/// Consecutive increases of the step size treated as divergence.
pub const DIVERGENCE_STREAK: usize = 5;

fn default_working_cap() -> usize {
    DEFAULT_WORKING_CAP
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdeProblem {
    pub n: usize,
    /// `g_0, ..., g_{n-1}`.
    pub gvec: Vec<FunctionSpec>,
    pub rhs: AnalyticFn,
    /// `f(0), f'(0), ..., f^(n-1)(0)`.
    pub init: Vec<Complex64>,
    pub alpha: f64,
    #[serde(default = "default_working_cap")]
    pub working_cap: usize,
}

impl OdeProblem {
    pub fn new(gvec: Vec<FunctionSpec>, rhs: AnalyticFn, init: Vec<Complex64>, alpha: f64) -> Result<Self> {
        let p = Self { n: gvec.len(), gvec, rhs, init, alpha, working_cap: DEFAULT_WORKING_CAP };
        p.validate()?;
        Ok(p)
    }

    pub fn with_working_cap(mut self, cap: usize) -> Result<Self> {
        self.working_cap = cap;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Precondition("order n must be at least 1".into()));
        }
        if self.gvec.len() != self.n || self.init.len() != self.n {
            return Err(Error::Precondition(format!(
                "order {} needs {0} coefficients and {0} initial values, got {} and {}",
                self.n,
                self.gvec.len(),
                self.init.len()
            )));
        }
        BlochParams::new(self.alpha)?;
        if self.working_cap < self.n {
            return Err(Error::Precondition(format!(
                "working cap {} is below the order {}",
                self.working_cap, self.n
            )));
        }
        if !self.rhs.is_exact() && self.rhs.degree_cap() + self.n < self.working_cap {
            return Err(Error::Precondition(format!(
                "right-hand side known to degree {} but degree {} is needed",
                self.rhs.degree_cap(),
                self.working_cap - self.n
            )));
        }
        self.gvec.iter().try_for_each(FunctionSpec::validate)
    }

    /// The integrated operator `I^n (Σ_k f^(k) g_k)`.
    pub fn operator(&self) -> Result<OperatorSpec> {
        OperatorSpec::vector(self.gvec.clone())
    }
}

/// `F_0 = I^n F + Σ_{j<n} f^(j)(0) z^j / j!` at the working cap.
pub fn build_f0(problem: &OdeProblem) -> Result<AnalyticFn> {
    problem.validate()?;
    let cap = problem.working_cap;
    let mut coeffs = problem.rhs.with_cap(cap.saturating_sub(problem.n)).integrate(problem.n).with_cap(cap).coeffs().to_vec();
    let mut fact = 1.0;
    for (j, v) in problem.init.iter().enumerate() {
        if j > 0 {
            fact *= j as f64;
        }
        coeffs[j] += v / fact;
    }
    AnalyticFn::new(coeffs, problem.rhs.tail_hint())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeumannSolution {
    pub solution: AnalyticFn,
    /// Coefficientwise sup of `f_{m+1} - f_m` for each step.
    pub change_log: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub residual: f64,
}

/// Iterates `f_{m+1} = F_0 - I_g f_m` from `f_0 = F_0`.
///
/// Stops once a step changes no coefficient by `tol` or more. A step size that
/// grows [`DIVERGENCE_STREAK`] times in a row aborts with
/// [`Error::Diverged`].
pub fn solve_neumann(problem: &OdeProblem, max_iter: usize, tol: f64) -> Result<NeumannSolution> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Precondition(format!("tolerance {tol} must be positive")));
    }
    let f0 = build_f0(problem)?;
    let cap = problem.working_cap;
    let op = problem.operator()?.prepare(cap)?;
    let mut f = f0.clone();
    let mut log = Vec::new();
    let mut streak = 0;
    let mut converged = false;
    for _ in 0..max_iter {
        let next = f0.sub(&op.apply(&f)?.with_cap(cap));
        let change = next.sub(&f).coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        if !change.is_finite() {
            log.push(change);
            return Err(Error::Diverged { log });
        }
        if log.last().is_some_and(|&prev| change > prev) {
            streak += 1;
        } else {
            streak = 0;
        }
        log.push(change);
        f = next;
        if streak >= DIVERGENCE_STREAK {
            return Err(Error::Diverged { log });
        }
        if change < tol {
            converged = true;
            break;
        }
    }
    let hint = f.estimate_tail_hint();
    let solution = f.with_tail_hint(hint)?;
    let res = residual(problem, &solution)?;
    Ok(NeumannSolution { solution, iterations: log.len(), change_log: log, converged, residual: res })
}

/// Power-series solution from the coefficient recurrence
/// `(m+n)!/m! a_{m+n} = [F]_m - Σ_k Σ_{j≤m} [g_k]_{m-j} (j+k)!/j! a_{j+k}`.
pub fn solve_recurrence(problem: &OdeProblem) -> Result<AnalyticFn> {
    problem.validate()?;
    let (n, cap) = (problem.n, problem.working_cap);
    let g: Vec<AnalyticFn> = problem.gvec.iter().map(|gk| gk.to_taylor(cap)).collect::<Result<_>>()?;
    let mut a = vec![Complex64::new(0.0, 0.0); cap + 1];
    let mut fact = 1.0;
    for (j, v) in problem.init.iter().enumerate() {
        if j > 0 {
            fact *= j as f64;
        }
        a[j] = v / fact;
    }
    for m in 0..=cap - n {
        let mut acc = problem.rhs.coeff(m);
        for (k, gk) in g.iter().enumerate() {
            for j in 0..=m {
                acc -= gk.coeff(m - j) * falling_factorial(j + k, k) * a[j + k];
            }
        }
        a[m + n] = acc / falling_factorial(m + n, n);
    }
    let f = AnalyticFn::new(a, 0.0)?;
    let hint = f.estimate_tail_hint();
    f.with_tail_hint(hint)
}

/// Coefficientwise sup of `f^(n) + Σ g_k f^(k) - F` over degrees `0..=cap-n`.
pub fn residual(problem: &OdeProblem, f: &AnalyticFn) -> Result<f64> {
    problem.validate()?;
    let top = f.degree_cap().checked_sub(problem.n).ok_or_else(|| {
        Error::Degenerate(format!("degree cap {} below the order {}", f.degree_cap(), problem.n))
    })?;
    let mut lhs = f.derivative(problem.n)?;
    for (k, gk) in problem.gvec.iter().enumerate() {
        let term = f.derivative(k)?.mul(&gk.to_taylor(f.degree_cap())?).with_cap(top);
        lhs = lhs.add(&term);
    }
    let diff = lhs.sub(&problem.rhs.with_cap(top)).with_cap(top);
    Ok(diff.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GStarNorm {
    /// `‖g_k‖_k` for `k = 0..n-1`.
    pub per_k: Vec<f64>,
    pub star: f64,
}

/// `‖g_k‖_k = sup (1-|z|^2)^{n-k} |g_k|` for `k ≥ 1`; `‖g_0‖_0` uses the weight
/// matching `α` (power, logarithmic or shifted power).
pub fn gstar_norm(gvec: &[FunctionSpec], n: usize, alpha: f64, grid: &DiskGrid) -> Result<GStarNorm> {
    BlochParams::new(alpha)?;
    if gvec.len() != n {
        return Err(Error::Precondition(format!("expected {n} coefficients, got {}", gvec.len())));
    }
    let per_k = gvec
        .iter()
        .enumerate()
        .map(|(k, g)| {
            let nk = (n - k) as f64;
            let sup = weighted_sup(grid, |z| {
                let w = if k >= 1 || alpha > 1.0 + ALPHA_ONE_TOL {
                    weight(z, nk)
                } else if (alpha - 1.0).abs() <= ALPHA_ONE_TOL {
                    weight(z, nk) * (2.0 / (1.0 - z.norm_sqr())).ln()
                } else {
                    weight(z, nk + alpha - 1.0)
                };
                Ok(w * g.eval(z)?.norm())
            })?;
            Ok(sup.value)
        })
        .collect::<Result<Vec<f64>>>()?;
    let star = per_k.iter().copied().fold(0.0, f64::max);
    Ok(GStarNorm { per_k, star })
}

/// α-Bloch norm estimate of a computed solution.
pub fn bloch_membership_report(solution: &AnalyticFn, alpha: f64, grid: &DiskGrid) -> Result<NormEstimate> {
    bloch::norm(solution, BlochParams::new(alpha)?, grid)
}

/// Largest probe ratio of `I_g` on `B^α` divided by `Σ_k ‖g_k‖_k`.
pub fn empirical_contraction_constant(
    problem: &OdeProblem,
    w_path: &[Complex64],
    grid: &DiskGrid,
) -> Result<f64> {
    let norms = gstar_norm(&problem.gvec, problem.n, problem.alpha, grid)?;
    let total: f64 = norms.per_k.iter().sum();
    if total == 0.0 {
        return Err(Error::Precondition("all coefficients vanish".into()));
    }
    let cfg = ProbeConfig {
        alpha: problem.alpha,
        beta: problem.alpha,
        family: FamilyKind::Qw { i: 0 },
        method: ProbeMethod::ClosedForm,
    };
    Ok(opnorm_probe(&problem.operator()?, cfg, w_path, grid)?.max_ratio() / total)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdeReport {
    pub gstar: GStarNorm,
    pub neumann: Option<NeumannSolution>,
    /// Step sizes of an aborted Neumann iteration.
    pub divergence_log: Option<Vec<f64>>,
    pub recurrence: AnalyticFn,
    pub recurrence_residual: f64,
    /// Coefficientwise sup of the difference between the two solutions.
    pub agreement: Option<f64>,
    pub membership: Option<NormEstimate>,
}

impl OdeReport {
    pub fn diverged(&self) -> bool {
        self.divergence_log.is_some()
    }
}

/// Runs both solvers and collects everything in one report.
pub fn solve_report(problem: &OdeProblem, max_iter: usize, tol: f64, grid: &DiskGrid) -> Result<OdeReport> {
    problem.validate()?;
    let gstar = gstar_norm(&problem.gvec, problem.n, problem.alpha, grid)?;
    let recurrence = solve_recurrence(problem)?;
    let recurrence_residual = residual(problem, &recurrence)?;
    let (neumann, divergence_log) = match solve_neumann(problem, max_iter, tol) {
        Ok(s) => (Some(s), None),
        Err(Error::Diverged { log }) => (None, Some(log)),
        Err(e) => return Err(e),
    };
    let agreement = neumann.as_ref().map(|s| {
        s.solution.sub(&recurrence).coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max)
    });
    let membership = match &neumann {
        Some(s) => Some(bloch_membership_report(&s.solution, problem.alpha, grid)?),
        None => None,
    };
    Ok(OdeReport { gstar, neumann, divergence_log, recurrence, recurrence_residual, agreement, membership })
}
