//! Seeded property suites. Each suite returns a report listing every
//! assertion with the measured value and the limit it was held to.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bloch::{self, BlochParams};
use crate::criteria::{
    criterion, opnorm_probe, output_norm, real_path, rigidity_check, CriterionParams, ProbeConfig, ProbeMethod,
    DEFAULT_PROBE_PATH, DEFAULT_RIGIDITY_PATH,
};
use crate::error::{Error, Result};
use crate::funcspec::FunctionSpec;
use crate::grid::{weighted_sup, DiskGrid};
use crate::ode::{self, OdeProblem, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::operators::{self, GenTerm, OperatorSpec};
use crate::taylor::AnalyticFn;
use crate::testfns::{family_norm_profile, separation_ratio, FamilyKind, TestFamily};

pub const DEFAULT_SEED: u64 = 42;

/// Canonical suite names, in the order `all` runs them.
pub const SUITES: [&str; 9] = [
    "derivative-norm",
    "test-functions",
    "separation",
    "leibniz",
    "rigidity",
    "two-sided",
    "log-branch",
    "small-alpha",
    "ode",
];

const ALIASES: [(&str, &str); 6] = [
    ("lemma21", "derivative-norm"),
    ("lemma24", "test-functions"),
    ("lemma25", "separation"),
    ("prop31", "two-sided"),
    ("prop41", "log-branch"),
    ("prop42", "small-alpha"),
];

/// Resolves a suite name or alias to its canonical name.
pub fn canonical_suite(name: &str) -> Option<&'static str> {
    SUITES
        .iter()
        .copied()
        .find(|s| *s == name)
        .or_else(|| ALIASES.iter().find(|(a, _)| *a == name).map(|(_, s)| *s))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub limit: f64,
}

impl Assertion {
    pub fn at_most(name: impl Into<String>, measured: f64, limit: f64) -> Self {
        Self { name: name.into(), passed: measured <= limit, measured, limit }
    }

    pub fn at_least(name: impl Into<String>, measured: f64, limit: f64) -> Self {
        Self { name: name.into(), passed: measured >= limit, measured, limit }
    }

    /// A yes/no check, recorded as 1 or 0 against a limit of 1.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self { name: name.into(), passed: ok, measured: if ok { 1.0 } else { 0.0 }, limit: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub assertions: Vec<Assertion>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

/// Runs one suite by canonical name or alias.
pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    let suite = canonical_suite(name).ok_or_else(|| Error::Precondition(format!("unknown suite '{name}'")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = DiskGrid::default();
    let assertions = match suite {
        "derivative-norm" => derivative_norm(&mut rng, &grid)?,
        "test-functions" => test_functions(&grid)?,
        "separation" => separation(&mut rng, &grid)?,
        "leibniz" => leibniz(&mut rng)?,
        "rigidity" => rigidity(&mut rng, &grid)?,
        "two-sided" => two_sided(&mut rng, &grid)?,
        "log-branch" => log_branch(&grid)?,
        "small-alpha" => small_alpha(&grid)?,
        "ode" => ode_suite(&mut rng)?,
        _ => unreachable!("canonical names are exhaustive"),
    };
    Ok(SuiteReport { suite: suite.to_string(), seed, passed: assertions.iter().all(|a| a.passed), assertions })
}

/// Every suite in [`SUITES`] order.
pub fn run_all(seed: u64) -> Result<VerifyReport> {
    let suites = SUITES.iter().map(|s| run_suite(s, seed)).collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport { seed, passed: suites.iter().all(|s| s.passed), suites })
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn window(values: &[f64]) -> f64 {
    let hi = values.iter().copied().fold(f64::MIN, f64::max);
    let lo = values.iter().copied().fold(f64::MAX, f64::min);
    hi / lo
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len().is_multiple_of(2) {
        0.5 * (v[m - 1] + v[m])
    } else {
        v[m]
    }
}

fn random_complex_poly(rng: &mut ChaCha8Rng, max_degree: usize) -> Vec<Complex64> {
    let degree = rng.gen_range(0..=max_degree);
    (0..=degree).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn relative_deviation(a: &AnalyticFn, b: &AnalyticFn) -> f64 {
    let scale = a.coeffs().iter().chain(b.coeffs()).map(|x| x.norm()).fold(1e-300, f64::max);
    a.sub(b).coeffs().iter().map(|x| x.norm()).fold(0.0, f64::max) / scale
}

fn derivative_norm(rng: &mut ChaCha8Rng, grid: &DiskGrid) -> Result<Vec<Assertion>> {
    let mut out = Vec::new();
    let polys: Vec<FunctionSpec> = (0..5).map(|_| FunctionSpec::poly(random_complex_poly(rng, 6))).collect();
    for alpha in [0.5, 1.0, 2.0] {
        let p = BlochParams::new(alpha)?;
        let mut funcs = polys.clone();
        for w in [0.5, 0.7, 0.9, 0.95] {
            funcs.push(TestFamily::fw(0, c(w), alpha)?.spec());
        }
        let ratio = |f: &FunctionSpec, n| -> Result<f64> {
            Ok(bloch::norm_via_derivatives(f, p, n, grid)?.value / bloch::norm(f, p, grid)?.value)
        };
        for n in 1..=3 {
            let ratios = funcs.iter().map(|f| ratio(f, n)).collect::<Result<Vec<f64>>>()?;
            out.push(Assertion::at_most(format!("norm ratio window, alpha {alpha}, n {n}"), window(&ratios), 1000.0));
            let near = ratio(&TestFamily::fw(0, c(0.95), alpha)?.spec(), n)?;
            let nearer = ratio(&TestFamily::fw(0, c(0.98), alpha)?.spec(), n)?;
            out.push(Assertion::at_most(format!("norm ratio drift 0.95 to 0.98, alpha {alpha}, n {n}"), nearer / near, 1.5));
        }
    }
    Ok(out)
}

fn test_functions(grid: &DiskGrid) -> Result<Vec<Assertion>> {
    let mut out = Vec::new();
    let path = real_path(&[0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95]);
    for alpha in [0.5, 1.0, 2.0] {
        for i in 0..=3 {
            let rows = family_norm_profile(FamilyKind::Fw { i }, alpha, &path, grid)?;
            let v: Vec<f64> = rows.iter().map(|r| r.normalized_ratio).collect();
            out.push(Assertion::at_most(format!("f_w normalized window, alpha {alpha}, i {i}"), window(&v), 100.0));
            let rows = family_norm_profile(FamilyKind::Qw { i }, alpha, &path, grid)?;
            let q: Vec<f64> = rows.iter().map(|r| r.norm / rows[0].norm).collect();
            let worst = q.iter().copied().fold(0.0, f64::max);
            out.push(Assertion::at_most(format!("q_w norm growth, alpha {alpha}, i {i}"), worst, 100.0));
        }
    }
    let hpath = real_path(&[0.5, 0.6, 0.7, 0.8, 0.9, 0.95]);
    let h = family_norm_profile(FamilyKind::Hw, 1.0, &hpath, grid)?;
    let hmax = h.iter().map(|r| r.norm).fold(0.0, f64::max);
    out.push(Assertion::at_most("h_w Bloch norm bound", hmax, 2.0 + 2f64.ln() + 1e-9));

    let inner = DiskGrid::new(vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5], vec![64; 6], 24)?;
    let sups = [0.9, 0.99, 0.999]
        .iter()
        .map(|&w| {
            let u = TestFamily::uw(c(w))?.spec();
            Ok(weighted_sup(&inner, |z| Ok(u.eval(z)?.norm()))?.value)
        })
        .collect::<Result<Vec<f64>>>()?;
    out.push(Assertion::holds("u_w decreases on |z| <= 1/2", sups[0] > sups[1] && sups[1] > sups[2]));
    Ok(out)
}

fn separation(rng: &mut ChaCha8Rng, grid: &DiskGrid) -> Result<Vec<Assertion>> {
    let mut out = Vec::new();
    let inner = [0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9];
    let mut worst_trend: f64 = 0.0;
    let mut lowest: f64 = f64::MAX;
    for _ in 0..20 {
        let n = rng.gen_range(0..=3);
        let coeffs: Vec<Complex64> = (0..=n)
            .map(|_| Complex64::from_polar(10f64.powf(rng.gen_range(-1.0..1.0)), rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        for alpha in [1.0, 2.0] {
            let ratios =
                inner.iter().map(|&w| separation_ratio(&coeffs, alpha, c(w), grid)).collect::<Result<Vec<f64>>>()?;
            let edge = separation_ratio(&coeffs, alpha, c(0.95), grid)?;
            worst_trend = worst_trend.max(edge / median(&ratios));
            lowest = ratios.iter().copied().fold(lowest, f64::min).min(edge);
        }
    }
    out.push(Assertion::at_most("ratio at 0.95 over median ratio", worst_trend, 3.0));
    out.push(Assertion::at_least("smallest ratio", lowest, 1.0 - 1e-6));
    let single = separation_ratio(&[Complex64::new(0.3, -2.0)], 1.5, c(0.8), grid)?;
    out.push(Assertion::at_most("single coefficient ratio deviation", (single - 1.0).abs(), 1e-12));
    Ok(out)
}

fn leibniz(rng: &mut ChaCha8Rng) -> Result<Vec<Assertion>> {
    let mut identity: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=4);
        let k = rng.gen_range(0..n);
        let f = AnalyticFn::polynomial(random_complex_poly(rng, 32)).with_cap(32);
        let g = FunctionSpec::poly(random_complex_poly(rng, 32));
        let (a, b) = operators::nth_derivative_identity(n, k, &g, &f)?;
        identity = identity.max(relative_deviation(&a, &b));
    }
    let mut equivalence: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let f = AnalyticFn::polynomial(random_complex_poly(rng, 32)).with_cap(32);
        let g = FunctionSpec::poly(random_complex_poly(rng, 32));
        let (a, b) = operators::leibniz_equivalence(n, &g, &f)?;
        equivalence = equivalence.max(relative_deviation(&a, &b));
    }
    Ok(vec![
        Assertion::at_most("n-th derivative identity deviation", identity, 1e-12),
        Assertion::at_most("binomial combination deviation", equivalence, 1e-12),
    ])
}

/// A symbol whose criterion decays for every exponent of at least 1.
fn tame_symbol(rng: &mut ChaCha8Rng) -> Result<FunctionSpec> {
    Ok(match rng.gen_range(0..3) {
        0 => FunctionSpec::poly(random_complex_poly(rng, 3)),
        1 => {
            let w = Complex64::from_polar(rng.gen_range(0.0..0.6), rng.gen_range(0.0..std::f64::consts::TAU));
            FunctionSpec::binomial_power(w, rng.gen_range(0.5..1.5), rng.gen_range(0..=2))?
        }
        _ => FunctionSpec::scaled(Complex64::new(rng.gen_range(0.2..1.0), 0.0), FunctionSpec::log_kernel(c(1.0))?),
    })
}

/// Randomized vector and sum operators, every fifth one with a component far
/// outside the bounded range.
pub fn rigidity_battery(rng: &mut ChaCha8Rng, count: usize) -> Result<Vec<(OperatorSpec, f64, f64, bool)>> {
    const SUM_SHAPES: [&[(usize, usize)]; 5] = [&[(2, 1)], &[(3, 2)], &[(3, 1)], &[(2, 1), (3, 1)], &[(3, 2), (3, 1)]];
    let mut out = Vec::with_capacity(count);
    for j in 0..count {
        let alpha = *[0.5, 1.0, 2.0].choose(rng).expect("non-empty");
        let beta = alpha + *[0.0, 0.5, 1.0].choose(rng).expect("non-empty");
        let inject = j % 5 == 0;
        let mut terms: Vec<GenTerm> = if rng.gen_bool(0.5) {
            let n = rng.gen_range(1..=3);
            (0..n).map(|k| Ok(GenTerm { n, k, g: tame_symbol(rng)? })).collect::<Result<_>>()?
        } else {
            let shape = SUM_SHAPES.choose(rng).expect("non-empty");
            shape.iter().map(|&(n, k)| Ok(GenTerm { n, k, g: tame_symbol(rng)? })).collect::<Result<_>>()?
        };
        if inject {
            let l = rng.gen_range(0..terms.len());
            let e = CriterionParams::new(alpha, beta, terms[l].n, terms[l].k)?.exponent();
            terms[l].g = FunctionSpec::boundary_pole(e + 3.5)?;
        }
        let is_vector = terms.iter().all(|t| t.n == terms[0].n) && terms.iter().enumerate().all(|(k, t)| t.k == k);
        let op = if is_vector {
            OperatorSpec::vector(terms.into_iter().map(|t| t.g).collect())?
        } else {
            OperatorSpec::sum_gen(terms)?
        };
        out.push((op, alpha, beta, inject));
    }
    Ok(out)
}

fn rigidity(rng: &mut ChaCha8Rng, grid: &DiskGrid) -> Result<Vec<Assertion>> {
    let battery = rigidity_battery(rng, 50)?;
    let path = real_path(&DEFAULT_RIGIDITY_PATH);
    let mut agree = 0usize;
    let mut injected_caught = 0usize;
    let injected = battery.iter().filter(|b| b.3).count();
    let mut tame_bounded = true;
    for (op, alpha, beta, inject) in &battery {
        let r = rigidity_check(op, *alpha, *beta, grid, &path)?;
        if r.consistent {
            agree += 1;
        }
        if *inject && !r.components_bounded && !r.sum_bounded {
            injected_caught += 1;
        }
        if !*inject && !(r.components_bounded && r.sum_bounded) {
            tame_bounded = false;
        }
    }
    Ok(vec![
        Assertion::at_least("agreement rate", agree as f64 / battery.len() as f64, 1.0),
        Assertion::at_least("instances with an unbounded component", injected as f64, 5.0),
        Assertion::at_least("unbounded components detected", injected_caught as f64, injected as f64),
        Assertion::holds("tame instances bounded", tame_bounded),
    ])
}

/// `(α, β, n, k)` configurations with `k ≥ 1` used for two-sided checks.
pub const TWO_SIDED_CONFIGS: [(f64, f64, usize, usize); 6] =
    [(2.0, 2.0, 2, 1), (2.0, 1.0, 3, 2), (1.0, 1.0, 3, 2), (3.0, 3.0, 2, 1), (2.0, 3.0, 3, 1), (1.5, 2.0, 3, 2)];

fn two_sided(rng: &mut ChaCha8Rng, grid: &DiskGrid) -> Result<Vec<Assertion>> {
    let path = real_path(&DEFAULT_PROBE_PATH);
    let polys: Vec<FunctionSpec> = (0..10)
        .map(|_| {
            let degree = rng.gen_range(0..=4);
            FunctionSpec::poly_real(&(0..=degree).map(|_| rng.gen_range(0.1..2.0)).collect::<Vec<_>>())
        })
        .collect();
    let mut quotients = Vec::new();
    let mut weakest_growth = f64::MAX;
    for &(alpha, beta, n, k) in &TWO_SIDED_CONFIGS {
        let params = CriterionParams::new(alpha, beta, n, k)?;
        let cfg = ProbeConfig { alpha, beta, family: FamilyKind::Fw { i: k }, method: ProbeMethod::ClosedForm };
        for g in &polys {
            let constant = criterion(g, params, grid)?.constant;
            let probe = opnorm_probe(&OperatorSpec::gen(n, k, g.clone())?, cfg, &path, grid)?;
            quotients.push(probe.max_ratio() / constant);
        }
        let pole = FunctionSpec::boundary_pole(params.exponent() + 3.0)?;
        let t = opnorm_probe(&OperatorSpec::gen(n, k, pole)?, cfg, &real_path(&[0.6, 0.9]), grid)?;
        weakest_growth = weakest_growth.min(t.rows[1].ratio / t.rows[0].ratio);
    }
    Ok(vec![
        Assertion::at_most("probe over criterion window", window(&quotients), 100.0),
        Assertion::at_least("pole probe growth from 0.6 to 0.9", weakest_growth, 10.0),
    ])
}

fn log_branch(grid: &DiskGrid) -> Result<Vec<Assertion>> {
    let mut out = Vec::new();
    let unit = criterion(&FunctionSpec::constant(c(1.0)), CriterionParams::new(1.0, 1.0, 1, 0)?, grid)?;
    out.push(Assertion::at_most("constant symbol, deviation from 2/e", (unit.constant - 2.0 / std::f64::consts::E).abs(), 1e-9));

    let path = real_path(&[0.55, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99]);
    let polys = [vec![1.0], vec![0.5, 1.0], vec![1.0, 0.0, 2.0], vec![0.2, 0.4, 0.6, 0.8]];
    let mut quotients = Vec::new();
    let mut all_compact = true;
    let mut decays = true;
    for (n, beta) in [(1, 1.0), (2, 1.0), (1, 2.0)] {
        let params = CriterionParams::new(1.0, beta, n, 0)?;
        for p in &polys {
            let g = FunctionSpec::poly_real(p);
            let crit = criterion(&g, params, grid)?;
            all_compact &= crit.compact_verdict;
            let op = OperatorSpec::gen(n, 0, g)?;
            let cfg = ProbeConfig { alpha: 1.0, beta, family: FamilyKind::Hw, method: ProbeMethod::ClosedForm };
            quotients.push(opnorm_probe(&op, cfg, &path, grid)?.max_ratio() / crit.constant);
            let near = output_norm(&op, &TestFamily::uw(c(0.6))?.spec(), beta, grid)?.value;
            let far = output_norm(&op, &TestFamily::uw(c(0.99))?.spec(), beta, grid)?.value;
            decays &= far < near;
        }
    }
    out.push(Assertion::holds("polynomial symbols compact", all_compact));
    out.push(Assertion::at_most("h_w probe over criterion window", window(&quotients), 100.0));
    out.push(Assertion::holds("u_w images shrink from 0.6 to 0.99", decays));

    // (1-z)^{-(n+β-1)} is bounded under the power weight but not under the
    // logarithmic one.
    let params = CriterionParams::new(1.0, 1.0, 1, 0)?;
    let pole = FunctionSpec::boundary_pole(params.exponent())?;
    let crit = criterion(&pole, params, grid)?;
    let v: Vec<f64> = crit.boundary_profile.iter().map(|p| p.sup).collect();
    let m = v.len();
    out.push(Assertion::holds("borderline pole profile keeps rising", v[m - 3] < v[m - 2] && v[m - 2] < v[m - 1]));
    let cfg = ProbeConfig { alpha: 1.0, beta: 1.0, family: FamilyKind::Hw, method: ProbeMethod::ClosedForm };
    let t = opnorm_probe(&OperatorSpec::gen(1, 0, pole)?, cfg, &real_path(&[0.6, 0.99]), grid)?;
    out.push(Assertion::at_least("borderline pole probe growth", t.rows[1].ratio / t.rows[0].ratio, 1.5));
    Ok(out)
}

fn small_alpha(grid: &DiskGrid) -> Result<Vec<Assertion>> {
    let mut total = 0usize;
    let mut equal = 0usize;
    let mut expected = true;
    for alpha in [0.25, 0.5, 0.75] {
        for beta in [0.5, 1.0, 2.0] {
            for n in 1..=3 {
                let params = CriterionParams::new(alpha, beta, n, 0)?;
                let e = params.exponent();
                let mut battery = vec![
                    (FunctionSpec::constant(c(2.0)), Some(true)),
                    (FunctionSpec::poly_real(&[0.5, -1.0, 0.25]), Some(true)),
                    (FunctionSpec::binomial_power(Complex64::new(0.3, 0.4), 1.5, 1)?, Some(true)),
                    (FunctionSpec::log_kernel(c(1.0))?, Some(true)),
                    (FunctionSpec::boundary_pole(e + 2.0)?, Some(false)),
                    (FunctionSpec::boundary_pole(e + 4.0)?, Some(false)),
                ];
                for s in [0.5, 1.0, e] {
                    battery.push((FunctionSpec::boundary_pole(s)?, None));
                }
                for (g, want) in battery {
                    let r = criterion(&g, params, grid)?;
                    total += 1;
                    if r.bounded_verdict == r.compact_verdict {
                        equal += 1;
                    }
                    if let Some(w) = want {
                        expected &= r.bounded_verdict == w;
                    }
                }
            }
        }
    }
    Ok(vec![
        Assertion::at_least("bounded equals compact rate", equal as f64 / total as f64, 1.0),
        Assertion::holds("known symbols classified", expected),
    ])
}

/// Random problems with polynomial data and `‖g‖_* ≤ 0.2`.
pub fn ode_battery(rng: &mut ChaCha8Rng, count: usize) -> Result<Vec<OdeProblem>> {
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=3);
            let gvec = (0..n)
                .map(|_| {
                    let g = random_complex_poly(rng, 3);
                    let l1: f64 = g.iter().map(|x| x.norm()).sum();
                    let s = rng.gen_range(0.0..0.2) / l1.max(1e-12);
                    FunctionSpec::poly(g.into_iter().map(|x| x * s).collect())
                })
                .collect();
            let rhs = AnalyticFn::polynomial(random_complex_poly(rng, 16));
            let init = (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            OdeProblem::new(gvec, rhs, init, *[0.5, 1.0, 2.0].choose(rng).expect("non-empty"))
        })
        .collect()
}

fn ode_suite(rng: &mut ChaCha8Rng) -> Result<Vec<Assertion>> {
    let problems = ode_battery(rng, 50)?;
    let mut agreement: f64 = 0.0;
    let mut residual: f64 = 0.0;
    let mut jets = true;
    for p in &problems {
        let a = ode::solve_recurrence(p)?;
        let s = ode::solve_neumann(p, DEFAULT_MAX_ITER, DEFAULT_TOL)?;
        agreement = agreement.max(a.with_cap(64).sub(&s.solution.with_cap(64)).coeffs().iter().map(|x| x.norm()).fold(0.0, f64::max));
        residual = residual.max(s.residual);
        let mut fact = 1.0;
        for j in 0..p.n {
            if j > 0 {
                fact *= j as f64;
            }
            jets &= a.coeff(j) == p.init[j] / fact && s.solution.coeff(j) == p.init[j] / fact;
        }
    }
    let closed = |g: f64, rhs: f64, init: f64, exact: &dyn Fn(usize) -> f64| -> Result<f64> {
        let p = OdeProblem::new(vec![FunctionSpec::constant(c(g))], AnalyticFn::from_real(&[rhs]), vec![c(init)], 1.0)?;
        let s = ode::solve_neumann(&p, DEFAULT_MAX_ITER, DEFAULT_TOL)?.solution;
        Ok((0..=p.working_cap).map(|k| (s.coeff(k) - c(exact(k))).norm()).fold(0.0, f64::max))
    };
    let fact = |k: usize| (1..=k).map(|j| j as f64).product::<f64>();
    let decay = closed(0.1, 0.0, 1.0, &|k| (-0.1f64).powi(k as i32) / fact(k))?;
    let rise = closed(1.0, 1.0, 0.0, &|k| if k == 0 { 0.0 } else { -(-1.0f64).powi(k as i32) / fact(k) })?;
    Ok(vec![
        Assertion::at_most("solver agreement to degree 64", agreement, 1e-10),
        Assertion::at_most("Neumann residual", residual, 1e-9),
        Assertion::holds("initial jets exact", jets),
        Assertion::at_most("exp(-z/10) coefficient error", decay, 1e-10),
        Assertion::at_most("1 - exp(-z) coefficient error", rise, 1e-10),
    ])
}
