//! Acceptance criteria. One PASS/FAIL line per criterion; exits non-zero if
//! any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bloch_volterra::criteria::{
    criterion, opnorm_probe, real_path, rigidity_check, CriterionParams, ProbeConfig, ProbeMethod, DEFAULT_PROBE_PATH,
    DEFAULT_RIGIDITY_PATH,
};
use bloch_volterra::ode::{self, OdeProblem, DEFAULT_MAX_ITER, DEFAULT_TOL};
use bloch_volterra::testfns::separation_ratio;
use bloch_volterra::verify::{self, ode_battery, rigidity_battery, TWO_SIDED_CONFIGS};
use bloch_volterra::{bloch, operators, AnalyticFn, BlochParams, DiskGrid, FamilyKind, FunctionSpec, OperatorSpec, TestFamily};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

struct Outcome {
    passed: bool,
    detail: String,
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn random_poly(rng: &mut ChaCha8Rng, max_degree: usize) -> Vec<Complex64> {
    let d = rng.gen_range(0..=max_degree);
    (0..=d).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

/// Largest coefficient gap relative to the largest coefficient of either side.
fn rel_dev(a: &AnalyticFn, b: &AnalyticFn) -> f64 {
    let len = a.coeffs().len().max(b.coeffs().len());
    let mut gap: f64 = 0.0;
    let mut scale: f64 = 1e-300;
    for j in 0..len {
        let (x, y) = (a.coeff(j), b.coeff(j));
        gap = gap.max((x - y).norm());
        scale = scale.max(x.norm()).max(y.norm());
    }
    gap / scale
}

fn spread(v: &[f64]) -> f64 {
    let hi = v.iter().copied().fold(f64::MIN, f64::max);
    let lo = v.iter().copied().fold(f64::MAX, f64::min);
    hi / lo
}

fn timed(limit: Duration, body: impl FnOnce() -> Result<Outcome, String>) -> Outcome {
    let t = Instant::now();
    let r = body();
    let took = t.elapsed();
    match r {
        Ok(mut o) => {
            if let Some(secs) = (took > limit).then_some(limit.as_secs()) {
                o.passed = false;
                o.detail.push_str(&format!("; over {secs} s budget"));
            }
            o.detail.push_str(&format!("; {:.2} s", took.as_secs_f64()));
            o
        }
        Err(e) => Outcome { passed: false, detail: format!("error: {e}") },
    }
}

fn coefficient_identity() -> Result<Outcome, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=4);
        let k = rng.gen_range(0..n);
        let f = AnalyticFn::polynomial(random_poly(&mut rng, 32)).with_cap(32);
        let g = FunctionSpec::poly(random_poly(&mut rng, 32));
        let (lhs, rhs) = operators::nth_derivative_identity(n, k, &g, &f).map_err(|e| e.to_string())?;
        worst = worst.max(rel_dev(&lhs, &rhs));
    }
    Ok(Outcome { passed: worst <= 1e-12, detail: format!("max relative deviation {worst:.3e} over 200 pairs") })
}

fn leibniz_equivalence() -> Result<Outcome, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let f = AnalyticFn::polynomial(random_poly(&mut rng, 32)).with_cap(32);
        let g = FunctionSpec::poly(random_poly(&mut rng, 32));
        let (lhs, rhs) = operators::leibniz_equivalence(n, &g, &f).map_err(|e| e.to_string())?;
        worst = worst.max(rel_dev(&lhs, &rhs));
    }
    Ok(Outcome { passed: worst <= 1e-12, detail: format!("max relative deviation {worst:.3e} over 100 pairs") })
}

fn test_function_window(grid: &DiskGrid) -> Result<Outcome, String> {
    let ws: Vec<f64> = (0..9).map(|j| 0.55 + 0.05 * j as f64).collect();
    let mut worst: f64 = 0.0;
    for alpha in [0.5, 1.0, 2.0] {
        let p = BlochParams::new(alpha).map_err(|e| e.to_string())?;
        for i in 0..=3 {
            let v = ws
                .iter()
                .map(|&w| {
                    let f = TestFamily::fw(i, c(w), alpha)?.spec();
                    Ok(bloch::norm(&f, p, grid)?.value * (1.0 - w * w).powi(i as i32 + 1))
                })
                .collect::<bloch_volterra::Result<Vec<f64>>>()
                .map_err(|e| e.to_string())?;
            worst = worst.max(spread(&v));
        }
    }
    Ok(Outcome { passed: worst <= 100.0, detail: format!("worst max/min {worst:.3} (limit 100)") })
}

fn separation_stability(grid: &DiskGrid) -> Result<Outcome, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let inner = real_path(&[0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9]);
    let mut trend: f64 = 0.0;
    let mut lowest = f64::MAX;
    for _ in 0..20 {
        let n = rng.gen_range(0..=3);
        let coeffs: Vec<Complex64> = (0..=n)
            .map(|_| loop {
                let z = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                if z.norm() > 1e-3 {
                    break z;
                }
            })
            .collect();
        for alpha in [1.0, 2.0] {
            let mut r = inner
                .iter()
                .map(|&w| separation_ratio(&coeffs, alpha, w, grid))
                .collect::<bloch_volterra::Result<Vec<f64>>>()
                .map_err(|e| e.to_string())?;
            let edge = separation_ratio(&coeffs, alpha, c(0.95), grid).map_err(|e| e.to_string())?;
            lowest = r.iter().copied().fold(lowest, f64::min).min(edge);
            r.sort_by(f64::total_cmp);
            let median = 0.5 * (r[3] + r[4]);
            trend = trend.max(edge / median);
        }
    }
    Ok(Outcome {
        passed: trend <= 3.0 && lowest >= 1.0 - 1e-6,
        detail: format!("worst edge/median {trend:.3} (limit 3), smallest ratio {lowest:.6}"),
    })
}

fn two_sided(grid: &DiskGrid) -> Result<Outcome, String> {
    let run = || -> bloch_volterra::Result<(f64, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
        let polys: Vec<FunctionSpec> = (0..10)
            .map(|_| {
                let d = rng.gen_range(0..=4);
                FunctionSpec::poly_real(&(0..=d).map(|_| rng.gen_range(0.1..2.0)).collect::<Vec<_>>())
            })
            .collect();
        let path = real_path(&DEFAULT_PROBE_PATH);
        let mut quotients = Vec::new();
        let mut growth = f64::MAX;
        for &(alpha, beta, n, k) in &TWO_SIDED_CONFIGS {
            let params = CriterionParams::new(alpha, beta, n, k)?;
            let cfg = ProbeConfig { alpha, beta, family: FamilyKind::Fw { i: k }, method: ProbeMethod::ClosedForm };
            for g in &polys {
                let constant = criterion(g, params, grid)?.constant;
                let table = opnorm_probe(&OperatorSpec::gen(n, k, g.clone())?, cfg, &path, grid)?;
                quotients.push(table.max_ratio() / constant);
            }
            let pole = FunctionSpec::boundary_pole(params.exponent() + 3.0)?;
            let t = opnorm_probe(&OperatorSpec::gen(n, k, pole)?, cfg, &real_path(&[0.6, 0.9]), grid)?;
            growth = growth.min(t.rows[1].ratio / t.rows[0].ratio);
        }
        Ok((spread(&quotients), growth))
    };
    let (window, growth) = run().map_err(|e| e.to_string())?;
    Ok(Outcome {
        passed: window <= 100.0 && growth > 10.0,
        detail: format!("probe/criterion window {window:.3} (limit 100), weakest pole growth {growth:.2}x (needs > 10)"),
    })
}

fn small_alpha_degeneracy(grid: &DiskGrid) -> Result<Outcome, String> {
    let run = || -> bloch_volterra::Result<(usize, usize)> {
        let mut total = 0;
        let mut same = 0;
        for alpha in [0.2, 0.5, 0.9] {
            for beta in [0.5, 1.0, 1.5, 3.0] {
                for n in 1..=4 {
                    let params = CriterionParams::new(alpha, beta, n, 0)?;
                    let e = params.exponent();
                    let mut battery = vec![
                        FunctionSpec::constant(Complex64::new(0.0, 1.5)),
                        FunctionSpec::poly_real(&[1.0, 2.0, -0.5, 0.1]),
                        FunctionSpec::log_kernel(c(1.0))?,
                        FunctionSpec::log_kernel_sq(Complex64::new(0.0, 1.0))?,
                        FunctionSpec::binomial_power(Complex64::new(0.5, -0.5), 2.0, 2)?,
                    ];
                    for s in [0.25, 0.5 * e, e, e + 0.5, e + 1.0, e + 3.0] {
                        if s > 0.0 {
                            battery.push(FunctionSpec::boundary_pole(s)?);
                        }
                    }
                    for g in &battery {
                        let r = criterion(g, params, grid)?;
                        total += 1;
                        same += usize::from(r.bounded_verdict == r.compact_verdict);
                    }
                }
            }
        }
        Ok((same, total))
    };
    let (same, total) = run().map_err(|e| e.to_string())?;
    Ok(Outcome { passed: same == total, detail: format!("bounded == compact in {same}/{total} inputs") })
}

fn rigidity(grid: &DiskGrid) -> Result<Outcome, String> {
    let run = || -> bloch_volterra::Result<(usize, usize, usize, usize)> {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
        let battery = rigidity_battery(&mut rng, 50)?;
        let path = real_path(&DEFAULT_RIGIDITY_PATH);
        let mut consistent = 0;
        let mut injected = 0;
        let mut caught = 0;
        for (op, alpha, beta, inject) in &battery {
            let r = rigidity_check(op, *alpha, *beta, grid, &path)?;
            consistent += usize::from(r.consistent);
            if *inject {
                injected += 1;
                caught += usize::from(!r.sum_bounded && !r.components_bounded);
            }
        }
        Ok((consistent, battery.len(), injected, caught))
    };
    let (consistent, total, injected, caught) = run().map_err(|e| e.to_string())?;
    Ok(Outcome {
        passed: consistent == total && injected >= 5 && caught == injected,
        detail: format!("consistent {consistent}/{total}, unbounded components injected {injected}, detected {caught}"),
    })
}

fn ode_oracle() -> Result<Outcome, String> {
    let run = || -> bloch_volterra::Result<(f64, f64, bool, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
        let mut agree: f64 = 0.0;
        let mut residual: f64 = 0.0;
        let mut jets = true;
        for p in ode_battery(&mut rng, 50)? {
            let rec = ode::solve_recurrence(&p)?;
            let neu = ode::solve_neumann(&p, DEFAULT_MAX_ITER, DEFAULT_TOL)?;
            for j in 0..=64 {
                agree = agree.max((rec.coeff(j) - neu.solution.coeff(j)).norm());
            }
            residual = residual.max(neu.residual);
            let mut fact = 1.0;
            for j in 0..p.n {
                fact *= j.max(1) as f64;
                let want = p.init[j] / fact;
                jets &= rec.coeff(j) == want && neu.solution.coeff(j) == want;
            }
        }
        // f' + 0.1 f = 0, f(0) = 1 and f' + f = 1, f(0) = 0.
        let mut closed: f64 = 0.0;
        for (g, rhs, init, sign, rate) in [(0.1, 0.0, 1.0, 1.0, 0.1), (1.0, 1.0, 0.0, -1.0, 1.0)] {
            let p = OdeProblem::new(vec![FunctionSpec::constant(c(g))], AnalyticFn::from_real(&[rhs]), vec![c(init)], 1.0)?;
            let s = ode::solve_neumann(&p, DEFAULT_MAX_ITER, DEFAULT_TOL)?.solution;
            let mut term = 1.0;
            for j in 0..=p.working_cap {
                if j > 0 {
                    term *= -rate / j as f64;
                }
                let exact = if sign > 0.0 { term } else if j == 0 { 0.0 } else { -term };
                closed = closed.max((s.coeff(j) - c(exact)).norm());
            }
        }
        Ok((agree, residual, jets, closed))
    };
    let (agree, residual, jets, closed) = run().map_err(|e| e.to_string())?;
    Ok(Outcome {
        passed: agree <= 1e-10 && residual <= 1e-9 && jets && closed <= 1e-10,
        detail: format!(
            "solver gap {agree:.2e}, residual {residual:.2e}, jets exact {jets}, closed-form error {closed:.2e}"
        ),
    })
}

fn full_suite() -> Result<Outcome, String> {
    let a = verify::run_all(verify::DEFAULT_SEED).map_err(|e| e.to_string())?;
    let b = verify::run_all(verify::DEFAULT_SEED).map_err(|e| e.to_string())?;
    let ja = serde_json::to_string(&a).map_err(|e| e.to_string())?;
    let jb = serde_json::to_string(&b).map_err(|e| e.to_string())?;
    let failing: Vec<&str> = a.suites.iter().filter(|s| !s.passed).map(|s| s.suite.as_str()).collect();
    Ok(Outcome {
        passed: a.passed && ja == jb,
        detail: format!("all suites passed {}, repeat byte-identical {}, failing {failing:?}", a.passed, ja == jb),
    })
}

fn main() -> ExitCode {
    let grid = DiskGrid::default();
    let secs = Duration::from_secs;
    let results = [
        ("1 coefficient identity", timed(secs(5), coefficient_identity)),
        ("2 binomial combination equivalence", timed(secs(5), leibniz_equivalence)),
        ("3 test function norm window", timed(secs(60), || test_function_window(&grid))),
        ("4 separation stability", timed(secs(60), || separation_stability(&grid))),
        ("5 two-sided criterion", timed(secs(120), || two_sided(&grid))),
        ("6 small-alpha degeneracy", timed(Duration::MAX, || small_alpha_degeneracy(&grid))),
        ("7 rigidity consistency", timed(secs(120), || rigidity(&grid))),
        ("8 ODE oracle equivalence", timed(secs(30), ode_oracle)),
        // Two full runs, each budgeted 300 s.
        ("9 full verify suite", timed(secs(600), full_suite)),
    ];
    let mut all = true;
    for (name, o) in &results {
        println!("{} criterion {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        all &= o.passed;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
