//! Boundedness and compactness criteria for `I_g^{n,k}` from `B^α` to `B^β`,
//! operator-norm probes with test functions, and consistency checks for
//! operators built from several components.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::{self, complex_pair, weight, BlochParams, DiskFunction, NormEstimate, ALPHA_ONE_TOL};
use crate::error::{Error, Result};
use crate::funcspec::FunctionSpec;
use crate::grid::{profile_gaps, profile_values, weighted_sup, DiskGrid, ProfilePoint, VerdictThresholds};
use crate::operators::{self, terms_output_derivative, GenTerm, OperatorSpec};
use crate::testfns::FamilyKind;

/// Probe path used when none is given.
pub const DEFAULT_PROBE_PATH: [f64; 8] = [0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9];

/// Probe path for consistency checks; reaches closer to the boundary.
pub const DEFAULT_RIGIDITY_PATH: [f64; 8] = [0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.98, 0.99];

/// Which weight the criterion uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `k ≥ 1`, or `k = 0` with `α > 1`: `(1-|z|^2)^{n-k+β-α}`.
    Power,
    /// `k = 0`, `α = 1`: `(1-|z|^2)^{n+β-1} log(2/(1-|z|^2))`.
    Logarithmic,
    /// `k = 0`, `0 < α < 1`: `(1-|z|^2)^{n+β-1}`; boundedness and
    /// compactness coincide.
    SmallAlpha,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionParams {
    pub alpha: f64,
    pub beta: f64,
    pub n: usize,
    pub k: usize,
}

impl CriterionParams {
    pub fn new(alpha: f64, beta: f64, n: usize, k: usize) -> Result<Self> {
        BlochParams::new(alpha)?;
        BlochParams::new(beta)?;
        if n == 0 || k >= n {
            return Err(Error::Precondition(format!("need 0 <= k < n, got n = {n}, k = {k}")));
        }
        Ok(Self { alpha, beta, n, k })
    }

    pub fn branch(&self) -> Branch {
        if self.k >= 1 || self.alpha > 1.0 + ALPHA_ONE_TOL {
            Branch::Power
        } else if (self.alpha - 1.0).abs() <= ALPHA_ONE_TOL {
            Branch::Logarithmic
        } else {
            Branch::SmallAlpha
        }
    }

    /// Power of `(1-|z|^2)` in the weight.
    pub fn exponent(&self) -> f64 {
        let (n, k) = (self.n as f64, self.k as f64);
        match self.branch() {
            Branch::Power => n - k + self.beta - self.alpha,
            Branch::Logarithmic | Branch::SmallAlpha => n + self.beta - 1.0,
        }
    }

    fn weight(&self, z: Complex64) -> f64 {
        let w = weight(z, self.exponent());
        match self.branch() {
            Branch::Logarithmic => w * (2.0 / (1.0 - z.norm_sqr())).ln(),
            _ => w,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub branch: Branch,
    pub exponent: f64,
    pub constant: f64,
    #[serde(with = "complex_pair")]
    pub argmax: Complex64,
    pub boundary_profile: Vec<ProfilePoint>,
    pub bounded_verdict: bool,
    pub compact_verdict: bool,
}

/// Weighted supremum of `|g|` deciding whether `I_g^{n,k}: B^α → B^β` is
/// bounded, with verdicts read off the boundary profile.
pub fn criterion(g: &FunctionSpec, params: CriterionParams, grid: &DiskGrid) -> Result<CriterionReport> {
    criterion_with(g, params, grid, VerdictThresholds::default())
}

pub fn criterion_with(
    g: &FunctionSpec,
    params: CriterionParams,
    grid: &DiskGrid,
    thresholds: VerdictThresholds,
) -> Result<CriterionReport> {
    let params = CriterionParams::new(params.alpha, params.beta, params.n, params.k)?;
    g.validate()?;
    let sup = weighted_sup(grid, |z| Ok(params.weight(z) * g.eval(z)?.norm()))?;
    let values = profile_values(&sup.profile);
    let bounded = !thresholds.blows_up(&values);
    let branch = params.branch();
    let compact = match branch {
        Branch::SmallAlpha => bounded,
        _ => bounded && thresholds.decays_toward(&profile_gaps(&sup.profile), &values),
    };
    Ok(CriterionReport {
        branch,
        exponent: params.exponent(),
        constant: sup.value,
        argmax: sup.argmax,
        boundary_profile: sup.profile,
        bounded_verdict: bounded,
        compact_verdict: compact,
    })
}

/// How probe norms are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeMethod {
    /// Derivatives of the output from closed forms; exact at every radius.
    #[default]
    ClosedForm,
    /// Expand the probe to a truncated series and apply the operator to it.
    Taylor,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub alpha: f64,
    pub beta: f64,
    pub family: FamilyKind,
    pub method: ProbeMethod,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    #[serde(with = "complex_pair")]
    pub w: Complex64,
    pub input_norm: f64,
    pub output_norm: f64,
    /// `‖op f_w‖_β / ‖f_w‖_α`.
    pub ratio: f64,
    pub reliable: bool,
    /// Whether the output's own boundary profile blows up.
    pub output_blows_up: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeTable {
    pub config: ProbeConfig,
    pub rows: Vec<ProbeRow>,
    /// No blow-up along the path and no output leaving `B^β`.
    pub bounded: bool,
    /// Ratios decay along the path, judged against `1 - |w|^2`.
    pub decaying: bool,
}

impl ProbeTable {
    pub fn ratios(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.ratio).collect()
    }

    pub fn max_ratio(&self) -> f64 {
        self.rows.iter().map(|r| r.ratio).fold(0.0, f64::max)
    }

    /// `w_re,w_im,ratio,reliable` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("w_re,w_im,ratio,reliable\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.w.re, r.w.im, r.ratio, r.reliable));
        }
        out
    }
}

/// `op f` seen through closed-form derivatives.
struct ClosedOutput<'a> {
    terms: Vec<GenTerm>,
    f: &'a FunctionSpec,
}

impl DiskFunction for ClosedOutput<'_> {
    fn deriv_at(&self, z: Complex64, order: usize) -> Result<Complex64> {
        terms_output_derivative(&self.terms, self.f, z, order)
    }
}

/// Order of the derivative characterisation used for outputs of `op`.
fn output_order(op: &OperatorSpec) -> usize {
    op.integration_order().max(1)
}

fn norm_of_order<F: DiskFunction + ?Sized>(f: &F, beta: f64, order: usize, grid: &DiskGrid) -> Result<NormEstimate> {
    let p = BlochParams::new(beta)?;
    if order <= 1 {
        bloch::norm(f, p, grid)
    } else {
        bloch::norm_via_derivatives(f, p, order - 1, grid)
    }
}

/// `‖op f‖_β` via the characterisation
/// `Σ_{j<N} |(op f)^(j)(0)| + sup (1-|z|^2)^{β+N-1} |(op f)^(N)|`, where `N`
/// is the largest integration order of `op` (at least 1).
pub fn output_norm(op: &OperatorSpec, f: &FunctionSpec, beta: f64, grid: &DiskGrid) -> Result<NormEstimate> {
    op.validate()?;
    let view = ClosedOutput { terms: op.terms(), f };
    norm_of_order(&view, beta, output_order(op), grid)
}

/// Series cap used by [`ProbeMethod::Taylor`] for a probe centred at `w`.
pub fn taylor_probe_cap(w: Complex64) -> usize {
    let r = w.norm();
    if r <= 0.9 {
        512
    } else if r <= 0.95 {
        1024
    } else {
        2048
    }
}

fn probe_row(
    op: &OperatorSpec,
    cfg: &ProbeConfig,
    w: Complex64,
    grid: &DiskGrid,
    thresholds: VerdictThresholds,
) -> Result<ProbeRow> {
    let probe = cfg.family.at(w, cfg.alpha)?.spec();
    let input = bloch::norm(&probe, BlochParams::new(cfg.alpha)?, grid)?;
    let out = match cfg.method {
        ProbeMethod::ClosedForm => output_norm(op, &probe, cfg.beta, grid)?,
        ProbeMethod::Taylor => {
            let series = probe.to_taylor(taylor_probe_cap(w))?;
            let image = operators::apply(op, &series)?;
            norm_of_order(&image, cfg.beta, output_order(op), grid)?
        }
    };
    let ratio = if input.value == 0.0 { 0.0 } else { out.value / input.value };
    Ok(ProbeRow {
        w,
        input_norm: input.value,
        output_norm: out.value,
        ratio,
        reliable: out.reliable,
        output_blows_up: thresholds.blows_up(&profile_values(&out.boundary_profile)),
    })
}

/// Ratios `‖op f_w‖_β / ‖f_w‖_α` along `w_path` for the chosen probe family.
pub fn opnorm_probe(op: &OperatorSpec, cfg: ProbeConfig, w_path: &[Complex64], grid: &DiskGrid) -> Result<ProbeTable> {
    opnorm_probe_with(op, cfg, w_path, grid, VerdictThresholds::default())
}

pub fn opnorm_probe_with(
    op: &OperatorSpec,
    cfg: ProbeConfig,
    w_path: &[Complex64],
    grid: &DiskGrid,
    thresholds: VerdictThresholds,
) -> Result<ProbeTable> {
    op.validate()?;
    BlochParams::new(cfg.alpha)?;
    BlochParams::new(cfg.beta)?;
    let rows: Vec<ProbeRow> =
        w_path.par_iter().map(|&w| probe_row(op, &cfg, w, grid, thresholds)).collect::<Result<_>>()?;
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let bounded = !thresholds.blows_up(&ratios) && !rows.iter().any(|r| r.output_blows_up);
    let gaps: Vec<f64> = w_path.iter().map(|w| 1.0 - w.norm_sqr()).collect();
    let decaying = bounded && thresholds.decays_toward(&gaps, &ratios);
    Ok(ProbeTable { config: cfg, rows, bounded, decaying })
}

pub fn real_path(values: &[f64]) -> Vec<Complex64> {
    values.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentVerdict {
    pub n: usize,
    pub k: usize,
    pub report: CriterionReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub components: Vec<ComponentVerdict>,
    pub probes: Vec<ProbeTable>,
    pub components_bounded: bool,
    pub components_compact: bool,
    pub sum_bounded: bool,
    pub sum_compact: bool,
    pub consistent: bool,
    pub disagreements: Vec<String>,
}

/// Compares the verdicts for a vector-symbol or sum operator with the verdicts
/// of its components.
///
/// Components are judged by their criterion; the whole operator is judged only
/// by probing it with `q_w^[i]`, `i < N`, along `w_path`.
pub fn rigidity_check(
    op: &OperatorSpec,
    alpha: f64,
    beta: f64,
    grid: &DiskGrid,
    w_path: &[Complex64],
) -> Result<RigidityReport> {
    match op {
        OperatorSpec::Vector { .. } | OperatorSpec::SumGen { .. } => op.validate()?,
        _ => return Err(Error::Precondition("consistency check needs a vector or sum operator".into())),
    }
    let components = op
        .terms()
        .into_iter()
        .map(|t| {
            let params = CriterionParams::new(alpha, beta, t.n, t.k)?;
            Ok(ComponentVerdict { n: t.n, k: t.k, report: criterion(&t.g, params, grid)? })
        })
        .collect::<Result<Vec<_>>>()?;
    let probes = (0..op.integration_order())
        .map(|i| {
            let cfg = ProbeConfig { alpha, beta, family: FamilyKind::Qw { i }, method: ProbeMethod::ClosedForm };
            opnorm_probe(op, cfg, w_path, grid)
        })
        .collect::<Result<Vec<_>>>()?;

    let components_bounded = components.iter().all(|c| c.report.bounded_verdict);
    let components_compact = components.iter().all(|c| c.report.compact_verdict);
    let sum_bounded = probes.iter().all(|p| p.bounded);
    let sum_compact = probes.iter().all(|p| p.decaying);
    let mut disagreements = Vec::new();
    if sum_bounded != components_bounded {
        disagreements.push(format!(
            "boundedness: whole operator {sum_bounded}, components {components_bounded}"
        ));
    }
    if sum_compact != components_compact {
        disagreements.push(format!(
            "compactness: whole operator {sum_compact}, components {components_compact}"
        ));
    }
    Ok(RigidityReport {
        components,
        probes,
        components_bounded,
        components_compact,
        sum_bounded,
        sum_compact,
        consistent: disagreements.is_empty(),
        disagreements,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    /// `β - α + 1`.
    pub sigma: f64,
    pub norm: NormEstimate,
    pub member: bool,
    /// Criteria of `I_{g^(n-k)}^{n,k}` for `k = 0..n-1`.
    pub criteria: Vec<CriterionReport>,
    pub all_bounded: bool,
    pub consistent: bool,
}

/// For `α > 1`: every `I_{g^(n-k)}^{n,k}` is bounded exactly when
/// `g ∈ B^{β-α+1}`. Computes both sides.
pub fn symbol_membership(g: &FunctionSpec, alpha: f64, beta: f64, n: usize, grid: &DiskGrid) -> Result<MembershipReport> {
    if alpha.is_nan() || alpha <= 1.0 {
        return Err(Error::Precondition(format!("alpha = {alpha} must exceed 1")));
    }
    let sigma = beta - alpha + 1.0;
    let p = BlochParams::new(sigma)?;
    let norm = bloch::norm(g, p, grid)?;
    let member = !VerdictThresholds::default().blows_up(&profile_values(&norm.boundary_profile));
    let criteria = (0..n)
        .map(|k| criterion(&g.clone().derivative(n - k), CriterionParams::new(alpha, beta, n, k)?, grid))
        .collect::<Result<Vec<_>>>()?;
    let all_bounded = criteria.iter().all(|c| c.bounded_verdict);
    Ok(MembershipReport { sigma, norm, member, criteria, all_bounded, consistent: member == all_bounded })
}
