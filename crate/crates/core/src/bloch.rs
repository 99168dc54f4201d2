//! Bloch-type norms.
//!
//! For `α > 0` the α-Bloch seminorm is `sup (1-|z|^2)^α |f'(z)|` and the norm
//! adds `|f(0)|`. The same space is described by higher derivatives: for every
//! `n ≥ 1`, `Σ_{j≤n} |f^(j)(0)| + sup (1-|z|^2)^{α+n} |f^(n+1)(z)|` is an
//! equivalent norm. Both are estimated here on a [`DiskGrid`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspec::FunctionSpec;
use crate::grid::{profile_gaps, profile_values, weighted_sup, DiskGrid, ProfilePoint, VerdictThresholds};
use crate::taylor::AnalyticFn;

/// Tolerance used to decide that `α` equals 1.
pub const ALPHA_ONE_TOL: f64 = 1e-12;

/// Anything that can report derivatives at points of the disk.
pub trait DiskFunction: Sync {
    fn deriv_at(&self, z: Complex64, order: usize) -> Result<Complex64>;

    /// Radius within which values are trustworthy.
    fn reliable_radius(&self) -> f64 {
        1.0
    }
}

impl DiskFunction for AnalyticFn {
    fn deriv_at(&self, z: Complex64, order: usize) -> Result<Complex64> {
        self.eval_deriv(z, order)
    }

    fn reliable_radius(&self) -> f64 {
        self.reliability_radius()
    }
}

impl DiskFunction for FunctionSpec {
    fn deriv_at(&self, z: Complex64, order: usize) -> Result<Complex64> {
        self.eval_deriv(z, order)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochParams {
    alpha: f64,
}

impl BlochParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 {
            Ok(Self { alpha })
        } else {
            Err(Error::Precondition(format!("alpha = {alpha} must be positive")))
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    #[serde(with = "complex_pair")]
    pub argmax: Complex64,
    pub boundary_profile: Vec<ProfilePoint>,
    pub reliable: bool,
}

impl NormEstimate {
    /// The profile as `radius,sup` CSV lines with a header.
    pub fn profile_csv(&self) -> String {
        let mut out = String::from("radius,sup\n");
        for p in &self.boundary_profile {
            out.push_str(&format!("{},{}\n", p.radius, p.sup));
        }
        out
    }
}

pub(crate) mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

pub(crate) fn weight(z: Complex64, power: f64) -> f64 {
    (1.0 - z.norm_sqr()).powf(power)
}

fn estimate<F: DiskFunction + ?Sized>(
    f: &F,
    grid: &DiskGrid,
    offset: f64,
    power: f64,
    order: usize,
) -> Result<NormEstimate> {
    let sup = weighted_sup(grid, |z| Ok(weight(z, power) * f.deriv_at(z, order)?.norm()))?;
    Ok(NormEstimate {
        value: offset + sup.value,
        argmax: sup.argmax,
        boundary_profile: sup
            .profile
            .into_iter()
            .map(|p| ProfilePoint { radius: p.radius, sup: offset + p.sup })
            .collect(),
        reliable: f.reliable_radius() >= grid.r_cap(),
    })
}

/// `sup (1-|z|^2)^α |f'(z)|` over the grid.
pub fn seminorm<F: DiskFunction + ?Sized>(f: &F, p: BlochParams, grid: &DiskGrid) -> Result<NormEstimate> {
    estimate(f, grid, 0.0, p.alpha, 1)
}

/// `|f(0)| + seminorm`.
pub fn norm<F: DiskFunction + ?Sized>(f: &F, p: BlochParams, grid: &DiskGrid) -> Result<NormEstimate> {
    let f0 = f.deriv_at(Complex64::new(0.0, 0.0), 0)?.norm();
    estimate(f, grid, f0, p.alpha, 1)
}

/// `Σ_{j≤n} |f^(j)(0)| + sup (1-|z|^2)^{α+n} |f^(n+1)(z)|`.
pub fn norm_via_derivatives<F: DiskFunction + ?Sized>(
    f: &F,
    p: BlochParams,
    n: usize,
    grid: &DiskGrid,
) -> Result<NormEstimate> {
    if n == 0 {
        return Err(Error::Precondition("derivative characterisation needs n >= 1".into()));
    }
    let origin = Complex64::new(0.0, 0.0);
    let jet = (0..=n).map(|j| Ok(f.deriv_at(origin, j)?.norm())).sum::<Result<f64>>()?;
    estimate(f, grid, jet, p.alpha + n as f64, n + 1)
}

/// Which growth envelope applies to an α-Bloch function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthBranch {
    /// `0 < α < 1`: bounded.
    Bounded,
    /// `α = 1`: `log(2/(1-|z|^2))`.
    Logarithmic,
    /// `α > 1`: `(1-|z|^2)^{1-α}`.
    Power,
}

impl GrowthBranch {
    pub fn for_alpha(alpha: f64) -> Self {
        if (alpha - 1.0).abs() <= ALPHA_ONE_TOL {
            GrowthBranch::Logarithmic
        } else if alpha < 1.0 {
            GrowthBranch::Bounded
        } else {
            GrowthBranch::Power
        }
    }

    pub fn envelope(&self, alpha: f64, z: Complex64) -> f64 {
        let d = 1.0 - z.norm_sqr();
        match self {
            GrowthBranch::Bounded => 1.0,
            GrowthBranch::Logarithmic => (2.0 / d).ln(),
            GrowthBranch::Power => d.powf(1.0 - alpha),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub branch: GrowthBranch,
    /// `sup |f(z)| / (|f(0)| + b_α(f) G(z))`.
    pub constant: f64,
    #[serde(with = "complex_pair")]
    pub argmax: Complex64,
    pub seminorm: f64,
}

/// Empirical constant in the pointwise growth bound for α-Bloch functions.
pub fn growth_bound_check<F: DiskFunction + ?Sized>(
    f: &F,
    p: BlochParams,
    grid: &DiskGrid,
) -> Result<GrowthReport> {
    let branch = GrowthBranch::for_alpha(p.alpha);
    let b = seminorm(f, p, grid)?.value;
    let f0 = f.deriv_at(Complex64::new(0.0, 0.0), 0)?.norm();
    let sup = weighted_sup(grid, |z| {
        let env = f0 + b * branch.envelope(p.alpha, z);
        let v = f.deriv_at(z, 0)?.norm();
        Ok(if env == 0.0 { 0.0 } else { v / env })
    })?;
    Ok(GrowthReport { branch, constant: sup.value, argmax: sup.argmax, seminorm: b })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub boundary_profile: Vec<ProfilePoint>,
    pub global_sup: f64,
    pub decaying: bool,
}

/// Boundary behaviour of `(1-|z|^2)^α |f'(z)|`: whether it looks like it
/// tends to zero, i.e. whether `f` is in the little Bloch space.
pub fn little_bloch_indicator<F: DiskFunction + ?Sized>(
    f: &F,
    p: BlochParams,
    grid: &DiskGrid,
) -> Result<DecayReport> {
    let est = seminorm(f, p, grid)?;
    let decaying = VerdictThresholds::default()
        .decays_toward(&profile_gaps(&est.boundary_profile), &profile_values(&est.boundary_profile));
    Ok(DecayReport { boundary_profile: est.boundary_profile, global_sup: est.value, decaying })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfns::TestFamily;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn p(alpha: f64) -> BlochParams {
        BlochParams::new(alpha).unwrap()
    }

    #[test]
    fn seminorm_examples() {
        let grid = DiskGrid::default();
        let z = FunctionSpec::poly_real(&[0.0, 1.0]);
        let est = seminorm(&z, p(1.0), &grid).unwrap();
        assert!((est.value - 1.0).abs() < 1e-15);
        assert_eq!(est.argmax, c(0.0));

        // oracle: max of 2r(1-r^2) by fine 1-D scan
        let oracle = (0..=1_000_000)
            .map(|j| {
                let r = j as f64 / 1_000_000.0;
                2.0 * r * (1.0 - r * r)
            })
            .fold(0.0, f64::max);
        let z2 = FunctionSpec::poly_real(&[0.0, 0.0, 1.0]);
        let est = seminorm(&z2, p(1.0), &grid).unwrap();
        assert!((est.value - oracle).abs() < 1e-9);
        assert!((est.value - 4.0 / (3.0 * 3f64.sqrt())).abs() < 1e-9);

        let fw = TestFamily::fw(0, c(0.8), 1.0).unwrap().spec();
        let est = seminorm(&fw, p(1.0), &grid).unwrap();
        assert!(est.value >= 0.8 / 0.36 - 1e-12);
        assert!(est.reliable);
    }

    #[test]
    fn norm_examples() {
        let grid = DiskGrid::default();
        let five = FunctionSpec::poly_real(&[5.0]);
        for alpha in [0.5, 1.0, 3.0] {
            assert_eq!(norm(&five, p(alpha), &grid).unwrap().value, 5.0);
        }
        let z = FunctionSpec::poly_real(&[0.0, 1.0]);
        assert!((norm(&z, p(1.0), &grid).unwrap().value - 1.0).abs() < 1e-15);
        let fw = TestFamily::fw(0, c(0.8), 1.0).unwrap().spec();
        let ratio = norm(&fw, p(1.0), &grid).unwrap().value * (1.0 - 0.64);
        assert!(ratio > 0.5 && ratio < 2.0, "ratio {ratio}");
    }

    #[test]
    fn norm_via_derivative_examples() {
        let grid = DiskGrid::default();
        let z = FunctionSpec::poly_real(&[0.0, 1.0]);
        assert!((norm_via_derivatives(&z, p(1.0), 1, &grid).unwrap().value - 1.0).abs() < 1e-15);
        let z2 = FunctionSpec::poly_real(&[0.0, 0.0, 1.0]);
        let est = norm_via_derivatives(&z2, p(1.0), 1, &grid).unwrap();
        assert!((est.value - 2.0).abs() < 1e-15);
        assert_eq!(est.argmax, c(0.0));
        assert!(norm_via_derivatives(&z2, p(1.0), 0, &grid).is_err());
    }

    #[test]
    fn series_inputs_carry_reliability() {
        let grid = DiskGrid::default();
        let fw = TestFamily::fw(0, c(0.9), 1.0).unwrap().spec();
        let short = fw.to_taylor(64).unwrap();
        assert!(!seminorm(&short, p(1.0), &grid).unwrap().reliable);
        let long = fw.to_taylor(512).unwrap();
        let est = seminorm(&long, p(1.0), &grid).unwrap();
        assert!(est.reliable);
        let exact = seminorm(&fw, p(1.0), &grid).unwrap();
        assert!((est.value - exact.value).abs() < 1e-8 * exact.value);
    }

    #[test]
    fn growth_bound_examples() {
        let grid = DiskGrid::default();
        let konst = FunctionSpec::poly_real(&[3.0]);
        for alpha in [0.5, 1.0, 2.0] {
            let r = growth_bound_check(&konst, p(alpha), &grid).unwrap();
            assert!((r.constant - 1.0).abs() < 1e-15);
        }
        let z = FunctionSpec::poly_real(&[0.0, 1.0]);
        let r = growth_bound_check(&z, p(2.0), &grid).unwrap();
        assert_eq!(r.branch, GrowthBranch::Power);
        assert!(r.constant.is_finite() && r.constant <= 1.0);
        let hw = TestFamily::hw(c(0.9)).unwrap().spec();
        let r = growth_bound_check(&hw, p(1.0), &grid).unwrap();
        assert_eq!(r.branch, GrowthBranch::Logarithmic);
        assert!(r.constant < 2.0, "constant {}", r.constant);
        let zero = FunctionSpec::zero();
        assert_eq!(growth_bound_check(&zero, p(1.0), &grid).unwrap().constant, 0.0);
    }

    #[test]
    fn branch_selection() {
        assert_eq!(GrowthBranch::for_alpha(1.0 + 1e-13), GrowthBranch::Logarithmic);
        assert_eq!(GrowthBranch::for_alpha(0.999), GrowthBranch::Bounded);
        assert_eq!(GrowthBranch::for_alpha(1.001), GrowthBranch::Power);
    }

    #[test]
    fn little_bloch_examples() {
        let grid = DiskGrid::default();
        for alpha in [1.0, 2.0] {
            let poly = FunctionSpec::poly_real(&[1.0, -0.5, 0.25]);
            assert!(little_bloch_indicator(&poly, p(alpha), &grid).unwrap().decaying);
        }
        let konst = FunctionSpec::poly_real(&[2.0]);
        let r = little_bloch_indicator(&konst, p(0.5), &grid).unwrap();
        assert!(r.decaying && r.global_sup == 0.0);
        // f_w^[0] with w on the circle is (1-z)^{-α}: weighted derivative
        // grows like (1-r)^{-1}, so it is not in the little space
        let pole = FunctionSpec::boundary_pole(1.0).unwrap();
        assert!(!little_bloch_indicator(&pole, p(1.0), &grid).unwrap().decaying);
    }

    #[test]
    fn homogeneity_and_triangle() {
        let grid = DiskGrid::default();
        let f = TestFamily::fw(1, Complex64::new(0.6, 0.3), 1.5).unwrap().spec();
        let g = FunctionSpec::log_kernel(Complex64::new(-0.5, 0.2)).unwrap();
        let cst = Complex64::new(-1.5, 2.0);
        let base = seminorm(&f, p(1.5), &grid).unwrap().value;
        let scaled = seminorm(&FunctionSpec::scaled(cst, f.clone()), p(1.5), &grid).unwrap().value;
        assert!((scaled - cst.norm() * base).abs() <= 1e-12 * scaled);
        let sum = seminorm(&FunctionSpec::sum(vec![f.clone(), g.clone()]), p(1.5), &grid).unwrap().value;
        let sg = seminorm(&g, p(1.5), &grid).unwrap().value;
        assert!(sum <= base + sg + 1e-12);
    }

    #[test]
    fn refining_grid_never_decreases() {
        let grid = DiskGrid::geometric(0.99, 1, 16).unwrap();
        let finer = grid.refined();
        for spec in [
            TestFamily::fw(2, c(0.7), 1.0).unwrap().spec(),
            FunctionSpec::poly(vec![c(1.0), Complex64::new(0.0, 2.0), c(-1.0), c(0.5)]),
            TestFamily::uw(Complex64::new(0.3, 0.6)).unwrap().spec(),
        ] {
            let coarse = seminorm(&spec, p(1.0), &grid).unwrap().value;
            let fine = seminorm(&spec, p(1.0), &finer).unwrap().value;
            assert!(fine >= coarse - 1e-12 * coarse, "{fine} < {coarse}");
        }
    }

    #[test]
    fn estimate_serialises() {
        let est = seminorm(&FunctionSpec::poly_real(&[0.0, 1.0]), p(1.0), &DiskGrid::default()).unwrap();
        let json = serde_json::to_value(&est).unwrap();
        assert_eq!(json["argmax"], serde_json::json!([0.0, 0.0]));
        assert!(est.profile_csv().starts_with("radius,sup\n0,1\n"));
    }
}
