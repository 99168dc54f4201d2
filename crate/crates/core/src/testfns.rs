//! Test-function families used to probe operator norms from below.
//!
//! For `w` in the disk and `i ≥ 0`:
//!
//! * `f_w^[i](z) = z^i / (1 - conj(w) z)^{α+i}` has α-Bloch norm comparable to
//!   `(1-|w|^2)^{-(i+1)}`;
//! * `q_w^[i] = (1-|w|^2)^{i+1} f_w^[i]` is therefore uniformly bounded and
//!   tends to zero on compact sets as `|w| → 1`;
//! * `h_w(z) = log(2/(1 - conj(w) z))` is uniformly bounded in the Bloch space;
//! * `u_w = h_w^2 / log(2/(1-|w|^2))` is uniformly bounded and tends to zero
//!   on compact sets.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::{norm, BlochParams};
use crate::error::{Error, Result};
use crate::funcspec::FunctionSpec;
use crate::grid::DiskGrid;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TestFamily {
    Fw { i: usize, w: Complex64, alpha: f64 },
    Qw { i: usize, w: Complex64, alpha: f64 },
    Hw { w: Complex64 },
    Uw { w: Complex64 },
}

fn check_w(w: Complex64) -> Result<()> {
    if w.is_finite() && w.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("test-function parameter |w| = {} must be < 1", w.norm())))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("alpha = {alpha} must be positive")))
    }
}

impl TestFamily {
    pub fn fw(i: usize, w: Complex64, alpha: f64) -> Result<Self> {
        check_w(w)?;
        check_alpha(alpha)?;
        Ok(TestFamily::Fw { i, w, alpha })
    }

    pub fn qw(i: usize, w: Complex64, alpha: f64) -> Result<Self> {
        check_w(w)?;
        check_alpha(alpha)?;
        Ok(TestFamily::Qw { i, w, alpha })
    }

    pub fn hw(w: Complex64) -> Result<Self> {
        check_w(w)?;
        Ok(TestFamily::Hw { w })
    }

    pub fn uw(w: Complex64) -> Result<Self> {
        check_w(w)?;
        Ok(TestFamily::Uw { w })
    }

    pub fn w(&self) -> Complex64 {
        match *self {
            TestFamily::Fw { w, .. }
            | TestFamily::Qw { w, .. }
            | TestFamily::Hw { w }
            | TestFamily::Uw { w } => w,
        }
    }

    /// The closed form of this test function.
    pub fn spec(&self) -> FunctionSpec {
        match *self {
            TestFamily::Fw { i, w, alpha } => FunctionSpec::BinomialPower { w, s: alpha + i as f64, i },
            TestFamily::Qw { i, w, alpha } => {
                let scale = (1.0 - w.norm_sqr()).powi(i as i32 + 1);
                FunctionSpec::scaled(
                    Complex64::new(scale, 0.0),
                    FunctionSpec::BinomialPower { w, s: alpha + i as f64, i },
                )
            }
            TestFamily::Hw { w } => FunctionSpec::LogKernel { w },
            TestFamily::Uw { w } => {
                let normaliser = (2.0 / (1.0 - w.norm_sqr())).ln();
                FunctionSpec::scaled(Complex64::new(1.0 / normaliser, 0.0), FunctionSpec::LogKernelSq { w })
            }
        }
    }
}

/// Which family a norm sweep walks through.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilyKind {
    Fw { i: usize },
    Qw { i: usize },
    Hw,
    Uw,
}

impl FamilyKind {
    pub fn at(&self, w: Complex64, alpha: f64) -> Result<TestFamily> {
        match *self {
            FamilyKind::Fw { i } => TestFamily::fw(i, w, alpha),
            FamilyKind::Qw { i } => TestFamily::qw(i, w, alpha),
            FamilyKind::Hw => TestFamily::hw(w),
            FamilyKind::Uw => TestFamily::uw(w),
        }
    }

    fn index(&self) -> usize {
        match *self {
            FamilyKind::Fw { i } | FamilyKind::Qw { i } => i,
            FamilyKind::Hw | FamilyKind::Uw => 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub w: Complex64,
    pub i: usize,
    pub alpha: f64,
    pub norm: f64,
    /// `norm · (1-|w|^2)^{i+1}` for `f_w^[i]`, the raw norm otherwise.
    pub normalized_ratio: f64,
}

/// α-Bloch norms of a family along a path of `w` values.
pub fn family_norm_profile(
    kind: FamilyKind,
    alpha: f64,
    w_path: &[Complex64],
    grid: &DiskGrid,
) -> Result<Vec<FamilyRow>> {
    let p = BlochParams::new(alpha)?;
    w_path
        .par_iter()
        .map(|&w| {
            let f = kind.at(w, alpha)?;
            let value = norm(&f.spec(), p, grid)?.value;
            let normalized_ratio = match kind {
                FamilyKind::Fw { i } => value * (1.0 - w.norm_sqr()).powi(i as i32 + 1),
                _ => value,
            };
            Ok(FamilyRow { w, i: kind.index(), alpha, norm: value, normalized_ratio })
        })
        .collect()
}

/// Family rows as CSV with columns `w_re,w_im,i,alpha,norm,normalized_ratio`.
pub fn family_rows_csv(rows: &[FamilyRow]) -> String {
    let mut out = String::from("w_re,w_im,i,alpha,norm,normalized_ratio\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{},{}", r.w.re, r.w.im, r.i, r.alpha, r.norm, r.normalized_ratio);
    }
    out
}

/// `Σ |c_i| ‖f_w^[i]‖ / ‖Σ c_i f_w^[i]‖` in the α-Bloch norm.
///
/// The combination of kernels with distinct monomial prefactors cannot cancel
/// the dominant singular behaviour, so this stays bounded as `|w| → 1`.
pub fn separation_ratio(c: &[Complex64], alpha: f64, w: Complex64, grid: &DiskGrid) -> Result<f64> {
    if c.is_empty() || c.len() > 4 {
        return Err(Error::Precondition(format!("need 1 to 4 coefficients, got {}", c.len())));
    }
    if c.iter().any(|ci| *ci == Complex64::new(0.0, 0.0)) {
        return Err(Error::Precondition("all coefficients must be non-zero".into()));
    }
    if w.norm() <= 0.5 {
        return Err(Error::Precondition(format!("|w| = {} must exceed 1/2", w.norm())));
    }
    let p = BlochParams::new(alpha)?;
    let members: Vec<FunctionSpec> =
        (0..c.len()).map(|i| Ok(TestFamily::fw(i, w, alpha)?.spec())).collect::<Result<_>>()?;
    let numerator = members
        .iter()
        .zip(c)
        .map(|(f, ci)| Ok(ci.norm() * norm(f, p, grid)?.value))
        .sum::<Result<f64>>()?;
    let combo = FunctionSpec::sum(
        members.into_iter().zip(c).map(|(f, ci)| FunctionSpec::scaled(*ci, f)).collect(),
    );
    let denominator = norm(&combo, p, grid)?.value;
    Ok(numerator / denominator)
}
