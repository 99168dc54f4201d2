//! Polar sampling of the disk and weighted supremum estimation.
//!
//! A [`DiskGrid`] is a set of circles `|z| = r_j` with `angular_counts[j]`
//! equally spaced points on each. [`weighted_sup`] evaluates a nonnegative
//! quantity on every point, records the per-annulus maxima as a boundary
//! profile, and then polishes the global maximizer with a compass search in
//! `(r, θ)`.
//!
//! A grid supremum is a lower bound for the true supremum over the disk.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Outermost radius of the default grid.
pub const DEFAULT_R_CAP: f64 = 0.995;
/// Minimum number of points per circle in the default grid.
pub const DEFAULT_ANGULAR_BASE: usize = 64;
/// Circles per halving of the distance to the boundary.
pub const DEFAULT_RADII_PER_OCTAVE: usize = 2;
pub const DEFAULT_REFINE_DEPTH: usize = 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskGrid {
    radii: Vec<f64>,
    angular_counts: Vec<usize>,
    refine_depth: usize,
}

impl Default for DiskGrid {
    fn default() -> Self {
        Self::geometric(DEFAULT_R_CAP, DEFAULT_RADII_PER_OCTAVE, DEFAULT_ANGULAR_BASE)
            .expect("default grid parameters are valid")
    }
}

impl DiskGrid {
    pub fn new(radii: Vec<f64>, angular_counts: Vec<usize>, refine_depth: usize) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::Degenerate("grid has no radii".into()));
        }
        if radii.len() != angular_counts.len() {
            return Err(Error::Degenerate("radii and angular counts differ in length".into()));
        }
        if radii[0] < 0.0 || *radii.last().unwrap() >= 1.0 {
            return Err(Error::Domain("grid radii must lie in [0, 1)".into()));
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Degenerate("grid radii must be strictly increasing".into()));
        }
        if angular_counts.iter().any(|&c| c < 8) {
            return Err(Error::Degenerate("each circle needs at least 8 points".into()));
        }
        Ok(Self { radii, angular_counts, refine_depth })
    }

    /// Radii `1 - (1 - r_cap) 2^{m/per_octave}` for `m = 0, 1, ...` while
    /// positive, plus the centre; `max(angular_base, 8/(1-r))` points per
    /// circle.
    pub fn geometric(r_cap: f64, per_octave: usize, angular_base: usize) -> Result<Self> {
        if !(r_cap > 0.0 && r_cap < 1.0) {
            return Err(Error::Domain(format!("r_cap = {r_cap} must lie in (0, 1)")));
        }
        if per_octave == 0 {
            return Err(Error::Degenerate("need at least one radius per octave".into()));
        }
        let mut radii = vec![0.0];
        let gap = 1.0 - r_cap;
        let mut inner: Vec<f64> = (0..)
            .map(|m| 1.0 - gap * 2f64.powf(m as f64 / per_octave as f64))
            .take_while(|&r| r > 0.0)
            .collect();
        inner.reverse();
        radii.extend(inner);
        let counts = radii
            .iter()
            .map(|&r| angular_base.max((8.0 / (1.0 - r)).ceil() as usize).max(8))
            .collect();
        Self::new(radii, counts, DEFAULT_REFINE_DEPTH)
    }

    pub fn with_refine_depth(mut self, depth: usize) -> Self {
        self.refine_depth = depth;
        self
    }

    /// A grid containing every point of `self`: midpoint circles are inserted
    /// and all angular counts doubled.
    pub fn refined(&self) -> Self {
        let mut radii = Vec::with_capacity(2 * self.radii.len());
        let mut counts = Vec::with_capacity(2 * self.radii.len());
        for j in 0..self.radii.len() {
            if j > 0 {
                radii.push(0.5 * (self.radii[j - 1] + self.radii[j]));
                counts.push(2 * self.angular_counts[j - 1].max(self.angular_counts[j]));
            }
            radii.push(self.radii[j]);
            counts.push(2 * self.angular_counts[j]);
        }
        Self { radii, angular_counts: counts, refine_depth: self.refine_depth }
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angular_counts(&self) -> &[usize] {
        &self.angular_counts
    }

    pub fn refine_depth(&self) -> usize {
        self.refine_depth
    }

    /// Outermost radius.
    pub fn r_cap(&self) -> f64 {
        *self.radii.last().unwrap()
    }

    pub fn point_count(&self) -> usize {
        self.angular_counts.iter().sum()
    }
}

/// One entry of a boundary profile: the supremum over the band of the disk
/// whose nearest grid circle has radius `radius`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub radius: f64,
    pub sup: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SupEstimate {
    pub value: f64,
    pub argmax: Complex64,
    pub profile: Vec<ProfilePoint>,
}

/// Supremum of `quantity` over `grid`, followed by a local refinement around
/// the grid maximizer. Evaluation is parallel over circles; the reduction runs
/// in circle order, so the result does not depend on scheduling.
pub fn weighted_sup<F>(grid: &DiskGrid, quantity: F) -> Result<SupEstimate>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    let per_circle: Vec<(f64, Complex64)> = grid
        .radii
        .par_iter()
        .zip(grid.angular_counts.par_iter())
        .map(|(&r, &count)| {
            let mut best = (f64::NEG_INFINITY, Complex64::new(r, 0.0));
            let count = if r == 0.0 { 1 } else { count };
            for j in 0..count {
                let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / count as f64);
                let v = quantity(z)?;
                if v > best.0 {
                    best = (v, z);
                }
            }
            Ok(best)
        })
        .collect::<Result<_>>()?;

    let mut profile: Vec<ProfilePoint> = grid
        .radii
        .iter()
        .zip(&per_circle)
        .map(|(&radius, &(sup, _))| ProfilePoint { radius, sup })
        .collect();

    let (mut best_idx, mut best) = (0, per_circle[0]);
    for (j, &cand) in per_circle.iter().enumerate() {
        if cand.0 > best.0 {
            best_idx = j;
            best = cand;
        }
    }
    if !best.0.is_finite() {
        return Err(Error::Degenerate(format!("weighted quantity is not finite: {}", best.0)));
    }

    let refined = refine(grid, best_idx, best, &quantity)?;
    if refined.0 > best.0 {
        best = refined;
        let band = nearest_radius(&grid.radii, refined.1.norm());
        if refined.0 > profile[band].sup {
            profile[band].sup = refined.0;
        }
    }

    Ok(SupEstimate { value: best.0, argmax: best.1, profile })
}

fn nearest_radius(radii: &[f64], r: f64) -> usize {
    let mut idx = 0;
    for (j, &rj) in radii.iter().enumerate() {
        if (rj - r).abs() < (radii[idx] - r).abs() {
            idx = j;
        }
    }
    idx
}

/// Compass search in polar coordinates, halving the step `refine_depth` times.
fn refine<F>(
    grid: &DiskGrid,
    idx: usize,
    start: (f64, Complex64),
    quantity: &F,
) -> Result<(f64, Complex64)>
where
    F: Fn(Complex64) -> Result<f64>,
{
    let r_cap = grid.r_cap();
    let radii = &grid.radii;
    let gap = |j: usize| -> f64 {
        let below = if j > 0 { radii[j] - radii[j - 1] } else { f64::INFINITY };
        let above = if j + 1 < radii.len() { radii[j + 1] - radii[j] } else { f64::INFINITY };
        let g = below.min(above);
        if g.is_finite() { g } else { r_cap.max(0.5) }
    };
    let mut dr = 0.5 * gap(idx);
    let mut dtheta = PI / grid.angular_counts[idx] as f64;
    let (mut value, z0) = start;
    let mut r = z0.norm();
    let mut theta = z0.arg();

    for _ in 0..grid.refine_depth {
        for _ in 0..64 {
            let mut moved = false;
            let mut cand_best = (value, r, theta);
            for a in -1i32..=1 {
                for b in -1i32..=1 {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let rr = (r + a as f64 * dr).clamp(0.0, r_cap);
                    let tt = theta + b as f64 * dtheta;
                    let v = quantity(Complex64::from_polar(rr, tt))?;
                    if v > cand_best.0 {
                        cand_best = (v, rr, tt);
                        moved = true;
                    }
                }
            }
            if !moved {
                break;
            }
            (value, r, theta) = cand_best;
        }
        dr *= 0.5;
        dtheta *= 0.5;
    }
    Ok((value, Complex64::from_polar(r, theta)))
}

/// Thresholds that turn a boundary profile into yes/no verdicts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictThresholds {
    /// Blow-up: the outermost value exceeds this multiple of the middle value.
    pub blowup_factor: f64,
    /// Decay: the outermost value is below this fraction of the global maximum.
    pub decay_fraction: f64,
    /// Decay: or the outermost values fall at least like this power of the
    /// distance to the boundary.
    pub decay_slope: f64,
}

impl Default for VerdictThresholds {
    fn default() -> Self {
        Self { blowup_factor: 10.0, decay_fraction: 0.1, decay_slope: 0.25 }
    }
}

impl VerdictThresholds {
    /// Last value above `blowup_factor` times the middle value, with the
    /// outermost three non-decreasing.
    pub fn blows_up(&self, values: &[f64]) -> bool {
        let n = values.len();
        if n < 3 {
            return false;
        }
        let last = values[n - 1];
        let rising = values[n - 3] <= values[n - 2] && values[n - 2] <= last;
        rising && last > self.blowup_factor * values[n / 2]
    }

    /// Outermost three strictly decreasing and the last below
    /// `decay_fraction` of the maximum. An identically zero sequence decays.
    pub fn decays(&self, values: &[f64]) -> bool {
        let n = values.len();
        let global = values.iter().copied().fold(0.0, f64::max);
        if global == 0.0 {
            return true;
        }
        if n < 3 {
            return false;
        }
        values[n - 3] > values[n - 2]
            && values[n - 2] > values[n - 1]
            && values[n - 1] < self.decay_fraction * global
    }

    /// [`decays`](Self::decays), or the outermost three strictly decreasing
    /// with log-log slope against `gaps` (distances to the boundary) of at
    /// least `decay_slope`.
    pub fn decays_toward(&self, gaps: &[f64], values: &[f64]) -> bool {
        if self.decays(values) {
            return true;
        }
        let n = values.len();
        if n < 3 || gaps.len() != n {
            return false;
        }
        let (v0, v1, v2) = (values[n - 3], values[n - 2], values[n - 1]);
        if !(v0 > v1 && v1 > v2 && v2 > 0.0) {
            return false;
        }
        let spread = (gaps[n - 3] / gaps[n - 1]).ln();
        spread > 0.0 && (v0 / v2).ln() / spread >= self.decay_slope
    }
}

pub(crate) fn profile_values(profile: &[ProfilePoint]) -> Vec<f64> {
    profile.iter().map(|p| p.sup).collect()
}

/// `1 - r^2` for each profile radius.
pub(crate) fn profile_gaps(profile: &[ProfilePoint]) -> Vec<f64> {
    profile.iter().map(|p| 1.0 - p.radius * p.radius).collect()
}
