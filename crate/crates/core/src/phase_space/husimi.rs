use rayon::prelude::*;
use serde::Serialize;

use super::coherent::{coherent_state, inner, CoherentFrame};
use crate::classical::{trapped_cover, BakerSpec, Tail};
use crate::error::{Error, Result};
use crate::linalg::C64;

const MIN_GRID: usize = 32;
const NORM_TOLERANCE: f64 = 1e-8;

/// Husimi density `N |⟨c(x_a, ξ_b), u⟩|²` sampled at cell centres `((a+½)/G_x, (b+½)/G_ξ)`.
#[derive(Debug, Clone, Serialize)]
pub struct HusimiField {
    pub gx: usize,
    pub gxi: usize,
    /// Row-major in `ξ`: `values[b * gx + a]`.
    pub values: Vec<f64>,
    /// `Σ values · cell area`, approximately `‖u‖²`.
    pub total_mass: f64,
}

impl HusimiField {
    pub fn cell_area(&self) -> f64 {
        1.0 / (self.gx * self.gxi) as f64
    }

    pub fn x(&self, a: usize) -> f64 {
        (a as f64 + 0.5) / self.gx as f64
    }

    pub fn xi(&self, b: usize) -> f64 {
        (b as f64 + 0.5) / self.gxi as f64
    }

    pub fn value(&self, a: usize, b: usize) -> f64 {
        self.values[b * self.gx + a]
    }

    /// Grid cell `(a, b)` of the maximum.
    pub fn argmax(&self) -> (usize, usize) {
        let (i, _) = self
            .values
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &v)| if v > best.1 { (i, v) } else { best });
        (i % self.gx, i / self.gx)
    }
}

pub fn husimi_field(u: &[C64], frame: &CoherentFrame, grid: (usize, usize)) -> Result<HusimiField> {
    let (gx, gxi) = grid;
    if u.len() != frame.n {
        return Err(Error::LengthMismatch { expected: frame.n, got: u.len() });
    }
    if gx == 0 || gxi == 0 {
        return Err(Error::InvalidArgument("grid must be nonempty".into()));
    }
    let n = frame.n as f64;
    let values: Vec<f64> = (0..gx * gxi)
        .into_par_iter()
        .map(|i| {
            let (a, b) = (i % gx, i / gx);
            let c = coherent_state(frame, (a as f64 + 0.5) / gx as f64, (b as f64 + 0.5) / gxi as f64);
            n * inner(&c, u).norm_sqr()
        })
        .collect();
    let total_mass = values.iter().sum::<f64>() / (gx * gxi) as f64;
    Ok(HusimiField { gx, gxi, values, total_mass })
}

/// Localization of a state on the thickened outgoing tail.
#[derive(Debug, Clone, Serialize)]
pub struct HusimiReport {
    pub field: HusimiField,
    pub level: usize,
    pub thickening: f64,
    /// Fraction of the field mass in the thickened `K⁺` strips.
    pub mass_near_kplus: f64,
    /// Lebesgue measure of the thickened strips.
    pub area_fraction: f64,
    /// `mass_near_kplus / area_fraction`.
    pub enhancement: f64,
}

/// Union of `[lo - ε, hi + ε)` on the circle `ℝ/ℤ`, as sorted disjoint intervals in `[0, 1]`.
fn thickened_union(strips: &[(f64, f64)], eps: f64) -> Vec<(f64, f64)> {
    let mut pieces = Vec::new();
    for &(lo, hi) in strips {
        let (a, b) = (lo - eps, hi + eps);
        if b - a >= 1.0 {
            return vec![(0.0, 1.0)];
        }
        let (a, b) = (a.rem_euclid(1.0), a.rem_euclid(1.0) + (b - a));
        if b > 1.0 {
            pieces.push((a, 1.0));
            pieces.push((0.0, b - 1.0));
        } else {
            pieces.push((a, b));
        }
    }
    pieces.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (a, b) in pieces {
        match merged.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => merged.push((a, b)),
        }
    }
    merged
}

pub fn husimi_report(
    u: &[C64],
    frame: &CoherentFrame,
    grid: (usize, usize),
    spec: &BakerSpec,
    level: usize,
    thickening: f64,
) -> Result<HusimiReport> {
    let norm = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::UnnormalizedInput(norm));
    }
    if grid.0 < MIN_GRID || grid.1 < MIN_GRID {
        return Err(Error::InvalidArgument(format!("grid {}x{} is below {MIN_GRID}x{MIN_GRID}", grid.0, grid.1)));
    }
    if !(thickening >= 0.0 && thickening.is_finite()) {
        return Err(Error::InvalidArgument("thickening must be a finite nonnegative number".into()));
    }
    let cover = trapped_cover(spec, level, Tail::KPlus)?;
    let strips: Vec<(f64, f64)> = cover.strips().iter().map(|s| (s.lo_f64(), s.hi_f64())).collect();
    let region = thickened_union(&strips, thickening);
    let area_fraction: f64 = region.iter().map(|(a, b)| b - a).sum();

    let field = husimi_field(u, frame, grid)?;
    let inside = |xi: f64| region.iter().any(|&(a, b)| a <= xi && xi < b);
    let total: f64 = field.values.iter().sum();
    let near: f64 = (0..field.gxi)
        .filter(|&b| inside(field.xi(b)))
        .map(|b| field.values[b * field.gx..(b + 1) * field.gx].iter().sum::<f64>())
        .sum();
    let mass_near_kplus = if total > 0.0 { near / total } else { 0.0 };
    Ok(HusimiReport {
        field,
        level,
        thickening,
        mass_near_kplus,
        area_fraction,
        enhancement: mass_near_kplus / area_fraction,
    })
}
