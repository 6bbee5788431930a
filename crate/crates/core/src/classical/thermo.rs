//! Topological pressure of `-s φ⁺` on the trapped set, with `φ⁺ = log(1/ℓ_i)` on
//! rectangle `i`, and the quantities derived from it.

use serde::Serialize;

use super::spec::BakerSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PressureMethod {
    /// `log Σ_{i∈keep} ℓ_i^s`.
    ClosedForm,
    /// Log of the Perron–Frobenius eigenvalue of the weighted transition matrix.
    Markov,
}

const POWER_TOLERANCE: f64 = 1e-12;
const POWER_MAX_ITER: usize = 10_000;

/// `P(-s φ⁺)`.
pub fn pressure(spec: &BakerSpec, s: f64, method: PressureMethod) -> Result<f64> {
    match method {
        PressureMethod::ClosedForm => Ok(spec.kept_lengths_f64().map(|l| l.powf(s)).sum::<f64>().ln()),
        PressureMethod::Markov => {
            let n = spec.keep().len();
            // Full shift on the kept symbols: every transition allowed.
            let transitions = vec![vec![1.0; n]; n];
            let weights: Vec<f64> = spec.kept_lengths_f64().map(|l| l.powf(s)).collect();
            perron_frobenius(&transitions, &weights).map(f64::ln)
        }
    }
}

/// Leading eigenvalue of `T^w_{a'a} = T_{a'a} w_a` by power iteration.
fn perron_frobenius(transitions: &[Vec<f64>], weights: &[f64]) -> Result<f64> {
    let n = weights.len();
    let mut v = vec![1.0 / n as f64; n];
    let mut estimate = 0.0;
    for _ in 0..POWER_MAX_ITER {
        let mut next = vec![0.0; n];
        for (a2, row) in transitions.iter().enumerate() {
            next[a2] = row.iter().zip(weights).zip(&v).map(|((t, w), x)| t * w * x).sum();
        }
        let norm: f64 = next.iter().sum();
        if !norm.is_finite() || norm <= 0.0 {
            break;
        }
        next.iter_mut().for_each(|x| *x /= norm);
        // v is normalized to unit l1 mass, so the mass ratio is the eigenvalue estimate.
        let converged = (norm - estimate).abs() <= POWER_TOLERANCE * norm
            && next.iter().zip(&v).all(|(a, b)| (a - b).abs() <= POWER_TOLERANCE);
        estimate = norm;
        v = next;
        if converged {
            return Ok(estimate);
        }
    }
    Err(Error::PowerIterationDivergence { iterations: POWER_MAX_ITER })
}

#[derive(Debug, Clone, Serialize)]
pub struct PressureReport {
    pub s_grid: Vec<f64>,
    pub pressures: Vec<f64>,
    /// Unique root `s_0` of `P(-s φ⁺) = 0`; the dimension of the Cantor set.
    pub dimension: f64,
    pub decay_rate: f64,
    pub topological_entropy: f64,
    /// `P(-φ⁺/2)`.
    pub half_pressure: f64,
    /// `exp P(-φ⁺/2)`.
    pub g_half: f64,
    /// `exp(P(-φ⁺)/2)`.
    pub g_cl: f64,
    /// `-γ_cl/2 ≤ P(-φ⁺/2) ≤ (H_top - γ_cl)/2`.
    pub convexity_holds: bool,
}

pub fn thermo_report(spec: &BakerSpec) -> PressureReport {
    let grid: Vec<f64> = (0..=40).map(|i| -1.0 + 0.1 * i as f64).collect();
    thermo_report_on(spec, &grid)
}

pub fn thermo_report_on(spec: &BakerSpec, s_grid: &[f64]) -> PressureReport {
    let p = |s: f64| pressure(spec, s, PressureMethod::ClosedForm).expect("closed form is infallible");
    let pressures = s_grid.iter().map(|&s| p(s)).collect();
    let dimension = dimension_root(spec);
    let topological_entropy = p(0.0);
    let decay_rate = -p(1.0);
    let half_pressure = p(0.5);
    let convexity_holds = -decay_rate / 2.0 <= half_pressure + 1e-15
        && half_pressure <= (topological_entropy - decay_rate) / 2.0 + 1e-15;
    PressureReport {
        s_grid: s_grid.to_vec(),
        pressures,
        dimension,
        decay_rate,
        topological_entropy,
        half_pressure,
        g_half: half_pressure.exp(),
        g_cl: (-decay_rate / 2.0).exp(),
        convexity_holds,
    }
}

/// Bisection on `Σ ℓ_i^s - 1` over `[0, 1]`, to `1e-12` absolute.
fn dimension_root(spec: &BakerSpec) -> f64 {
    let f = |s: f64| spec.kept_lengths_f64().map(|l| l.powf(s)).sum::<f64>() - 1.0;
    if f(0.0) <= 0.0 {
        // A single kept rectangle: ℓ^s = 1 only at s = 0.
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
