use serde::Serialize;

use super::eigen::Spectrum;
use crate::error::{Error, Result};

/// Counting function `C(r) = #{|λ_j| ≥ r}` on a grid, with lifetimes `τ_j = -2 log|λ_j|`.
#[derive(Debug, Clone, Serialize)]
pub struct CountReport {
    pub n: usize,
    pub nu: f64,
    pub r_grid: Vec<f64>,
    pub counts: Vec<usize>,
    /// `C(r) / N^ν`.
    pub rescaled: Vec<f64>,
    /// `+∞` for zero eigenvalues.
    pub lifetimes: Vec<f64>,
    pub spectral_radius: f64,
}

pub fn lifetime(lambda_modulus: f64) -> f64 {
    -2.0 * lambda_modulus.ln()
}

pub fn count_profile(spectrum: &Spectrum, r_grid: &[f64], nu: f64) -> Result<CountReport> {
    if r_grid.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(Error::InvalidArgument("radii must be positive and finite".into()));
    }
    if r_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("radius grid must be ascending".into()));
    }
    let n = spectrum.len();
    let moduli: Vec<f64> = spectrum.moduli().collect();
    let counts: Vec<usize> = r_grid.iter().map(|&r| moduli.iter().filter(|&&m| m >= r).count()).collect();
    let scale = (n as f64).powf(nu);
    Ok(CountReport {
        n,
        nu,
        r_grid: r_grid.to_vec(),
        rescaled: counts.iter().map(|&c| c as f64 / scale).collect(),
        counts,
        lifetimes: moduli.iter().map(|&m| lifetime(m)).collect(),
        spectral_radius: spectrum.spectral_radius(),
    })
}

/// Least-squares power law `C ≈ e^b N^ν̂` at a fixed radius.
#[derive(Debug, Clone, Serialize)]
pub struct WeylFit {
    /// `(N_i, C_i)` pairs actually used (those with `C_i ≥ 1`).
    pub samples: Vec<(f64, f64)>,
    pub nu_hat: f64,
    pub intercept: f64,
    pub residual_std_error: f64,
}

pub fn weyl_fit(samples: &[(usize, usize)]) -> Result<WeylFit> {
    let real: Vec<(f64, f64)> = samples.iter().map(|&(n, c)| (n as f64, c as f64)).collect();
    weyl_fit_real(&real)
}

/// [`weyl_fit`] for non-integer (e.g. averaged or synthetic) counts.
pub fn weyl_fit_real(samples: &[(f64, f64)]) -> Result<WeylFit> {
    let used: Vec<(f64, f64)> = samples.iter().copied().filter(|&(n, c)| c >= 1.0 && n >= 1.0).collect();
    if used.len() < 3 {
        return Err(Error::InsufficientSamples(used.len()));
    }
    let xs: Vec<f64> = used.iter().map(|&(n, _)| n.ln()).collect();
    let ys: Vec<f64> = used.iter().map(|&(_, c)| c.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all samples share the same N".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    Ok(WeylFit { samples: used, nu_hat: slope, intercept, residual_std_error: (ssr / (k - 2.0)).sqrt() })
}
