use serde::Serialize;

use crate::linalg::C64;

/// Gaussian coherent states on the quantum torus of dimension `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoherentFrame {
    pub n: usize,
    pub bloch: (f64, f64),
    /// Squeezing: position width relative to the circular state.
    pub sigma: f64,
    /// Lattice images `-radius..=radius` are summed.
    pub images: i32,
}

impl CoherentFrame {
    pub fn new(n: usize) -> Self {
        Self { n, bloch: (0.0, 0.0), sigma: 1.0, images: 2 }
    }

    pub fn with_bloch(mut self, bloch: (f64, f64)) -> Self {
        self.bloch = bloch;
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    /// Position standard deviation of `|ψ|²`.
    pub fn position_width(&self) -> f64 {
        (self.sigma / (4.0 * std::f64::consts::PI * self.n as f64)).sqrt()
    }

    /// Momentum standard deviation of the Husimi-scale smoothing.
    pub fn momentum_width(&self) -> f64 {
        (1.0 / (self.sigma * 4.0 * std::f64::consts::PI * self.n as f64)).sqrt()
    }

    /// Position grid point `q_j = (j + θ_x)/N`.
    pub fn position(&self, j: usize) -> f64 {
        (j as f64 + self.bloch.0) / self.n as f64
    }
}

/// Unit vector `ψ(j) = Σ_ν e^{-2πiθ_ξν} g(q_j + ν)` with
/// `g(q) = exp(-πN(q - x₀)²/σ + 2πiNξ₀q)`, so that `ψ(q + 1) = e^{2πiθ_ξ} ψ(q)`.
pub fn coherent_state(frame: &CoherentFrame, x0: f64, xi0: f64) -> Vec<C64> {
    let n = frame.n as f64;
    let tau = std::f64::consts::TAU;
    let mut psi: Vec<C64> = (0..frame.n)
        .map(|j| {
            let q = frame.position(j);
            (-frame.images..=frame.images)
                .map(|nu| {
                    let y = q + nu as f64;
                    let amp = (-std::f64::consts::PI * n * (y - x0).powi(2) / frame.sigma).exp();
                    // Reduce the phase N ξ₀ y mod 1 before scaling by 2π.
                    let turns = (n * xi0 * y).rem_euclid(1.0) - frame.bloch.1 * nu as f64;
                    C64::from_polar(amp, tau * turns)
                })
                .sum()
        })
        .collect();
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    psi.iter_mut().for_each(|z| *z /= norm);
    psi
}

/// `⟨a, b⟩` (conjugate-linear in the first slot).
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalized() {
        for &n in &[16usize, 64, 243] {
            for bloch in [(0.0, 0.0), (0.5, 0.5)] {
                let f = CoherentFrame::new(n).with_bloch(bloch);
                let c = coherent_state(&f, 0.01, 0.97);
                assert!((inner(&c, &c).norm() - 1.0).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn distant_states_nearly_orthogonal() {
        let f = CoherentFrame::new(64);
        let a = coherent_state(&f, 0.2, 0.2);
        let b = coherent_state(&f, 0.7, 0.7);
        // Circular Gaussians separated by (1/2, 1/2): overlap² ≈ exp(-πN/4).
        assert!(inner(&a, &b).norm_sqr() <= (-(64.0f64)).exp());
    }

    #[test]
    fn lattice_translation_covariance() {
        for bloch in [(0.0, 0.0), (0.5, 0.5), (0.25, 0.75)] {
            let f = CoherentFrame::new(32).with_bloch(bloch);
            let (x0, xi0) = (0.97, 0.3);
            let a = coherent_state(&f, x0, xi0);
            let b = coherent_state(&f, x0 + 1.0 / 32.0, xi0);
            // b(j) ∝ a(j-1), and crossing q = 0 picks up ψ(q - 1) = e^{-2πiθ_ξ} ψ(q).
            let wrap = C64::from_polar(1.0, -std::f64::consts::TAU * bloch.1);
            let shifted: Vec<C64> = (0..32).map(|j| if j == 0 { a[31] * wrap } else { a[j - 1] }).collect();
            let phase = inner(&shifted, &b);
            assert!((phase.norm() - 1.0).abs() < 1e-8);
            let err = shifted.iter().zip(&b).map(|(s, t)| (s * phase - t).norm()).fold(0.0, f64::max);
            assert!(err < 1e-8, "bloch {bloch:?}: {err}");
        }
    }
}
