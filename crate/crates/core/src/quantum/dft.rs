use faer::Mat;

use crate::linalg::{cis_turns, root_of_unity, CMat};

/// Bloch-phase generalized DFT:
/// `F[j,k] = N^{-1/2} exp(-2πi (j + θ_ξ)(k + θ_x) / N)`.
///
/// `bloch = (θ_x, θ_ξ)`; `(0, 0)` is the plain unitary DFT.
pub fn gdft(n: usize, bloch: (f64, f64)) -> CMat {
    let (theta_x, theta_xi) = bloch;
    let scale = 1.0 / (n as f64).sqrt();
    if theta_x == 0.0 && theta_xi == 0.0 {
        // Integer phases: reduce jk mod N exactly.
        return Mat::from_fn(n, n, |j, k| root_of_unity(-((j * k % n) as i64), n as i64) * scale);
    }
    Mat::from_fn(n, n, |j, k| {
        let p = (j as f64 + theta_xi) * (k as f64 + theta_x);
        cis_turns(-(p.rem_euclid(n as f64)) / n as f64) * scale
    })
}

/// Inverse unitary DFT `F_D^*` with entries `D^{-1/2} exp(+2πi jk/D)`.
pub fn inverse_dft(d: usize) -> CMat {
    let scale = 1.0 / (d as f64).sqrt();
    Mat::from_fn(d, d, |j, k| root_of_unity((j * k % d) as i64, d as i64) * scale)
}
