//! Torus coherent states, Husimi densities and localization of states on the
//! outgoing tail `K⁺`.

mod coherent;
mod husimi;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::C64;

pub use coherent::{coherent_state, inner, CoherentFrame};
pub use husimi::{husimi_field, husimi_report, HusimiField, HusimiReport};

/// Haar-random unit vector in `ℂ^n` from a seed.
pub fn random_unit_vector(n: usize, seed: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<C64> =
        (0..n).map(|_| C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}
