use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::QuantizedMap;
use crate::error::{Error, Result};
use crate::linalg::C64;

/// Angles for `diag(e^{iφ_j})`: explicit, or drawn uniformly from `[0, 2π)` with a seed.
#[derive(Debug, Clone, PartialEq)]
pub enum PhaseSource {
    Angles(Vec<f64>),
    Seeded(u64),
}

pub fn seeded_phases(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect()
}

/// `diag(e^{iφ_j}) · M`.
pub fn apply_diagonal_phases(map: &QuantizedMap, phases: &PhaseSource) -> Result<QuantizedMap> {
    let n = map.dim();
    let (angles, seed) = match phases {
        PhaseSource::Angles(a) => (a.clone(), None),
        PhaseSource::Seeded(s) => (seeded_phases(n, *s), Some(*s)),
    };
    if angles.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: angles.len() });
    }
    let mut out = map.clone();
    for (i, &phi) in angles.iter().enumerate() {
        if phi != 0.0 {
            let z = C64::from_polar(1.0, phi);
            out.matrix.row_mut(i).iter_mut().for_each(|x| *x *= z);
        }
    }
    out.provenance.phase_seed = seed;
    Ok(out)
}
