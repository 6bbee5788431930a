use faer::Mat;

use super::QuantizedMap;
use crate::classical::BakerSpec;
use crate::error::{Error, Result};
use crate::linalg::{op_norm, CMat, C64, ZERO};

/// Commutator threshold below which the reflection is treated as an exact symmetry.
pub const PARITY_TOLERANCE: f64 = 1e-8;

/// Compressions of a reflection-symmetric map to the `R = +1` and `R = -1` eigenspaces.
#[derive(Debug, Clone)]
pub struct ParitySplit {
    pub even: CMat,
    pub odd: CMat,
    pub commutator_norm: f64,
}

/// `‖MR - RM‖₂` for the reflection `R: j ↦ N-1-j`.
pub fn reflection_commutator_norm(m: &CMat) -> Result<f64> {
    let n = m.nrows();
    // (MR)[i,j] = M[i, n-1-j], (RM)[i,j] = M[n-1-i, j].
    let c = Mat::from_fn(n, n, |i, j| m[(i, n - 1 - j)] - m[(n - 1 - i, j)]);
    op_norm(&c)
}

/// Orthonormal basis of the `R = sign` eigenspace, as columns.
fn parity_basis(n: usize, sign: f64) -> CMat {
    let h = 1.0 / 2f64.sqrt();
    let pairs = n / 2;
    let middle = n % 2 == 1 && sign > 0.0;
    let cols = pairs + usize::from(middle);
    let mut v = Mat::from_fn(n, cols, |_, _| ZERO);
    for p in 0..pairs {
        v[(p, p)] = C64::new(h, 0.0);
        v[(n - 1 - p, p)] = C64::new(sign * h, 0.0);
    }
    if middle {
        v[(pairs, pairs)] = C64::new(1.0, 0.0);
    }
    v
}

pub fn parity_split(map: &QuantizedMap, spec: &BakerSpec) -> Result<ParitySplit> {
    if !spec.reflection_symmetric() {
        return Err(Error::AsymmetricSpec);
    }
    let m = &map.matrix;
    let commutator_norm = reflection_commutator_norm(m)?;
    if commutator_norm > PARITY_TOLERANCE {
        return Err(Error::ParityNotExact(commutator_norm));
    }
    let compress = |sign: f64| {
        let v = parity_basis(m.nrows(), sign);
        v.adjoint() * m * &v
    };
    Ok(ParitySplit { even: compress(1.0), odd: compress(-1.0), commutator_norm })
}
