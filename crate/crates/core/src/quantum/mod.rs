//! Quantized open baker's maps: the unitary `U_N`, its opening `M_N = U_N Π`,
//! the Walsh tensor model, parity sectors and diagonal phase perturbations.

mod baker;
mod dft;
mod parity;
mod phases;
mod walsh;

use serde::Serialize;

use crate::linalg::CMat;

pub(crate) use baker::block_offsets;
pub use baker::{quantize_open, OpenQuantization, DENSE_LIMIT};
pub use dft::{gdft, inverse_dft};
pub use parity::{parity_split, reflection_commutator_norm, ParitySplit};
pub use phases::{apply_diagonal_phases, seeded_phases, PhaseSource};
pub use walsh::{walsh_open, WalshModel, WalshOperator, WALSH_LIMIT};

/// Dimension and Bloch phases `(θ_x, θ_ξ)` of a torus quantization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantizationConfig {
    pub n: usize,
    pub bloch: (f64, f64),
}

impl QuantizationConfig {
    pub fn new(n: usize) -> Self {
        Self { n, bloch: (0.0, 0.0) }
    }

    /// Antiperiodic boundary conditions, under which the reflection `j ↦ N-1-j` is an exact symmetry.
    pub fn antiperiodic(n: usize) -> Self {
        Self { n, bloch: (0.5, 0.5) }
    }

    pub fn with_bloch(mut self, theta_x: f64, theta_xi: f64) -> Self {
        self.bloch = (theta_x, theta_xi);
        self
    }

    /// `ħ = 1/(2πN)`.
    pub fn hbar(&self) -> f64 {
        1.0 / (2.0 * std::f64::consts::PI * self.n as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    ClosedUnitary,
    OpenStandard,
    OpenWalsh,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub spec_hash: String,
    pub n: usize,
    pub bloch: (f64, f64),
    pub keep: Vec<usize>,
    /// Seed of a random phase perturbation, if one was applied.
    pub phase_seed: Option<u64>,
}

/// A dense `N × N` matrix together with where it came from.
#[derive(Debug, Clone)]
pub struct QuantizedMap {
    pub matrix: CMat,
    pub kind: MapKind,
    pub provenance: Provenance,
}

impl QuantizedMap {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// A 0/1 diagonal (position) projector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalProjector {
    mask: Vec<bool>,
}

impl DiagonalProjector {
    pub fn from_mask(mask: Vec<bool>) -> Self {
        Self { mask }
    }

    pub fn identity(n: usize) -> Self {
        Self { mask: vec![true; n] }
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn dim(&self) -> usize {
        self.mask.len()
    }

    pub fn rank(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn complement(&self) -> Self {
        Self { mask: self.mask.iter().map(|b| !b).collect() }
    }

    pub fn to_matrix(&self) -> CMat {
        use crate::linalg::{ONE, ZERO};
        CMat::from_fn(self.dim(), self.dim(), |i, j| if i == j && self.mask[i] { ONE } else { ZERO })
    }
}
