//! Non-Hermitian spectra of open maps: eigenvalues, counting profiles, fractal
//! Weyl fits, spectrum matching and the Schur-complement effective Hamiltonian.

mod counting;
mod effective;
mod eigen;
mod matching;

pub use counting::{count_profile, lifetime, weyl_fit, weyl_fit_real, CountReport, WeylFit};
pub use effective::{
    effective_hamiltonian, residual_decay, trapped_quasiprojector, EffectiveHamiltonianReport, ProbeEvaluation,
    RootMatch, BULK_MARGIN, ROOT_MATCH_TOLERANCE,
};
pub use eigen::{eigen_decompose, eigen_decompose_map, leading_eigenpairs, sort_descending, Spectrum};
pub use matching::{match_spectra, SpectrumMatch};
