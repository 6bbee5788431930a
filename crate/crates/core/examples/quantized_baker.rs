//! The quantized open baker `M_N = U_N Π`: structure checks, spectrum, parity sectors,
//! random phases and the binary matrix format.
//!
//! `cargo run --release --example quantized_baker`

use oqmap::classical::BakerSpec;
use oqmap::linalg::{identity, max_abs_diff, singular_values};
use oqmap::quantum::{apply_diagonal_phases, parity_split, quantize_open, PhaseSource, QuantizationConfig};
use oqmap::spectral::{eigen_decompose, eigen_decompose_map, match_spectra};

fn main() -> oqmap::Result<()> {
    let spec = BakerSpec::symmetric(3, &[0, 2])?;
    let n = 81;
    let q = quantize_open(&spec, &QuantizationConfig::new(n))?;
    let u = &q.unitary.matrix;
    println!("N = {n}: ‖U*U - I‖_max = {:.1e}", max_abs_diff(&(u.adjoint() * u), &identity(n)));
    let sv = singular_values(&q.open.matrix)?;
    let ones = sv.iter().filter(|&&s| (s - 1.0).abs() < 1e-10).count();
    println!("singular values of M: {ones} ones, {} zeros (rank of Π = {})", n - ones, q.projector.rank());

    let s = eigen_decompose_map(&q.open)?;
    println!("spectral radius {:.6}, backward error bound {:.1e}", s.spectral_radius(), s.backward_error);
    for z in s.eigenvalues.iter().take(5) {
        println!("  λ = {:+.6} {:+.6}i   |λ| = {:.6}", z.re, z.im, z.norm());
    }

    // Antiperiodic phases make the reflection j ↦ N-1-j an exact symmetry.
    let anti = quantize_open(&spec, &QuantizationConfig::antiperiodic(n))?;
    let split = parity_split(&anti.open, &spec)?;
    let mut sectors = eigen_decompose(&split.even)?.eigenvalues;
    sectors.extend(eigen_decompose(&split.odd)?.eigenvalues);
    let full = eigen_decompose(&anti.open.matrix)?.eigenvalues;
    let big = |v: &[oqmap::linalg::C64]| v.iter().copied().filter(|z| z.norm() > 1e-3).collect::<Vec<_>>();
    let m = match_spectra(&big(&full), &big(&sectors), 1e-8);
    println!(
        "parity: ‖MR - RM‖ = {:.1e}, even {} + odd {} dims, {} nontrivial eigenvalues matched (max gap {:.1e})",
        split.commutator_norm,
        split.even.nrows(),
        split.odd.nrows(),
        m.pairs.len(),
        m.max_distance
    );

    let perturbed = apply_diagonal_phases(&q.open, &PhaseSource::Seeded(1))?;
    println!("with seeded phases: spectral radius {:.6}", eigen_decompose_map(&perturbed)?.spectral_radius());

    let path = std::env::temp_dir().join("oqmap_M81.bin");
    oqmap::io::save_matrix(&path, &q.open.matrix)?;
    let back = oqmap::io::load_matrix(&path)?;
    println!("binary round trip through {}: identical = {}", path.display(), back == q.open.matrix);
    Ok(())
}
