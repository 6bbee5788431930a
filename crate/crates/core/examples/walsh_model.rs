//! The Walsh-quantized baker: exact eigenvalue counts, k-independent spectral radius,
//! the step at r_c, and the accidental degeneracy of the 4-baker.
//!
//! `cargo run --release --example walsh_model`

use oqmap::quantum::{apply_diagonal_phases, walsh_open, PhaseSource};
use oqmap::spectral::eigen_decompose;

fn main() -> oqmap::Result<()> {
    println!("D = 3, keep {{0,2}}");
    for k in 1..=6 {
        let model = walsh_open(3, &[0, 2], k)?;
        let s = eigen_decompose(&model.to_quantized_map()?.matrix)?;
        let nontrivial: Vec<f64> = s.moduli().filter(|&r| r > 1e-8).collect();
        let near = nontrivial.iter().filter(|&&r| (r - model.critical_radius()).abs() <= 0.1).count();
        println!(
            "  k = {k}: N = {:>4}, {:>3} nontrivial (2^k = {:>3}), r_sp = {:.12}, {near} within 0.1 of r_c = {:.4}",
            model.dim(),
            nontrivial.len(),
            1 << k,
            s.spectral_radius(),
            model.critical_radius()
        );
    }

    println!("D = 4, keep {{0,2}}: Ω̃ has eigenvalues 1 and 0");
    for k in 1..=5 {
        let model = walsh_open(4, &[0, 2], k)?;
        let exact: Vec<String> =
            model.tensor_spectrum()?.into_iter().filter(|z| z.norm() > 1e-8).map(|z| format!("{z:.6}")).collect();
        let phased = apply_diagonal_phases(&model.to_quantized_map()?, &PhaseSource::Seeded(7))?;
        let s = eigen_decompose(&phased.matrix)?;
        let cutoff = 1e-8f64.max(s.backward_error.powf(0.5 / k as f64));
        println!(
            "  k = {k}: exact nontrivial spectrum [{}]; with random phases {} nontrivial",
            exact.join(", "),
            s.count_above(cutoff)
        );
    }
    Ok(())
}
