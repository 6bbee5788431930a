//! Schur-complement reduction of the open map onto a trapped-set quasiprojector.
//!
//! `cargo run --release --example effective_hamiltonian`

use oqmap::classical::BakerSpec;
use oqmap::linalg::C64;
use oqmap::quantum::{quantize_open, QuantizationConfig};
use oqmap::spectral::{effective_hamiltonian, trapped_quasiprojector};

fn main() -> oqmap::Result<()> {
    let spec = BakerSpec::symmetric(5, &[1, 3])?;
    let config = QuantizationConfig::new(125);
    let m = quantize_open(&spec, &config)?.open.matrix;
    let pi = trapped_quasiprojector(&spec, &config, 2)?;
    println!("N = 125, level-2 quasiprojector of rank {}", pi.rank());
    let probes: Vec<C64> = (0..6).map(|j| C64::from_polar(0.9, j as f64)).collect();
    let report = effective_hamiltonian(&m, &pi.to_matrix(), &probes, 0.3, 6)?;
    println!("bulk spectral radius {:.4}", report.bulk_radius);
    println!("determinant identity residual at probes: {:.1e}", report.max_identity_residual);
    for r in &report.roots {
        println!(
            "  λ = {:+.6} {:+.6}i  → root of det E at distance {:.1e} after {} Newton steps",
            r.eigenvalue.re, r.eigenvalue.im, r.distance, r.newton_iterations
        );
    }
    println!("residual ‖(I - Π) M^m‖ for m = 1..6: {:.4?}", report.residual_norms);
    Ok(())
}
