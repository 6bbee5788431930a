//! Husimi densities of long-lived eigenmodes concentrate on the outgoing tail K⁺.
//!
//! `cargo run --release --example husimi_localization`

use oqmap::classical::BakerSpec;
use oqmap::phase_space::{husimi_report, random_unit_vector, CoherentFrame};
use oqmap::quantum::{quantize_open, QuantizationConfig};
use oqmap::spectral::leading_eigenpairs;

fn main() -> oqmap::Result<()> {
    let spec = BakerSpec::symmetric(5, &[1, 3])?;
    let n = 500;
    let frame = CoherentFrame::new(n);
    let eps = frame.momentum_width();
    let m = quantize_open(&spec, &QuantizationConfig::new(n))?.open.matrix;
    let modes = leading_eigenpairs(&m, 5)?;
    println!("level-2 K⁺ strips thickened by ε = {eps:.4}");
    for (j, (lambda, v)) in modes.iter().enumerate() {
        let r = husimi_report(v, &frame, (64, 64), &spec, 2, eps)?;
        println!(
            "  mode {j}: |λ| = {:.4}  mass on K⁺ = {:.3}  area = {:.3}  enhancement = {:.2}",
            lambda.norm(),
            r.mass_near_kplus,
            r.area_fraction,
            r.enhancement
        );
        if j == 0 {
            let path = std::env::temp_dir().join("oqmap_husimi_mode0.pgm");
            oqmap::io::write_husimi_pgm(std::fs::File::create(&path)?, &r.field)?;
            println!("    log-scale image written to {}", path.display());
        }
    }
    let baseline: Vec<f64> = (0..5)
        .map(|s| husimi_report(&random_unit_vector(n, s), &frame, (64, 64), &spec, 2, eps).map(|r| r.enhancement))
        .collect::<oqmap::Result<_>>()?;
    println!("random unit vectors: enhancement {baseline:.2?}");
    Ok(())
}
