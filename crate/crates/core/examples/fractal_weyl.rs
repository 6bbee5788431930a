//! Counting profiles C(r) for N = 3^k and the fractal Weyl exponent.
//!
//! `cargo run --release --example fractal_weyl`

use oqmap::classical::{thermo_report, BakerSpec};
use oqmap::quantum::{quantize_open, QuantizationConfig};
use oqmap::spectral::{count_profile, eigen_decompose, weyl_fit};

fn main() -> oqmap::Result<()> {
    let spec = BakerSpec::symmetric(3, &[0, 2])?;
    let nu = thermo_report(&spec).dimension;
    let grid = [0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8];
    println!("rescaled counts C(r)/N^ν with ν = {nu:.6}");
    println!("{:>6} {}", "N", grid.iter().map(|r| format!("{r:>7}")).collect::<String>());
    let mut samples = Vec::new();
    for k in 3..=6 {
        let n = 3usize.pow(k);
        let s = eigen_decompose(&quantize_open(&spec, &QuantizationConfig::new(n))?.open.matrix)?;
        let profile = count_profile(&s, &grid, nu)?;
        println!("{n:>6} {}", profile.rescaled.iter().map(|c| format!("{c:>7.3}")).collect::<String>());
        samples.push((n, s.count_above(0.5)));
    }
    let fit = weyl_fit(&samples)?;
    println!("C(0.5) samples {:?}", samples);
    println!("fitted exponent ν̂ = {:.4} (classical ν = {nu:.4})", fit.nu_hat);
    Ok(())
}
