//! Spectral radius of the quantized 5-baker against the classical gap bounds.
//!
//! `cargo run --release --example gap_bracket`

use oqmap::classical::{thermo_report, BakerSpec};
use oqmap::quantum::{quantize_open, QuantizationConfig};
use oqmap::spectral::eigen_decompose;
use rayon::prelude::*;

fn main() -> oqmap::Result<()> {
    let spec = BakerSpec::symmetric(5, &[1, 3])?;
    let t = thermo_report(&spec);
    let ns: Vec<usize> = (10..=100).step_by(5).map(|j| 5 * j).collect();
    let radii: Vec<f64> = ns
        .par_iter()
        .map(|&n| {
            let q = quantize_open(&spec, &QuantizationConfig::new(n)).expect("N is a multiple of 5");
            eigen_decompose(&q.open.matrix).expect("eigensolver").spectral_radius()
        })
        .collect();
    println!("g_cl = {:.4}   g_half = {:.4}", t.g_cl, t.g_half);
    for (n, r) in ns.iter().zip(&radii) {
        let col = ((r - 0.5) / 0.5 * 60.0).round() as usize;
        let marks: String = (0..=60)
            .map(|i| match i {
                _ if i == col => '*',
                _ if i == ((t.g_cl - 0.5) / 0.5 * 60.0).round() as usize => '|',
                _ if i == ((t.g_half - 0.5) / 0.5 * 60.0).round() as usize => '|',
                _ => ' ',
            })
            .collect();
        println!("N = {n:>4}  r = {r:.4}  {marks}");
    }
    Ok(())
}
