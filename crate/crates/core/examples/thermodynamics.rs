//! Topological pressure of open baker's maps and the classical quantities derived from it.
//!
//! `cargo run --example thermodynamics`

use oqmap::classical::{pressure, thermo_report, BakerSpec, PressureMethod};
use oqmap::rational::parse_rational_list;

fn main() -> oqmap::Result<()> {
    let specs = [
        ("3-baker, keep {0,2}", BakerSpec::symmetric(3, &[0, 2])?),
        ("5-baker, keep {1,3}", BakerSpec::symmetric(5, &[1, 3])?),
        ("asymmetric 0,1/4,3/8,1 keep {0,2}", BakerSpec::new(parse_rational_list("0,1/4,3/8,1")?.0, &[0, 2])?),
    ];
    for (name, spec) in &specs {
        let t = thermo_report(spec);
        println!("{name}  [hash {}]", spec.hash());
        println!("  dimension ν          = {:.10}", t.dimension);
        println!("  escape rate γ_cl     = {:.10}", t.decay_rate);
        println!("  entropy H_top        = {:.10}", t.topological_entropy);
        println!("  P(-φ⁺/2)             = {:.10}", t.half_pressure);
        println!("  g_half = e^P(-φ⁺/2)  = {:.6}   g_cl = e^(P(-φ⁺)/2) = {:.6}", t.g_half, t.g_cl);
        println!("  convexity chain holds: {}", t.convexity_holds);
        for s in [0.0, 0.5, 1.0, 2.0] {
            let closed = pressure(spec, s, PressureMethod::ClosedForm)?;
            let markov = pressure(spec, s, PressureMethod::Markov)?;
            println!("    P(-{s:.1}φ⁺) = {closed:+.12}  (transfer operator differs by {:.1e})", (closed - markov).abs());
        }
    }
    Ok(())
}
