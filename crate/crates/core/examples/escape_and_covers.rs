//! Exact escape volumes and trapped-set covers with rational arithmetic.
//!
//! `cargo run --example escape_and_covers`

use oqmap::classical::{escape_report, escape_time, trapped_cover, BakerSpec, Tail};
use oqmap::rational::{display, parse_rational_list};

fn main() -> oqmap::Result<()> {
    let spec = BakerSpec::new(parse_rational_list("0,1/4,1/2,1")?.0, &[0, 2])?;
    let report = escape_report(&spec, 6)?;
    println!("partition 0,1/4,1/2,1 keep {{0,2}}: kept mass 3/4");
    for (n, escaped) in report.escaped_volumes.iter().enumerate() {
        println!("  Vol(D_{}) = {:>10}", n + 1, display(escaped));
    }
    println!("  survivors after 6 steps: {} intervals, total {}", report.survivors.len(), display(&report.survivor_volume));

    for tail in [Tail::KMinus, Tail::KPlus, Tail::K] {
        let cover = trapped_cover(&spec, 2, tail)?;
        println!("level-2 cover of {tail:?}: {} rectangles, area {}", cover.rects.len(), display(&cover.measure()));
        for iv in cover.strips().iter().take(4) {
            println!("    strip [{}, {})", display(&iv.lo), display(&iv.hi));
        }
    }

    let points = [(0.1, 0.3), (0.3, 0.9), (0.55, 0.5), (0.7, 0.1), (0.61, 0.2)];
    for p in points {
        println!("escape time of {p:?}: {}", escape_time(&spec, p, 50)?);
    }
    Ok(())
}
