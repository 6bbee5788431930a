//! Oracle-pinned numerical fixtures for the quantized baker's maps.

use oqmap::classical::{step, thermo_report, BakerSpec, Direction};
use oqmap::phase_space::{coherent_state, husimi_field, husimi_report, CoherentFrame};
use oqmap::quantum::{quantize_open, QuantizationConfig};
use oqmap::spectral::{eigen_decompose, leading_eigenpairs, lifetime, residual_decay, trapped_quasiprojector};
use rayon::prelude::*;

fn radius(spec: &BakerSpec, n: usize) -> f64 {
    let q = quantize_open(spec, &QuantizationConfig::new(n)).unwrap();
    eigen_decompose(&q.open.matrix).unwrap().spectral_radius()
}

#[test]
fn gap_bracket_on_doubling_sequence() {
    let spec = BakerSpec::symmetric(5, &[1, 3]).unwrap();
    let t = thermo_report(&spec);
    let radii: Vec<f64> = [10, 20, 40, 80, 160].par_iter().map(|&j| radius(&spec, 5 * j)).collect();
    for r in &radii {
        assert!(t.g_cl - 0.05 <= *r && *r <= t.g_half + 0.02, "{radii:?}");
    }
    let three = BakerSpec::symmetric(3, &[0, 2]).unwrap();
    let radii: Vec<f64> = [9, 27, 81, 243].par_iter().map(|&j| radius(&three, 3 * j)).collect();
    assert!(radii.iter().all(|&r| r <= 0.99), "{radii:?}");
}

#[test]
fn residual_decay_pinned() {
    // Oracle values at m = 1..6: 1, 1, 0.9999, 0.9198, 0.7612, 0.6221.
    let spec = BakerSpec::symmetric(5, &[1, 3]).unwrap();
    let config = QuantizationConfig::new(625);
    let m = quantize_open(&spec, &config).unwrap().open.matrix;
    let pi = trapped_quasiprojector(&spec, &config, 4).unwrap().to_matrix();
    let r = residual_decay(&m, &pi, 6).unwrap();
    assert!(r.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{r:?}");
    assert!((r[0] - 1.0).abs() < 1e-10);
    assert!(r[3] <= 0.93 && (r[3] - 0.9198).abs() < 1e-3, "{r:?}");
    assert!((r[5] - 0.6221).abs() < 1e-3, "{r:?}");
}

#[test]
fn lifetimes_follow_moduli() {
    let spec = BakerSpec::symmetric(3, &[0, 2]).unwrap();
    let s = eigen_decompose(&quantize_open(&spec, &QuantizationConfig::new(81)).unwrap().open.matrix).unwrap();
    for z in &s.eigenvalues {
        assert_eq!(lifetime(z.norm()), -2.0 * z.norm().ln());
    }
}

#[test]
fn husimi_peak_follows_classical_map() {
    for (d, keep, n) in [(3usize, vec![0usize, 2], 243usize), (5, vec![1, 3], 500)] {
        let spec = BakerSpec::symmetric(d, &keep).unwrap();
        let u = quantize_open(&spec, &QuantizationConfig::new(n)).unwrap().unitary.matrix;
        let frame = CoherentFrame::new(n);
        let g = 64;
        // Points at distance ≥ 0.1 from x = i/D, ξ = 0 and ξ = 1 (for D = 5 only the strip centres qualify).
        let points: &[(f64, f64)] = if d == 3 {
            &[(0.15, 0.4), (0.5, 0.7), (0.85, 0.2), (0.2, 0.5)]
        } else {
            &[(0.1, 0.4), (0.5, 0.7), (0.9, 0.2), (0.3, 0.55)]
        };
        for &(x0, xi0) in points {
            let c = coherent_state(&frame, x0, xi0);
            let out: Vec<_> = (0..n).map(|i| (0..n).map(|j| u[(i, j)] * c[j]).sum()).collect();
            let field = husimi_field(&out, &frame, (g, g)).unwrap();
            let (a, b) = field.argmax();
            let image = classical_image(d, x0, xi0);
            let cells = |p: f64, q: f64| {
                let t = (p - q).rem_euclid(1.0);
                t.min(1.0 - t) * g as f64
            };
            assert!(
                cells(field.x(a), image.0) <= 2.0 && cells(field.xi(b), image.1) <= 2.0,
                "D = {d}, ρ0 = ({x0}, {xi0}): peak ({}, {}) vs image {image:?}",
                field.x(a),
                field.xi(b)
            );
        }
    }
}

/// Forward step of the closed symmetric baker, computed by hand and checked against the
/// library's open map with the starting rectangle kept.
fn classical_image(d: usize, x: f64, xi: f64) -> (f64, f64) {
    let i = (x * d as f64).floor() as usize;
    let spec = BakerSpec::symmetric(d, &[i]).unwrap();
    let via_library = step(&spec, (x, xi), Direction::Forward).unwrap().unwrap();
    let by_hand = (x * d as f64 - i as f64, (i as f64 + xi) / d as f64);
    assert!((via_library.0 - by_hand.0).abs() < 1e-12 && (via_library.1 - by_hand.1).abs() < 1e-12);
    by_hand
}

#[test]
fn level_four_thickened_strips_saturate() {
    // With ε = 3/√N the thickened level-4 strips cover about 74% of the torus, so even
    // complete localization yields an enhancement of only 1/0.738.
    let spec = BakerSpec::symmetric(5, &[1, 3]).unwrap();
    let n = 500;
    let frame = CoherentFrame::new(n);
    let m = quantize_open(&spec, &QuantizationConfig::new(n)).unwrap().open.matrix;
    let (_, v) = leading_eigenpairs(&m, 1).unwrap().remove(0);
    let r = husimi_report(&v, &frame, (64, 64), &spec, 4, 3.0 / (n as f64).sqrt()).unwrap();
    assert!((r.area_fraction - 0.738).abs() < 1e-3, "{}", r.area_fraction);
    assert!(r.mass_near_kplus >= 0.99, "{}", r.mass_near_kplus);
    assert!(r.enhancement < 2.0 && (r.enhancement - r.mass_near_kplus / r.area_fraction).abs() < 1e-12);
}
