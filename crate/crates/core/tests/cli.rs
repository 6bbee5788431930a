use std::path::Path;

use oqmap::cli::{exit_code, run, EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION};
use oqmap::classical::BakerSpec;
use oqmap::quantum::{quantize_open, QuantizationConfig};
use oqmap::Error;
use serde_json::Value;

fn oqmap(out: &Path, args: &[&str]) -> i32 {
    let mut argv = vec!["oqmap".to_string(), "--out".into(), out.display().to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    run(argv)
}

fn json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

fn header(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

fn keys(v: &Value) -> Vec<String> {
    v.as_object().unwrap().keys().cloned().collect()
}

#[test]
fn thermo_reports_dimension_and_escape_rate() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(oqmap(dir.path(), &["thermo", "--partition", "0,1/3,2/3,1", "--keep", "0,2"]), EXIT_OK);
    let v = json(&dir.path().join("thermo.json"));
    assert!((v["dimension"].as_f64().unwrap() - 0.6309298).abs() < 1e-7);
    assert!((v["decay_rate"].as_f64().unwrap() - 0.4054651).abs() < 1e-7);
    assert_eq!(v["spec"]["partition"][1], serde_json::json!({"num": 1, "den": 3}));
    assert_eq!(
        keys(&v),
        [
            "convexity_holds", "decay_rate", "dimension", "g_cl", "g_half", "half_pressure", "pressures", "s_grid",
            "spec", "topological_entropy"
        ]
    );
}

#[test]
fn manifest_schema() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(oqmap(dir.path(), &["radius-scan", "--partition", "0,.2,.4,.6,.8,1", "--keep", "1,3", "--N", "48:52:1"]), EXIT_OK);
    let m = json(&dir.path().join("manifest.json"));
    assert_eq!(keys(&m), ["command", "outputs", "params", "seed", "skipped", "spec_hash", "version", "wall_time_seconds"]);
    assert_eq!(m["command"], "radius-scan");
    assert_eq!(m["outputs"], serde_json::json!(["radius_scan.csv"]));
    let skipped: Vec<u64> = m["skipped"].as_array().unwrap().iter().map(|s| s["n"].as_u64().unwrap()).collect();
    assert_eq!(skipped, [48, 49, 51, 52]);
    assert_eq!(m["params"]["quant"]["n"], "48:52:1");
    let csv = std::fs::read_to_string(dir.path().join("radius_scan.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.starts_with("N,r_sp,g_half,g_cl\n50,"));
}

#[test]
fn csv_headers_are_stable() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let run_in = |sub: &str, args: &[&str]| {
        let out = d.join(sub);
        assert_eq!(oqmap(&out, args), EXIT_OK, "{args:?}");
        out
    };
    let e = run_in("e", &["escape", "--partition", "0,1/3,2/3,1", "--keep", "0,2", "--horizon", "2", "--cover-level", "1"]);
    assert_eq!(header(&e.join("survivors.csv")), "lo_num,lo_den,hi_num,hi_den");
    assert_eq!(std::fs::read_to_string(e.join("cover_kplus.csv")).unwrap(), "lo_num,lo_den,hi_num,hi_den\n0,1,1,3\n2,3,1,1\n");
    let s = run_in("s", &["spectrum", "--d", "3", "--keep", "0,2", "--N", "9", "--matrix-csv"]);
    assert_eq!(header(&s.join("spectrum_N9.csv")), "index,re,im,modulus,lifetime");
    assert_eq!(header(&s.join("matrix_N9.csv")), "row,col,re,im");
    let c = run_in("c", &["count", "--d", "3", "--keep", "0,2", "--N", "27"]);
    assert_eq!(header(&c.join("count_N27.csv")), "r,count,rescaled");
    let w = run_in("w", &["weyl-fit", "--d", "3", "--keep", "0,2", "--N", "27:81:27"]);
    assert_eq!(header(&w.join("weyl_samples.csv")), "N,count");
    assert_eq!(keys(&json(&w.join("weyl_fit.json"))), ["bloch", "fit", "nu_classical", "r", "spec"]);
    let k = run_in("k", &["walsh", "--d", "3", "--keep", "0,2", "--k", "1:2:1"]);
    assert_eq!(header(&k.join("walsh.csv")), "k,dim,count,spectral_radius,critical_radius,pressure_bound,method");
    let f = run_in("f", &["effective", "--d", "5", "--keep", "1,3", "--N", "125", "--m-max", "2"]);
    assert_eq!(header(&f.join("roots.csv")), "eig_re,eig_im,root_re,root_im,distance,newton_iterations");
    assert_eq!(std::fs::read_to_string(f.join("residual_decay.csv")).unwrap().lines().count(), 3);
    let h = run_in("h", &["husimi", "--d", "5", "--keep", "1,3", "--N", "50", "--modes", "2", "--random", "2", "--grid", "32"]);
    assert_eq!(header(&h.join("husimi.csv")), "kind,index,re,im,modulus,mass_near_kplus,area_fraction,enhancement");
    assert_eq!(header(&h.join("husimi_mode0.csv")), "x,xi,value");
    assert!(std::fs::read_to_string(h.join("husimi_mode0.pgm")).unwrap().starts_with("P2\n32 32\n255\n"));
}

#[test]
fn saved_matrix_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(oqmap(dir.path(), &["spectrum", "--d", "5", "--keep", "1,3", "--N", "25", "--save-matrix"]), EXIT_OK);
    let m = oqmap::io::load_matrix(&dir.path().join("matrix_N25.bin")).unwrap();
    let spec = BakerSpec::symmetric(5, &[1, 3]).unwrap();
    assert_eq!(m, quantize_open(&spec, &QuantizationConfig::new(25)).unwrap().open.matrix);
}

#[test]
fn validation_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(oqmap(d, &["spectrum", "--keep", "0,2", "--partition", "0,1/3,2/3,1", "--N", "10"]), EXIT_VALIDATION);
    assert_eq!(oqmap(d, &["escape", "--partition", "0,.2,.4,.6,.8,1", "--keep", "1,3"]), EXIT_VALIDATION);
    assert_eq!(oqmap(d, &["thermo", "--partition", "0,2/3,1/3,1", "--keep", "0"]), EXIT_VALIDATION);
    assert_eq!(oqmap(d, &["thermo", "--d", "3", "--keep", "0,1,2"]), EXIT_VALIDATION);
    assert_eq!(oqmap(d, &["effective", "--d", "5", "--keep", "1,3", "--N", "125", "--probe-radius", "0.01"]), EXIT_VALIDATION);
    assert_eq!(oqmap(d, &["husimi", "--d", "5", "--keep", "1,3", "--N", "50", "--grid", "8"]), EXIT_VALIDATION);
    assert_eq!(oqmap(d, &["frobnicate"]), EXIT_VALIDATION);
    assert_eq!(oqmap(d, &["spectrum", "--d", "3", "--keep", "0,2"]), EXIT_VALIDATION);
}

#[test]
fn numerical_failures_map_to_three() {
    assert_eq!(exit_code(&Error::SolverFailure), EXIT_NUMERICAL);
    assert_eq!(exit_code(&Error::PowerIterationDivergence { iterations: 1 }), EXIT_NUMERICAL);
    assert_eq!(exit_code(&Error::Divisibility { n: 10, width: "1/3".into() }), EXIT_VALIDATION);
}
