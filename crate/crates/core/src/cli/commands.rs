use rayon::prelude::*;
use serde::Serialize;

use super::*;
use crate::classical::{escape_report, thermo_report_on, trapped_cover, Tail};
use crate::io;
use crate::linalg::C64;
use crate::phase_space::{husimi_report, random_unit_vector, CoherentFrame};
use crate::quantum::{
    apply_diagonal_phases, block_offsets, parity_split, quantize_open, walsh_open, PhaseSource, QuantizationConfig,
    QuantizedMap, DENSE_LIMIT,
};
use crate::spectral::{
    count_profile, eigen_decompose, eigen_decompose_map, effective_hamiltonian, leading_eigenpairs, residual_decay,
    sort_descending, trapped_quasiprojector, weyl_fit,
};

const MATRIX_CSV_LIMIT: usize = 64;

pub(super) fn dispatch(command: &Command, ctx: &mut Context) -> Result<()> {
    match command {
        Command::Thermo(a) => thermo(a, ctx),
        Command::Escape(a) => escape(a, ctx),
        Command::Spectrum(a) => spectrum(a, ctx),
        Command::Count(a) => count(a, ctx),
        Command::RadiusScan(a) => radius_scan(a, ctx),
        Command::WeylFit(a) => weyl(a, ctx),
        Command::Walsh(a) => walsh(a, ctx),
        Command::Effective(a) => effective(a, ctx),
        Command::Husimi(a) => husimi(a, ctx),
    }
}

fn spec_of(args: &SpecArgs, ctx: &mut Context) -> Result<(BakerSpec, TokenKind)> {
    let (spec, kind) = parse_spec(args)?;
    ctx.set_spec(&spec);
    Ok((spec, kind))
}

/// Admissible dimensions from `--N`; the rest are recorded as skipped.
fn dimensions(spec: &BakerSpec, quant: &QuantArgs, ctx: &mut Context) -> Result<(Vec<usize>, (f64, f64))> {
    let bloch = parse_pair(&quant.bloch)?;
    let requested = parse_range(&quant.n)?;
    if let [n] = requested[..] {
        block_offsets(spec, n)?;
    }
    let mut ok = Vec::new();
    for n in requested {
        match block_offsets(spec, n) {
            Ok(_) => ok.push(n),
            Err(e) => ctx.skip(n, e.to_string()),
        }
    }
    Ok((ok, bloch))
}

/// Like [`dimensions`] for commands that take a single N: divisibility failures are errors.
fn single_dimension(spec: &BakerSpec, quant: &QuantArgs) -> Result<(usize, (f64, f64))> {
    let bloch = parse_pair(&quant.bloch)?;
    match parse_range(&quant.n)?[..] {
        [n] => {
            block_offsets(spec, n)?;
            Ok((n, bloch))
        }
        _ => Err(Error::InvalidArgument("this command takes a single --N".into())),
    }
}

fn open_map(spec: &BakerSpec, n: usize, bloch: (f64, f64), phase_seed: Option<u64>) -> Result<QuantizedMap> {
    let config = QuantizationConfig::new(n).with_bloch(bloch.0, bloch.1);
    let map = quantize_open(spec, &config)?.open;
    match phase_seed {
        Some(seed) => apply_diagonal_phases(&map, &PhaseSource::Seeded(seed)),
        None => Ok(map),
    }
}

/// Runs `f` over the admissible dimensions on the worker pool, keeping input order.
fn per_dimension<T: Send>(ns: &[usize], f: impl Fn(usize) -> Result<T> + Sync) -> Result<Vec<T>> {
    ns.par_iter().map(|&n| f(n)).collect()
}

fn require_nonempty(ns: &[usize]) -> Result<()> {
    if ns.is_empty() {
        return Err(Error::InvalidArgument("no admissible N in the requested range".into()));
    }
    Ok(())
}

fn thermo(a: &ThermoArgs, ctx: &mut Context) -> Result<()> {
    let (spec, _) = spec_of(&a.spec, ctx)?;
    let grid = parse_grid(&a.s_grid)?;
    let report = thermo_report_on(&spec, &grid);
    #[derive(Serialize)]
    struct Out<'a> {
        spec: crate::classical::SpecSummary,
        #[serde(flatten)]
        report: &'a crate::classical::PressureReport,
    }
    ctx.emit("thermo.json", |w| io::write_json(w, &Out { spec: spec.summary(), report: &report }))
}

fn escape(a: &EscapeArgs, ctx: &mut Context) -> Result<()> {
    let (spec, kind) = spec_of(&a.spec, ctx)?;
    if kind == TokenKind::Decimal {
        return Err(Error::InvalidArgument("escape and cover computations need exact p/q partition points".into()));
    }
    let report = escape_report(&spec, a.horizon)?;
    ctx.emit("escape.json", |w| io::write_json(w, &report))?;
    ctx.emit("survivors.csv", |w| io::write_intervals_csv(w, &report.survivors))?;
    if let Some(level) = a.cover_level {
        for (tail, name) in [(Tail::KMinus, "cover_kminus.csv"), (Tail::KPlus, "cover_kplus.csv")] {
            let cover = trapped_cover(&spec, level, tail)?;
            ctx.emit(name, |w| io::write_intervals_csv(w, &cover.strips()))?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SpectrumSummary {
    n: usize,
    bloch: (f64, f64),
    phase_seed: Option<u64>,
    spectral_radius: f64,
    backward_error: f64,
    trace_residual: f64,
    isolated: usize,
    parity_commutator_norm: Option<f64>,
}

fn spectrum(a: &SpectrumArgs, ctx: &mut Context) -> Result<()> {
    let (spec, _) = spec_of(&a.spec, ctx)?;
    let (ns, bloch) = dimensions(&spec, &a.quant, ctx)?;
    require_nonempty(&ns)?;
    if a.matrix_csv && ns.iter().any(|&n| n > MATRIX_CSV_LIMIT) {
        return Err(Error::InvalidArgument(format!("--matrix-csv is limited to N ≤ {MATRIX_CSV_LIMIT}")));
    }
    let seed = a.phases.then_some(ctx.seed());
    let results = per_dimension(&ns, |n| {
        let map = open_map(&spec, n, bloch, seed)?;
        let spectrum = eigen_decompose_map(&map)?;
        let parity = if a.parity {
            let split = parity_split(&map, &spec)?;
            let even = eigen_decompose(&split.even)?;
            let odd = eigen_decompose(&split.odd)?;
            Some((split.commutator_norm, even, odd))
        } else {
            None
        };
        Ok((map, spectrum, parity))
    })?;

    let mut summaries = Vec::new();
    for (n, (map, s, parity)) in ns.iter().zip(results) {
        ctx.emit(&format!("spectrum_N{n}.csv"), |w| io::write_spectrum_csv(w, &s))?;
        if let Some((_, even, odd)) = &parity {
            ctx.emit(&format!("spectrum_N{n}_even.csv"), |w| io::write_spectrum_csv(w, even))?;
            ctx.emit(&format!("spectrum_N{n}_odd.csv"), |w| io::write_spectrum_csv(w, odd))?;
        }
        if a.save_matrix {
            ctx.emit(&format!("matrix_N{n}.bin"), |w| io::write_matrix_binary(w, &map.matrix))?;
        }
        if a.matrix_csv {
            ctx.emit(&format!("matrix_N{n}.csv"), |w| io::write_matrix_csv(w, &map.matrix))?;
        }
        summaries.push(SpectrumSummary {
            n: *n,
            bloch,
            phase_seed: seed,
            spectral_radius: s.spectral_radius(),
            backward_error: s.backward_error,
            trace_residual: s.trace_residual,
            isolated: s.isolated,
            parity_commutator_norm: parity.map(|p| p.0),
        });
    }
    let bundle = serde_json::json!({ "spec": spec.summary(), "spectra": summaries });
    ctx.emit("spectrum.json", |w| io::write_json(w, &bundle))
}

fn count(a: &CountArgs, ctx: &mut Context) -> Result<()> {
    let (spec, _) = spec_of(&a.spec, ctx)?;
    let (ns, bloch) = dimensions(&spec, &a.quant, ctx)?;
    require_nonempty(&ns)?;
    let grid = parse_grid(&a.r_grid)?;
    let nu = a.nu.unwrap_or_else(|| crate::classical::thermo_report_on(&spec, &[]).dimension);
    let reports = per_dimension(&ns, |n| {
        let s = eigen_decompose_map(&open_map(&spec, n, bloch, None)?)?;
        count_profile(&s, &grid, nu)
    })?;
    for (n, r) in ns.iter().zip(&reports) {
        ctx.emit(&format!("count_N{n}.csv"), |w| io::write_count_csv(w, r))?;
    }
    let bundle = serde_json::json!({ "spec": spec.summary(), "nu": nu, "bloch": bloch, "reports": reports });
    ctx.emit("count.json", |w| io::write_json(w, &bundle))
}

fn radius_scan(a: &RadiusScanArgs, ctx: &mut Context) -> Result<()> {
    let (spec, _) = spec_of(&a.spec, ctx)?;
    let (ns, bloch) = dimensions(&spec, &a.quant, ctx)?;
    require_nonempty(&ns)?;
    let thermo = thermo_report_on(&spec, &[]);
    let radii = per_dimension(&ns, |n| Ok(eigen_decompose_map(&open_map(&spec, n, bloch, None)?)?.spectral_radius()))?;
    let rows = ns
        .iter()
        .zip(&radii)
        .map(|(n, r)| [n.to_string(), r.to_string(), thermo.g_half.to_string(), thermo.g_cl.to_string()]);
    ctx.emit("radius_scan.csv", |w| io::write_table(w, &["N", "r_sp", "g_half", "g_cl"], rows))
}

fn weyl(a: &WeylFitArgs, ctx: &mut Context) -> Result<()> {
    let (spec, _) = spec_of(&a.spec, ctx)?;
    let (ns, bloch) = dimensions(&spec, &a.quant, ctx)?;
    if !(a.r > 0.0 && a.r < 1.0) {
        return Err(Error::InvalidArgument(format!("counting radius {} must lie in (0, 1)", a.r)));
    }
    let counts =
        per_dimension(&ns, |n| Ok(eigen_decompose_map(&open_map(&spec, n, bloch, None)?)?.count_above(a.r)))?;
    let samples: Vec<(usize, usize)> = ns.iter().copied().zip(counts).collect();
    let rows = samples.iter().map(|(n, c)| [n.to_string(), c.to_string()]);
    ctx.emit("weyl_samples.csv", |w| io::write_table(w, &["N", "count"], rows))?;
    let fit = weyl_fit(&samples)?;
    let nu = thermo_report_on(&spec, &[]).dimension;
    let bundle = serde_json::json!({ "spec": spec.summary(), "r": a.r, "bloch": bloch, "nu_classical": nu, "fit": fit });
    ctx.emit("weyl_fit.json", |w| io::write_json(w, &bundle))
}

fn walsh(a: &WalshArgs, ctx: &mut Context) -> Result<()> {
    let keep = parse_usize_list(&a.keep)?;
    let ks = parse_range(&a.k)?;
    ctx.set_spec(&BakerSpec::symmetric(a.d, &keep)?);
    let seed = a.phases.then_some(ctx.seed());
    let rows = per_dimension(&ks, |k| {
        let model = walsh_open(a.d, &keep, k)?;
        let (values, method) = if seed.is_none() && !a.dense {
            match model.tensor_spectrum() {
                Ok(mut v) => {
                    sort_descending(&mut v);
                    (v, "tensor")
                }
                Err(_) => (eigen_decompose_map(&model.to_quantized_map()?)?.eigenvalues, "dense"),
            }
        } else {
            let mut map = model.to_quantized_map()?;
            if let Some(s) = seed {
                map = apply_diagonal_phases(&map, &PhaseSource::Seeded(s))?;
            }
            (eigen_decompose_map(&map)?.eigenvalues, "dense")
        };
        Ok((model, values, method))
    })?;
    let mut table = Vec::new();
    for (k, (model, values, method)) in ks.iter().zip(&rows) {
        ctx.emit(&format!("walsh_k{k}.csv"), |w| io::write_eigenvalues_csv(w, values))?;
        let count = values.iter().filter(|z| z.norm() > a.threshold).count();
        let radius = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        table.push([
            k.to_string(),
            model.dim().to_string(),
            count.to_string(),
            radius.to_string(),
            model.critical_radius().to_string(),
            model.pressure_bound().to_string(),
            method.to_string(),
        ]);
    }
    let header = ["k", "dim", "count", "spectral_radius", "critical_radius", "pressure_bound", "method"];
    ctx.emit("walsh.csv", |w| io::write_table(w, &header, &table))
}

fn effective(a: &EffectiveArgs, ctx: &mut Context) -> Result<()> {
    let (spec, _) = spec_of(&a.spec, ctx)?;
    let (n, bloch) = single_dimension(&spec, &a.quant)?;
    if a.probes == 0 {
        return Err(Error::InvalidArgument("need at least one probe".into()));
    }
    let config = QuantizationConfig::new(n).with_bloch(bloch.0, bloch.1);
    let m = quantize_open(&spec, &config)?.open.matrix;
    let pi = trapped_quasiprojector(&spec, &config, a.level)?.to_matrix();
    let probes: Vec<C64> = (0..a.probes)
        .map(|j| C64::from_polar(a.probe_radius, std::f64::consts::TAU * (j as f64 + 0.5) / a.probes as f64))
        .collect();
    let report = effective_hamiltonian(&m, &pi, &probes, a.r, a.m_max)?;
    let rows = report.roots.iter().map(|r| {
        [
            r.eigenvalue.re.to_string(),
            r.eigenvalue.im.to_string(),
            r.root.re.to_string(),
            r.root.im.to_string(),
            r.distance.to_string(),
            r.newton_iterations.to_string(),
        ]
    });
    let header = ["eig_re", "eig_im", "root_re", "root_im", "distance", "newton_iterations"];
    ctx.emit("roots.csv", |w| io::write_table(w, &header, rows))?;
    let decay = if a.m_max == 0 { Vec::new() } else { residual_decay(&m, &pi, a.m_max)? };
    let rows = decay.iter().enumerate().map(|(i, v)| [(i + 1).to_string(), v.to_string()]);
    ctx.emit("residual_decay.csv", |w| io::write_table(w, &["m", "norm"], rows))?;
    let bundle = serde_json::json!({ "spec": spec.summary(), "n": n, "bloch": bloch, "level": a.level, "report": report });
    ctx.emit("effective.json", |w| io::write_json(w, &bundle))
}

struct HusimiRow {
    kind: &'static str,
    index: usize,
    /// Eigenvalue of the mode; absent for random baseline vectors.
    lambda: Option<C64>,
    mass_near_kplus: f64,
    area_fraction: f64,
    enhancement: f64,
}

fn husimi(a: &HusimiArgs, ctx: &mut Context) -> Result<()> {
    let (spec, _) = spec_of(&a.spec, ctx)?;
    let (n, bloch) = single_dimension(&spec, &a.quant)?;
    if n > DENSE_LIMIT {
        return Err(Error::DimensionGuard { dim: n, limit: DENSE_LIMIT });
    }
    let frame = CoherentFrame::new(n).with_bloch(bloch);
    let eps = a.eps.unwrap_or_else(|| frame.momentum_width());
    let m = open_map(&spec, n, bloch, None)?.matrix;
    let pairs = leading_eigenpairs(&m, a.modes)?;

    let grid = (a.grid, a.grid);
    let mut rows = Vec::new();
    for (j, (lambda, v)) in pairs.iter().enumerate() {
        let report = husimi_report(v, &frame, grid, &spec, a.level, eps)?;
        if j < a.dump {
            ctx.emit(&format!("husimi_mode{j}.csv"), |w| io::write_husimi_csv(w, &report.field))?;
            ctx.emit(&format!("husimi_mode{j}.pgm"), |w| io::write_husimi_pgm(w, &report.field))?;
        }
        rows.push(HusimiRow {
            kind: "eigenmode",
            index: j,
            lambda: Some(*lambda),
            mass_near_kplus: report.mass_near_kplus,
            area_fraction: report.area_fraction,
            enhancement: report.enhancement,
        });
    }
    for i in 0..a.random {
        let seed = ctx.seed().wrapping_add(i as u64);
        let report = husimi_report(&random_unit_vector(n, seed), &frame, grid, &spec, a.level, eps)?;
        rows.push(HusimiRow {
            kind: "random",
            index: i,
            lambda: None,
            mass_near_kplus: report.mass_near_kplus,
            area_fraction: report.area_fraction,
            enhancement: report.enhancement,
        });
    }
    let table = rows.iter().map(|r| {
        [
            r.kind.to_string(),
            r.index.to_string(),
            r.lambda.map_or(String::new(), |z| z.re.to_string()),
            r.lambda.map_or(String::new(), |z| z.im.to_string()),
            r.lambda.map_or(String::new(), |z| z.norm().to_string()),
            r.mass_near_kplus.to_string(),
            r.area_fraction.to_string(),
            r.enhancement.to_string(),
        ]
    });
    let header = ["kind", "index", "re", "im", "modulus", "mass_near_kplus", "area_fraction", "enhancement"];
    ctx.emit("husimi.csv", |w| io::write_table(w, &header, table))?;
    let mean = |kind: &str| {
        let v: Vec<f64> = rows.iter().filter(|r| r.kind == kind).map(|r| r.enhancement).collect();
        (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
    };
    let min_mode = rows.iter().filter(|r| r.kind == "eigenmode").map(|r| r.enhancement).fold(f64::INFINITY, f64::min);
    let bundle = serde_json::json!({
        "spec": spec.summary(),
        "n": n,
        "bloch": bloch,
        "level": a.level,
        "thickening": eps,
        "grid": a.grid,
        "min_eigenmode_enhancement": min_mode,
        "mean_eigenmode_enhancement": mean("eigenmode"),
        "mean_random_enhancement": mean("random"),
    });
    ctx.emit("husimi.json", |w| io::write_json(w, &bundle))
}
