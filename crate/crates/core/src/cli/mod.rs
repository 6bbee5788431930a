//! Command-line runner. Every subcommand writes its tables and reports into an
//! output directory together with a `manifest.json` describing the run.
//!
//! Exit codes: `0` success, `2` invalid input, `3` numerical failure.

mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::classical::BakerSpec;
use crate::error::{Error, Result};
use crate::rational::{parse_rational_list, TokenKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable capping the worker pool size.
pub const THREADS_ENV: &str = "OQMAP_THREADS";

#[derive(Debug, Parser, Serialize)]
#[command(name = "oqmap", version, about = "Open quantum baker's maps: spectra, Weyl laws and Husimi localization")]
pub struct Cli {
    /// Directory receiving every output file (created if missing).
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Seed for every random draw of the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Pressure, dimension, escape rate and gap bounds.
    Thermo(ThermoArgs),
    /// Exact escape volumes, survivor intervals and trapped-set covers.
    Escape(EscapeArgs),
    /// Eigenvalues of the open quantum map for each N.
    Spectrum(SpectrumArgs),
    /// Counting profiles C(r) and their N^ν rescaling.
    Count(CountArgs),
    /// Spectral radius against the classical gap bounds.
    RadiusScan(RadiusScanArgs),
    /// Power-law fit of C(r) against N.
    WeylFit(WeylFitArgs),
    /// Walsh tensor model spectra.
    Walsh(WalshArgs),
    /// Schur-complement reduction onto the trapped set.
    Effective(EffectiveArgs),
    /// Husimi localization of eigenmodes on the outgoing tail.
    Husimi(HusimiArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct SpecArgs {
    /// Partition points, e.g. `0,1/3,2/3,1`.
    #[arg(long, conflicts_with = "d")]
    pub partition: Option<String>,
    /// Number of equal rectangles (alternative to --partition).
    #[arg(long)]
    pub d: Option<usize>,
    /// Kept rectangle indices, e.g. `0,2`.
    #[arg(long)]
    pub keep: String,
}

#[derive(Debug, Args, Serialize)]
pub struct QuantArgs {
    /// Dimensions: `n`, `a,b,c` or `start:stop:step` (inclusive).
    #[arg(long = "N")]
    pub n: String,
    /// Bloch phases `θx,θξ` in [0,1).
    #[arg(long, default_value = "0,0")]
    pub bloch: String,
}

#[derive(Debug, Args, Serialize)]
pub struct ThermoArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Pressure grid `lo:hi:points`.
    #[arg(long, default_value = "-1:3:41")]
    pub s_grid: String,
}

#[derive(Debug, Args, Serialize)]
pub struct EscapeArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    /// Number of steps for escape volumes and survivor intervals.
    #[arg(long, default_value_t = 6)]
    pub horizon: usize,
    /// Also emit level-m covers of the incoming and outgoing tails.
    #[arg(long)]
    pub cover_level: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub quant: QuantArgs,
    /// Multiply the map by seeded random diagonal phases.
    #[arg(long)]
    pub phases: bool,
    /// Also emit the even and odd parity sector spectra.
    #[arg(long)]
    pub parity: bool,
    /// Save each open map as `matrix_N<n>.bin`.
    #[arg(long)]
    pub save_matrix: bool,
    /// Save each open map as `matrix_N<n>.csv` (N ≤ 64 only).
    #[arg(long)]
    pub matrix_csv: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CountArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub quant: QuantArgs,
    /// Radii: a list or `lo:hi:points`.
    #[arg(long, default_value = "0.05:1:20")]
    pub r_grid: String,
    /// Exponent for the rescaling; defaults to the classical ν.
    #[arg(long)]
    pub nu: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct RadiusScanArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub quant: QuantArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct WeylFitArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub quant: QuantArgs,
    /// Counting radius.
    #[arg(long, default_value_t = 0.3)]
    pub r: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct WalshArgs {
    /// Alphabet size D.
    #[arg(long)]
    pub d: usize,
    /// Kept digits, e.g. `0,2`.
    #[arg(long)]
    pub keep: String,
    /// Word lengths: `k`, a list or `start:stop:step`.
    #[arg(long, default_value = "1:5:1")]
    pub k: String,
    /// Eigenvalues with modulus above this are counted.
    #[arg(long, default_value_t = 1e-8)]
    pub threshold: f64,
    /// Multiply by seeded random diagonal phases (dense solver).
    #[arg(long)]
    pub phases: bool,
    /// Use the dense eigensolver instead of the tensor structure.
    #[arg(long)]
    pub dense: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct EffectiveArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub quant: QuantArgs,
    /// Cover level of the trapped quasiprojector.
    #[arg(long, default_value_t = 2)]
    pub level: usize,
    /// Eigenvalues with |λ| ≥ r are matched to roots of det E.
    #[arg(long, default_value_t = 0.5)]
    pub r: f64,
    /// Radius of the probe circle for the determinant identity.
    #[arg(long, default_value_t = 0.95)]
    pub probe_radius: f64,
    /// Number of equally spaced probe points on the circle.
    #[arg(long, default_value_t = 8)]
    pub probes: usize,
    /// Largest power in the residual decay table.
    #[arg(long, default_value_t = 6)]
    pub m_max: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct HusimiArgs {
    #[command(flatten)]
    pub spec: SpecArgs,
    #[command(flatten)]
    pub quant: QuantArgs,
    /// Number of leading eigenmodes analysed.
    #[arg(long, default_value_t = 10)]
    pub modes: usize,
    /// Level of the outgoing-tail cover.
    #[arg(long, default_value_t = 2)]
    pub level: usize,
    /// Strip thickening; defaults to one coherent-state momentum width.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Husimi grid size per axis.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    /// Random unit vectors used as a baseline.
    #[arg(long, default_value_t = 20)]
    pub random: usize,
    /// Leading modes whose full fields are written as CSV and PGM.
    #[arg(long, default_value_t = 1)]
    pub dump: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Skip {
    pub n: usize,
    pub reason: String,
}

/// Record of one CLI invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub params: serde_json::Value,
    pub spec_hash: Option<String>,
    pub seed: u64,
    pub version: String,
    pub wall_time_seconds: f64,
    pub outputs: Vec<String>,
    pub skipped: Vec<Skip>,
}

/// Output directory plus everything the manifest needs to know.
pub(crate) struct Context {
    dir: PathBuf,
    seed: u64,
    outputs: Vec<String>,
    skipped: Vec<Skip>,
    spec_hash: Option<String>,
}

impl Context {
    fn new(dir: &Path, seed: u64) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self { dir: dir.to_path_buf(), seed, outputs: Vec::new(), skipped: Vec::new(), spec_hash: None })
    }

    pub(crate) fn seed(&self) -> u64 {
        self.seed
    }

    pub(crate) fn set_spec(&mut self, spec: &BakerSpec) {
        self.spec_hash = Some(spec.hash());
    }

    pub(crate) fn skip(&mut self, n: usize, reason: String) {
        self.skipped.push(Skip { n, reason });
    }

    /// Creates `name` in the output directory and records it.
    pub(crate) fn emit(&mut self, name: &str, write: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
        let file = std::fs::File::create(self.dir.join(name))?;
        let mut w = std::io::BufWriter::new(file);
        write(&mut w)?;
        w.flush()?;
        self.outputs.push(name.to_string());
        Ok(())
    }
}

/// Parses `argv` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(manifest) => {
            println!("{}: {} files written to {}", manifest.command, manifest.outputs.len(), cli.out.display());
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_validation() {
        EXIT_VALIDATION
    } else {
        EXIT_NUMERICAL
    }
}

/// Runs an already parsed command, writing its outputs and `manifest.json`.
pub fn execute(cli: &Cli) -> Result<RunManifest> {
    faer::set_global_parallelism(faer::Par::Seq);
    let start = Instant::now();
    let mut ctx = Context::new(&cli.out, cli.seed)?;
    let pool = worker_pool()?;
    pool.install(|| commands::dispatch(&cli.command, &mut ctx))?;

    let params = serde_json::to_value(&cli.command).map_err(|e| Error::Io(e.to_string()))?;
    let (command, params) = match params {
        serde_json::Value::Object(mut map) if map.len() == 1 => {
            let (name, value) = map.iter_mut().next().map(|(k, v)| (k.clone(), v.take())).expect("one entry");
            (name, value)
        }
        other => ("unknown".to_string(), other),
    };
    let manifest = RunManifest {
        command,
        params,
        spec_hash: ctx.spec_hash.clone(),
        seed: cli.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_seconds: start.elapsed().as_secs_f64(),
        outputs: ctx.outputs.clone(),
        skipped: ctx.skipped.clone(),
    };
    ctx.emit("manifest.json", |w| crate::io::write_json(w, &manifest))?;
    Ok(manifest)
}

fn worker_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| Error::InvalidArgument(format!("{THREADS_ENV} must be a positive integer, got {v:?}")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| Error::Io(e.to_string()))
}

pub(crate) fn parse_spec(args: &SpecArgs) -> Result<(BakerSpec, TokenKind)> {
    let keep = parse_usize_list(&args.keep)?;
    match (&args.partition, args.d) {
        (Some(p), _) => {
            let (points, kind) = parse_rational_list(p)?;
            Ok((BakerSpec::new(points, &keep)?, kind))
        }
        (None, Some(d)) => Ok((BakerSpec::symmetric(d, &keep)?, TokenKind::Exact)),
        (None, None) => Err(Error::InvalidArgument("either --partition or --d is required".into())),
    }
}

pub(crate) fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| Error::InvalidArgument(format!("not an index: {t:?}"))))
        .collect()
}

/// `n`, `a,b,c`, or inclusive `start:stop:step`.
pub(crate) fn parse_range(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidArgument(format!("bad range {s:?}"));
    if s.contains(':') {
        let parts: Vec<usize> = s.split(':').map(|t| t.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<_>>()?;
        let (start, stop, step) = match parts[..] {
            [a, b] => (a, b, 1),
            [a, b, c] => (a, b, c),
            _ => return Err(bad()),
        };
        if step == 0 || stop < start {
            return Err(bad());
        }
        return Ok((start..=stop).step_by(step).collect());
    }
    parse_usize_list(s)
}

/// A list of reals, or `lo:hi:points` with both ends included.
pub(crate) fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidArgument(format!("bad grid {s:?}"));
    let real = |t: &str| t.trim().parse::<f64>().map_err(|_| bad());
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let (lo, hi) = (real(parts[0])?, real(parts[1])?);
        let points: usize = parts[2].trim().parse().map_err(|_| bad())?;
        return match points {
            0 => Err(bad()),
            1 => Ok(vec![lo]),
            p => Ok((0..p).map(|i| lo + (hi - lo) * i as f64 / (p - 1) as f64).collect()),
        };
    }
    s.split(',').map(real).collect()
}

pub(crate) fn parse_pair(s: &str) -> Result<(f64, f64)> {
    match parse_grid(s)?[..] {
        [a, b] if !s.contains(':') => Ok((a, b)),
        _ => Err(Error::InvalidArgument(format!("expected two comma-separated numbers, got {s:?}"))),
    }
}
