//! Command-line front end.
//!
//! Every subcommand maps onto one library operation and writes its plot
//! data as CSV (vectors, series) and JSON (scalar reports) into an output
//! directory, together with a `manifest.json` recording the configuration
//! and the digests of inputs and outputs. Outputs carry no timestamps, so
//! identical configurations on identical inputs produce byte-identical
//! artifacts. A failed run removes whatever it had written; an advisory
//! `.lock` file keeps two runs out of one output directory.
//!
//! Exit codes: 0 success, 2 validation error, 3 data or transport error,
//! 4 numeric-contract violation.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::circulant::{apply_t, build_circulant, eigenvalue_via_polygon, verify_spectrum, FourierPolygon};
use crate::cluster::{
    ansatz_cdf, default_window_d, find_cloud_index, fit_imag_cdf_values, fit_real_normal_values,
    standard_normal_cdf, CloudPartition,
};
use crate::error::{Error, Result};
use crate::nested::build_tree;
use crate::recursion::{montgomery_error_series, montgomery_sequence, z_recursion_run};
use crate::spectral::{
    average_midband_real, forward_transform, inverse_transform, reconstruction_report, Convention,
    Spectrum,
};
use crate::zeros::{default_cache_dir, fetch_zero_table, ZeroTable};

const TOOL: &str = "zeta-spectra";
const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = TOOL, version, about = "Fourier analysis toolkit for Riemann zeta zero ordinates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Download (or read from cache) a zero table and validate it.
    Fetch(FetchArgs),
    /// Forward transform of the first n ordinates.
    Transform(TransformArgs),
    /// Transform, invert, and compare against the input ordinates.
    Reconstruct(CommonArgs),
    /// Average the mid-band real parts and reconstruct from the result.
    Perturb(PerturbArgs),
    /// Scalar spacing recursion against the reference table.
    Montgomery(CommonArgs),
    /// Fourier-space recursion with per-n error tracking.
    ZRecursion(ZRecursionArgs),
    /// Circulant eigenvalues against the table, with a dense cross-check.
    Eigencheck(EigencheckArgs),
    /// Apply the lifted operator to a Fourier polygon and check the eigenpair.
    ApplyT(ApplyTArgs),
    /// Detect the cloud index by the windowed smoothness scan.
    Cloud(CloudArgs),
    /// Fit the cluster imaginary-part distribution.
    FitIm(FitArgs),
    /// Standardize cluster real parts and measure normality.
    FitRe(FitArgs),
    /// Build the nested transform tree.
    Nested(NestedArgs),
    /// Run every analysis at one n into one output directory.
    ReportAll(ReportAllArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct CommonArgs {
    /// Zero table file: one ordinate per line, optional index column.
    #[arg(long)]
    pub input: PathBuf,
    /// Prefix length n.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Output directory for artifacts and manifest.json.
    #[arg(long, default_value = "out")]
    pub output_dir: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct FetchArgs {
    /// Source URL of the zero table.
    #[arg(long)]
    pub url: String,
    /// Cache directory (default: $ZETA_SPECTRA_CACHE or the system temp dir).
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    /// Parse at most this many ordinates.
    #[arg(long)]
    pub limit: Option<usize>,
    #[arg(long, default_value = "out")]
    pub output_dir: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct TransformArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Transform convention: mean-forward or unitary.
    #[arg(long, default_value = "mean-forward")]
    pub convention: ConventionArg,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConventionArg {
    MeanForward,
    Unitary,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::MeanForward => Convention::MeanForward,
            ConventionArg::Unitary => Convention::Unitary,
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct PerturbArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Fraction of coefficients whose real part is averaged.
    #[arg(long, default_value_t = 0.8)]
    pub fraction: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct ZRecursionArgs {
    /// Zero table file.
    #[arg(long)]
    pub input: PathBuf,
    /// Run the recursion up to this transform length.
    #[arg(long, default_value_t = 1000)]
    pub n_max: usize,
    /// Seed the recursion with exact transforms at this length.
    #[arg(long, default_value_t = 10)]
    pub seed: usize,
    /// Substitute the exact ordinate at every step (identity mode).
    #[arg(long, default_value_t = false)]
    pub override_exact: bool,
    #[arg(long, default_value = "out")]
    pub output_dir: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct EigencheckArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Largest tolerated |lambda_j - gamma_j|.
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct ApplyTArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Polygon index j of the eigenpair to check.
    #[arg(long, default_value_t = 1)]
    pub j: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct CloudArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Smoothness window half-width d (default max(16, n/100)).
    #[arg(long)]
    pub window_d: Option<usize>,
    /// Scan stride.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct FitArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Smoothness window half-width d (default max(16, n/100)).
    #[arg(long)]
    pub window_d: Option<usize>,
    /// Scan stride.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    /// Cluster slice override "LO:HI" (1-based, inclusive); skips detection.
    #[arg(long)]
    pub slice: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct NestedArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Tree depth.
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct ReportAllArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 0.8)]
    pub fraction: f64,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    /// Seed length for the Fourier-space recursion.
    #[arg(long, default_value_t = 10)]
    pub seed: usize,
    #[arg(long)]
    pub window_d: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
}

/// Runs the parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match run_inner(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[derive(Serialize)]
struct InputRecord {
    path: String,
    sha256: String,
    bytes: u64,
}

#[derive(Serialize)]
struct OutputRecord {
    path: String,
    sha256: String,
    bytes: u64,
}

#[derive(Serialize)]
struct Manifest {
    tool: &'static str,
    version: &'static str,
    command: String,
    config: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<InputRecord>,
    outputs: Vec<OutputRecord>,
}

/// Collects artifacts for one run, removes them again if the run fails,
/// and writes the manifest at the end.
struct RunWriter {
    dir: PathBuf,
    lock_path: PathBuf,
    written: Vec<PathBuf>,
    outputs: Vec<OutputRecord>,
    finished: bool,
}

impl RunWriter {
    fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        let lock_path = dir.join(".lock");
        fs::OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&lock_path)
            .map_err(|_| {
                Error::Validation(format!(
                    "output directory {} is locked by another run (remove {} if stale)",
                    dir.display(),
                    lock_path.display()
                ))
            })?;
        Ok(RunWriter {
            dir: dir.to_path_buf(),
            lock_path,
            written: Vec::new(),
            outputs: Vec::new(),
            finished: false,
        })
    }

    fn write(&mut self, rel: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, bytes)?;
        self.written.push(path);
        self.outputs.push(OutputRecord {
            path: rel.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
            bytes: bytes.len() as u64,
        });
        Ok(())
    }

    fn finish(
        mut self,
        command: &str,
        config: serde_json::Value,
        input: Option<InputRecord>,
    ) -> Result<()> {
        let manifest = Manifest {
            tool: TOOL,
            version: VERSION,
            command: command.to_string(),
            config,
            input,
            outputs: std::mem::take(&mut self.outputs),
        };
        let mut json = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
        json.push(b'\n');
        fs::write(self.dir.join("manifest.json"), json)?;
        fs::remove_file(&self.lock_path)?;
        self.finished = true;
        Ok(())
    }
}

impl Drop for RunWriter {
    fn drop(&mut self) {
        if !self.finished {
            for path in &self.written {
                let _ = fs::remove_file(path);
            }
            let _ = fs::remove_file(&self.lock_path);
        }
    }
}

fn comments(command: &str, config: &serde_json::Value) -> Vec<String> {
    vec![
        format!("{TOOL} v{VERSION}"),
        format!("command: {command}, config: {config}"),
    ]
}

fn load_table(path: &Path, limit: Option<usize>) -> Result<(ZeroTable, InputRecord)> {
    let bytes = fs::read(path)?;
    let table = crate::zeros::parse_zero_table(bytes.as_slice(), limit)?;
    let record = InputRecord {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
        bytes: bytes.len() as u64,
    };
    Ok((table, record))
}

/// Configuration echo for comments and the manifest. The output directory
/// is stripped: it says where the artifacts land, not what they contain,
/// and keeping it would break byte-identical reproduction across
/// destinations.
fn config_value<T: Serialize>(args: &T) -> serde_json::Value {
    fn strip(v: &mut serde_json::Value) {
        if let serde_json::Value::Object(map) = v {
            map.remove("output_dir");
            for (_, child) in map.iter_mut() {
                strip(child);
            }
        }
    }
    let mut v = serde_json::to_value(args).expect("argument structs serialize");
    strip(&mut v);
    v
}

fn run_inner(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fetch(args) => {
            let cfg = config_value(&args);
            let cache = args.cache_dir.clone().unwrap_or_else(default_cache_dir);
            let table = fetch_zero_table(&args.url, &cache, args.limit)?;
            let mut w = RunWriter::create(&args.output_dir)?;
            w.write("zeros.txt", table.to_text().as_bytes())?;
            println!(
                "fetched {} ordinates from {} (cache {})",
                table.count(),
                args.url,
                cache.display()
            );
            w.finish("fetch", cfg, None)
        }
        Command::Transform(args) => {
            let cfg = config_value(&args);
            let (table, input) = load_table(&args.common.input, Some(args.common.n))?;
            let mut w = RunWriter::create(&args.common.output_dir)?;
            let cs = comments("transform", &cfg);
            emit_transform(&table, args.common.n, args.convention.into(), &mut w, "", &cs)?;
            w.finish("transform", cfg, Some(input))
        }
        Command::Reconstruct(args) => {
            let cfg = config_value(&args);
            let (table, input) = load_table(&args.input, Some(args.n))?;
            let mut w = RunWriter::create(&args.output_dir)?;
            let cs = comments("reconstruct", &cfg);
            emit_reconstruct(&table, args.n, &mut w, "", &cs)?;
            w.finish("reconstruct", cfg, Some(input))
        }
        Command::Perturb(args) => {
            let cfg = config_value(&args);
            let (table, input) = load_table(&args.common.input, Some(args.common.n))?;
            let mut w = RunWriter::create(&args.common.output_dir)?;
            let cs = comments("perturb", &cfg);
            emit_perturb(&table, args.common.n, args.fraction, &mut w, "", &cs)?;
            w.finish("perturb", cfg, Some(input))
        }
        Command::Montgomery(args) => {
            let cfg = config_value(&args);
            let (table, input) = load_table(&args.input, Some(args.n))?;
            let mut w = RunWriter::create(&args.output_dir)?;
            let cs = comments("montgomery", &cfg);
            emit_montgomery(&table, args.n, &mut w, "", &cs)?;
            w.finish("montgomery", cfg, Some(input))
        }
        Command::ZRecursion(args) => {
            let cfg = config_value(&args);
            let (table, input) = load_table(&args.input, Some(args.n_max))?;
            let mut w = RunWriter::create(&args.output_dir)?;
            let cs = comments("z-recursion", &cfg);
            emit_z_recursion(&table, args.n_max, args.seed, args.override_exact, &mut w, "", &cs)?;
            w.finish("z-recursion", cfg, Some(input))
        }
        Command::Eigencheck(args) => {
            let cfg = config_value(&args);
            let (table, input) = load_table(&args.common.input, Some(args.common.n))?;
            let mut w = RunWriter::create(&args.common.output_dir)?;
            let cs = comments("eigencheck", &cfg);
            let breach = emit_eigencheck(&table, args.common.n, args.tol, &mut w, "", &cs)?;
            w.finish("eigencheck", cfg, Some(input))?;
            match breach {
                Some(e) => Err(e),
                None => Ok(()),
            }
        }
        Command::ApplyT(args) => {
            let cfg = config_value(&args);
            let (table, input) = load_table(&args.common.input, Some(args.common.n))?;
            let mut w = RunWriter::create(&args.common.output_dir)?;
            let cs = comments("apply-t", &cfg);
            let breach = emit_apply_t(&table, args.common.n, args.j, &mut w, "", &cs)?;
            w.finish("apply-t", cfg, Some(input))?;
            match breach {
                Some(e) => Err(e),
                None => Ok(()),
            }
        }
        Command::Cloud(args) => {
            let cfg = config_value(&args);
            let (table, input) = load_table(&args.common.input, Some(args.common.n))?;
            let mut w = RunWriter::create(&args.common.output_dir)?;
            let cs = comments("cloud", &cfg);
            emit_cloud(&table, args.common.n, args.window_d, args.stride, &mut w, "", &cs)?;
            w.finish("cloud", cfg, Some(input))
        }
        Command::FitIm(args) => {
            let cfg = config_value(&args);
            let (table, input) = load_table(&args.common.input, Some(args.common.n))?;
            let mut w = RunWriter::create(&args.common.output_dir)?;
            let cs = comments("fit-im", &cfg);
            let spectrum = spectrum_for(&table, args.common.n)?;
            let (lo, hi) = fit_slice(&spectrum, &args)?;
            emit_fit_im(&spectrum, lo, hi, &mut w, "", &cs)?;
            w.finish("fit-im", cfg, Some(input))
        }
        Command::FitRe(args) => {
            let cfg = config_value(&args);
            let (table, input) = load_table(&args.common.input, Some(args.common.n))?;
            let mut w = RunWriter::create(&args.common.output_dir)?;
            let cs = comments("fit-re", &cfg);
            let spectrum = spectrum_for(&table, args.common.n)?;
            let (lo, hi) = fit_slice(&spectrum, &args)?;
            emit_fit_re(&spectrum, lo, hi, &mut w, "", &cs)?;
            w.finish("fit-re", cfg, Some(input))
        }
        Command::Nested(args) => {
            let cfg = config_value(&args);
            let (table, input) = load_table(&args.common.input, Some(args.common.n))?;
            let mut w = RunWriter::create(&args.common.output_dir)?;
            let cs = comments("nested", &cfg);
            emit_nested(&table, args.common.n, args.depth, &mut w, "", &cs)?;
            w.finish("nested", cfg, Some(input))
        }
        Command::ReportAll(args) => {
            let cfg = config_value(&args);
            let n = args.common.n;
            let (table, input) = load_table(&args.common.input, None)?;
            let mut w = RunWriter::create(&args.common.output_dir)?;
            let cs = comments("report-all", &cfg);
            emit_transform(&table, n, Convention::MeanForward, &mut w, "transform/", &cs)?;
            emit_reconstruct(&table, n, &mut w, "reconstruct/", &cs)?;
            emit_perturb(&table, n, args.fraction, &mut w, "perturb/", &cs)?;
            emit_montgomery(&table, n, &mut w, "montgomery/", &cs)?;
            emit_z_recursion(&table, n, args.seed, false, &mut w, "z_recursion/", &cs)?;
            if let Some(e) = emit_eigencheck(&table, n, args.tol, &mut w, "eigencheck/", &cs)? {
                return Err(e);
            }
            let spectrum = spectrum_for(&table, n)?;
            let d = args.window_d.unwrap_or_else(|| default_window_d(n));
            let partition = find_cloud_index(&spectrum, d, args.stride)?;
            emit_cloud_files(&partition, &mut w, "cloud/", &cs)?;
            let (lo, hi) = partition.cluster_range();
            emit_fit_im(&spectrum, lo, hi, &mut w, "fit_im/", &cs)?;
            emit_fit_re(&spectrum, lo, hi, &mut w, "fit_re/", &cs)?;
            emit_nested(&table, n, args.depth, &mut w, "nested/", &cs)?;
            w.finish("report-all", cfg, Some(input))
        }
    }
}

fn spectrum_for(table: &ZeroTable, n: usize) -> Result<Spectrum> {
    forward_transform(table.prefix(n)?, Convention::MeanForward)
}

fn fit_slice(spectrum: &Spectrum, args: &FitArgs) -> Result<(usize, usize)> {
    if let Some(slice) = &args.slice {
        let (lo, hi) = parse_slice(slice, spectrum.n())?;
        return Ok((lo, hi));
    }
    let d = args.window_d.unwrap_or_else(|| default_window_d(spectrum.n()));
    let partition = find_cloud_index(spectrum, d, args.stride)?;
    Ok(partition.cluster_range())
}

fn parse_slice(spec: &str, n: usize) -> Result<(usize, usize)> {
    let parts: Vec<&str> = spec.split(':').collect();
    let err = || Error::Validation(format!("slice {spec:?} must look like LO:HI"));
    if parts.len() != 2 {
        return Err(err());
    }
    let lo: usize = parts[0].parse().map_err(|_| err())?;
    let hi: usize = parts[1].parse().map_err(|_| err())?;
    if lo < 2 || hi > n || lo > hi {
        return Err(Error::Validation(format!(
            "slice [{lo}, {hi}] outside [2, {n}] or empty"
        )));
    }
    Ok((lo, hi))
}

fn emit_transform(
    table: &ZeroTable,
    n: usize,
    convention: Convention,
    w: &mut RunWriter,
    prefix: &str,
    cs: &[String],
) -> Result<()> {
    let spectrum = forward_transform(table.prefix(n)?, convention)?;
    let mut out = Vec::new();
    for c in cs {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "# n = {}, convention = {}", n, spectrum.convention().label())?;
    writeln!(out, "index,re,im,modulus,argument")?;
    for (i, z) in spectrum.coeffs().iter().enumerate() {
        writeln!(out, "{},{},{},{},{}", i + 1, z.re, z.im, z.norm(), z.arg())?;
    }
    w.write(&format!("{prefix}fourier_coefs.csv"), &out)?;
    println!(
        "transform: n = {n}, z_1 = {}, max |z| = {}",
        spectrum.z(1).re,
        spectrum.max_modulus()
    );
    Ok(())
}

fn emit_reconstruct(
    table: &ZeroTable,
    n: usize,
    w: &mut RunWriter,
    prefix: &str,
    cs: &[String],
) -> Result<()> {
    let gamma = table.prefix(n)?;
    let spectrum = forward_transform(gamma, Convention::MeanForward)?;
    let report = reconstruction_report(&spectrum, gamma)?;
    let mut out = Vec::new();
    for c in cs {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "index,gamma,reconstructed,abs_diff")?;
    for i in 0..n {
        writeln!(
            out,
            "{},{},{},{}",
            i + 1,
            report.reference[i],
            report.reconstructed[i],
            report.abs_diff[i]
        )?;
    }
    w.write(&format!("{prefix}reconstruction.csv"), &out)?;
    let summary = serde_json::json!({
        "n": n,
        "max_abs_diff": report.max_abs_diff(),
        "max_imag_residue": report.max_imag_residue,
    });
    w.write(
        &format!("{prefix}reconstruct.json"),
        pretty_json(&summary).as_bytes(),
    )?;
    println!(
        "reconstruct: n = {n}, max |diff| = {}, imag residue = {}",
        report.max_abs_diff(),
        report.max_imag_residue
    );
    Ok(())
}

fn emit_perturb(
    table: &ZeroTable,
    n: usize,
    fraction: f64,
    w: &mut RunWriter,
    prefix: &str,
    cs: &[String],
) -> Result<()> {
    let gamma = table.prefix(n)?;
    let spectrum = forward_transform(gamma, Convention::MeanForward)?;
    let modified = average_midband_real(&spectrum, fraction)?;
    let mut out = Vec::new();
    modified.write_csv(&mut out, cs)?;
    w.write(&format!("{prefix}modified_spectrum.csv"), &out)?;

    let report = reconstruction_report(&modified, gamma)?;
    let mut rec = Vec::new();
    for c in cs {
        writeln!(rec, "# {c}")?;
    }
    writeln!(rec, "index,gamma,reconstructed")?;
    for i in 0..n {
        writeln!(rec, "{},{},{}", i + 1, report.reference[i], report.reconstructed[i])?;
    }
    w.write(&format!("{prefix}reconstruction.csv"), &rec)?;

    let mut diffs = Vec::new();
    for c in cs {
        writeln!(diffs, "# {c}")?;
    }
    writeln!(diffs, "index,diff,abs_diff")?;
    for i in 0..n {
        writeln!(
            diffs,
            "{},{},{}",
            i + 1,
            report.reconstructed[i] - report.reference[i],
            report.abs_diff[i]
        )?;
    }
    w.write(&format!("{prefix}diffs.csv"), &diffs)?;

    let summary = serde_json::json!({
        "n": n,
        "fraction": fraction,
        "max_abs_diff": report.max_abs_diff(),
        "max_imag_residue": report.max_imag_residue,
    });
    w.write(&format!("{prefix}perturb.json"), pretty_json(&summary).as_bytes())?;
    println!(
        "perturb: n = {n}, fraction = {fraction}, max |diff| = {}, imag residue = {}",
        report.max_abs_diff(),
        report.max_imag_residue
    );
    Ok(())
}

fn emit_montgomery(
    table: &ZeroTable,
    n: usize,
    w: &mut RunWriter,
    prefix: &str,
    cs: &[String],
) -> Result<()> {
    if n > table.count() {
        return Err(Error::Validation(format!(
            "table holds {} ordinates, montgomery run needs {n}",
            table.count()
        )));
    }
    let approx = montgomery_sequence(table.gamma(1), n)?;
    let series = montgomery_error_series(table, n)?;
    let mut out = Vec::new();
    for c in cs {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "n,approx,exact,rel_error")?;
    for (i, (a, rel)) in approx.iter().zip(&series.rel_errors).enumerate() {
        writeln!(out, "{},{},{},{}", i + 1, a, table.gamma(i + 1), rel)?;
    }
    w.write(&format!("{prefix}montgomery.csv"), &out)?;
    let last = series.rel_errors.last().copied().unwrap_or(0.0);
    println!("montgomery: n = {n}, final relative error = {last}");
    Ok(())
}

fn emit_z_recursion(
    table: &ZeroTable,
    n_max: usize,
    seed: usize,
    override_exact: bool,
    w: &mut RunWriter,
    prefix: &str,
    cs: &[String],
) -> Result<()> {
    let run = z_recursion_run(table, n_max, seed, override_exact)?;
    let mut out = Vec::new();
    run.series.write_csv(&mut out, cs)?;
    w.write(&format!("{prefix}z_recursion_errors.csv"), &out)?;

    // roots reconstructed from the final approximate spectrum
    let rec = inverse_transform(&run.final_spectrum);
    let mut roots = Vec::new();
    for c in cs {
        writeln!(roots, "# {c}")?;
    }
    writeln!(roots, "j,gamma,approx,abs_diff")?;
    for (i, v) in rec.values.iter().enumerate() {
        let gamma = table.gamma(i + 1);
        writeln!(roots, "{},{},{},{}", i + 1, gamma, v, (v - gamma).abs())?;
    }
    w.write(&format!("{prefix}z_recursion_roots.csv"), &roots)?;
    let last = run.series.rel_errors.last().copied().unwrap_or(0.0);
    println!(
        "z-recursion: seed = {seed}, n_max = {n_max}, override_exact = {override_exact}, final aggregate error = {last}"
    );
    Ok(())
}

fn emit_eigencheck(
    table: &ZeroTable,
    n: usize,
    tol: f64,
    w: &mut RunWriter,
    prefix: &str,
    cs: &[String],
) -> Result<Option<Error>> {
    let spectrum = spectrum_for(table, n)?;
    let op = build_circulant(&spectrum)?;
    let verification = verify_spectrum(&op, table)?;
    let mut out = Vec::new();
    for c in cs {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "j,lambda,gamma,abs_diff")?;
    for row in &verification.rows {
        writeln!(out, "{},{},{},{}", row.j, row.lambda, row.gamma, row.abs_diff)?;
    }
    w.write(&format!("{prefix}eigen.csv"), &out)?;
    let summary = serde_json::json!({
        "n": n,
        "tol": tol,
        "max_abs_deviation": verification.max_abs_deviation,
        "dense_multiset_gap": verification.dense_multiset_gap,
        "hermiticity_defect": op.hermiticity_defect(),
    });
    w.write(&format!("{prefix}eigencheck.json"), pretty_json(&summary).as_bytes())?;
    println!(
        "eigencheck: n = {n}, max |lambda - gamma| = {}, dense gap = {:?}",
        verification.max_abs_deviation, verification.dense_multiset_gap
    );
    if verification.max_abs_deviation > tol {
        return Ok(Some(Error::NumericContract(format!(
            "eigenvalue deviation {} exceeds tolerance {tol}",
            verification.max_abs_deviation
        ))));
    }
    Ok(None)
}

fn emit_apply_t(
    table: &ZeroTable,
    n: usize,
    j: usize,
    w: &mut RunWriter,
    prefix: &str,
    cs: &[String],
) -> Result<Option<Error>> {
    let spectrum = spectrum_for(table, n)?;
    let op = build_circulant(&spectrum)?;
    let lambda = eigenvalue_via_polygon(&op, j)?;
    let input = FourierPolygon::new(j, n)?.lifted(n)?;
    let application = apply_t(&op, &input)?;
    let factor = Complex64::new(0.5, lambda);
    let mut out = Vec::new();
    for c in cs {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "k,in_re,in_im,out_re,out_im,expected_re,expected_im,abs_err")?;
    let mut max_err = 0.0f64;
    let mut scale = 0.0f64;
    for (k, (x, y)) in input.iter().zip(&application.output_coeffs).enumerate() {
        let expected = factor * x;
        let err = (y - expected).norm();
        max_err = max_err.max(err);
        scale = scale.max(expected.norm());
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            k + 1,
            x.re,
            x.im,
            y.re,
            y.im,
            expected.re,
            expected.im,
            err
        )?;
    }
    w.write(&format!("{prefix}apply_t.csv"), &out)?;
    let summary = serde_json::json!({
        "n": n,
        "j": j,
        "lambda": lambda,
        "eigenvalue": {"re": 0.5, "im": lambda},
        "max_abs_err": max_err,
    });
    w.write(&format!("{prefix}apply_t.json"), pretty_json(&summary).as_bytes())?;
    println!("apply-t: n = {n}, j = {j}, eigenvalue 1/2 + {lambda}i, max error {max_err}");
    if max_err > 1e-8 * scale.max(1.0) {
        return Ok(Some(Error::NumericContract(format!(
            "eigenpair error {max_err} exceeds 1e-8 relative"
        ))));
    }
    Ok(None)
}

fn emit_cloud(
    table: &ZeroTable,
    n: usize,
    window_d: Option<usize>,
    stride: usize,
    w: &mut RunWriter,
    prefix: &str,
    cs: &[String],
) -> Result<CloudPartition> {
    let spectrum = spectrum_for(table, n)?;
    let d = window_d.unwrap_or_else(|| default_window_d(n));
    let partition = find_cloud_index(&spectrum, d, stride)?;
    emit_cloud_files(&partition, w, prefix, cs)?;
    Ok(partition)
}

fn emit_cloud_files(
    partition: &CloudPartition,
    w: &mut RunWriter,
    prefix: &str,
    cs: &[String],
) -> Result<()> {
    let mut out = Vec::new();
    for c in cs {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "j,score")?;
    for (j, s) in partition.scanned.iter().zip(&partition.scores) {
        writeln!(out, "{j},{s}")?;
    }
    w.write(&format!("{prefix}cloud_scores.csv"), &out)?;
    w.write(
        &format!("{prefix}cloud.json"),
        pretty_json(&serde_json::to_value(partition).expect("partition serializes")).as_bytes(),
    )?;
    println!(
        "cloud: n = {}, d = {}, stride = {}, m = {}",
        partition.n, partition.window_d, partition.stride, partition.m
    );
    Ok(())
}

fn emit_fit_im(
    spectrum: &Spectrum,
    lo: usize,
    hi: usize,
    w: &mut RunWriter,
    prefix: &str,
    cs: &[String],
) -> Result<()> {
    let values: Vec<f64> = spectrum.coeffs()[lo - 1..hi].iter().map(|z| z.im).collect();
    let fit = fit_imag_cdf_values(&values)?;
    let mut out = Vec::new();
    for c in cs {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "x,empirical,ansatz")?;
    for pt in &fit.empirical_cdf {
        writeln!(out, "{},{},{}", pt.x, pt.cdf, ansatz_cdf(pt.x, fit.p))?;
    }
    w.write(&format!("{prefix}imag_cdf.csv"), &out)?;
    let summary = serde_json::json!({
        "slice_lo": lo,
        "slice_hi": hi,
        "count": fit.count,
        "p": fit.p,
        "max_cdf_gap": fit.max_cdf_gap,
        "slope_near_zero": fit.slope_near_zero,
    });
    w.write(&format!("{prefix}fit_im.json"), pretty_json(&summary).as_bytes())?;
    println!(
        "fit-im: slice [{lo}, {hi}], p = {}, sup gap = {}",
        fit.p, fit.max_cdf_gap
    );
    Ok(())
}

fn emit_fit_re(
    spectrum: &Spectrum,
    lo: usize,
    hi: usize,
    w: &mut RunWriter,
    prefix: &str,
    cs: &[String],
) -> Result<()> {
    let values: Vec<f64> = spectrum.coeffs()[lo - 1..hi].iter().map(|z| z.re).collect();
    let fit = fit_real_normal_values(&values)?;
    let mut sorted = fit.standardized.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out = Vec::new();
    for c in cs {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "index,standardized,empirical_cdf,normal_cdf")?;
    let k = sorted.len() as f64;
    for (i, v) in sorted.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{}",
            i + 1,
            v,
            (i as f64 + 1.0) / k,
            standard_normal_cdf(*v)
        )?;
    }
    w.write(&format!("{prefix}real_fit.csv"), &out)?;
    let summary = serde_json::json!({
        "slice_lo": lo,
        "slice_hi": hi,
        "count": fit.count,
        "ks_distance": fit.ks_distance,
    });
    w.write(&format!("{prefix}fit_re.json"), pretty_json(&summary).as_bytes())?;
    println!("fit-re: slice [{lo}, {hi}], ks distance = {}", fit.ks_distance);
    Ok(())
}

fn emit_nested(
    table: &ZeroTable,
    n: usize,
    depth: usize,
    w: &mut RunWriter,
    prefix: &str,
    cs: &[String],
) -> Result<()> {
    let tree = build_tree(table.prefix(n)?, depth)?;
    let render_vector = |word: &str, vector: &[f64]| -> Result<Vec<u8>> {
        let mut out = Vec::new();
        for c in cs {
            writeln!(out, "# {c}")?;
        }
        writeln!(out, "# word = {:?}, length = {}", word, vector.len())?;
        writeln!(out, "index,value")?;
        for (i, v) in vector.iter().enumerate() {
            writeln!(out, "{},{}", i + 1, v)?;
        }
        Ok(out)
    };
    w.write(
        &format!("{prefix}tree/root.csv"),
        &render_vector("", tree.root())?,
    )?;
    for (word, vector) in tree.nodes() {
        w.write(
            &format!("{prefix}tree/{word}.csv"),
            &render_vector(word, vector)?,
        )?;
    }
    let mut heads = serde_json::to_vec_pretty(tree.dropped_heads()).expect("head map serializes");
    heads.push(b'\n');
    w.write(&format!("{prefix}tree/heads.json"), &heads)?;
    println!(
        "nested: n = {n}, depth = {depth}, {} nodes",
        tree.nodes().len()
    );
    Ok(())
}

fn pretty_json(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json serializes");
    s.push('\n');
    s
}
