//! Command-line front end for search-tree profile analysis.
//!
//! Subcommands mirror the library layers: `constants` (spectral constants
//! and dominant-root probes), `exact` (DP tables and polynomial series),
//! `simulate` (Monte-Carlo profiles), `limit` (fixed-point process draws
//! with moment checks), `compare` (profile-vs-limit distance ladder),
//! `invert` (circle-transform identity), and `verify` (the numbered
//! acceptance criteria).
//!
//! Determinism contract: for a fixed configuration (including `--seed`),
//! data files are byte-identical across reruns and across `--workers`
//! settings. CSV output uses RFC-4180 quoting and 17-significant-digit
//! floats; complex values appear as paired `re,im` columns. Every file
//! written via `--out` gains a sibling `<name>.manifest.json` recording the
//! configuration and a SHA-256 digest of the data; wall time lives only in
//! the manifest's `excluded` object. Exit codes: 0 success, 1 a check
//! failed, 2 usage or configuration error. The only environment variable
//! honored is `TREEPROF_CACHE_DIR`, an optional cache directory for
//! verification reports.

mod output;

use clap::{Args, Parser, Subcommand};
use num::complex::Complex64;
use output::{fmt_f64, Artifact, CheckRecord, Excluded, Manifest};
use serde::Serialize;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::time::Instant;
use treeprof_core::model::TreeSampler;
use treeprof_core::verify::CRITERION_COUNT;
use treeprof_core::{
    asymptotics, limit, moments, spectral, stats, verify, ModelParams, RngStream, YSampler,
    DEFAULT_SEED,
};

const TOOL: &str = "treeprof";
const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Stream indices reserving disjoint RNG streams per subcommand.
const STREAM_SIMULATE: u64 = 1;
const STREAM_LIMIT: u64 = 2;
const STREAM_COMPARE_REFERENCE: u64 = 3;
const STREAM_COMPARE_LADDER: u64 = 4;

/// Weight share below which a level is unresolvable by the circle
/// transform in f64 (same rule as the verification suite).
const INVERT_MASS_FLOOR: f64 = 1e-4;

#[derive(Parser)]
#[command(
    name = TOOL,
    version,
    about = "Profiles of random m-ary search trees: exact tables, spectral \
             constants, simulation, and the limiting fixed-point process"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Critical constants and a dominant-root probe table (JSON)
    Constants(ConstantsCmd),
    /// Exact expected-profile tables and polynomial series (CSV)
    Exact(ExactCmd),
    /// Simulated per-replicate profiles or level counts (CSV)
    Simulate(SimulateCmd),
    /// Fixed-point process draws with moment checks (CSV)
    Limit(LimitCmd),
    /// Distance ladder between normalized profiles and the fixed point (JSON)
    Compare(CompareCmd),
    /// Circle-transform inversion identity against the DP table (CSV)
    Invert(InvertCmd),
    /// Run the numbered verification criteria
    Verify(VerifyCmd),
}

#[derive(Args, Serialize, Clone, Copy)]
struct ModelArgs {
    /// Branching factor m >= 2 (each node holds up to m-1 keys)
    #[arg(long, default_value_t = 2)]
    m: u64,
    /// Balance parameter t >= 0 (pivots are every (t+1)-th of mt+m-1 samples)
    #[arg(long, default_value_t = 0)]
    t: u64,
}

impl ModelArgs {
    fn params(&self) -> Result<ModelParams, Failure> {
        ModelParams::new(self.m, self.t).map_err(usage)
    }
}

#[derive(Args, Serialize)]
struct ConstantsCmd {
    #[command(flatten)]
    model: ModelArgs,
    /// Largest radius of the dominant-root probe grid (step 0.1)
    #[arg(long, default_value_t = 2.5)]
    beta: f64,
    /// Root-finding tolerance
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Output path for the JSON document (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ExactCmd {
    #[command(flatten)]
    model: ModelArgs,
    /// Largest key count tabulated
    #[arg(long)]
    nmax: usize,
    /// Largest level tabulated (mean table only; defaults to nmax)
    #[arg(long)]
    kmax: Option<usize>,
    /// Evaluate the profile polynomial at "re,im" instead of tabulating
    /// means; a real point (im = 0) adds the second-moment column
    #[arg(long, value_parser = parse_complex)]
    z: Option<Complex64>,
    /// Use the free-position (external) profile instead of key counts
    #[arg(long)]
    external: bool,
    /// Output CSV path (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct SimulateCmd {
    #[command(flatten)]
    model: ModelArgs,
    /// Number of keys per simulated tree
    #[arg(long)]
    n: u64,
    /// Number of independent replicates
    #[arg(long, default_value_t = 1000)]
    reps: usize,
    /// Target one level: emit counts with DP-normalized ratios and gate the
    /// aggregate mean against the exact DP mean (4 standard errors)
    #[arg(long)]
    k: Option<u32>,
    /// Simulate the free-position (external) profile
    #[arg(long)]
    external: bool,
    /// Emit per-type node counts plus the implied-keys identity column
    #[arg(long)]
    types: bool,
    /// Base seed of the deterministic replicate streams
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (results are identical for any worker count)
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Output CSV path (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct LimitCmd {
    #[command(flatten)]
    model: ModelArgs,
    /// Evaluation radius of the fixed-point process
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Recursion depth of each draw
    #[arg(long, default_value_t = 12)]
    depth: usize,
    /// Number of draws
    #[arg(long, default_value_t = 10_000)]
    reps: usize,
    /// Base seed of the deterministic replicate streams
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (results are identical for any worker count)
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Output CSV path (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct CompareCmd {
    #[command(flatten)]
    model: ModelArgs,
    /// Level scale: compares counts at k = floor(alpha * log n)
    #[arg(long)]
    alpha: f64,
    /// Replicates per ladder rung
    #[arg(long, default_value_t = 5000)]
    reps: usize,
    /// Recursion depth of the reference fixed-point draws
    #[arg(long, default_value_t = 14)]
    depth: usize,
    /// Largest rung of the ladder 10^3, 10^4, 10^5
    #[arg(long, default_value_t = 100_000)]
    nmax: u64,
    /// Compare the free-position (external) profile
    #[arg(long)]
    external: bool,
    /// Run even when alpha lies outside the almost-sure convergence window
    #[arg(long)]
    override_range: bool,
    /// Base seed of the deterministic replicate streams
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (results are identical for any worker count)
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Output path for the JSON report (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct InvertCmd {
    #[command(flatten)]
    model: ModelArgs,
    /// Key count whose expected profile is recovered
    #[arg(long)]
    n: usize,
    /// Transform radius
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Highest level compared (defaults to the full resolvable band)
    #[arg(long)]
    kmax: Option<usize>,
    /// Maximum allowed relative error
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Output CSV path (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct VerifyCmd {
    /// Criterion id 1..=11 (all criteria when omitted)
    #[arg(long)]
    id: Option<usize>,
    /// Seed fed to the stochastic criteria
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output path for the JSON report array (stdout lines either way)
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failures mapped to exit codes: usage/configuration -> 2, failed check -> 1.
enum Failure {
    Usage(String),
    Check(String),
}

fn usage<E: Display>(err: E) -> Failure {
    Failure::Usage(err.to_string())
}

fn io_fail(err: std::io::Error) -> Failure {
    Failure::Usage(format!("i/o error: {err}"))
}

fn parse_complex(raw: &str) -> Result<Complex64, String> {
    let (re, im) = raw
        .split_once(',')
        .ok_or_else(|| format!("expected \"re,im\", got \"{raw}\""))?;
    let re: f64 = re
        .trim()
        .parse()
        .map_err(|e| format!("bad real part \"{re}\": {e}"))?;
    let im: f64 = im
        .trim()
        .parse()
        .map_err(|e| format!("bad imaginary part \"{im}\": {e}"))?;
    Ok(Complex64::new(re, im))
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(()) => 0,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    };
    std::process::exit(code);
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Cmd::Constants(cmd) => run_constants(cmd),
        Cmd::Exact(cmd) => run_exact(cmd),
        Cmd::Simulate(cmd) => run_simulate(cmd),
        Cmd::Limit(cmd) => run_limit(cmd),
        Cmd::Compare(cmd) => run_compare(cmd),
        Cmd::Invert(cmd) => run_invert(cmd),
        Cmd::Verify(cmd) => run_verify(cmd),
    }
}

/// Runs `f(i)` for `i = 0..count` over `workers` threads; slot `i` always
/// holds `f(i)`, so results never depend on the worker count.
fn parallel_map<T, F>(workers: usize, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    if workers <= 1 || count <= 1 {
        return (0..count).map(f).collect();
    }
    let mut out: Vec<Option<T>> = std::iter::repeat_with(|| None).take(count).collect();
    let chunk = count.div_ceil(workers);
    std::thread::scope(|scope| {
        for (w, slice) in out.chunks_mut(chunk).enumerate() {
            let f = &f;
            scope.spawn(move || {
                for (j, slot) in slice.iter_mut().enumerate() {
                    *slot = Some(f(w * chunk + j));
                }
            });
        }
    });
    out.into_iter().map(|s| s.expect("slot filled")).collect()
}

/// Writes the artifact (file or stdout) and, for file outputs, the sibling
/// manifest. Called before check failures are raised so data always lands.
fn finish<C: Serialize>(
    command: &'static str,
    config: &C,
    artifact: &Artifact,
    checks: Vec<CheckRecord>,
    out: Option<&Path>,
    started: Instant,
) -> Result<(), Failure> {
    let record = artifact.emit(out).map_err(io_fail)?;
    if let (Some(path), Some(record)) = (out, record) {
        let manifest = Manifest {
            tool: TOOL,
            version: VERSION,
            command,
            config,
            outputs: vec![record],
            checks: checks.clone(),
            excluded: Excluded {
                wall_time_seconds: started.elapsed().as_secs_f64(),
            },
        };
        output::write_manifest(path, &manifest).map_err(io_fail)?;
    }
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name)
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(failed.join(", ")))
    }
}

// ---------------------------------------------------------------------------
// constants
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct LambdaProbe {
    beta: f64,
    lambda1: f64,
    alpha: f64,
    gap: f64,
    simple: bool,
}

#[derive(Serialize)]
struct ConstantsDoc {
    params: ModelParams,
    constants: spectral::CriticalConstants,
    lambda1_probes: Vec<LambdaProbe>,
}

fn run_constants(cmd: ConstantsCmd) -> Result<(), Failure> {
    let started = Instant::now();
    let params = cmd.model.params()?;
    if !(cmd.beta >= 0.1) {
        return Err(Failure::Usage(format!(
            "--beta must be at least 0.1 (probe grid step), got {}",
            cmd.beta
        )));
    }
    if !(cmd.tol > 0.0 && cmd.tol <= 1e-6) {
        return Err(Failure::Usage(format!(
            "--tol must lie in (0, 1e-6], got {}",
            cmd.tol
        )));
    }
    let constants = spectral::critical_constants(&params, cmd.tol).map_err(usage)?;
    let steps = (cmd.beta / 0.1).round() as usize;
    let mut probes = Vec::with_capacity(steps);
    for i in 1..=steps {
        let beta = i as f64 * 0.1;
        let root = spectral::all_roots(&params, Complex64::new(beta, 0.0), 1e-12).map_err(usage)?;
        probes.push(LambdaProbe {
            beta,
            lambda1: root.lambda1.re,
            alpha: spectral::alpha_of_beta(&params, beta).map_err(usage)?,
            gap: root.gap,
            simple: root.simple,
        });
    }
    let doc = ConstantsDoc {
        params,
        constants,
        lambda1_probes: probes,
    };
    let artifact = Artifact::json(&doc).map_err(usage)?;
    finish("constants", &cmd, &artifact, Vec::new(), cmd.out.as_deref(), started)
}

// ---------------------------------------------------------------------------
// exact
// ---------------------------------------------------------------------------

/// Table cells the mean-table route may compute in one invocation.
const EXACT_TABLE_CELL_CAP: usize = 200_000_000;
/// Largest n for the quadratic-cost second-moment route.
const EXACT_SECOND_MOMENT_CAP: usize = 20_000;

fn run_exact(cmd: ExactCmd) -> Result<(), Failure> {
    let started = Instant::now();
    let params = cmd.model.params()?;
    if cmd.nmax == 0 {
        return Err(Failure::Usage("--nmax must be positive".into()));
    }
    if cmd.z.is_some() && cmd.kmax.is_some() {
        return Err(Failure::Usage(
            "--kmax applies to the mean table only; a series at --z has no level axis".into(),
        ));
    }
    let mut artifact = Artifact::csv();
    match cmd.z {
        None => {
            let k_max = cmd.kmax.unwrap_or(cmd.nmax);
            let cells = (cmd.nmax + 1).saturating_mul(k_max + 1);
            if cells > EXACT_TABLE_CELL_CAP {
                return Err(Failure::Usage(format!(
                    "table of {cells} cells exceeds the cap of {EXACT_TABLE_CELL_CAP}; \
                     lower --nmax or --kmax"
                )));
            }
            let table = if cmd.external {
                moments::expected_external_table(&params, cmd.nmax, k_max)
            } else {
                moments::expected_profile_table(&params, cmd.nmax, k_max)
            };
            artifact.row(&["n", "k", "mean"]);
            for n in 0..=cmd.nmax {
                for k in 0..=k_max {
                    artifact.row(&[n.to_string(), k.to_string(), fmt_f64(table.value(n, k))]);
                }
            }
        }
        Some(z) if cmd.external => {
            let series = moments::expected_external_w(&params, z, cmd.nmax);
            artifact.row(&["n", "re", "im"]);
            for (n, g) in series.g.iter().enumerate() {
                artifact.row(&[n.to_string(), fmt_f64(g.re), fmt_f64(g.im)]);
            }
        }
        Some(z) if z.im == 0.0 => {
            if cmd.nmax > EXACT_SECOND_MOMENT_CAP {
                return Err(Failure::Usage(format!(
                    "--nmax {} exceeds the second-moment cap of {EXACT_SECOND_MOMENT_CAP} \
                     (quadratic cost); lower --nmax or evaluate at a complex point",
                    cmd.nmax
                )));
            }
            let series = moments::second_moment_w(&params, z, cmd.nmax).map_err(usage)?;
            let g2 = series.g2.as_ref().expect("second moments requested");
            artifact.row(&["n", "re", "im", "m2"]);
            for (n, g) in series.g.iter().enumerate() {
                artifact.row(&[
                    n.to_string(),
                    fmt_f64(g.re),
                    fmt_f64(g.im),
                    fmt_f64(g2[n]),
                ]);
            }
        }
        Some(z) => {
            let series = moments::expected_w(&params, z, cmd.nmax);
            artifact.row(&["n", "re", "im"]);
            for (n, g) in series.g.iter().enumerate() {
                artifact.row(&[n.to_string(), fmt_f64(g.re), fmt_f64(g.im)]);
            }
        }
    }
    finish("exact", &cmd, &artifact, Vec::new(), cmd.out.as_deref(), started)
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

fn run_simulate(cmd: SimulateCmd) -> Result<(), Failure> {
    let started = Instant::now();
    let params = cmd.model.params()?;
    if cmd.reps == 0 || cmd.workers == 0 {
        return Err(Failure::Usage("--reps and --workers must be positive".into()));
    }
    if cmd.types && cmd.external {
        return Err(Failure::Usage(
            "--types and --external are distinct profile variants; choose one".into(),
        ));
    }
    if cmd.types && cmd.k.is_some() {
        return Err(Failure::Usage(
            "--types emits full per-level tables; drop --k".into(),
        ));
    }
    let base = RngStream::new(cmd.seed, STREAM_SIMULATE);
    let mut artifact = Artifact::csv();
    let mut checks = Vec::new();

    if let Some(level) = cmd.k {
        let mean = if cmd.external {
            moments::expected_external_at(&params, cmd.n as usize, level as usize)
        } else {
            moments::expected_profile_at(&params, cmd.n as usize, level as usize)
        };
        if !(mean > 1e-300) {
            return Err(Failure::Usage(format!(
                "expected count at level {level} of an n = {} tree is zero; nothing to normalize",
                cmd.n
            )));
        }
        let counts = parallel_map(cmd.workers, cmd.reps, |i| {
            let mut rng = base.substream(i as u64);
            let mut sampler = TreeSampler::new(params);
            if cmd.external {
                sampler.external_at_level(cmd.n, level, &mut rng)
            } else {
                sampler.keys_at_level(cmd.n, level, &mut rng)
            }
        });
        artifact.row(&["rep", "count", "ratio"]);
        let mut ratios = Vec::with_capacity(counts.len());
        for (rep, &count) in counts.iter().enumerate() {
            let ratio = count as f64 / mean;
            ratios.push(ratio);
            artifact.row(&[rep.to_string(), count.to_string(), fmt_f64(ratio)]);
        }
        let (mc_mean, se) = stats::mean_se(&ratios);
        let sigmas = if se > 0.0 {
            (mc_mean - 1.0).abs() / se
        } else {
            0.0
        };
        checks.push(CheckRecord {
            name: "level_mean_within_4se",
            pass: sigmas <= 4.0,
            value: sigmas,
        });
    } else if cmd.types {
        let m = params.m as usize;
        let mut header = vec!["rep".to_string(), "level".to_string(), "keys".to_string()];
        header.extend((0..m).map(|j| format!("type{j}")));
        header.push("identity_gap".to_string());
        artifact.row(&header);
        let profiles = parallel_map(cmd.workers, cmd.reps, |i| {
            let mut rng = base.substream(i as u64);
            let mut sampler = TreeSampler::new(params);
            sampler.sample_type_profile(cmd.n, &mut rng)
        });
        let mut identity_gaps = 0u64;
        for (rep, (types, profile)) in profiles.iter().enumerate() {
            let implied = types.implied_profile();
            let levels = implied.len().max(profile.counts.len());
            for level in 0..levels {
                let keys = profile.counts.get(level).copied().unwrap_or(0);
                let gap = implied.get(level).copied().unwrap_or(0) as i64 - keys as i64;
                if gap != 0 {
                    identity_gaps += 1;
                }
                let mut row = vec![rep.to_string(), level.to_string(), keys.to_string()];
                row.extend(
                    (0..m).map(|j| types.counts[j].get(level).copied().unwrap_or(0).to_string()),
                );
                row.push(gap.to_string());
                artifact.row(&row);
            }
        }
        checks.push(CheckRecord {
            name: "type_identity_exact",
            pass: identity_gaps == 0,
            value: identity_gaps as f64,
        });
    } else {
        artifact.row(&["rep", "level", "count"]);
        let profiles = parallel_map(cmd.workers, cmd.reps, |i| {
            let mut rng = base.substream(i as u64);
            let mut sampler = TreeSampler::new(params);
            if cmd.external {
                sampler.sample_external_profile(cmd.n, &mut rng).counts
            } else {
                sampler.sample_profile(cmd.n, &mut rng).counts
            }
        });
        for (rep, counts) in profiles.iter().enumerate() {
            for (level, &count) in counts.iter().enumerate() {
                artifact.row(&[rep.to_string(), level.to_string(), count.to_string()]);
            }
        }
    }
    finish("simulate", &cmd, &artifact, checks, cmd.out.as_deref(), started)
}

// ---------------------------------------------------------------------------
// limit
// ---------------------------------------------------------------------------

fn run_limit(cmd: LimitCmd) -> Result<(), Failure> {
    let started = Instant::now();
    let params = cmd.model.params()?;
    if cmd.reps == 0 || cmd.workers == 0 {
        return Err(Failure::Usage("--reps and --workers must be positive".into()));
    }
    if !(cmd.beta > 0.0) {
        return Err(Failure::Usage(format!(
            "--beta must be positive, got {}",
            cmd.beta
        )));
    }
    let sampler = YSampler::new(&params, Complex64::new(cmd.beta, 0.0)).map_err(usage)?;
    let base = RngStream::new(cmd.seed, STREAM_LIMIT);
    let values = parallel_map(cmd.workers, cmd.reps, |i| {
        let mut rng = base.substream(i as u64);
        sampler.sample(cmd.depth, &mut rng).value.re
    });
    let mut artifact = Artifact::csv();
    artifact.row(&["rep", "value"]);
    for (rep, &v) in values.iter().enumerate() {
        artifact.row(&[rep.to_string(), fmt_f64(v)]);
    }

    let mut checks = Vec::new();
    let (mean, mean_se) = stats::mean_se(&values);
    let mean_sigmas = if mean_se > 0.0 {
        (mean - 1.0).abs() / mean_se
    } else if mean == 1.0 {
        0.0
    } else {
        f64::INFINITY
    };
    checks.push(CheckRecord {
        name: "mean_within_4se_of_one",
        pass: mean_sigmas <= 4.0,
        value: mean_sigmas,
    });
    match limit::variance_y(&params, cmd.beta) {
        Ok(exact) => {
            let (var, var_se) = stats::variance_se(&values);
            let diff = (var - exact).abs();
            // A degenerate population (radius 1 gives every draw exactly 1)
            // has zero sample variance and zero SE; fall back to an
            // absolute double-precision comparison there.
            let (pass, value) = if var_se > 0.0 {
                (diff / var_se <= 4.0, diff / var_se)
            } else {
                (diff <= 1e-12, diff)
            };
            checks.push(CheckRecord {
                name: "variance_within_4se_of_closed_form",
                pass,
                value,
            });
        }
        Err(err) => {
            eprintln!(
                "note: closed-form variance unavailable at radius {}: {err}",
                cmd.beta
            );
        }
    }
    finish("limit", &cmd, &artifact, checks, cmd.out.as_deref(), started)
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CompareRung {
    n: u64,
    level: usize,
    distance: limit::DistanceReport,
}

#[derive(Serialize)]
struct CompareDoc {
    params: ModelParams,
    alpha: f64,
    beta: f64,
    depth: usize,
    reps: usize,
    external: bool,
    reference_draws: usize,
    ladder: Vec<CompareRung>,
    ks_strictly_decreasing: bool,
}

fn run_compare(cmd: CompareCmd) -> Result<(), Failure> {
    let started = Instant::now();
    let params = cmd.model.params()?;
    if cmd.reps == 0 || cmd.workers == 0 {
        return Err(Failure::Usage("--reps and --workers must be positive".into()));
    }
    let constants = spectral::critical_constants(&params, 1e-12).map_err(usage)?;
    let (lo, hi) = constants.i_prime;
    if !(cmd.alpha > lo && cmd.alpha < hi) && !cmd.override_range {
        return Err(Failure::Usage(format!(
            "alpha = {} lies outside I' = ({lo:.6}, {hi:.6}), the window where the normalized \
             level count converges almost surely to the fixed-point marginal; a single-level \
             comparison outside that window is not meaningful for {params}. \
             Pass --override-range to force the run.",
            cmd.alpha
        )));
    }
    let (beta, _) = spectral::beta_of_alpha(&params, cmd.alpha, 1e-12).map_err(usage)?;

    let reference_draws = 100_000usize;
    let ref_base = RngStream::new(cmd.seed, STREAM_COMPARE_REFERENCE);
    let sampler = YSampler::new(&params, Complex64::new(beta, 0.0)).map_err(usage)?;
    let reference = parallel_map(cmd.workers, reference_draws, |i| {
        let mut rng = ref_base.substream(i as u64);
        sampler.sample(cmd.depth, &mut rng).value.re
    });

    let ladder_ns: Vec<u64> = [1_000u64, 10_000, 100_000]
        .into_iter()
        .filter(|&n| n <= cmd.nmax)
        .collect();
    if ladder_ns.len() < 2 {
        return Err(Failure::Usage(format!(
            "--nmax {} leaves fewer than two ladder rungs (10^3, 10^4, 10^5)",
            cmd.nmax
        )));
    }

    let mut ladder = Vec::new();
    for (idx, &n) in ladder_ns.iter().enumerate() {
        let k = (cmd.alpha * (n as f64).ln()).floor() as usize;
        let mean = if cmd.external {
            moments::expected_external_at(&params, n as usize, k)
        } else {
            moments::expected_profile_at(&params, n as usize, k)
        };
        if !(mean > 1e-300) {
            return Err(Failure::Usage(format!(
                "expected count at level {k} of an n = {n} tree vanishes; \
                 alpha = {} is too deep for this rung",
                cmd.alpha
            )));
        }
        let rung_base = RngStream::new(cmd.seed, STREAM_COMPARE_LADDER + idx as u64);
        let ratios = parallel_map(cmd.workers, cmd.reps, |i| {
            let mut rng = rung_base.substream(i as u64);
            let mut tree = TreeSampler::new(params);
            let count = if cmd.external {
                tree.external_at_level(n, k as u32, &mut rng)
            } else {
                tree.keys_at_level(n, k as u32, &mut rng)
            };
            count as f64 / mean
        });
        let distance = limit::empirical_distance(&ratios, &reference, 2.0).map_err(usage)?;
        ladder.push(CompareRung { n, level: k, distance });
    }
    let ks_strictly_decreasing = ladder
        .windows(2)
        .all(|w| w[1].distance.ks < w[0].distance.ks);
    let doc = CompareDoc {
        params,
        alpha: cmd.alpha,
        beta,
        depth: cmd.depth,
        reps: cmd.reps,
        external: cmd.external,
        reference_draws,
        ladder,
        ks_strictly_decreasing,
    };
    let artifact = Artifact::json(&doc).map_err(usage)?;
    let checks = vec![CheckRecord {
        name: "ks_strictly_decreasing",
        pass: ks_strictly_decreasing,
        value: if ks_strictly_decreasing { 1.0 } else { 0.0 },
    }];
    finish("compare", &cmd, &artifact, checks, cmd.out.as_deref(), started)
}

// ---------------------------------------------------------------------------
// invert
// ---------------------------------------------------------------------------

fn run_invert(cmd: InvertCmd) -> Result<(), Failure> {
    let started = Instant::now();
    let params = cmd.model.params()?;
    if cmd.n == 0 {
        return Err(Failure::Usage("--n must be positive".into()));
    }
    if !(cmd.beta > 0.0) {
        return Err(Failure::Usage(format!(
            "--beta must be positive, got {}",
            cmd.beta
        )));
    }
    let table = moments::expected_profile_table(&params, cmd.n, cmd.n.saturating_sub(1));
    let weights: Vec<f64> = (0..cmd.n)
        .map(|k| table.value(cmd.n, k) * cmd.beta.powi(k as i32))
        .collect();
    let total: f64 = weights.iter().sum();
    let band_top = weights
        .iter()
        .rposition(|&w| w >= INVERT_MASS_FLOOR * total)
        .unwrap_or(0);
    let k_top = cmd.kmax.map_or(band_top, |k| k.min(band_top));
    let inverted =
        asymptotics::cauchy_inversion(&params, cmd.beta, cmd.n, k_top, cmd.n + 1).map_err(usage)?;

    let mut artifact = Artifact::csv();
    artifact.row(&["k", "exact", "inverted", "rel_err"]);
    let mut max_rel_err = 0.0f64;
    for (k, &value) in inverted.iter().enumerate() {
        if weights[k] < INVERT_MASS_FLOOR * total {
            continue;
        }
        let exact = table.value(cmd.n, k);
        let rel_err = (value - exact).abs() / exact;
        max_rel_err = max_rel_err.max(rel_err);
        artifact.row(&[
            k.to_string(),
            fmt_f64(exact),
            fmt_f64(value),
            fmt_f64(rel_err),
        ]);
    }
    let checks = vec![CheckRecord {
        name: "max_rel_err_within_tol",
        pass: max_rel_err <= cmd.tol,
        value: max_rel_err,
    }];
    finish("invert", &cmd, &artifact, checks, cmd.out.as_deref(), started)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os("TREEPROF_CACHE_DIR").map(PathBuf::from)
}

fn cached_report(dir: &Path, id: usize, seed: u64) -> Option<verify::CriterionReport> {
    let path = dir.join(format!("verify-v{VERSION}-c{id:02}-s{seed}.json"));
    let raw = std::fs::read_to_string(path).ok()?;
    serde_json::from_str(&raw).ok()
}

fn store_report(dir: &Path, seed: u64, report: &verify::CriterionReport) {
    let path = dir.join(format!("verify-v{VERSION}-c{:02}-s{seed}.json", report.id));
    match serde_json::to_string_pretty(report) {
        Ok(rendered) => {
            if let Err(err) = std::fs::write(&path, format!("{rendered}\n")) {
                eprintln!("note: could not store cached report {}: {err}", path.display());
            }
        }
        Err(err) => eprintln!("note: could not serialize report for cache: {err}"),
    }
}

fn run_verify(cmd: VerifyCmd) -> Result<(), Failure> {
    let started = Instant::now();
    let ids: Vec<usize> = match cmd.id {
        Some(id) => {
            if !(1..=CRITERION_COUNT).contains(&id) {
                return Err(Failure::Usage(format!(
                    "--id must lie in 1..={CRITERION_COUNT}, got {id}"
                )));
            }
            vec![id]
        }
        None => (1..=CRITERION_COUNT).collect(),
    };
    let cache = cache_dir();
    if let Some(dir) = &cache {
        std::fs::create_dir_all(dir).map_err(io_fail)?;
    }

    let mut reports = Vec::with_capacity(ids.len());
    for id in ids {
        let cached = cache.as_deref().and_then(|d| cached_report(d, id, cmd.seed));
        let report = match cached {
            Some(report) => report,
            None => {
                let report = verify::run_criterion(id, cmd.seed).map_err(usage)?;
                if let Some(dir) = &cache {
                    store_report(dir, cmd.seed, &report);
                }
                report
            }
        };
        println!(
            "criterion {:02} [{}] {:8.2}s {} — {}",
            report.id,
            if report.pass { "PASS" } else { "FAIL" },
            report.runtime_seconds,
            report.name,
            report.details
        );
        reports.push(report);
    }

    let checks: Vec<CheckRecord> = reports
        .iter()
        .map(|r| CheckRecord {
            name: verify::criterion_name(r.id).expect("valid id"),
            pass: r.pass,
            value: r.runtime_seconds,
        })
        .collect();
    if let Some(out) = &cmd.out {
        let artifact = Artifact::json(&reports).map_err(usage)?;
        return finish("verify", &cmd, &artifact, checks, Some(out), started);
    }
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| format!("criterion {:02} ({})", r.id, r.name))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(failed.join(", ")))
    }
}
