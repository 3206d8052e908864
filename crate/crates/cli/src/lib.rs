//! Orchestration behind the `gbseed` binary: configuration, report
//! assembly, window caching and the exact-identity self check.

mod verify;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use gbseed_core::approximant::{d4sharp_window, prop33_compare, ApproximantParams, GapReport};
use gbseed_core::arith::{build_window, cache, SieveWindow};
use gbseed_core::digitset::{
    ap_discrepancy, fourier_grid, l1_estimate, write_fourier_csv, DigitSystem, L1Estimate, RestrictedSet,
};
use gbseed_core::dissection::{farey_dissection, write_arcs_csv, CircleParams, DEFAULT_LOG_EXPONENT};
use gbseed_core::goldbach::{scan_with_window, write_scan_csv, ScanOptions};
use gbseed_core::{Error, Result};
use serde::{Deserialize, Serialize};

pub use verify::{check_characters, check_convolution, check_farey, check_ramanujan, verify, CheckResult, VerifyReport};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Directory for cached sieve windows.
pub const CACHE_ENV: &str = "GBSEED_CACHE_DIR";
/// Margin kept below the largest admissible log exponent when it is chosen
/// automatically.
pub const LOG_EXPONENT_MARGIN: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Sieve,
    Scan,
    Arcs,
    L1,
    Discrepancy,
    ApproxCheck,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Scale X (window start for `sieve`).
    #[arg(long = "x", default_value_t = 1_000_000)]
    pub x: u64,
    /// Interval length H (window length for `sieve`).
    #[arg(long = "h", default_value_t = 10_000)]
    pub h: u64,
    #[arg(long, default_value_t = 10)]
    pub base: u64,
    /// Forbidden digit b.
    #[arg(long, default_value_t = 7)]
    pub digit: u64,
    #[arg(long, default_value_t = 0.3)]
    pub epsilon: f64,
    /// Exponent e in D(δ) = (log X)^(−e); chosen automatically when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub log_exponent: Option<f64>,
    /// Explicit R₄ instead of X^(ε/40).
    #[arg(long = "r4")]
    pub r4_override: Option<f64>,
    /// Largest modulus for `discrepancy`.
    #[arg(long, default_value_t = 50)]
    pub qmax: u64,
    /// Riemann grid size for `l1` (default: next power of two ≥ 4(hi+1)).
    #[arg(long)]
    pub grid: Option<usize>,
    /// Points in the `l1` CSV transform table.
    #[arg(long, default_value_t = 256)]
    pub points: usize,
    /// Singular-series truncation in `scan`.
    #[arg(long, default_value_t = 10_000)]
    pub singular_qmax: u64,
    /// Minor-arc samples in `scan`.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Not echoed in reports, so that identical runs agree byte for byte.
    #[arg(long = "out")]
    #[serde(skip)]
    pub out_path: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

impl RunConfig {
    /// Defaults for a command, as the binary would fill them in.
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            x: 1_000_000,
            h: 10_000,
            base: 10,
            digit: 7,
            epsilon: 0.3,
            log_exponent: None,
            r4_override: None,
            qmax: 50,
            grid: None,
            points: 256,
            singular_qmax: 10_000,
            samples: 1000,
            seed: 0,
            out_path: None,
            format: Format::Json,
        }
    }

    fn digit_system(&self) -> Result<DigitSystem> {
        DigitSystem::new(self.base, self.digit)
    }

    /// The given log exponent, or the default when admissible, or
    /// the largest admissible value less a margin.
    pub fn resolved_log_exponent(&self) -> Result<f64> {
        if let Some(e) = self.log_exponent {
            return Ok(e);
        }
        let max = CircleParams::max_log_exponent(self.x, self.h, self.epsilon)?;
        Ok(DEFAULT_LOG_EXPONENT.min(max - LOG_EXPONENT_MARGIN))
    }

    pub fn circle_params(&self) -> Result<CircleParams> {
        CircleParams::with_log_exponent(self.x, self.h, self.epsilon, self.resolved_log_exponent()?)
    }

    pub fn approximant(&self) -> Result<ApproximantParams> {
        match self.r4_override {
            Some(r4) => ApproximantParams::with_r4(self.x, self.epsilon, r4),
            None => ApproximantParams::new(self.x, self.epsilon),
        }
    }

    fn resolved(&self) -> Result<RunConfig> {
        let mut c = self.clone();
        if matches!(c.command, Command::Scan | Command::Arcs) {
            c.log_exponent = Some(c.resolved_log_exponent()?);
        }
        Ok(c)
    }
}

/// Every JSON report: tool version and resolved configuration around the
/// command's own payload.
#[derive(Debug, Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    tool_version: &'static str,
    config: &'a RunConfig,
    #[serde(flatten)]
    report: T,
}

/// Process exit status for an error: 1 for bad input, 2 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_input_error() {
        1
    } else {
        2
    }
}

/// Machine-readable error document written to stderr.
pub fn error_json(err: &Error) -> String {
    serde_json::json!({
        "error": { "kind": err.kind(), "message": err.to_string() },
        "exit_code": exit_code(err),
    })
    .to_string()
}

/// Writes a window to `path` and reads it back.
pub fn cache_roundtrip(window: &SieveWindow, path: &Path) -> Result<SieveWindow> {
    cache::write_window(window, path)?;
    cache::read_window(path)
}

/// `[start, start + length)`, from `GBSEED_CACHE_DIR` when a matching file
/// exists there, stored there after building otherwise.
pub fn cached_window(start: u64, length: u64) -> Result<SieveWindow> {
    let Some(dir) = std::env::var_os(CACHE_ENV) else {
        return build_window(start, length);
    };
    let path = PathBuf::from(dir).join(format!("window-{start}-{length}.gbsv"));
    if path.exists() {
        let w = cache::read_window(&path)?;
        if w.start() == start && w.len() == length {
            return Ok(w);
        }
    }
    let w = build_window(start, length)?;
    fs::create_dir_all(path.parent().unwrap_or(Path::new(".")))?;
    cache::write_window(&w, &path)?;
    Ok(w)
}

#[derive(Debug, Serialize)]
struct SieveSummary {
    start: u64,
    length: u64,
    primes: usize,
    psi_mass: f64,
    sum_d2: u64,
    sum_d4: u64,
    squarefree: usize,
}

#[derive(Debug, Serialize)]
struct ArcsReport {
    circle: CircleParams,
    arcs: Vec<ArcRow>,
}

#[derive(Debug, Serialize)]
struct ArcRow {
    q: i64,
    r: i64,
    left: f64,
    right: f64,
    major_left: f64,
    major_right: f64,
}

#[derive(Debug, Serialize)]
struct L1Report {
    lo: u64,
    hi: u64,
    #[serde(flatten)]
    estimate: L1Estimate,
}

#[derive(Debug, Serialize)]
struct ApproxReport {
    r4: f64,
    cutoff: u64,
    table_entries: usize,
    mean_d4: f64,
    mean_d4sharp: f64,
    mean_ratio: f64,
    main_term: GapReport,
    main_term_relative_gap: f64,
    envelope_constant: f64,
}

/// Executes a command and returns the bytes of its report, plus whether its
/// checks passed (always true except for `verify`).
pub fn render(config: &RunConfig) -> Result<(Vec<u8>, bool)> {
    let config = config.resolved()?;
    let mut out = Vec::new();
    let mut passed = true;
    let json = |out: &mut Vec<u8>, report: &dyn erased::Report| -> Result<()> {
        report.write_json(&config, out)?;
        out.push(b'\n');
        Ok(())
    };
    match config.command {
        Command::Sieve => {
            let w = cached_window(config.x, config.h)?;
            match config.format {
                Format::Json => {
                    let s = SieveSummary {
                        start: w.start(),
                        length: w.len(),
                        primes: w.is_prime_slice().iter().filter(|&&p| p).count(),
                        psi_mass: w.lambda_mass(w.start(), w.end())?,
                        sum_d2: w.d2_slice().iter().map(|&v| v as u64).sum(),
                        sum_d4: w.d4_slice().iter().map(|&v| v as u64).sum(),
                        squarefree: w.mobius_slice().iter().filter(|&&m| m != 0).count(),
                    };
                    json(&mut out, &s)?;
                }
                Format::Csv => {
                    writeln!(out, "n,lambda,mobius,d2,d4,is_prime")?;
                    for n in w.start()..=w.end() {
                        writeln!(out, "{n},{},{},{},{},{}", w.lambda(n), w.mobius(n), w.d2(n), w.d4(n), w.is_prime(n))?;
                    }
                }
            }
        }
        Command::Scan => {
            let params = config.circle_params()?;
            let approx = config.approximant()?;
            let window = cached_window(1, config.x.checked_add(config.h).ok_or_else(|| Error::Range("X + H overflows".into()))?)?;
            let opts = ScanOptions { singular_qmax: config.singular_qmax, probe_samples: config.samples, seed: config.seed };
            let report = scan_with_window(config.digit_system()?, config.x, config.h, &params, &approx, &opts, &window)?;
            match config.format {
                Format::Json => json(&mut out, &report)?,
                Format::Csv => write_scan_csv(&report, &mut out)?,
            }
        }
        Command::Arcs => {
            let params = config.circle_params()?;
            let arcs = farey_dissection(params.q)?;
            match config.format {
                Format::Json => {
                    let f = |r: num_rational::Ratio<i64>| *r.numer() as f64 / *r.denom() as f64;
                    let rows = arcs
                        .iter()
                        .map(|a| {
                            let (ml, mr) = a.major_window(&params);
                            ArcRow { q: a.q, r: a.r, left: f(a.left), right: f(a.right), major_left: ml, major_right: mr }
                        })
                        .collect();
                    json(&mut out, &ArcsReport { circle: params, arcs: rows })?;
                }
                Format::Csv => write_arcs_csv(&arcs, &params, &mut out)?,
            }
        }
        Command::L1 => {
            let set = RestrictedSet::short_interval(config.digit_system()?, config.x, config.h)?;
            match config.format {
                Format::Json => {
                    let grid = match config.grid {
                        Some(g) => g,
                        None => (4 * (set.hi() as usize + 1)).next_power_of_two(),
                    };
                    let estimate = l1_estimate(&set, grid)?;
                    json(&mut out, &L1Report { lo: set.lo(), hi: set.hi(), estimate })?;
                }
                Format::Csv => write_fourier_csv(&fourier_grid(&set, config.points)?, &mut out)?,
            }
        }
        Command::Discrepancy => {
            let report = ap_discrepancy(config.digit_system()?, config.x, config.qmax)?;
            match config.format {
                Format::Json => json(&mut out, &report)?,
                Format::Csv => report.write_csv(&mut out)?,
            }
        }
        Command::ApproxCheck => {
            let approx = config.approximant()?;
            match config.format {
                Format::Json => {
                    let w = cached_window(config.x, config.h + 1)?;
                    let mean_d4 = w.d4_slice().iter().map(|&v| v as f64).sum::<f64>() / (config.h + 1) as f64;
                    let sharp = d4sharp_window(config.x, config.h, &approx)?;
                    let mean_d4sharp = sharp.iter().sum::<f64>() / sharp.len() as f64;
                    let gap = prop33_compare(1, 1, 0.0, config.x, config.h, &approx)?;
                    let report = ApproxReport {
                        r4: approx.r4(),
                        cutoff: approx.cutoff(),
                        table_entries: approx.table().len(),
                        mean_d4,
                        mean_d4sharp,
                        mean_ratio: mean_d4sharp / mean_d4,
                        main_term_relative_gap: gap.abs_gap / gap.direct.norm(),
                        main_term: gap,
                        envelope_constant: approx.envelope_constant(),
                    };
                    json(&mut out, &report)?;
                }
                Format::Csv => approx.write_csv(&mut out)?,
            }
        }
        Command::Verify => {
            let report = verify();
            json(&mut out, &report)?;
            passed = report.passed;
        }
    }
    Ok((out, passed))
}

mod erased {
    use super::*;

    pub trait Report {
        fn write_json(&self, config: &RunConfig, out: &mut Vec<u8>) -> Result<()>;
    }

    impl<T: Serialize> Report for T {
        fn write_json(&self, config: &RunConfig, out: &mut Vec<u8>) -> Result<()> {
            let env = Envelope { tool: "gbseed", tool_version: TOOL_VERSION, config, report: self };
            serde_json::to_writer_pretty(&mut *out, &env)?;
            Ok(())
        }
    }
}

/// Runs a command, writing its report to `out_path` (or stdout), and returns
/// the process exit status.
pub fn run(config: &RunConfig) -> i32 {
    let result = render(config).and_then(|(bytes, passed)| {
        emit(config, &bytes)?;
        if passed {
            Ok(())
        } else {
            Err(Error::Numeric("one or more identity checks failed".into()))
        }
    });
    match result {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("{}", error_json(&err));
            exit_code(&err)
        }
    }
}

fn emit(config: &RunConfig, bytes: &[u8]) -> Result<()> {
    match &config.out_path {
        Some(p) => fs::write(p, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}
