//! Command-line surface over the library: five subcommands with a
//! stable exit-code contract and machine-readable output.
//!
//! ```text
//! twistvol jones  --p 2 --n 100          one Jones evaluation
//! twistvol volume --p 2                  critical point and Im f(a)
//! twistvol verify --p 2 [--config FILE]  full experiment -> JSON + CSV
//! twistvol lemmas --suite bounds         standalone property checks
//! twistvol sweep  --p-values 2,3,-2      verify across twist parameters
//! ```
//!
//! Exit codes: 0 success, 1 at least one property check failed (the
//! report is still written), 2 usage or config error, 3 term budget
//! exceeded, 4 critical solver failure.
//!
//! The `verify` config file is a flat `key = value` text format with
//! `#` comments; keys mirror the long flag names (`p`, `n_values`,
//! `term_budget`, `seed`, `tolerance.<check>`). Flags override file
//! values. All numeric output uses 15 significant digits, and a report
//! is byte-identical for equal config and seed regardless of
//! `--threads`.

use crate::conjecture::{run_experiment, run_lemma_suite, ExperimentConfig, LemmaSuite};
use crate::error::{Error, Result};
use crate::jones::{colored_jones_with_stats, default_term_budget, TwistKnotSpec};
use crate::potential::{solve_critical, SolverConfig};
use crate::report;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "twistvol",
    version,
    about = "Twist-knot volume laboratory: colored Jones growth vs dilogarithm critical values",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate J_N at q = exp(2 pi i/N); prints value, log|J_N|, v_N
    Jones(JonesArgs),
    /// Solve the potential's critical point; prints a, residual, Im f(a)
    Volume(VolumeArgs),
    /// Run the full experiment and write JSON + CSV reports
    Verify(VerifyArgs),
    /// Run a standalone property-check suite
    Lemmas(LemmasArgs),
    /// Run the experiment for several twist parameters
    Sweep(SweepArgs),
}

#[derive(Args)]
struct JonesArgs {
    /// Twist parameter (any integer except 0 and 1)
    #[arg(long, allow_negative_numbers = true)]
    p: i32,
    /// Color N >= 1
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Term budget override (default: TWISTVOL_TERM_BUDGET or 2^31)
    #[arg(long)]
    budget: Option<u128>,
    /// Size of the worker thread pool (does not affect output bytes)
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct VolumeArgs {
    #[arg(long, allow_negative_numbers = true)]
    p: i32,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Seed for the multi-start solver
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Flat key = value config file; flags override file values
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    p: Option<i32>,
    /// Comma-separated ascending color list, e.g. 50,100,150
    #[arg(long = "n-values", visible_alias = "n", value_delimiter = ',')]
    n_values: Option<Vec<u32>>,
    #[arg(long)]
    budget: Option<u128>,
    /// Seed recorded in the report; equal seeds reproduce it byte for byte
    #[arg(long)]
    seed: Option<u64>,
    /// Override one check tolerance as name=value; repeatable
    #[arg(long = "tolerance", value_parser = parse_tolerance)]
    tolerances: Vec<(String, f64)>,
    /// Directory receiving report.json and report.csv
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// What to print on stdout (the files are always written)
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct LemmasArgs {
    /// One of: all, qseries, dilog, bounds, asymptotics
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    budget: Option<u128>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated twist parameters, e.g. 2,3,-2
    #[arg(long = "p-values", value_delimiter = ',', allow_hyphen_values = true, required = true)]
    p_values: Vec<i32>,
    /// Color list applied to every p (default: per-p defaults)
    #[arg(long = "n-values", value_delimiter = ',')]
    n_values: Option<Vec<u32>>,
    #[arg(long)]
    budget: Option<u128>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "tolerance", value_parser = parse_tolerance)]
    tolerances: Vec<(String, f64)>,
    /// Directory receiving report_p<P>.json and report_p<P>.csv
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    #[arg(long)]
    threads: Option<usize>,
}

fn parse_tolerance(s: &str) -> std::result::Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got '{s}'"))?;
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|e| format!("bad tolerance value '{value}': {e}"))?;
    if !(v.is_finite() && v >= 0.0) {
        return Err(format!("tolerance must be a finite nonnegative number, got {v}"));
    }
    Ok((name.trim().to_string(), v))
}

/// Entry point for `main`: parses `std::env::args_os` and returns the
/// process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// Testable entry point taking explicit arguments.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders --help/--version through the same path
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Jones(a) => with_pool(a.threads, || cmd_jones(&a)),
        Command::Volume(a) => cmd_volume(&a),
        Command::Verify(a) => with_pool(a.threads, || cmd_verify(&a)),
        Command::Lemmas(a) => with_pool(a.threads, || cmd_lemmas(&a)),
        Command::Sweep(a) => with_pool(a.threads, || cmd_sweep(&a)),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("twistvol: {e}");
            e.exit_code()
        }
    }
}

/// Run `f` inside a dedicated rayon pool when a thread count is given.
/// The reduction order inside the library is fixed, so the pool size
/// changes timing only, never bytes.
fn with_pool<F: FnOnce() -> Result<i32> + Send>(threads: Option<usize>, f: F) -> Result<i32> {
    match threads {
        None => f(),
        Some(0) => Err(Error::Usage("--threads must be at least 1".into())),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Usage(format!("cannot build thread pool: {e}")))?
            .install(f),
    }
}

fn cmd_jones(a: &JonesArgs) -> Result<i32> {
    if a.n < 1 {
        return Err(Error::Usage("--n must be at least 1".into()));
    }
    let spec = TwistKnotSpec::new(a.p)?;
    let budget = a.budget.unwrap_or_else(default_term_budget);
    let (j, stats) = colored_jones_with_stats(&spec, a.n, budget)?;
    match a.format {
        Format::Plain => print!("{}", report::render_jones_text(a.p, &j, &stats)),
        Format::Json => print!("{}", report::render_jones_json(a.p, &j, &stats)),
        Format::Csv => {
            let v_n = std::f64::consts::TAU * j.log_abs / j.n as f64;
            println!("p,N,value_re,value_im,log_abs,v_N");
            println!(
                "{},{},{:.14e},{:.14e},{:.14e},{:.14e}",
                a.p, j.n, j.value.re, j.value.im, j.log_abs, v_n
            );
        }
    }
    Ok(0)
}

fn cmd_volume(a: &VolumeArgs) -> Result<i32> {
    let spec = TwistKnotSpec::new(a.p)?;
    let cfg = SolverConfig {
        seed: a.seed,
        ..SolverConfig::default()
    };
    let c = solve_critical(&spec, &cfg)?;
    match a.format {
        Format::Plain => print!("{}", report::render_critical_text(a.p, &c)),
        Format::Json => print!("{}", report::render_critical_json(a.p, &c)),
        Format::Csv => {
            println!("p,i,a_re,a_im,residual,volume");
            for (i, w) in c.a.iter().enumerate() {
                println!(
                    "{},{},{:.14e},{:.14e},{:.14e},{:.14e}",
                    a.p,
                    i + 1,
                    w.re,
                    w.im,
                    c.residual,
                    c.volume
                );
            }
        }
    }
    Ok(0)
}

/// Config file values before flag overrides.
#[derive(Debug, Default)]
struct FileConfig {
    p: Option<i32>,
    n_values: Option<Vec<u32>>,
    term_budget: Option<u128>,
    seed: Option<u64>,
    tolerances: BTreeMap<String, f64>,
}

fn parse_config_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut fc = FileConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Usage(format!(
                "{}:{}: expected 'key = value', got '{raw}'",
                path.display(),
                lineno + 1
            ))
        })?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str, err: String| {
            Error::Usage(format!(
                "{}:{}: bad {what} '{value}': {err}",
                path.display(),
                lineno + 1
            ))
        };
        match key {
            "p" => fc.p = Some(value.parse().map_err(|e: std::num::ParseIntError| bad("p", e.to_string()))?),
            "n_values" => {
                let mut ns = Vec::new();
                for part in value.split(',') {
                    ns.push(
                        part.trim()
                            .parse()
                            .map_err(|e: std::num::ParseIntError| bad("n_values entry", e.to_string()))?,
                    );
                }
                fc.n_values = Some(ns);
            }
            "term_budget" => {
                fc.term_budget =
                    Some(value.parse().map_err(|e: std::num::ParseIntError| bad("term_budget", e.to_string()))?)
            }
            "seed" => {
                fc.seed = Some(value.parse().map_err(|e: std::num::ParseIntError| bad("seed", e.to_string()))?)
            }
            _ => {
                if let Some(name) = key.strip_prefix("tolerance.") {
                    let v: f64 = value
                        .parse()
                        .map_err(|e: std::num::ParseFloatError| bad("tolerance", e.to_string()))?;
                    fc.tolerances.insert(name.to_string(), v);
                } else {
                    return Err(Error::Usage(format!(
                        "{}:{}: unknown key '{key}'",
                        path.display(),
                        lineno + 1
                    )));
                }
            }
        }
    }
    Ok(fc)
}

fn build_experiment_config(
    file: FileConfig,
    p: Option<i32>,
    n_values: Option<Vec<u32>>,
    budget: Option<u128>,
    seed: Option<u64>,
    tolerances: &[(String, f64)],
) -> Result<ExperimentConfig> {
    let p = p.or(file.p).unwrap_or(2);
    let n_values = n_values
        .or(file.n_values)
        .unwrap_or_else(|| ExperimentConfig::default_n_values(p));
    let mut merged = file.tolerances;
    for (name, v) in tolerances {
        merged.insert(name.clone(), *v);
    }
    let cfg = ExperimentConfig {
        p,
        n_values,
        term_budget: budget.or(file.term_budget).unwrap_or_else(default_term_budget),
        tolerances: merged,
        seed: seed.or(file.seed).unwrap_or(7),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|source| Error::Io {
                path: dir.display().to_string(),
                source,
            })?;
        }
    }
    std::fs::write(path, content).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let file = match &a.config {
        Some(path) => parse_config_file(path)?,
        None => FileConfig::default(),
    };
    let cfg = build_experiment_config(
        file,
        a.p,
        a.n_values.clone(),
        a.budget,
        a.seed,
        &a.tolerances,
    )?;
    let json_path = a.out_dir.join("report.json");
    let csv_path = a.out_dir.join("report.csv");
    let r = run_experiment(&cfg)?;
    let json = report::render_report_json(&r);
    write_file(&json_path, &json)?;
    write_file(&csv_path, &report::render_report_csv(&r))?;
    match a.format {
        Format::Plain => print!("{}", report::render_report_text(&r)),
        Format::Json => print!("{json}"),
        Format::Csv => print!("{}", report::render_report_csv(&r)),
    }
    Ok(if r.lemma_checks.iter().all(|c| c.passed) {
        0
    } else {
        1
    })
}

fn cmd_lemmas(a: &LemmasArgs) -> Result<i32> {
    let suite = LemmaSuite::parse(&a.suite)?;
    let budget = a.budget.unwrap_or_else(default_term_budget);
    let checks = run_lemma_suite(suite, a.seed, budget)?;
    match a.format {
        Format::Plain => print!("{}", report::render_checks_text(&checks)),
        Format::Json => print!("{}", report::render_checks_json(&checks)),
        Format::Csv => {
            println!("name,passed,margin,tolerance");
            for c in &checks {
                println!("{},{},{:.14e},{:.14e}", c.name, c.passed, c.margin, c.tolerance);
            }
        }
    }
    Ok(if checks.iter().all(|c| c.passed) { 0 } else { 1 })
}

fn cmd_sweep(a: &SweepArgs) -> Result<i32> {
    let mut any_failed = false;
    let mut summary = String::new();
    for &p in &a.p_values {
        let cfg = build_experiment_config(
            FileConfig::default(),
            Some(p),
            a.n_values.clone(),
            a.budget,
            a.seed,
            &a.tolerances,
        )?;
        let r = run_experiment(&cfg)?;
        let json_path = a.out_dir.join(format!("report_p{p}.json"));
        let csv_path = a.out_dir.join(format!("report_p{p}.csv"));
        write_file(&json_path, &report::render_report_json(&r))?;
        write_file(&csv_path, &report::render_report_csv(&r))?;
        let failed = r.lemma_checks.iter().filter(|c| !c.passed).count();
        any_failed |= failed > 0;
        let _ = writeln!(
            summary,
            "p={p}: extrapolated={:.14e} Im_f={:.14e} gap={:.14e} checks_failed={failed} -> {}",
            r.extrapolated,
            r.potential_volume,
            r.gap,
            json_path.display()
        );
    }
    match a.format {
        Format::Json => {
            // one object per p pointing at the written files
            let items: Vec<String> = a
                .p_values
                .iter()
                .map(|p| {
                    format!(
                        "{{\"p\": {p}, \"json\": {:?}, \"csv\": {:?}}}",
                        a.out_dir.join(format!("report_p{p}.json")).display().to_string(),
                        a.out_dir.join(format!("report_p{p}.csv")).display().to_string()
                    )
                })
                .collect();
            println!("[{}]", items.join(", "));
        }
        _ => print!("{summary}"),
    }
    Ok(if any_failed { 1 } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_flag_parsing() {
        assert_eq!(
            parse_tolerance("lemma_101=0.01").unwrap(),
            ("lemma_101".to_string(), 0.01)
        );
        assert!(parse_tolerance("no-equals").is_err());
        assert!(parse_tolerance("x=notanumber").is_err());
        assert!(parse_tolerance("x=-1").is_err());
    }

    #[test]
    fn config_file_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("exp.cfg");
        std::fs::write(
            &path,
            "# experiment\np = 3\nn_values = 10, 20, 30\nseed = 42\nterm_budget = 1000000\ntolerance.lemma_101 = 0.2\n",
        )
        .unwrap();
        let fc = parse_config_file(&path).unwrap();
        assert_eq!(fc.p, Some(3));
        assert_eq!(fc.n_values, Some(vec![10, 20, 30]));
        assert_eq!(fc.seed, Some(42));
        assert_eq!(fc.term_budget, Some(1_000_000));
        assert_eq!(fc.tolerances["lemma_101"], 0.2);
    }

    #[test]
    fn config_file_rejects_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.cfg");
        std::fs::write(&path, "p = 2\nbogus = 1\n").unwrap();
        let err = parse_config_file(&path).unwrap_err();
        assert!(matches!(err, Error::Usage(_)));
        assert!(err.to_string().contains("bogus"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn missing_config_file_is_usage_error() {
        let err = parse_config_file(Path::new("/nonexistent/x.cfg")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn flags_override_file_values() {
        let fc = FileConfig {
            p: Some(3),
            n_values: Some(vec![10, 20]),
            term_budget: Some(500),
            seed: Some(1),
            tolerances: BTreeMap::from([("lemma_101".to_string(), 0.5)]),
        };
        let cfg = build_experiment_config(
            fc,
            Some(2),
            None,
            None,
            Some(9),
            &[("lemma_101".to_string(), 0.25)],
        )
        .unwrap();
        assert_eq!(cfg.p, 2);
        assert_eq!(cfg.n_values, vec![10, 20]); // file value survives
        assert_eq!(cfg.term_budget, 500);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.tolerances["lemma_101"], 0.25); // flag wins
    }

    #[test]
    fn defaults_when_nothing_given() {
        let cfg =
            build_experiment_config(FileConfig::default(), None, None, None, None, &[]).unwrap();
        assert_eq!(cfg.p, 2);
        assert_eq!(cfg.n_values, vec![50, 100, 150, 200, 250, 300, 350, 400]);
        assert_eq!(cfg.seed, 7);
    }

    #[test]
    fn usage_errors_exit_two() {
        // unknown flag
        assert_eq!(run_from(["twistvol", "jones", "--p", "2", "--n", "5", "--bogus"]), 2);
        // unknown subcommand
        assert_eq!(run_from(["twistvol", "frobnicate"]), 2);
        // excluded twist parameters
        assert_eq!(run_from(["twistvol", "jones", "--p", "0", "--n", "5"]), 2);
        assert_eq!(run_from(["twistvol", "jones", "--p", "1", "--n", "5"]), 2);
        assert_eq!(run_from(["twistvol", "volume", "--p", "1"]), 2);
        // unknown suite
        assert_eq!(run_from(["twistvol", "lemmas", "--suite", "nope"]), 2);
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run_from(["twistvol", "--help"]), 0);
        assert_eq!(run_from(["twistvol", "jones", "--help"]), 0);
    }

    #[test]
    fn jones_small_run_exits_zero() {
        assert_eq!(run_from(["twistvol", "jones", "--p", "2", "--n", "4"]), 0);
        assert_eq!(
            run_from(["twistvol", "jones", "--p", "2", "--n", "4", "--format", "json"]),
            0
        );
        assert_eq!(
            run_from(["twistvol", "jones", "--p", "-2", "--n", "4", "--format", "csv"]),
            0
        );
    }

    #[test]
    fn budget_error_exits_three() {
        assert_eq!(
            run_from(["twistvol", "jones", "--p", "2", "--n", "200", "--budget", "10"]),
            3
        );
    }
}
