//! Batch front-end: figure-ready CSV/JSON emission and the validation suite.

use clap::{Args, Parser, Subcommand, ValueEnum};
use gkp_ensemble::measurement::{self, SuccessMethod};
use gkp_ensemble::metrics;
use gkp_ensemble::spin::TotalSpin;
use gkp_ensemble::state::{self, Parity};
use gkp_ensemble::validation::{self, Suite};
use gkp_ensemble::faraday;
use rayon::prelude::*;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gkp-ensemble", version, about = "Grid-state preparation calculator")]
struct Cli {
    /// Flat key=value config file; flags take precedence over its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (default: $GKP_ENSEMBLE_OUT_DIR or '.').
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit position/momentum wavefunction samples for a heralded or target state.
    Wavefunction(WavefunctionArgs),
    /// Emit the outcome distribution at fixed J, or a success-probability sweep.
    Probability(ProbabilityArgs),
    /// Emit squeezing-requirement tables and the interface planner report.
    Requirements(RequirementsArgs),
    /// Run the oracle/invariant suites and emit a JSON report.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct WavefunctionArgs {
    /// Total spin J (e.g. 4, 4.5, 9/2). Uses the balanced encoding.
    #[arg(long)]
    j: Option<String>,
    /// Measurement outcome x: "+J", "-J", or a number.
    #[arg(long, default_value = "+J")]
    x: String,
    #[arg(long, value_enum, default_value_t = QuadratureChoice::Both)]
    quadrature: QuadratureChoice,
    /// Emit an ideal target state instead: plus or minus.
    #[arg(long, value_enum)]
    target: Option<TargetChoice>,
    /// Target squeezing in dB (target mode).
    #[arg(long)]
    db: Option<f64>,
    /// Logical displacement of the target envelope, |q0| <= sqrt(pi)/2.
    #[arg(long, default_value_t = 0.0)]
    q0: f64,
    #[arg(long)]
    grid_min: Option<f64>,
    #[arg(long)]
    grid_max: Option<f64>,
    #[arg(long)]
    grid_step: Option<f64>,
}

#[derive(Args)]
struct ProbabilityArgs {
    /// Total spin J for a single outcome distribution.
    #[arg(long)]
    j: Option<String>,
    /// Sweep over squeezing targets, "start:end:step" in dB.
    #[arg(long)]
    sweep_db: Option<String>,
}

#[derive(Args)]
struct RequirementsArgs {
    /// Squeezing targets in dB, comma-separated.
    #[arg(long, value_delimiter = ',')]
    db: Vec<f64>,
    /// Also emit the atom-light interface planner report.
    #[arg(long)]
    faraday: bool,
    #[arg(long)]
    n_photons: Option<f64>,
    /// Detuning in linewidths, Delta/Gamma.
    #[arg(long)]
    detuning: Option<f64>,
    /// Photon flux in photons/second.
    #[arg(long, default_value_t = 1e6)]
    flux: f64,
    /// Meter (measured) variance sigma_M^2.
    #[arg(long, default_value_t = 0.1)]
    meter_var: f64,
}

#[derive(Args)]
struct ValidateArgs {
    /// Suite name (dmatrix, completeness, fourier, asymptotic, zeta,
    /// requirements, faraday); repeatable. Default: all.
    #[arg(long)]
    suite: Vec<String>,
    /// Largest J exercised by the size-dependent suites.
    #[arg(long, default_value_t = 10.0)]
    max_j: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QuadratureChoice {
    Position,
    Momentum,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TargetChoice {
    Plus,
    Minus,
}

/// Errors that should surface as exit code 2 with a one-line message.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match load_config(cli.config.as_deref()) {
        Ok(c) => c,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let out_dir = cli
        .out_dir
        .or_else(|| config.get("out_dir").map(PathBuf::from))
        .or_else(|| std::env::var_os("GKP_ENSEMBLE_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));

    let result = match &cli.command {
        Command::Wavefunction(args) => cmd_wavefunction(args, &config, &out_dir),
        Command::Probability(args) => cmd_probability(args, &config, &out_dir),
        Command::Requirements(args) => cmd_requirements(args, &config, &out_dir),
        Command::Validate(args) => {
            return match cmd_validate(args, &config, &out_dir) {
                Ok(all_pass) => {
                    if all_pass {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(UsageError(msg)) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(2)
                }
            };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Flat `key = value` file; '#' starts a comment.
fn load_config(path: Option<&Path>) -> Result<HashMap<String, String>, UsageError> {
    let mut map = HashMap::new();
    let Some(path) = path else {
        return Ok(map);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(UsageError(format!(
                "{}:{}: expected key = value",
                path.display(),
                lineno + 1
            )));
        };
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn config_f64(config: &HashMap<String, String>, key: &str) -> Result<Option<f64>, UsageError> {
    config
        .get(key)
        .map(|v| {
            v.parse::<f64>()
                .map_err(|_| UsageError(format!("config key {key}: invalid number '{v}'")))
        })
        .transpose()
}

/// Accepts "4", "4.5", "9/2".
fn parse_spin(text: &str) -> Result<TotalSpin, UsageError> {
    let value = if let Some((num, den)) = text.split_once('/') {
        let n: f64 = num.trim().parse().map_err(|_| bad_spin(text))?;
        let d: f64 = den.trim().parse().map_err(|_| bad_spin(text))?;
        n / d
    } else {
        text.trim().parse().map_err(|_| bad_spin(text))?
    };
    let two_j = (2.0 * value).round();
    if two_j < 1.0 || (2.0 * value - two_j).abs() > 1e-9 || two_j > u32::MAX as f64 {
        return Err(bad_spin(text));
    }
    Ok(TotalSpin::from_two_j(two_j as u32))
}

fn bad_spin(text: &str) -> UsageError {
    UsageError(format!(
        "invalid spin '{text}': expected a positive integer or half-integer"
    ))
}

/// Accepts "+J", "-J", "0", "2.5", "-5/2".
fn parse_outcome(text: &str, j: TotalSpin) -> Result<i64, UsageError> {
    let t = text.trim();
    let two_x = match t {
        "+J" | "J" => j.two_j() as i64,
        "-J" => -(j.two_j() as i64),
        _ => {
            let value = if let Some((num, den)) = t.split_once('/') {
                let n: f64 = num.trim().parse().map_err(|_| bad_outcome(text))?;
                let d: f64 = den.trim().parse().map_err(|_| bad_outcome(text))?;
                n / d
            } else {
                t.parse::<f64>().map_err(|_| bad_outcome(text))?
            };
            let two_x = (2.0 * value).round();
            if (2.0 * value - two_x).abs() > 1e-9 {
                return Err(bad_outcome(text));
            }
            two_x as i64
        }
    };
    j.check_index(two_x)
        .map_err(|e| UsageError(e.to_string()))?;
    Ok(two_x)
}

fn bad_outcome(text: &str) -> UsageError {
    UsageError(format!("invalid outcome '{text}': expected +J, -J, or a (half-)integer"))
}

/// 17 significant digits, '.' decimal, locale-free.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(path: &Path, contents: &str) -> Result<(), UsageError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| UsageError(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, contents)
        .map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_wavefunction(
    args: &WavefunctionArgs,
    config: &HashMap<String, String>,
    out_dir: &Path,
) -> Result<(), UsageError> {
    let (comb, label) = if let Some(target) = args.target {
        let db = args
            .db
            .or(config_f64(config, "db")?)
            .ok_or_else(|| UsageError("--target requires --db".into()))?;
        let sigma = 10f64.powf(-db / 20.0);
        let parity = match target {
            TargetChoice::Plus => Parity::Plus,
            TargetChoice::Minus => Parity::Minus,
        };
        let comb = state::target_state(parity, sigma, args.q0, state::default_truncation(sigma))?;
        let name = match target {
            TargetChoice::Plus => "plus",
            TargetChoice::Minus => "minus",
        };
        (comb, format!("target_{name}_db{db}"))
    } else {
        let j_text = args
            .j
            .clone()
            .or_else(|| config.get("j").cloned())
            .ok_or_else(|| UsageError("need --j or --target".into()))?;
        let j = parse_spin(&j_text)?;
        let params = metrics::symmetric_params(j);
        let two_x = parse_outcome(&args.x, j)?;
        let comb = state::conditional_position_state(&params, two_x)?;
        (comb, format!("j{}_x{}", spin_label(j), args.x.replace('/', "_")))
    };

    let mut grid = comb.default_grid();
    if let Some(v) = args.grid_min.or(config_f64(config, "grid_min")?) {
        grid.min = v;
    }
    if let Some(v) = args.grid_max.or(config_f64(config, "grid_max")?) {
        grid.max = v;
    }
    if let Some(v) = args.grid_step.or(config_f64(config, "grid_step")?) {
        grid.step = v;
    }

    if args.quadrature != QuadratureChoice::Momentum {
        let samples = state::evaluate(&comb, &grid)?;
        let mut csv = String::from(
            "q (position quadrature, hbar=1),re_psi (amplitude, units q^-1/2),im_psi (amplitude, units q^-1/2),abs2_psi (probability density, units q^-1)\n",
        );
        for (q, s) in grid.points().zip(&samples) {
            writeln!(csv, "{},{},{},{}", fmt(q), fmt(s.re), fmt(s.im), fmt(s.norm_sqr())).unwrap();
        }
        write_file(&out_dir.join(format!("wavefunction_{label}_position.csv")), &csv)?;
    }
    if args.quadrature != QuadratureChoice::Position {
        let samples = state::evaluate(&comb, &grid)?;
        let (conj, tilde) = state::fourier_numeric(&samples, &grid);
        let mut csv = String::from(
            "p (momentum quadrature, hbar=1),re_psi (amplitude, units p^-1/2),im_psi (amplitude, units p^-1/2),abs2_psi (probability density, units p^-1)\n",
        );
        for (p, s) in conj.points().zip(&tilde) {
            writeln!(csv, "{},{},{},{}", fmt(p), fmt(s.re), fmt(s.im), fmt(s.norm_sqr())).unwrap();
        }
        write_file(&out_dir.join(format!("wavefunction_{label}_momentum.csv")), &csv)?;
    }
    Ok(())
}

fn spin_label(j: TotalSpin) -> String {
    if j.is_integer() {
        format!("{}", j.two_j() / 2)
    } else {
        format!("{}_2", j.two_j())
    }
}

fn cmd_probability(
    args: &ProbabilityArgs,
    config: &HashMap<String, String>,
    out_dir: &Path,
) -> Result<(), UsageError> {
    if let Some(sweep) = &args.sweep_db {
        let (start, end, step) = parse_sweep(sweep)?;
        let n = ((end - start) / step).floor() as usize + 1;
        let dbs: Vec<f64> = (0..n).map(|k| start + k as f64 * step).collect();
        let rows: Vec<String> = dbs
            .par_iter()
            .map(|&db| {
                let j = metrics::j_from_db(db);
                // nearest discrete spin for the exact two-outcome sum
                let two_j = ((2.0 * j).round() as u32).max(1);
                let p_exact = measurement::success_probability(
                    TotalSpin::from_two_j(two_j),
                    SuccessMethod::ExactSum,
                )
                .expect("exact sum");
                let p_closed =
                    measurement::success_probability_continuous(j, SuccessMethod::ClosedBinomial);
                let p_asym =
                    measurement::success_probability_continuous(j, SuccessMethod::Asymptotic);
                let p_iter = measurement::iterated_scheme_probability(j);
                format!(
                    "{},{},{},{},{},{}",
                    fmt(db),
                    fmt(j),
                    fmt(p_exact),
                    fmt(p_closed),
                    fmt(p_asym),
                    fmt(p_iter)
                )
            })
            .collect();
        let mut csv = String::from(
            "db (squeezing, dB),j (total spin, dimensionless),p_exact (probability, nearest half-integer J),p_closed (probability),p_asymptotic (probability),p_iterated (probability)\n",
        );
        for row in rows {
            csv.push_str(&row);
            csv.push('\n');
        }
        write_file(&out_dir.join("probability_sweep.csv"), &csv)?;
        return Ok(());
    }

    let j_text = args
        .j
        .clone()
        .or_else(|| config.get("j").cloned())
        .ok_or_else(|| UsageError("need --j or --sweep-db".into()))?;
    let j = parse_spin(&j_text)?;
    let params = metrics::symmetric_params(j);
    let prior = measurement::SpinPrior::coherent_x(j);
    let dist = measurement::outcome_distribution(&params, &prior)?;
    let mut csv = String::from("x (J_x outcome, units of hbar),probability (dimensionless)\n");
    for (&two_x, &p) in dist.two_xs.iter().zip(&dist.probabilities) {
        writeln!(csv, "{},{}", fmt(two_x as f64 / 2.0), fmt(p)).unwrap();
    }
    write_file(
        &out_dir.join(format!("probability_j{}.csv", spin_label(j))),
        &csv,
    )
}

fn parse_sweep(text: &str) -> Result<(f64, f64, f64), UsageError> {
    let parts: Vec<&str> = text.split(':').collect();
    let err = || UsageError(format!("invalid sweep '{text}': expected start:end:step"));
    if parts.len() != 3 {
        return Err(err());
    }
    let vals: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| err())?;
    if vals[2] <= 0.0 || vals[1] < vals[0] {
        return Err(err());
    }
    Ok((vals[0], vals[1], vals[2]))
}

fn cmd_requirements(
    args: &RequirementsArgs,
    config: &HashMap<String, String>,
    out_dir: &Path,
) -> Result<(), UsageError> {
    if !args.db.is_empty() {
        let mut csv = String::from(
            "db (squeezing, dB),j_required (total spin, dimensionless),r (optical squeezing, dimensionless),p_success (probability)\n",
        );
        for &db in &args.db {
            let j = metrics::j_from_db(db);
            let r = 0.5 * (std::f64::consts::PI * j / 2.0).ln();
            let ps = measurement::success_probability_from_db(db);
            writeln!(csv, "{},{},{},{}", fmt(db), fmt(j), fmt(r), fmt(ps)).unwrap();
        }
        write_file(&out_dir.join("requirements.csv"), &csv)?;
    }
    if args.faraday {
        let n_photons = args
            .n_photons
            .or(config_f64(config, "n_photons")?)
            .ok_or_else(|| UsageError("--faraday requires --n-photons".into()))?;
        let detuning = args
            .detuning
            .or(config_f64(config, "detuning")?)
            .ok_or_else(|| UsageError("--faraday requires --detuning".into()))?;
        if n_photons <= 0.0 || detuning <= 0.0 {
            return Err(UsageError("photon number and detuning must be positive".into()));
        }
        let g_target = std::f64::consts::PI.sqrt();
        let eta = faraday::required_eta(n_photons, detuning, g_target);
        let params = faraday::FaradayParams {
            chi: eta / (2.0 * detuning),
            n_photons,
            detuning_over_gamma: detuning,
            photon_flux: args.flux,
        };
        let report = faraday::plan(&params, args.meter_var);
        let json = serde_json::to_string_pretty(&report).unwrap();
        write_file(&out_dir.join("faraday_plan.json"), &json)?;
    }
    if args.db.is_empty() && !args.faraday {
        return Err(UsageError("need --db values and/or --faraday".into()));
    }
    Ok(())
}

fn cmd_validate(
    args: &ValidateArgs,
    config: &HashMap<String, String>,
    out_dir: &Path,
) -> Result<bool, UsageError> {
    let suites: Vec<Suite> = if args.suite.is_empty() {
        Suite::ALL.to_vec()
    } else {
        args.suite
            .iter()
            .map(|name| {
                Suite::from_name(name)
                    .ok_or_else(|| UsageError(format!("unknown suite '{name}'")))
            })
            .collect::<Result<_, _>>()?
    };
    let max_j = config_f64(config, "max_j")?
        .map_or(args.max_j, |v| if args.max_j == 10.0 { v } else { args.max_j });
    if max_j < 0.5 {
        return Err(UsageError("--max-j must be at least 1/2".into()));
    }
    let report = validation::run_all(&suites, (2.0 * max_j).round() as u32);
    for c in &report.checks {
        println!(
            "{} {}: measured {:.3e} vs tolerance {:.3e}{}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.measured,
            c.tolerance,
            c.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default()
        );
    }
    println!("{} passed, {} failed", report.passed, report.failed);
    let json = serde_json::to_string_pretty(&report).unwrap();
    write_file(&out_dir.join("validation_report.json"), &json)?;
    Ok(report.failed == 0)
}
