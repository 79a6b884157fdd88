//! `kraus-witness` command-line front end.
//!
//! Exit codes: 0 success or no violation found, 1 usage or configuration
//! error, 2 numerical failure, 3 non-Markovianity witnessed.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kraus_witness::config::{ConfigError, RunConfig, Settings, TOL_ENV};
use kraus_witness::figures::{figure_data, FigureOverrides};
use kraus_witness::probe::{geometric_grid, small_time_exponents};
use kraus_witness::witness::{blp_measure, markovianity_verdict, Outcome, PairSampling};
use kraus_witness::{validate_cptp, ScanResult};

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_WITNESSED: u8 = 3;
/// Completeness defect accepted by `validate`.
const VALIDATE_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(name = "kraus-witness", version, about = "Fidelity-difference witness of non-Markovian dynamics")]
struct Cli {
    /// Flat key=value configuration file; flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Seed for sampled quantities (BLP pairs).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the data of figure 1-5 as CSV.
    Figure(FigureArgs),
    /// Scan G(t, tau) and report whether it goes negative.
    Witness(WitnessArgs),
    /// Fit small-time power laws of the Kraus operators.
    Probe(ProbeArgs),
    /// Check completeness of the model's Kraus set at sampled times.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct FigureArgs {
    #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
    id: u8,
    /// Output CSV path (default figN.csv).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    tau: Option<f64>,
    /// Noise bandwidth.
    #[arg(long)]
    gamma: Option<f64>,
    /// Noise strength.
    #[arg(long = "Gamma")]
    big_gamma: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    g: Option<f64>,
    /// X-state parameter (figures 2, 3) or coherent amplitude (figure 4).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
}

#[derive(Args)]
struct ModelArgs {
    /// ye-markov, ye-nonmarkov, jcm-qubit, jcm-photon or ck.
    #[arg(long)]
    model: Option<String>,
    #[arg(long = "Gamma")]
    big_gamma: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long = "alpha-x")]
    alpha_x: Option<f64>,
    #[arg(long)]
    g: Option<f64>,
    /// Real part of the coherent amplitude.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long = "alpha-im", allow_hyphen_values = true)]
    alpha_im: Option<f64>,
    /// Fock cutoff (n_cut for the field model).
    #[arg(long = "n-max")]
    n_max: Option<usize>,
    #[arg(long)]
    rho11: Option<f64>,
    #[arg(long)]
    rho22: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    rho12: Option<f64>,
    #[arg(long = "rho12-im", allow_hyphen_values = true)]
    rho12_im: Option<f64>,
}

impl ModelArgs {
    fn settings(&self, seed: Option<u64>) -> Result<Settings, ConfigError> {
        let mut s = Settings::default();
        s.set_opt("model", self.model.as_ref())?;
        s.set_opt("Gamma", self.big_gamma)?;
        s.set_opt("gamma", self.gamma)?;
        s.set_opt("lambda", self.lambda)?;
        s.set_opt("alpha_x", self.alpha_x)?;
        s.set_opt("g", self.g)?;
        s.set_opt("alpha", self.alpha)?;
        s.set_opt("alpha_im", self.alpha_im)?;
        s.set_opt("n_max", self.n_max)?;
        s.set_opt("rho11", self.rho11)?;
        s.set_opt("rho22", self.rho22)?;
        s.set_opt("rho12", self.rho12)?;
        s.set_opt("rho12_im", self.rho12_im)?;
        s.set_opt("seed", seed)?;
        Ok(s)
    }
}

#[derive(Args)]
struct WitnessArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Lags, comma separated.
    #[arg(long, value_delimiter = ',')]
    tau: Vec<f64>,
    #[arg(long)]
    start: Option<f64>,
    #[arg(long)]
    stop: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
    /// Witness tolerance (overrides KRAUS_WITNESS_TOL).
    #[arg(long)]
    tol: Option<f64>,
    /// Write the most negative G series as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also estimate the BLP measure on the same grid.
    #[arg(long)]
    blp: bool,
}

#[derive(Args)]
struct ProbeArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Smallest dimensionless time of the fit window.
    #[arg(long, default_value_t = 1e-4)]
    lo: f64,
    /// Largest dimensionless time of the fit window.
    #[arg(long, default_value_t = 1e-2)]
    hi: f64,
    #[arg(long, default_value_t = 12)]
    points: usize,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Dimensionless sample times, comma separated (default 0, 0.2, ..., 9.8).
    #[arg(long = "t", value_delimiter = ',')]
    times: Vec<f64>,
}

enum Failure {
    Usage(String),
    Numerical(kraus_witness::Error),
    Io(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<kraus_witness::Error> for Failure {
    fn from(e: kraus_witness::Error) -> Self {
        use kraus_witness::Error::*;
        match e {
            ParamOutOfRange { .. } | InvalidGrid(_) | GridTooCoarse { .. } | InvalidInitialState(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Numerical(other),
        }
    }
}

fn load(config: Option<&Path>, flags: Settings) -> Result<RunConfig, Failure> {
    let env = std::env::var(TOL_ENV).ok();
    Ok(RunConfig::layered(config, env.as_deref(), flags)?)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn scan_csv(scan: &ScanResult) -> String {
    let mut s = String::from("t,G\n");
    for (t, g) in scan.abscissa.iter().zip(&scan.values) {
        s.push_str(&format!("{t:.16e},{g:.16e}\n"));
    }
    s
}

fn figure(args: &FigureArgs) -> Result<u8, Failure> {
    let o = FigureOverrides {
        tau: args.tau,
        gamma: args.gamma,
        big_gamma: args.big_gamma,
        lambda: args.lambda,
        g: args.g,
        alpha: args.alpha,
    };
    let data = figure_data(args.id, &o)?;
    let path = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("fig{}.csv", args.id)));
    write_file(&path, &data.to_csv())?;
    println!("{} -> {}", data.summary(), path.display());
    Ok(0)
}

fn witness(cli: &Cli, args: &WitnessArgs) -> Result<u8, Failure> {
    let mut flags = args.model.settings(cli.seed)?;
    if !args.tau.is_empty() {
        let list: Vec<String> = args.tau.iter().map(f64::to_string).collect();
        flags.set("tau", list.join(","))?;
    }
    flags.set_opt("start", args.start)?;
    flags.set_opt("stop", args.stop)?;
    flags.set_opt("step", args.step)?;
    flags.set_opt("witness_tol", args.tol)?;
    flags.set_opt("out", args.out.as_ref().map(|p| p.display().to_string()))?;
    let cfg = load(cli.config.as_deref(), flags)?;
    let grid = cfg.grid.points();
    let verdict = markovianity_verdict(&cfg.model, &cfg.taus, &grid, cfg.witness_tol)?;
    println!("model: {}", cfg.model);
    println!("grid: {} ({} points), tau: {:?}", cfg.grid, grid.len(), cfg.taus);
    println!(
        "outcome: {} (min G {:.6e} at t={:.6} for tau={}, tolerance {:e})",
        verdict.outcome, verdict.evidence.min_value, verdict.evidence.min_at, verdict.tau, verdict.tolerance
    );
    if verdict.outcome == Outcome::NoViolationFound {
        println!("note: G never fell below -tolerance; this does not establish Markovian dynamics");
    }
    if args.blp {
        let blp = blp_measure(&cfg.model, &PairSampling::Default { seed: cfg.seed }, &grid)?;
        println!(
            "blp: {:.6e} (lower bound over {} pairs, best: {})",
            blp.value, blp.pair_count, blp.best_pair
        );
    }
    if let Some(path) = &cfg.output_path {
        write_file(path, &scan_csv(&verdict.evidence))?;
    }
    Ok(match verdict.outcome {
        Outcome::NonMarkovianWitnessed => EXIT_WITNESSED,
        Outcome::NoViolationFound => 0,
    })
}

fn probe(cli: &Cli, args: &ProbeArgs) -> Result<u8, Failure> {
    let cfg = load(cli.config.as_deref(), args.model.settings(cli.seed)?)?;
    let grid = geometric_grid(args.lo, args.hi, args.points)?;
    let report = small_time_exponents(&cfg.model, &grid)?;
    println!("model: {}", cfg.model);
    println!("window: [{:e}, {:e}] ({} points)", args.lo, args.hi, args.points);
    println!("{:<6} {:>10} {:>12}  class", "op", "exponent", "residual");
    for f in &report.fits {
        let mut class = f.class.to_string();
        if f.leading {
            class.push_str(" (leading, fit of |K(t)-K(0)|)");
        }
        if let Some(note) = f.note {
            class.push_str(&format!(" ({note})"));
        }
        println!("K{:<5} {:>10.4} {:>12.3e}  {}", f.index, f.exponent, f.residual, class);
    }
    println!("classification: {}", report.classification);
    Ok(0)
}

fn validate(cli: &Cli, args: &ValidateArgs) -> Result<u8, Failure> {
    let cfg = load(cli.config.as_deref(), args.model.settings(cli.seed)?)?;
    cfg.model.validate()?;
    let times: Vec<f64> = if args.times.is_empty() {
        (0..50).map(|i| 0.2 * i as f64).collect()
    } else {
        args.times.clone()
    };
    let mut worst = (0.0_f64, 0.0);
    for &s in &times {
        let ch = cfg.model.channel(cfg.model.physical_time(s))?;
        let defect = validate_cptp(&ch, VALIDATE_TOL).defect;
        if defect >= worst.0 {
            worst = (defect, s);
        }
    }
    let ok = worst.0 <= VALIDATE_TOL;
    println!("model: {}", cfg.model);
    println!(
        "max completeness defect {:e} at t={} over {} samples: {}",
        worst.0,
        worst.1,
        times.len(),
        if ok { "valid" } else { "NOT valid" }
    );
    Ok(if ok { 0 } else { EXIT_NUMERICAL })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Figure(a) => figure(a),
        Command::Witness(a) => witness(&cli, a),
        Command::Probe(a) => probe(&cli, a),
        Command::Validate(a) => validate(&cli, a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("numerical failure: {e}");
            ExitCode::from(EXIT_NUMERICAL)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_NUMERICAL)
        }
    }
}
