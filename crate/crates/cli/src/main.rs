use std::fs;
use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;

use bohr_core::radius::{k_from_qc_constant, Equation};
use bohr_core::series::{CoefficientSeries, ExtremalFamily, DEFAULT_ORDER};
use bohr_core::subordination::Model;
use bohr_core::verify::{Experiment, Generator, SamplePlan};
use bohr_core::weights::{WeightConfig, DEFAULT_TOL};
use bohr_core::Error;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

mod config;
mod run;

use config::*;

const EXIT_USAGE: u8 = 64;

const THEOREM_HELP: &str = "\
Equations (--equation / --theorem):
  thma  phi0(x) = (2/p) Phi1(x)     |f| <= 1 on the disk, 0 < p <= 2
  thm1  phi0(x) = (1/p) Phi1(x)     |a_n| <= 1 - |a_0| for n >= 1, 0 < p <= 1
  thm2  p = (1+k) Phi1(x)           harmonic h + conj(g), h as in thm1, phi0 = 1
  thm3  1 = 4 Psi1(x)               g subordinate to a univalent map
  thm4  1 = 2 Phi1(x)               g subordinate to a convex map
  thm5  1 = 2(1+k) Phi1(x)          harmonic, h subordinate to a convex map
k in [0, 1] bounds the dilatation |g'| <= k|h'|; --K sets k = (K-1)/(K+1).";

#[derive(Parser)]
#[command(
    name = "bohr",
    version,
    about = "Weighted Bohr radii, sums and their numerical verification"
)]
#[command(after_help = THEOREM_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal positive root of a radius equation.
    #[command(after_help = THEOREM_HELP)]
    Radius(RadiusArgs),
    /// Weighted Bohr sum of an analytic function.
    #[command(after_help = THEOREM_HELP)]
    Sum(SumArgs),
    /// Weighted Bohr sum of a harmonic pair built from h.
    #[command(name = "harmonic-sum", after_help = THEOREM_HELP)]
    HarmonicSum(HarmonicArgs),
    /// Weighted sum of a subordinate f∘ω of a model map.
    #[command(name = "subord-sum", after_help = THEOREM_HELP)]
    SubordSum(SubordArgs),
    /// Inequality sweep below the radius and sharpness scan above it.
    #[command(after_help = THEOREM_HELP)]
    Verify(ExperimentArgs),
    /// Sharpness scan of the extremal functions only.
    #[command(after_help = THEOREM_HELP)]
    Sharpness(ExperimentArgs),
    /// Radius over a range of p, k or K.
    #[command(after_help = THEOREM_HELP)]
    Sweep(SweepArgs),
    /// Re-run the config embedded in a previous JSON output.
    #[command(after_help = THEOREM_HELP)]
    Replay(ReplayArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum)]
    out: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct WeightArgs {
    /// `power`, inline JSON, or @file with a JSON weight config.
    #[arg(long, default_value = "power")]
    weights: String,
}

#[derive(Args)]
struct KArgs {
    /// Dilatation bound k in [0, 1].
    #[arg(long)]
    k: Option<f64>,
    /// Quasiconformal constant K >= 1.
    #[arg(long = "K", conflicts_with = "k")]
    big_k: Option<f64>,
}

impl KArgs {
    fn resolve(&self) -> Result<f64, CliError> {
        match (self.k, self.big_k) {
            (_, Some(big)) => k_from_qc_constant(big).map_err(|e| usage("--K", e)),
            (k, None) => Ok(k.unwrap_or(0.0)),
        }
    }
}

#[derive(Args)]
struct RadiusArgs {
    #[arg(long, alias = "theorem", value_parser = parse_equation)]
    equation: Equation,
    #[command(flatten)]
    weights: WeightArgs,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[command(flatten)]
    k: KArgs,
    #[arg(long, env = "BOHR_DEFAULT_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    BPrime,
    DiskAutomorphism,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sampler {
    Schur,
    BPrime,
}

#[derive(Args)]
#[group(id = "function", required = true, multiple = false, args = ["series", "a", "seed", "model"])]
struct FunctionArgs {
    /// Coefficient series as inline JSON or @file.
    #[arg(long)]
    series: Option<String>,
    /// Parameter of an extremal family.
    #[arg(long)]
    a: Option<f64>,
    /// Extremal family used with --a.
    #[arg(long, value_enum, default_value = "b-prime", requires = "a")]
    family: Family,
    /// Seed of a random function.
    #[arg(long)]
    seed: Option<u64>,
    /// Random function class used with --seed.
    #[arg(long, value_enum, default_value = "schur", requires = "seed")]
    sampler: Sampler,
    /// Use model∘ω (koebe or half-plane).
    #[arg(long, value_parser = parse_model)]
    model: Option<Model>,
    /// Schwarz function for --model: seed:N, identity or power:m.
    #[arg(long, requires = "model", default_value = "identity")]
    omega: OmegaSpec,
}

impl FunctionArgs {
    fn resolve(&self) -> Result<FunctionSpec, CliError> {
        if let Some(s) = &self.series {
            return Ok(FunctionSpec::Series {
                series: parse_json_arg("--series", s)?,
            });
        }
        if let Some(a) = self.a {
            let family = match self.family {
                Family::BPrime => ExtremalFamily::BPrimeExtremal { a },
                Family::DiskAutomorphism => ExtremalFamily::DiskAutomorphism { a },
            };
            return Ok(FunctionSpec::Extremal { family });
        }
        if let Some(seed) = self.seed {
            return Ok(match self.sampler {
                Sampler::Schur => FunctionSpec::Schur { seed },
                Sampler::BPrime => FunctionSpec::BPrime { seed },
            });
        }
        match self.model {
            Some(Model::UserSupplied) => Err(CliError::Usage(
                "--model: user-supplied models are only accepted by subord-sum".into(),
            )),
            Some(model) => Ok(FunctionSpec::Subordinate {
                model,
                omega: self.omega,
            }),
            None => Err(CliError::Usage(
                "one of --series, --a, --seed or --model is required".into(),
            )),
        }
    }
}

#[derive(Args)]
struct SumArgs {
    #[command(flatten)]
    function: FunctionArgs,
    #[command(flatten)]
    weights: WeightArgs,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Radius, or start:end:step.
    #[arg(long)]
    r: RSpec,
    /// Truncation order of generated series.
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct HarmonicArgs {
    #[command(flatten)]
    function: FunctionArgs,
    #[command(flatten)]
    weights: WeightArgs,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[command(flatten)]
    k: KArgs,
    /// Rotation of g as an angle in turns, λ = exp(2πiθ).
    #[arg(long, default_value_t = 0.0)]
    lambda_turns: f64,
    /// Leave out |a_0|^p (default when --model is given).
    #[arg(long)]
    without_constant: bool,
    #[arg(long)]
    r: RSpec,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SubordArgs {
    /// koebe, half-plane or user.
    #[arg(long, value_parser = parse_model)]
    model: Model,
    /// Schwarz function: seed:N, identity or power:m.
    #[arg(long, default_value = "identity")]
    omega: OmegaSpec,
    /// Series of a user-supplied map.
    #[arg(long)]
    series: Option<String>,
    /// dist(f(0), boundary) of a user-supplied map.
    #[arg(long)]
    dist: Option<f64>,
    /// The user-supplied map is convex.
    #[arg(long)]
    convex: bool,
    #[command(flatten)]
    weights: WeightArgs,
    #[arg(long)]
    r: RSpec,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, alias = "equation", value_parser = parse_equation)]
    theorem: Equation,
    #[command(flatten)]
    weights: WeightArgs,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[command(flatten)]
    k: KArgs,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sample source; defaults to the theorem's own class.
    #[arg(long, value_parser = parse_generator)]
    generator: Option<Generator>,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    /// Points in the r-grid on [0, R].
    #[arg(long, default_value_t = bohr_core::verify::DEFAULT_GRID_POINTS)]
    grid: usize,
    /// Comma-separated offsets above R for the sharpness scan.
    #[arg(long, value_delimiter = ',')]
    offsets: Option<Vec<f64>>,
    /// Comma-separated extremal parameters a.
    #[arg(long, value_delimiter = ',')]
    ladder: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.0)]
    lambda_turns: f64,
    #[arg(long, env = "BOHR_DEFAULT_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    workers: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, alias = "theorem", value_parser = parse_equation)]
    equation: Equation,
    #[command(flatten)]
    weights: WeightArgs,
    /// Value or start:end:step.
    #[arg(long, default_value = "1")]
    p: RSpec,
    /// Value or start:end:step.
    #[arg(long)]
    k: Option<RSpec>,
    /// Value or start:end:step of K >= 1.
    #[arg(long = "K", conflicts_with = "k")]
    big_k: Option<RSpec>,
    #[arg(long, env = "BOHR_DEFAULT_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ReplayArgs {
    /// JSON output of an earlier run, or a bare config; `-` reads stdin.
    file: String,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Run(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

fn usage(flag: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("invalid value for {flag}: {e}"))
}

fn parse_equation(s: &str) -> Result<Equation, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_model(s: &str) -> Result<Model, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_generator(s: &str) -> Result<Generator, String> {
    serde_json::from_value(serde_json::Value::String(s.replace('-', "_")))
        .map_err(|e| e.to_string())
}

/// Inline JSON, or the contents of `@path`.
fn parse_json_arg<T: serde::de::DeserializeOwned>(flag: &str, arg: &str) -> Result<T, CliError> {
    let text = match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| usage(flag, format!("{path}: {e}")))?,
        None => arg.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| usage(flag, e))
}

fn parse_weights(w: &WeightArgs) -> Result<WeightConfig, CliError> {
    if w.weights == "power" {
        Ok(WeightConfig::default())
    } else {
        parse_json_arg("--weights", &w.weights)
    }
}

fn resolve(command: &Command) -> Result<RunConfig, CliError> {
    let format = |o: &OutputArgs, default| o.out.unwrap_or(default);
    Ok(match command {
        Command::Radius(a) => RunConfig::Radius(RadiusConfig {
            equation: a.equation,
            weights: parse_weights(&a.weights)?,
            p: a.p,
            k: a.k.resolve()?,
            tol: a.tol,
            out: format(&a.output, Format::Json),
        }),
        Command::Sum(a) => RunConfig::Sum(SumConfig {
            function: a.function.resolve()?,
            weights: parse_weights(&a.weights)?,
            p: a.p,
            r: a.r,
            order: a.order,
            out: format(&a.output, Format::Json),
        }),
        Command::HarmonicSum(a) => {
            let function = a.function.resolve()?;
            let form = if a.without_constant || matches!(function, FunctionSpec::Subordinate { .. })
            {
                Form::WithoutConstant
            } else {
                Form::WithConstant
            };
            RunConfig::HarmonicSum(HarmonicConfig {
                function,
                weights: parse_weights(&a.weights)?,
                p: a.p,
                k: a.k.resolve()?,
                lambda_turns: a.lambda_turns,
                form,
                r: a.r,
                order: a.order,
                out: format(&a.output, Format::Json),
            })
        }
        Command::SubordSum(a) => {
            let user = match (a.model, &a.series, a.dist) {
                (Model::UserSupplied, Some(s), Some(dist)) => Some(UserModel {
                    f: parse_json_arg::<CoefficientSeries>("--series", s)?,
                    dist,
                    convex: a.convex,
                }),
                (Model::UserSupplied, _, _) => {
                    return Err(CliError::Usage(
                        "--model user requires --series and --dist".into(),
                    ))
                }
                (_, None, None) if !a.convex => None,
                _ => {
                    return Err(CliError::Usage(
                        "--series, --dist and --convex only apply to --model user".into(),
                    ))
                }
            };
            RunConfig::SubordSum(SubordConfig {
                model: a.model,
                user,
                omega: a.omega,
                weights: parse_weights(&a.weights)?,
                r: a.r,
                order: a.order,
                out: format(&a.output, Format::Json),
            })
        }
        Command::Verify(a) => RunConfig::Verify(experiment_config(a)?),
        Command::Sharpness(a) => RunConfig::Sharpness(experiment_config(a)?),
        Command::Sweep(a) => {
            let (k, qc_constant) = match (a.k, a.big_k) {
                (_, Some(big)) => (big, true),
                (k, None) => (k.unwrap_or(RSpec::Value(0.0)), false),
            };
            if a.p.is_range() && k.is_range() {
                return Err(CliError::Usage(
                    "--p and --k/--K cannot both be ranges".into(),
                ));
            }
            RunConfig::Sweep(SweepConfig {
                equation: a.equation,
                weights: parse_weights(&a.weights)?,
                p: a.p,
                k,
                qc_constant,
                tol: a.tol,
                out: format(&a.output, Format::Csv),
            })
        }
        Command::Replay(a) => {
            let text = if a.file == "-" {
                let mut s = String::new();
                std::io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
                s
            } else {
                fs::read_to_string(&a.file).map_err(|e| CliError::Io(format!("{}: {e}", a.file)))?
            };
            let mut value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| usage("FILE", e))?;
            if let Some(cfg) = value.get_mut("config") {
                value = cfg.take();
            }
            serde_json::from_value(value)
                .map_err(|e| usage("FILE", format!("not a run config: {e}")))?
        }
    })
}

fn experiment_config(a: &ExperimentArgs) -> Result<ExperimentConfig, CliError> {
    let mut exp = Experiment::new(a.theorem, a.samples, a.seed);
    exp.weights = parse_weights(&a.weights)?;
    exp.p = a.p;
    exp.k = a.k.resolve()?;
    exp.samples = SamplePlan {
        count: a.samples,
        seed: a.seed,
        generator: a.generator,
        order: a.order,
    };
    exp.grid_points = a.grid;
    if let Some(o) = &a.offsets {
        exp.sharpness_offsets = o.clone();
    }
    if let Some(l) = &a.ladder {
        exp.a_ladder = l.clone();
    }
    exp.lambda_turns = a.lambda_turns;
    exp.tol = a.tol;
    Ok(ExperimentConfig {
        experiment: exp,
        out: a.output.out.unwrap_or(Format::Json),
    })
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let (workers, output) = match &cli.command {
        Command::Verify(a) | Command::Sharpness(a) => (a.workers, a.output.output.clone()),
        Command::Replay(a) => (a.workers, a.output.clone()),
        Command::Radius(a) => (None, a.output.output.clone()),
        Command::Sum(a) => (None, a.output.output.clone()),
        Command::HarmonicSum(a) => (None, a.output.output.clone()),
        Command::SubordSum(a) => (None, a.output.output.clone()),
        Command::Sweep(a) => (None, a.output.output.clone()),
    };
    let config = resolve(&cli.command)?;
    let out = run::dispatch(&config, workers)?;
    match output {
        Some(path) => fs::write(&path, &out.text)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => print!("{}", out.text),
    }
    Ok(out.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Run(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Domain(_) | Error::Config(_) | Error::Contract(_) => {
                    ExitCode::from(EXIT_USAGE)
                }
                Error::NonConvergent(_) | Error::NoRootInRange { .. } => ExitCode::FAILURE,
            }
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
