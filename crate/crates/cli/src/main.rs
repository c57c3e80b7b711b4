//! `cldp` command-line front end.
//!
//! Exit status: 0 success, 1 usage error, 2 data error, 3 calibration did not
//! converge.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cldp::calibration::{calibrate_alpha, SearchStrategy};
use cldp::data_io::{
    generate_population, generate_sequences, load_sequences, load_singletons, load_universe, read_report, to_json,
    SequenceSpec, SyntheticDistribution, SyntheticSpec,
};
use cldp::estimation::{count_indices, FrequencyReport};
use cldp::evaluation::{evaluate_counts, mine_ngrams};
use cldp::experiment::{run_experiment, Dataset, ExperimentConfig, Protocol};
use cldp::protocols::SequenceMode;
use cldp::rng::derive_seed;
use cldp::{Error, Metric, MetricKind, Prior, PriorPreset, PrivacyBudget, RandomSource, Universe};
use serde_json::json;

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_NONCONVERGENCE: u8 = 3;

/// Assumed LDP budget when neither `--epsilon` nor `--alpha` is given.
const DEFAULT_EPSILON: f64 = 1.0;

#[derive(Parser)]
#[command(name = "cldp", version, about = "Condensed local differential privacy experiments")]
struct Cli {
    /// Worker threads; defaults to all cores. Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find the largest alpha whose adversary confidence stays within GRR's at epsilon.
    Calibrate(CalibrateArgs),
    /// Simulate collection protocols and score their estimates against the truth.
    Simulate(SimulateArgs),
    /// Report the top-k contiguous n-grams of a sequence file.
    MineNgrams(MineArgs),
    /// Score an estimate report against actual counts.
    Evaluate(EvaluateArgs),
    /// Write a synthetic singleton or sequence data file.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct UniverseArgs {
    /// Universe file, one item per line.
    #[arg(long, conflicts_with = "universe_size")]
    universe: Option<PathBuf>,
    /// Integer universe `0..N` when no universe file is given.
    #[arg(long)]
    universe_size: Option<usize>,
}

impl UniverseArgs {
    fn load(&self, default_size: usize) -> Result<Universe, CliError> {
        match &self.universe {
            Some(p) => Ok(load_universe(p)?),
            None => Ok(Universe::integers(self.universe_size.unwrap_or(default_size))?),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PriorArg {
    Uniform,
    Gaussian,
    Exponential,
}

#[derive(Args)]
struct PriorArgs {
    #[arg(long, value_enum, default_value = "uniform")]
    prior: PriorArg,
    #[arg(long, default_value_t = 50.0)]
    prior_mean: f64,
    #[arg(long, default_value_t = 12.0)]
    prior_std: f64,
    #[arg(long, default_value_t = 0.05)]
    prior_rate: f64,
}

impl PriorArgs {
    fn preset(&self) -> PriorPreset {
        match self.prior {
            PriorArg::Uniform => PriorPreset::Uniform,
            PriorArg::Gaussian => PriorPreset::Gaussian { mean: self.prior_mean, std: self.prior_std },
            PriorArg::Exponential => PriorPreset::Exponential { rate: self.prior_rate },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Ordinal,
    Uniform,
}

impl MetricArg {
    fn kind(self) -> MetricKind {
        match self {
            MetricArg::Ordinal => MetricKind::Ordinal,
            MetricArg::Uniform => MetricKind::Uniform,
        }
    }
}

#[derive(Args)]
struct CalibrateArgs {
    #[command(flatten)]
    universe: UniverseArgs,
    #[arg(long)]
    epsilon: f64,
    #[command(flatten)]
    prior: PriorArgs,
    #[arg(long, value_enum, default_value = "ordinal")]
    metric: MetricArg,
    /// Fixed alpha step instead of bisection.
    #[arg(long)]
    linear_step: Option<f64>,
    #[arg(long, default_value_t = cldp::calibration::DEFAULT_TOLERANCE)]
    tolerance: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistributionArg {
    Gaussian,
    Exponential,
    Uniform,
    Zipf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Symmetric,
    Asymmetric,
}

#[derive(Args)]
struct SimulateArgs {
    /// Comma-separated: ordinal, item, sequence, setvalued, grr, olh, rappor.
    #[arg(long, value_delimiter = ',', value_parser = parse_protocol, default_value = "ordinal")]
    protocols: Vec<Protocol>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Skips calibration for CLDP protocols.
    #[arg(long)]
    alpha: Option<f64>,
    #[command(flatten)]
    universe: UniverseArgs,
    /// Singleton data file; requires --universe.
    #[arg(long, conflicts_with = "sequences", requires = "universe")]
    singletons: Option<PathBuf>,
    /// Sequence data file; requires --universe.
    #[arg(long, requires = "universe")]
    sequences: Option<PathBuf>,
    /// Synthetic population drawn afresh per trial when no data file is given.
    #[arg(long, value_enum, default_value = "gaussian")]
    distribution: DistributionArg,
    #[arg(long, default_value_t = 50.0)]
    mean: f64,
    #[arg(long, default_value_t = 12.0)]
    std: f64,
    #[arg(long, default_value_t = 0.05)]
    rate: f64,
    #[arg(long, default_value_t = 1.1)]
    exponent: f64,
    /// Synthetic population size.
    #[arg(long, short, default_value_t = 2500)]
    n: usize,
    #[command(flatten)]
    prior: PriorArgs,
    #[arg(long, value_enum, default_value = "ordinal")]
    metric: MetricArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Item-CLDP round-one share of alpha.
    #[arg(long, default_value_t = cldp::protocols::DEFAULT_SPLIT)]
    split: f64,
    #[arg(long, default_value_t = cldp::protocols::DEFAULT_MAX_LEN)]
    max_len: usize,
    /// Sequence parameter mode; chosen from the mean record length if absent.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Asymmetric-mode halt probability.
    #[arg(long)]
    halt: Option<f64>,
    #[arg(long, short, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 2)]
    ngram: usize,
    /// Include each trial's estimate in the report.
    #[arg(long)]
    dump_estimates: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MineArgs {
    #[arg(long)]
    sequences: PathBuf,
    /// Universe file; defaults to the sorted distinct items of the input.
    #[arg(long)]
    universe: Option<PathBuf>,
    #[arg(long, short, default_value_t = 2)]
    n: usize,
    #[arg(long, short, default_value_t = 10)]
    k: usize,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Frequency report JSON, or a singleton file when --universe is given.
    #[arg(long)]
    actual: PathBuf,
    #[arg(long)]
    universe: Option<PathBuf>,
    /// Frequency report JSON.
    #[arg(long)]
    estimate: PathBuf,
    #[arg(long, short, default_value_t = 10)]
    k: usize,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenerateKind {
    Singletons,
    Sequences,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: GenerateKind,
    #[arg(long, default_value_t = 100)]
    universe_size: usize,
    #[arg(long, value_enum, default_value = "gaussian")]
    distribution: DistributionArg,
    #[arg(long, default_value_t = 50.0)]
    mean: f64,
    #[arg(long, default_value_t = 12.0)]
    std: f64,
    #[arg(long, default_value_t = 0.05)]
    rate: f64,
    #[arg(long, default_value_t = 1.1)]
    exponent: f64,
    /// Clients, or records for sequences.
    #[arg(long, short, default_value_t = 2500)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    min_len: usize,
    #[arg(long, default_value_t = 10)]
    max_len: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Data file to write.
    #[arg(long, short)]
    output: PathBuf,
    /// Also write the integer universe here.
    #[arg(long)]
    universe_output: Option<PathBuf>,
}

fn parse_protocol(s: &str) -> Result<Protocol, String> {
    Protocol::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn data(message: impl Into<String>) -> Self {
        Self { code: EXIT_DATA, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonConvergence(_) => EXIT_NONCONVERGENCE,
            Error::InvalidBudget(_) | Error::InvalidParameter(_) | Error::InvalidDistribution(_) | Error::Unsupported(_) => {
                EXIT_USAGE
            }
            _ => EXIT_DATA,
        };
        Self { code, message: e.to_string() }
    }
}

fn emit(json: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(p) => std::fs::write(p, json).map_err(|e| CliError::data(format!("{}: {e}", p.display()))),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn synthetic(
    dist: DistributionArg,
    mean: f64,
    std: f64,
    rate: f64,
    exponent: f64,
) -> SyntheticDistribution {
    match dist {
        DistributionArg::Gaussian => SyntheticDistribution::Gaussian { mean, std },
        DistributionArg::Exponential => SyntheticDistribution::Exponential { rate },
        DistributionArg::Uniform => SyntheticDistribution::Uniform,
        DistributionArg::Zipf => SyntheticDistribution::Zipf { exponent },
    }
}

fn cmd_calibrate(a: &CalibrateArgs) -> Result<(), CliError> {
    let eps = PrivacyBudget::epsilon(a.epsilon)?;
    let universe = a.universe.load(100)?;
    let n = universe.size();
    let metric: Metric = Metric::build(&universe, &a.metric.kind())?;
    let prior: Prior = a.prior.preset().build(n)?;
    let strategy = match a.linear_step {
        Some(step) => SearchStrategy::LinearScan { step },
        None => SearchStrategy::Bisection { tolerance: a.tolerance },
    };
    let result = calibrate_alpha(&universe, &metric, &prior, &eps, strategy)?;
    emit(&to_json(&result)?, a.output.as_deref())
}

fn cmd_simulate(a: &SimulateArgs) -> Result<(), CliError> {
    let assumed_epsilon = a.epsilon.is_none() && a.alpha.is_none();
    let epsilon = if assumed_epsilon { Some(DEFAULT_EPSILON) } else { a.epsilon };
    if let Some(e) = epsilon {
        PrivacyBudget::epsilon(e)?;
    }
    if let Some(al) = a.alpha {
        PrivacyBudget::alpha(al)?;
    }
    let (universe, data) = match (&a.singletons, &a.sequences) {
        (Some(p), _) => {
            let u = a.universe.load(0)?;
            let d = Dataset::Singletons(load_singletons(p, &u)?);
            (u, d)
        }
        (None, Some(p)) => {
            let u = a.universe.load(0)?;
            let d = Dataset::Records(load_sequences(p, &u)?);
            (u, d)
        }
        (None, None) => {
            let u = a.universe.load(100)?;
            let spec = SyntheticSpec {
                distribution: synthetic(a.distribution, a.mean, a.std, a.rate, a.exponent),
                n: a.n,
                universe_size: u.size(),
            };
            (u, Dataset::Synthetic(spec))
        }
    };
    let config = ExperimentConfig {
        protocols: a.protocols.clone(),
        epsilon,
        alpha: a.alpha,
        prior: a.prior.preset(),
        metric: a.metric.kind(),
        seed: a.seed,
        trials: a.trials,
        split: a.split,
        max_len: a.max_len,
        mode: a.mode.map(|m| match m {
            ModeArg::Symmetric => SequenceMode::Symmetric,
            ModeArg::Asymmetric => SequenceMode::Asymmetric,
        }),
        halt: a.halt,
        k: a.k,
        ngram: a.ngram,
        dump_estimates: a.dump_estimates,
    };
    let mut report = run_experiment(&config, &universe, &data)?;
    if assumed_epsilon {
        report.provenance.notes.push(format!(
            "epsilon = {DEFAULT_EPSILON} assumed for the small-population replication; pass --epsilon or --alpha to override"
        ));
    }
    emit(&to_json(&report)?, a.output.as_deref())
}

fn distinct_items(path: &Path) -> Result<Universe, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    let items: BTreeSet<&str> = text.lines().flat_map(|l| l.split(',')).map(str::trim).filter(|s| !s.is_empty()).collect();
    Ok(Universe::new(items)?)
}

fn cmd_mine(a: &MineArgs) -> Result<(), CliError> {
    let universe = match &a.universe {
        Some(p) => load_universe(p)?,
        None => distinct_items(&a.sequences)?,
    };
    let seqs = load_sequences(&a.sequences, &universe)?;
    let patterns = mine_ngrams(&seqs, a.n, a.k)?;
    let items = universe.items();
    let out = json!({
        "n": a.n,
        "k": a.k,
        "sequences": seqs.len(),
        "patterns": patterns
            .iter()
            .map(|p| json!({
                "gram": p.gram.iter().map(|&i| items[i].as_str()).collect::<Vec<_>>(),
                "support": p.support,
            }))
            .collect::<Vec<_>>(),
    });
    emit(&to_json(&out)?, a.output.as_deref())
}

fn cmd_evaluate(a: &EvaluateArgs) -> Result<(), CliError> {
    let (universe, actual) = match &a.universe {
        Some(u) => {
            let universe = load_universe(u)?;
            let counts = count_indices(universe.size(), &load_singletons(&a.actual, &universe)?)?;
            (universe, counts.into_iter().map(|c| c as f64).collect::<Vec<_>>())
        }
        None => {
            let report: FrequencyReport = read_report(&a.actual)?;
            let universe = Universe::new(report.raw_counts.keys())?;
            let est = report.to_estimate(&universe).map_err(|e| CliError::data(format!("{}: {e}", a.actual.display())))?;
            (universe, est.raw_counts)
        }
    };
    let estimate: FrequencyReport = read_report(&a.estimate)?;
    let estimate = estimate
        .to_estimate(&universe)
        .map_err(|e| CliError::data(format!("{}: {e}", a.estimate.display())))?;
    let positive = actual.iter().filter(|&&c| c > 0.0).count();
    let k = a.k.min(positive);
    if k < 2 {
        return Err(CliError::data(format!("only {positive} items have positive actual counts; need at least 2")));
    }
    let metrics = evaluate_counts(&actual, &estimate.raw_counts, k)?;
    emit(&to_json(&metrics)?, a.output.as_deref())
}

fn cmd_generate(a: &GenerateArgs) -> Result<(), CliError> {
    let universe = Universe::integers(a.universe_size)?;
    let mut rng = RandomSource::new(derive_seed(a.seed, &[0x47454e]), 0);
    let items = universe.items();
    let body: String = match a.kind {
        GenerateKind::Singletons => {
            let spec = SyntheticSpec {
                distribution: synthetic(a.distribution, a.mean, a.std, a.rate, a.exponent),
                n: a.n,
                universe_size: a.universe_size,
            };
            generate_population(&spec, &mut rng)?.items.iter().map(|&i| format!("{}\n", items[i])).collect()
        }
        GenerateKind::Sequences => {
            let spec = SequenceSpec {
                count: a.n,
                universe_size: a.universe_size,
                exponent: a.exponent,
                min_len: a.min_len,
                max_len: a.max_len,
            };
            generate_sequences(&spec, &mut rng)?
                .iter()
                .map(|s| {
                    let row: Vec<&str> = s.iter().map(|&i| items[i].as_str()).collect();
                    format!("{}\n", row.join(","))
                })
                .collect()
        }
    };
    emit(&body, Some(&a.output))?;
    if let Some(p) = &a.universe_output {
        emit(&items.iter().map(|s| format!("{s}\n")).collect::<String>(), Some(p))?;
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Calibrate(a) => cmd_calibrate(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::MineNgrams(a) => cmd_mine(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Generate(a) => cmd_generate(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(CliError { code: EXIT_USAGE, message: e.to_string() }),
        },
        None => dispatch(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
