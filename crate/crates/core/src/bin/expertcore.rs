use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use expert_core::harness::{
    run_comparison, run_extraction_sweep, run_order_report, run_synthetic_comparison, run_theorem_check,
    write_comparison_csv, write_order_csv, write_sweep_csv, ComparisonRow, SweepConfig, SweepParam, Theorem,
    TheoremParams,
};
use expert_core::{
    aggregate_with, extract, generate, glad_aggregate, glad_fit, load_ground_truth, load_response_matrix,
    AggregationConfig, Algorithm, CandidateCatalog, Error, GladConfig, GladInit, GroundTruth, HyperParams,
    ResponseMatrix, Result, SyntheticSpec, TiePolicy,
};

#[derive(Parser)]
#[command(name = "expertcore", version, about = "Expert-core extraction and answer aggregation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic instance.
    Gen(GenArgs),
    /// Aggregate answers with one algorithm and write JSON estimates.
    Aggregate(AggregateArgs),
    /// Peel the agreement graph and write the removal trace.
    Extract(ExtractArgs),
    /// Expert-extraction precision/recall over a parameter grid.
    Sweep(SweepArgs),
    /// Accuracy table of several algorithms.
    Compare(CompareArgs),
    /// Workers in peeling order with their accuracy rates.
    OrderReport(OrderArgs),
    /// Monte-Carlo checks of the theoretical guarantees.
    TheoremCheck(TheoremArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 5)]
    s: usize,
    #[arg(long)]
    n_ex: usize,
    #[arg(long)]
    p_ex: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Writes PREFIX.responses.csv, PREFIX.truth.csv, PREFIX.experts.csv and PREFIX.candidates.csv.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct Input {
    /// Long-format `worker,question,answer` CSV.
    #[arg(long)]
    responses: PathBuf,
    /// Optional `question,candidate` CSV; without it candidates are the observed answers.
    #[arg(long)]
    candidates: Option<PathBuf>,
}

#[derive(Args)]
struct TruthInput {
    /// `question,answer` CSV.
    #[arg(long)]
    truth: PathBuf,
    /// Optional `worker,expert` CSV.
    #[arg(long)]
    experts: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tie {
    Lex,
    Rand,
}

#[derive(Clone, Copy, ValueEnum)]
enum Init {
    Prior,
    Sampled,
}

#[derive(Args)]
struct AggOptions {
    #[arg(long, value_enum, default_value_t = Tie::Lex)]
    tie: Tie,
    /// Seeds random ties, Hyper-MV permutations and sampled GLAD init.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    hyper_k: usize,
    #[arg(long, default_value_t = 100)]
    hyper_r: usize,
    /// Fixed agreement probability instead of the empirical average.
    #[arg(long)]
    p_override: Option<f64>,
    #[arg(long, default_value_t = 100)]
    glad_iters: usize,
    #[arg(long, default_value_t = 0.01)]
    glad_lr: f64,
    #[arg(long, default_value_t = 1e-6)]
    glad_tol: f64,
    #[arg(long, value_enum, default_value_t = Init::Prior)]
    glad_init: Init,
}

impl AggOptions {
    fn config(&self) -> AggregationConfig {
        AggregationConfig {
            tie: match self.tie {
                Tie::Lex => TiePolicy::Lexicographic,
                Tie::Rand => TiePolicy::SeededUniform { seed: self.seed },
            },
            hyper: HyperParams {
                k: self.hyper_k,
                r: self.hyper_r,
                seed: self.seed,
            },
            glad: GladConfig {
                max_em_iters: self.glad_iters,
                learning_rate: self.glad_lr,
                tol: self.glad_tol,
                init: match self.glad_init {
                    Init::Prior => GladInit::PriorMean,
                    Init::Sampled => GladInit::Sampled { seed: self.seed },
                },
                ..GladConfig::default()
            },
            p_override: self.p_override,
        }
    }
}

#[derive(Args)]
struct AggregateArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value = "ex-mv")]
    algorithm: Algorithm,
    #[command(flatten)]
    options: AggOptions,
    /// JSON output path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// For GLAD variants, also write PREFIX.alpha.csv and PREFIX.beta.csv.
    #[arg(long)]
    glad_dump: Option<PathBuf>,
}

#[derive(Args)]
struct ExtractArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    p_override: Option<f64>,
    /// Trace CSV path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the `u,v,tau,gamma` edge list.
    #[arg(long)]
    graph_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Param {
    M,
    PEx,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    param: Param,
    #[arg(long)]
    start: f64,
    #[arg(long)]
    stop: f64,
    #[arg(long)]
    step: f64,
    #[arg(long, default_value_t = 20)]
    n: usize,
    #[arg(long, default_value_t = 25)]
    m: usize,
    #[arg(long, default_value_t = 5)]
    s: usize,
    #[arg(long, default_value_t = 4)]
    n_ex: usize,
    #[arg(long, default_value_t = 0.8)]
    p_ex: f64,
    #[arg(long, default_value_t = 100)]
    realizations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Synthetic settings as `p_ex,n_ex`, e.g. `--setting 0.8,4 --setting 0.9,6`.
    #[arg(long, value_parser = parse_setting)]
    setting: Vec<(f64, usize)>,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 50)]
    m: usize,
    #[arg(long, default_value_t = 5)]
    s: usize,
    #[arg(long, default_value_t = 100)]
    realizations: usize,
    /// Score a supplied instance instead of synthetic settings.
    #[arg(long, requires = "truth")]
    responses: Option<PathBuf>,
    #[arg(long)]
    candidates: Option<PathBuf>,
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Comma-separated subset of algorithms (default: all seven).
    #[arg(long, value_delimiter = ',')]
    algorithms: Vec<Algorithm>,
    #[command(flatten)]
    options: AggOptions,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_setting(s: &str) -> std::result::Result<(f64, usize), String> {
    let (p, n) = s.split_once(',').ok_or("expected `p_ex,n_ex`")?;
    Ok((
        p.trim().parse().map_err(|e| format!("bad p_ex: {e}"))?,
        n.trim().parse().map_err(|e| format!("bad n_ex: {e}"))?,
    ))
}

#[derive(Args)]
struct OrderArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    truth: TruthInput,
    #[arg(long)]
    p_override: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    T2,
    T3,
    T4,
    All,
}

#[derive(Args)]
struct TheoremArgs {
    #[arg(long, value_enum, default_value_t = Which::All)]
    which: Which,
    /// Override the documented master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the documented number of realizations.
    #[arg(long)]
    realizations: Option<usize>,
    /// Override the documented threshold.
    #[arg(long)]
    threshold: Option<f64>,
    /// Optional CSV of outcomes.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path)?))
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn load_matrix(input: &Input) -> Result<ResponseMatrix> {
    let catalog = match &input.candidates {
        Some(p) => Some(CandidateCatalog::from_csv(open(p)?)?),
        None => None,
    };
    load_response_matrix(open(&input.responses)?, catalog.as_ref())
}

fn load_truth(matrix: &ResponseMatrix, truth: &Path, experts: Option<&Path>) -> Result<GroundTruth> {
    let experts = experts.map(open).transpose()?;
    load_ground_truth(open(truth)?, experts, matrix)
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let spec = SyntheticSpec {
        n: a.n,
        m: a.m,
        s: a.s,
        n_ex: a.n_ex,
        p_ex: a.p_ex,
        seed: a.seed,
    };
    let (matrix, truth) = generate(&spec)?;
    matrix.write_csv(File::create(with_suffix(&a.out, ".responses.csv"))?)?;
    matrix.write_catalog(File::create(with_suffix(&a.out, ".candidates.csv"))?)?;
    truth.write_answers_csv(&matrix, File::create(with_suffix(&a.out, ".truth.csv"))?)?;
    truth.write_experts_csv(&matrix, File::create(with_suffix(&a.out, ".experts.csv"))?)?;
    Ok(())
}

fn cmd_aggregate(a: AggregateArgs) -> Result<()> {
    let matrix = load_matrix(&a.input)?;
    let config = a.options.config();
    let extraction = extract(&matrix, config.p_override)?;
    let result = match (a.algorithm, &a.glad_dump) {
        (alg @ (Algorithm::Glad | Algorithm::ExGlad), Some(prefix)) => {
            let subset = (alg == Algorithm::ExGlad).then_some(extraction.core.as_slice());
            let model = glad_fit(&matrix, subset, &config.glad)?;
            model.write_alpha_csv(&matrix, File::create(with_suffix(prefix, ".alpha.csv"))?)?;
            model.write_beta_csv(&matrix, File::create(with_suffix(prefix, ".beta.csv"))?)?;
            glad_aggregate(&model)
        }
        (alg, _) => aggregate_with(alg, &matrix, &extraction, &config)?,
    };
    let mut out = sink(a.out.as_deref())?;
    result.write_json(&matrix, &mut out)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_extract(a: ExtractArgs) -> Result<()> {
    let matrix = load_matrix(&a.input)?;
    let extraction = extract(&matrix, a.p_override)?;
    extraction.trace.write_csv(&matrix, sink(a.out.as_deref())?)?;
    if let Some(path) = &a.graph_out {
        extraction.graph.write_csv(&matrix, File::create(path)?)?;
    }
    let names: Vec<&str> = extraction.core.iter().map(|&w| matrix.workers()[w].as_str()).collect();
    eprintln!("p = {:.6}; expert core ({}): {}", extraction.graph.p(), names.len(), names.join(" "));
    Ok(())
}

fn cmd_sweep(a: SweepArgs) -> Result<()> {
    let param = match a.param {
        Param::M => SweepParam::Questions,
        Param::PEx => SweepParam::ExpertProbability,
    };
    let config = SweepConfig {
        base: SyntheticSpec {
            n: a.n,
            m: a.m,
            s: a.s,
            n_ex: a.n_ex,
            p_ex: a.p_ex,
            seed: 0,
        },
        param,
        grid: SweepConfig::grid_range(a.start, a.stop, a.step),
        realizations: a.realizations,
        master_seed: a.seed,
    };
    let points = run_extraction_sweep(&config)?;
    write_sweep_csv(param, &points, sink(a.out.as_deref())?)
}

fn cmd_compare(a: CompareArgs) -> Result<()> {
    let algorithms = if a.algorithms.is_empty() {
        Algorithm::ALL.to_vec()
    } else {
        a.algorithms.clone()
    };
    let config = a.options.config();
    let rows = if let Some(responses) = &a.responses {
        let input = Input {
            responses: responses.clone(),
            candidates: a.candidates.clone(),
        };
        let matrix = load_matrix(&input)?;
        let truth = load_truth(&matrix, a.truth.as_deref().expect("clap enforces --truth"), None)?;
        let stats = run_comparison(&[(matrix, truth)], &algorithms, &config, a.options.seed)?;
        vec![ComparisonRow {
            label: responses.display().to_string(),
            stats,
        }]
    } else {
        if a.setting.is_empty() {
            return Err(Error::BadSpec("give --setting p_ex,n_ex or --responses/--truth".into()));
        }
        a.setting
            .iter()
            .map(|&(p_ex, n_ex)| {
                let spec = SyntheticSpec {
                    n: a.n,
                    m: a.m,
                    s: a.s,
                    n_ex,
                    p_ex,
                    seed: 0,
                };
                let stats = run_synthetic_comparison(&spec, a.realizations, &algorithms, &config, a.options.seed)?;
                Ok(ComparisonRow {
                    label: format!("({p_ex}, {n_ex})"),
                    stats,
                })
            })
            .collect::<Result<Vec<_>>>()?
    };
    write_comparison_csv(&algorithms, &rows, sink(a.out.as_deref())?)
}

fn cmd_order(a: OrderArgs) -> Result<()> {
    let matrix = load_matrix(&a.input)?;
    let truth = load_truth(&matrix, &a.truth.truth, a.truth.experts.as_deref())?;
    let rows = run_order_report(&matrix, &truth, a.p_override)?;
    write_order_csv(&matrix, &rows, sink(a.out.as_deref())?)
}

fn cmd_theorem(a: TheoremArgs) -> Result<bool> {
    let which: &[Theorem] = match a.which {
        Which::T2 => &[Theorem::T2],
        Which::T3 => &[Theorem::T3],
        Which::T4 => &[Theorem::T4],
        Which::All => &[Theorem::T2, Theorem::T3, Theorem::T4],
    };
    let mut csv_out = match &a.out {
        Some(p) => {
            let mut w = csv::Writer::from_path(p).map_err(Error::from)?;
            w.write_record(["theorem", "empirical", "threshold", "trials", "passed"])?;
            Some(w)
        }
        None => None,
    };
    let mut all_passed = true;
    for &t in which {
        let mut params = TheoremParams::default_for(t);
        if let Some(seed) = a.seed {
            params.master_seed = seed;
        }
        if let Some(r) = a.realizations {
            params.realizations = r;
        }
        if let Some(t) = a.threshold {
            params.threshold = t;
        }
        let outcome = run_theorem_check(t, &params)?;
        println!("{outcome}");
        all_passed &= outcome.passed;
        if let Some(w) = csv_out.as_mut() {
            w.write_record([
                t.to_string(),
                format!("{:.6}", outcome.empirical),
                outcome.threshold.to_string(),
                outcome.trials.to_string(),
                outcome.passed.to_string(),
            ])?;
        }
    }
    if let Some(mut w) = csv_out {
        w.flush()?;
    }
    Ok(all_passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(a) => cmd_gen(a).map(|_| true),
        Command::Aggregate(a) => cmd_aggregate(a).map(|_| true),
        Command::Extract(a) => cmd_extract(a).map(|_| true),
        Command::Sweep(a) => cmd_sweep(a).map(|_| true),
        Command::Compare(a) => cmd_compare(a).map(|_| true),
        Command::OrderReport(a) => cmd_order(a).map(|_| true),
        Command::TheoremCheck(a) => cmd_theorem(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
