use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dci_cli::config::{output_dir, ExperimentConfig, InitChoice, Protocol};
use dci_cli::error::{CliError, CliResult};
use dci_cli::estimate::{cmd_estimate, EstimateOptions};
use dci_cli::{cmd_benchmark, cmd_simulate};
use dci_core::sem::{ChangeMode, GenConfig};

#[derive(Parser)]
#[command(
    name = "dci",
    version,
    about = "Difference causal inference between two linear Gaussian SEMs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random SEM pair and write samples plus ground truth.
    Simulate(SimulateArgs),
    /// Estimate the difference DAG from two sample CSV files.
    Estimate(EstimateArgs),
    /// Run a seeded benchmark protocol and write metrics CSVs.
    Benchmark(BenchmarkArgs),
}

#[derive(Args, Default)]
struct GenArgs {
    /// Node count.
    #[arg(long)]
    p: Option<usize>,
    /// Expected neighbourhood size.
    #[arg(long)]
    s: Option<f64>,
    /// Per-edge flip probability (Bernoulli changes).
    #[arg(long, conflicts_with = "budget")]
    flip_prob: Option<f64>,
    /// Fixed change budget as a fraction of edges.
    #[arg(long)]
    budget: Option<f64>,
    #[arg(long)]
    weight_lo: Option<f64>,
    #[arg(long)]
    weight_hi: Option<f64>,
    #[arg(long)]
    var_lo: Option<f64>,
    #[arg(long)]
    var_hi: Option<f64>,
}

impl GenArgs {
    fn apply(&self, gen: &mut GenConfig) {
        if let Some(p) = self.p {
            gen.p = p;
        }
        if let Some(s) = self.s {
            gen.s = s;
        }
        if let Some(flip_prob) = self.flip_prob {
            gen.change = ChangeMode::Bernoulli { flip_prob };
        }
        if let Some(fraction) = self.budget {
            gen.change = ChangeMode::Budget { fraction };
        }
        if let Some(lo) = self.weight_lo {
            gen.weight_range.0 = lo;
        }
        if let Some(hi) = self.weight_hi {
            gen.weight_range.1 = hi;
        }
        if let Some(lo) = self.var_lo {
            gen.variance_range.0 = lo;
        }
        if let Some(hi) = self.var_hi {
            gen.variance_range.1 = hi;
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    /// JSON generator configuration; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    gen: GenArgs,
    /// Number of nodes whose noise variance changes.
    #[arg(long)]
    v: Option<usize>,
    /// Samples per dataset.
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write a header row of node labels.
    #[arg(long)]
    header: bool,
    /// Output directory (default: $DCI_OUTPUT_DIR or the current directory).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    data1: PathBuf,
    data2: PathBuf,
    /// JSON estimator options; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Significance level for every phase.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    alpha_skeleton: Option<f64>,
    #[arg(long)]
    alpha_orient: Option<f64>,
    #[arg(long)]
    alpha_dug: Option<f64>,
    #[arg(long, value_enum)]
    init: Option<InitChoice>,
    /// Edge list of a D-UG to start from.
    #[arg(long)]
    dug: Option<PathBuf>,
    /// Changed-node list to go with --dug.
    #[arg(long, requires = "dug")]
    changed_nodes: Option<PathBuf>,
    #[arg(long)]
    max_condition_size: Option<usize>,
    /// Input files start with a header row.
    #[arg(long)]
    header: bool,
    /// Include every executed test in dci.json.
    #[arg(long)]
    record_tests: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchmarkArgs {
    /// JSON experiment configuration; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    protocol: Option<Protocol>,
    /// Use the 100-node, neighbourhood-ten setting for the roc protocol.
    #[arg(long)]
    full_scale: bool,
    #[command(flatten)]
    gen: GenArgs,
    /// Changed-variance counts to sweep.
    #[arg(long, value_delimiter = ',')]
    v: Option<Vec<usize>>,
    /// Sample sizes.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Significance levels.
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    init: Option<InitChoice>,
    #[arg(long)]
    max_condition_size: Option<usize>,
    /// Metrics CSV file name, relative to the output directory.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

fn simulate(args: SimulateArgs) -> CliResult<()> {
    let mut gen = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => GenConfig::bernoulli(10, 3.0, 0.1),
    };
    args.gen.apply(&mut gen);
    if let Some(v) = args.v {
        gen.changed_variances = v;
    }
    let dir = output_dir(args.out.as_deref());
    let (_, files) = cmd_simulate(&gen, args.n, args.seed, args.header, &dir)?;
    println!(
        "wrote {} and {}",
        files.data1.display(),
        files.data2.display()
    );
    Ok(())
}

fn estimate(args: EstimateArgs) -> CliResult<()> {
    let mut opts = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => EstimateOptions::default(),
    };
    if let Some(a) = args.alpha {
        opts.alpha = a;
    }
    opts.alpha_skeleton = args.alpha_skeleton.or(opts.alpha_skeleton);
    opts.alpha_orient = args.alpha_orient.or(opts.alpha_orient);
    opts.alpha_dug = args.alpha_dug.or(opts.alpha_dug);
    if let Some(init) = args.init {
        opts.init = init;
    }
    if args.dug.is_some() {
        opts.dug = args.dug;
        opts.changed_nodes = args.changed_nodes;
    }
    opts.max_condition_size = args.max_condition_size.or(opts.max_condition_size);
    opts.header |= args.header;
    opts.record_tests |= args.record_tests;
    let dir = output_dir(args.out.as_deref());
    let out = cmd_estimate(&args.data1, &args.data2, &opts, &dir)?;
    print!("{}", out.ddag.to_edge_list());
    Ok(())
}

fn benchmark(args: BenchmarkArgs) -> CliResult<()> {
    let mut cfg = match (&args.config, args.protocol) {
        (Some(path), _) => ExperimentConfig::from_json_path(path)?,
        (None, Some(Protocol::Roc)) => ExperimentConfig::roc(args.full_scale),
        (None, protocol) => ExperimentConfig::preset(protocol.unwrap_or(Protocol::Consistency)),
    };
    if let (Some(_), Some(protocol)) = (&args.config, args.protocol) {
        cfg.protocol = protocol;
    }
    args.gen.apply(&mut cfg.gen);
    if let Some(v) = args.v {
        cfg.variance_counts = v;
    }
    if let Some(n) = args.n {
        cfg.n_samples = n;
    }
    if let Some(a) = args.alpha {
        cfg.alphas = a;
    }
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(init) = args.init {
        cfg.init = init;
    }
    cfg.max_condition_size = args.max_condition_size.or(cfg.max_condition_size);
    if args.output.is_some() {
        cfg.output_path = args.output;
    }
    if let Some(threads) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let dir = output_dir(args.out.as_deref());
    let (metrics, trials) = cmd_benchmark(&cfg, &dir)?;
    println!("wrote {} and {}", metrics.display(), trials.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Estimate(args) => estimate(args),
        Command::Benchmark(args) => benchmark(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
