//! `ragsim` command-line driver.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ragsim_core::analysis::{fit_scaling, ScalingFit};
use ragsim_core::experiments::{
    plot_svg, read_records, run_experiment, summarize, ExperimentConfig, ExperimentError,
    ExperimentKind, FitStatistic, PlotSeries, SweepResult, TrialRecord, CSV_HEADER,
};
use ragsim_core::generators::{
    gen_complete_empty, gen_double_star, gen_er_prior, gen_noisy_prior, gen_partitioned,
    save_world, DoubleStarParams, ErPriorParams, NoisyPriorParams, PartitionParams,
};
use ragsim_core::RetrievalMode;

#[derive(Debug, Parser)]
#[command(name = "ragsim", version, about = "Retrieval query-complexity simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a world pair and write it as a directory of edge lists.
    Gen(GenArgs),
    /// Run one experiment from a JSON config or from flags.
    Run(RunArgs),
    /// Run one experiment over a geometric grid of n.
    Sweep(SweepArgs),
    /// Fit log(y) = slope log(x) + intercept to a CSV.
    Fit(FitArgs),
    /// Plot the fitted statistic of a trial CSV against n as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Er,
    DoubleStar,
    Partitioned,
    Noisy,
    CompleteEmpty,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Vertex count (ignored for partitioned, which uses --groups).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    /// Probability that a prior edge is a truth edge (noisy family).
    #[arg(long)]
    r: Option<f64>,
    /// Comma-separated group sizes (partitioned family).
    #[arg(long, value_delimiter = ',')]
    groups: Vec<usize>,
    #[arg(long)]
    seed: u64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ExperimentFlags {
    #[arg(long)]
    experiment: Option<ExperimentKind>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV destination; the sweep summary is written next to it as JSON.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Overrides the default query or iteration budget.
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_parser = parse_mode)]
    oracle: Option<RetrievalMode>,
    /// Record per-trial wall-clock time in the CSV.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated, strictly increasing grid of n.
    #[arg(long = "n", value_delimiter = ',')]
    n_grid: Vec<usize>,
    #[command(flatten)]
    flags: ExperimentFlags,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    from: usize,
    #[arg(long)]
    to: usize,
    /// Ratio between consecutive grid points.
    #[arg(long, default_value_t = 2.0)]
    factor: f64,
    #[command(flatten)]
    flags: ExperimentFlags,
    /// Also write an SVG plot to this path.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StatisticArg {
    Mean,
    Q90,
}

#[derive(Debug, Args)]
struct FitArgs {
    /// A two-column `x,y` CSV or a trial-record CSV.
    input: PathBuf,
    /// Statistic to fit for trial-record input; defaults to the one the
    /// experiment uses.
    #[arg(long, value_enum)]
    statistic: Option<StatisticArg>,
}

#[derive(Debug, Args)]
struct PlotArgs {
    /// Trial-record CSV.
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    title: Option<String>,
}

/// Errors that map to exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(message: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(message.into()))
}

fn parse_mode(s: &str) -> Result<RetrievalMode, String> {
    serde_json::from_value(serde_json::Value::String(s.to_owned()))
        .map_err(|_| format!("expected `plain` or `prior-aware-memory`, got {s:?}"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            let is_usage = err.downcast_ref::<UsageError>().is_some()
                || matches!(err.downcast_ref::<ExperimentError>(), Some(ExperimentError::Config { .. }));
            ExitCode::from(if is_usage { 2 } else { 1 })
        }
    }
}

fn dispatch(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Gen(args) => gen(args),
        Command::Run(args) => {
            let config = build_config(args.config.as_deref(), args.n_grid, args.flags)?;
            let sweep = execute(&config)?;
            print_sweep(&sweep);
            Ok(())
        }
        Command::Sweep(args) => {
            let grid = geometric_grid(args.from, args.to, args.factor)?;
            let config = build_config(args.config.as_deref(), grid, args.flags)?;
            let sweep = execute(&config)?;
            print_sweep(&sweep);
            if let Some(path) = args.plot {
                write_plot(&sweep, &path, None)?;
            }
            Ok(())
        }
        Command::Fit(args) => fit(args),
        Command::Plot(args) => {
            let sweep = sweep_from_csv(&args.input)?;
            write_plot(&sweep, &args.out, args.title)
        }
    }
}

fn gen(args: GenArgs) -> anyhow::Result<()> {
    let need_n = || args.n.ok_or_else(|| usage("--n is required for this family"));
    let need = |value: Option<f64>, flag: &str| value.ok_or_else(|| usage(format!("{flag} is required for this family")));
    let world = match args.family {
        FamilyArg::Er => gen_er_prior(ErPriorParams {
            n: need_n()?,
            p: need(args.p, "--p")?,
            eta: need(args.eta, "--eta")?,
            seed: args.seed,
        }),
        FamilyArg::DoubleStar => gen_double_star(DoubleStarParams {
            n: need_n()?,
            seed: args.seed,
        }),
        FamilyArg::Partitioned => {
            if args.groups.is_empty() {
                return Err(usage("--groups is required for the partitioned family"));
            }
            gen_partitioned(PartitionParams {
                group_sizes: args.groups.clone(),
                p: need(args.p, "--p")?,
                eta: need(args.eta, "--eta")?,
                seed: args.seed,
            })
        }
        FamilyArg::Noisy => gen_noisy_prior(NoisyPriorParams {
            n: need_n()?,
            p: need(args.p, "--p")?,
            eta: need(args.eta, "--eta")?,
            r: need(args.r, "--r")?,
            seed: args.seed,
        }),
        FamilyArg::CompleteEmpty => gen_complete_empty(need_n()?),
    }
    .map_err(|e| usage(e.to_string()))?;
    save_world(&world, &args.out).with_context(|| format!("writing {}", args.out.display()))?;
    println!(
        "wrote {}: n={} truth_edges={} prior_edges={} prior_reliable={}",
        args.out.display(),
        world.n(),
        world.truth().edge_count(),
        world.prior().edge_count(),
        world.prior_reliable()
    );
    Ok(())
}

fn geometric_grid(from: usize, to: usize, factor: f64) -> anyhow::Result<Vec<usize>> {
    if from == 0 || to < from {
        return Err(usage("--from must be positive and at most --to"));
    }
    if !(factor > 1.0 && factor.is_finite()) {
        return Err(usage("--factor must be greater than 1"));
    }
    let mut grid = Vec::new();
    let mut x = from as f64;
    while x.round() as usize <= to {
        let n = x.round() as usize;
        if grid.last() != Some(&n) {
            grid.push(n);
        }
        x *= factor;
    }
    Ok(grid)
}

fn build_config(path: Option<&Path>, n_grid: Vec<usize>, flags: ExperimentFlags) -> anyhow::Result<ExperimentConfig> {
    let mut config = match path {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            ExperimentConfig::from_json(&text)?
        }
        None => {
            let experiment = flags.experiment.ok_or_else(|| usage("--experiment or --config is required"))?;
            let seed = flags.seed.ok_or_else(|| usage("--seed is required"))?;
            ExperimentConfig::new(experiment, Vec::new(), flags.trials.unwrap_or(100), seed)
        }
    };
    if let Some(experiment) = flags.experiment {
        config.experiment = experiment;
    }
    if let Some(trials) = flags.trials {
        config.trials = trials;
    }
    if let Some(seed) = flags.seed {
        config.seed = seed;
    }
    if !n_grid.is_empty() {
        config.n_grid = n_grid;
    }
    if flags.output.is_some() {
        config.output = flags.output;
    }
    if flags.budget.is_some() {
        config.params.budget = flags.budget;
    }
    if flags.k.is_some() {
        config.params.k = flags.k;
    }
    if flags.oracle.is_some() {
        config.params.oracle = flags.oracle;
    }
    config.timing |= flags.timing;
    config.validate()?;
    Ok(config)
}

fn execute(config: &ExperimentConfig) -> anyhow::Result<SweepResult> {
    let output = run_experiment(config)?;
    if let Some(path) = &config.output {
        eprintln!("wrote {} and {}", path.display(), path.with_extension("json").display());
    }
    Ok(output.sweep)
}

fn fmt_opt(value: Option<f64>) -> String {
    value.map_or_else(|| "-".into(), |v| format!("{v:.3}"))
}

fn print_sweep(sweep: &SweepResult) {
    println!("experiment {} metric {}", sweep.config.experiment, sweep.metric);
    println!("{:>8} {:>7} {:>7} {:>8} {:>11} {:>11} {:>11} {:>9}", "n", "trials", "found", "success", "mean", "median", "q90", "sem");
    for row in &sweep.points {
        println!(
            "{:>8} {:>7} {:>7} {:>8.3} {:>11} {:>11} {:>11} {:>9}",
            row.n,
            row.trials,
            row.found,
            row.success_rate,
            fmt_opt(row.mean),
            fmt_opt(row.median),
            fmt_opt(row.q90),
            fmt_opt(row.sem)
        );
    }
    match &sweep.fit {
        Some(fit) => println!(
            "fit ({:?}): slope {:.4} intercept {:.4} r_squared {:.4}",
            sweep.fit_statistic, fit.slope, fit.intercept, fit.r_squared
        ),
        None => println!("fit: not enough positive points"),
    }
}

fn load_records(path: &Path) -> anyhow::Result<Vec<TrialRecord>> {
    let file = fs::File::open(path).with_context(|| format!("reading {}", path.display()))?;
    let records = read_records(file)?;
    if records.is_empty() {
        return Err(usage(format!("{} holds no trial records", path.display())));
    }
    Ok(records)
}

/// Rebuilds the sweep summary of a trial CSV. The config echo carries only
/// what the records determine.
fn sweep_from_csv(path: &Path) -> anyhow::Result<SweepResult> {
    let records = load_records(path)?;
    let experiment = records[0].experiment;
    if records.iter().any(|r| r.experiment != experiment) {
        return Err(usage("records mix several experiments"));
    }
    let mut grid: Vec<usize> = records.iter().map(|r| r.n).collect();
    grid.dedup();
    let trials = records.iter().filter(|r| r.n == grid[0]).count();
    let config = ExperimentConfig::new(experiment, grid, trials, 0);
    Ok(summarize(&config, &records))
}

fn read_xy(text: &str) -> anyhow::Result<Vec<(f64, f64)>> {
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed = match cols.as_slice() {
            [x, y] => x.parse::<f64>().ok().zip(y.parse::<f64>().ok()),
            _ => None,
        };
        match parsed {
            Some(point) => points.push(point),
            None if i == 0 => {}
            None => return Err(usage(format!("line {}: expected two numeric columns", i + 1))),
        }
    }
    Ok(points)
}

fn fit(args: FitArgs) -> anyhow::Result<()> {
    let text = fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let fit: ScalingFit = if text.lines().next().map(str::trim) == Some(CSV_HEADER) {
        let mut sweep = sweep_from_csv(&args.input)?;
        if let Some(statistic) = args.statistic {
            sweep.fit_statistic = match statistic {
                StatisticArg::Mean => FitStatistic::Mean,
                StatisticArg::Q90 => FitStatistic::Q90,
            };
            sweep.fit = ragsim_core::experiments::fit_points(&sweep.points, sweep.fit_statistic);
        }
        sweep.fit.ok_or_else(|| anyhow!("fewer than three grid points with a positive statistic"))?
    } else {
        fit_scaling(&read_xy(&text)?).map_err(|e| usage(e.to_string()))?
    };
    println!("{}", serde_json::to_string(&fit)?);
    Ok(())
}

fn write_plot(sweep: &SweepResult, path: &Path, title: Option<String>) -> anyhow::Result<()> {
    let title = title.unwrap_or_else(|| format!("{} ({})", sweep.config.experiment, sweep.metric));
    let empirical = PlotSeries::empirical(sweep);
    let analytic = PlotSeries::analytic(sweep);
    let svg = plot_svg(&title, &sweep.metric, &empirical, analytic.as_ref());
    fs::write(path, svg).with_context(|| format!("writing {}", path.display()))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}
