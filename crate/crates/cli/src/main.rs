//! Command-line front end for running and tabulating experiments.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use divsel::harness::{
    emit_run_table, emit_table, format_sci, parse_config_str, run_experiment, run_many, sweep, write_csv,
    ExperimentConfig, ExperimentReport, FileConfig, FileExperiment, FileRun, FileSweep, TableSpec,
};
use divsel::{AlgorithmKind, DiversityMetric, InitPolicy, RefPolicy, SelectionScheme};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Config(#[from] divsel::Error),
    #[error("{context}: {source}")]
    Io { context: String, source: io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => 1,
            Self::Io { .. } => 2,
        }
    }
}

fn io_err(context: impl Into<String>) -> impl FnOnce(io::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Io { context, source }
}

#[derive(Parser, Debug)]
#[command(name = "divsel", version, about = "Diversity-based parent selection experiments for SEMO and GSEMO")]
struct Cli {
    /// TOML file with [experiment], [run] and [sweep] sections; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one configuration `--runs` times.
    Run(RunArgs),
    /// Run one configuration at several problem sizes and fit the growth exponent.
    Sweep(SweepArgs),
    /// Reproduce the full grid of result tables.
    Tables(TableArgs),
    /// Special-purpose scenarios.
    #[command(subcommand)]
    Scenario(Scenario),
}

#[derive(Subcommand, Debug)]
enum Scenario {
    /// SEMO with NMUAR and an asymmetric HVC reference point, started at 1^n.
    NmuarAsym(ScenarioArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Md,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Problem size.
    #[arg(long)]
    n: Option<usize>,
    /// Independent runs per configuration.
    #[arg(long)]
    runs: Option<u64>,
    /// Generation cap per run.
    #[arg(long)]
    cap: Option<u64>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long)]
    workers: Option<usize>,
    /// Write per-run CSV to this path.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// What to print on stdout [default: md].
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct Choice {
    /// oneminmax | lotz
    #[arg(long)]
    problem: Option<String>,
    /// semo | gsemo | mgsemo
    #[arg(long)]
    algo: Option<String>,
    /// uniform | exponential | powerlaw | harmonic | tournament | hdc | nmuar
    #[arg(long)]
    scheme: Option<String>,
    /// hvc | cdc | none
    #[arg(long)]
    metric: Option<String>,
    /// HVC reference point: unit | n | n2 | asym | asym2 | r1,r2
    #[arg(long = "ref", value_name = "REF", allow_hyphen_values = true)]
    reference: Option<String>,
    /// random | ones | zeros
    #[arg(long)]
    init: Option<String>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    choice: Choice,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    choice: Choice,
    #[command(flatten)]
    common: Common,
    /// Comma-separated, strictly increasing problem sizes.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ScenarioArgs {
    /// oneminmax | lotz
    #[arg(long)]
    problem: Option<String>,
    /// HVC reference point [default: asym2, i.e. (-1,-n-1)]
    #[arg(long = "ref", value_name = "REF", allow_hyphen_values = true)]
    reference: Option<String>,
    /// random | ones | zeros [default: ones]
    #[arg(long)]
    init: Option<String>,
    #[command(flatten)]
    common: Common,
}

fn overlay(common: &Common, choice: Option<&Choice>, sizes: Option<Vec<usize>>) -> FileConfig {
    FileConfig {
        experiment: FileExperiment { runs: common.runs, seed: common.seed, workers: common.workers },
        run: FileRun {
            problem: choice.and_then(|c| c.problem.clone()),
            algo: choice.and_then(|c| c.algo.clone()),
            scheme: choice.and_then(|c| c.scheme.clone()),
            metric: choice.and_then(|c| c.metric.clone()),
            reference: choice.and_then(|c| c.reference.clone()),
            n: common.n,
            cap: common.cap,
            init: choice.and_then(|c| c.init.clone()),
        },
        sweep: FileSweep { sizes },
    }
}

fn load_file(path: Option<&Path>) -> Result<FileConfig, CliError> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(io_err(format!("reading {}", p.display())))?;
            Ok(parse_config_str(&text)?)
        }
    }
}

fn write_out(common: &Common, reports: &[ExperimentReport]) -> Result<(), CliError> {
    let Some(path) = &common.out else { return Ok(()) };
    let records: Vec<_> = reports.iter().flat_map(|r| r.records.iter().cloned()).collect();
    let file = fs::File::create(path).map_err(io_err(format!("creating {}", path.display())))?;
    write_csv(&records, io::BufWriter::new(file)).map_err(io_err(format!("writing {}", path.display())))
}

/// Print `md` unless CSV was requested, in which case print CSV unless it
/// already went to `--out`.
fn print(common: &Common, reports: &[ExperimentReport], md: &str) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match common.format.unwrap_or(Format::Md) {
        Format::Md => lock.write_all(md.as_bytes()).map_err(io_err("writing stdout")),
        Format::Csv if common.out.is_some() => Ok(()),
        Format::Csv => {
            let records: Vec<_> = reports.iter().flat_map(|r| r.records.iter().cloned()).collect();
            write_csv(&records, lock).map_err(io_err("writing stdout"))
        }
    }
}

fn cmd_run(file: FileConfig, args: &RunArgs) -> Result<(), CliError> {
    let config = file.merge(overlay(&args.common, Some(&args.choice), None)).resolve()?;
    let report = run_experiment(&config)?;
    let reports = [report];
    write_out(&args.common, &reports)?;
    print(&args.common, &reports, &emit_run_table(&reports))
}

fn cmd_sweep(file: FileConfig, args: &SweepArgs) -> Result<(), CliError> {
    let config = file.merge(overlay(&args.common, Some(&args.choice), args.sizes.clone())).resolve()?;
    let report = sweep(&config)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let mut md = emit_run_table(&report.reports);
    match &report.fit {
        Some(fit) => {
            md.push_str(&format!("\nlog-log slope: {:.3} (stderr {:.3})\n", fit.loglog_slope, fit.slope_stderr))
        }
        None => md.push_str("\nlog-log slope: not enough successful sizes\n"),
    }
    write_out(&args.common, &report.reports)?;
    print(&args.common, &report.reports, &md)
}

fn cmd_tables(file: FileConfig, args: &TableArgs) -> Result<(), CliError> {
    let template = file.merge(overlay(&args.common, None, None)).resolve()?;
    let specs = TableSpec::standard_grid(&template);
    let configs: Vec<ExperimentConfig> = specs.iter().flat_map(|s| s.configs().cloned()).collect();
    let reports = run_many(&configs, template.workers)?;
    let mut md = String::new();
    let mut offset = 0;
    for spec in &specs {
        let k = spec.configs().count();
        let stats: Vec<_> = reports[offset..offset + k].iter().map(|r| r.stats.clone()).collect();
        md.push_str(&emit_table(spec, &stats));
        md.push('\n');
        offset += k;
    }
    write_out(&args.common, &reports)?;
    print(&args.common, &reports, &md)
}

fn cmd_scenario(file: FileConfig, args: &ScenarioArgs) -> Result<(), CliError> {
    let mut base = file.merge(overlay(&args.common, None, None));
    base.run.problem = args.problem.clone().or(base.run.problem);
    base.run.n = args.common.n.or(base.run.n).or(Some(20));
    base.run.cap = args.common.cap.or(base.run.cap).or(Some(100_000));
    base.experiment.runs = args.common.runs.or(base.experiment.runs).or(Some(50));
    let mut config = base.resolve()?;
    let reference: RefPolicy = match &args.reference {
        Some(r) => r.parse()?,
        None => RefPolicy::AsymmetricF2,
    };
    config.algorithm = AlgorithmKind::Semo;
    config.scheme = SelectionScheme::Nmuar;
    config.metric = Some(DiversityMetric::Hvc(reference));
    config.init = match &args.init {
        Some(i) => i.parse()?,
        None => InitPolicy::AllOnes,
    };
    config.validate()?;
    let report = run_experiment(&config)?;
    let stagnated = report.stats.runs - report.stats.successes;
    let mut md = emit_run_table(std::slice::from_ref(&report));
    md.push_str(&format!(
        "\nreference {} = {}, init {}: {}/{} runs stagnated ({:.2})\n",
        reference.label(),
        reference.resolve(config.n),
        config.init.token(),
        stagnated,
        report.stats.runs,
        report.stats.failure_rate,
    ));
    if let Some(m) = report.stats.mean_generations {
        md.push_str(&format!("mean generations of successful runs: {}\n", format_sci(m)));
    }
    let reports = [report];
    write_out(&args.common, &reports)?;
    print(&args.common, &reports, &md)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = load_file(cli.config.as_deref()).and_then(|file| match &cli.command {
        Command::Run(a) => cmd_run(file, a),
        Command::Sweep(a) => cmd_sweep(file, a),
        Command::Tables(a) => cmd_tables(file, a),
        Command::Scenario(Scenario::NmuarAsym(a)) => cmd_scenario(file, a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
