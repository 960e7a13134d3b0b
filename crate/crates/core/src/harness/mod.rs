//! Experiment orchestration: seeded batches of runs on a bounded worker
//! pool, aggregate statistics, scaling sweeps, the reference-point
//! stagnation scenario and CSV / markdown emission.

mod config;
mod output;
mod stats;

pub use config::{parse_config_str, ExperimentConfig, FileConfig, FileExperiment, FileRun, FileSweep};
pub use output::{emit_csv, emit_run_table, emit_table, format_sci, write_csv, TableSpec, CSV_HEADER};
pub use stats::{fit_loglog, AggregateStats, ScalingFit};

use rayon::prelude::*;

use crate::diversity::{DiversityMetric, RefPolicy};
use crate::engine::{run, AlgorithmKind, InitPolicy, Outcome, RunConfig};
use crate::error::{invalid_config, Result};
use crate::fitness::{Problem, ProblemKind};
use crate::selection::SelectionScheme;

/// One finished run as emitted in the per-run CSV.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunRecord {
    pub run_id: u64,
    pub algorithm: AlgorithmKind,
    pub problem: Problem,
    pub scheme: SelectionScheme,
    pub metric: Option<DiversityMetric>,
    pub seed: u64,
    pub outcome: Outcome,
    pub generations: u64,
}

/// Every run of one configuration, with its aggregate.
#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub records: Vec<RunRecord>,
    pub stats: AggregateStats,
}

fn build_pool(workers: usize) -> Result<rayon::ThreadPool> {
    if workers == 0 {
        return Err(invalid_config("workers must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| invalid_config(format!("cannot start worker pool: {e}")))
}

/// Run every configuration in `configs`, sharing one pool of `workers`
/// threads. Output order is (configuration position, run index) whatever
/// the scheduling, and every run's seed depends only on its own config.
pub fn run_many(configs: &[ExperimentConfig], workers: usize) -> Result<Vec<ExperimentReport>> {
    for c in configs {
        c.validate()?;
    }
    let jobs: Vec<(usize, u64)> =
        configs.iter().enumerate().flat_map(|(ci, c)| (0..c.runs).map(move |r| (ci, r))).collect();
    let pool = build_pool(workers)?;
    let records: Vec<RunRecord> =
        pool.install(|| jobs.par_iter().map(|&(ci, r)| execute(&configs[ci], r)).collect::<Result<Vec<_>>>())?;
    let mut reports = Vec::with_capacity(configs.len());
    let mut it = records.into_iter();
    for c in configs {
        let records: Vec<RunRecord> = it.by_ref().take(c.runs as usize).collect();
        let stats = AggregateStats::from_records(&records);
        reports.push(ExperimentReport { config: c.clone(), records, stats });
    }
    Ok(reports)
}

fn execute(config: &ExperimentConfig, index: u64) -> Result<RunRecord> {
    let rc = config.run_config(index);
    let result = run(rc.clone())?;
    Ok(RunRecord {
        run_id: index,
        algorithm: rc.algorithm,
        problem: rc.problem,
        scheme: rc.scheme,
        metric: rc.metric,
        seed: rc.seed,
        outcome: result.outcome,
        generations: result.generations,
    })
}

/// Execute `config.runs` independent runs and aggregate them.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    Ok(run_many(std::slice::from_ref(config), config.workers)?.pop().expect("one report per config"))
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub reports: Vec<ExperimentReport>,
    /// Absent when fewer than two sizes had a successful run.
    pub fit: Option<ScalingFit>,
    pub warnings: Vec<String>,
}

impl SweepReport {
    pub fn per_size(&self) -> impl Iterator<Item = (usize, &AggregateStats)> {
        self.reports.iter().map(|r| (r.config.n, &r.stats))
    }
}

/// Run the configuration at every size of `n_sweep` and fit
/// `ln(mean generations)` against `ln n`.
pub fn sweep(config: &ExperimentConfig) -> Result<SweepReport> {
    let sizes = config
        .n_sweep
        .as_ref()
        .filter(|s| !s.is_empty())
        .ok_or_else(|| invalid_config("sweep needs a non-empty list of sizes"))?;
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid_config("sweep sizes must be strictly increasing"));
    }
    let configs: Vec<ExperimentConfig> =
        sizes.iter().map(|&n| ExperimentConfig { n, n_sweep: None, ..config.clone() }).collect();
    let reports = run_many(&configs, config.workers)?;
    let mut warnings = Vec::new();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for r in &reports {
        match r.stats.mean_generations {
            Some(mean) => {
                xs.push(r.config.n as f64);
                ys.push(mean);
            }
            None => warnings.push(format!("n={} excluded from the fit: every run stagnated", r.config.n)),
        }
    }
    let fit = fit_loglog(&xs, &ys);
    Ok(SweepReport { reports, fit, warnings })
}

/// Outcome counts of the asymmetric-reference NMUAR scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioReport {
    pub runs: usize,
    pub stagnated: usize,
}

impl ScenarioReport {
    pub fn fraction_stagnated(&self) -> f64 {
        if self.runs == 0 {
            0.0
        } else {
            self.stagnated as f64 / self.runs as f64
        }
    }
}

/// Settings of the SEMO + NMUAR + HVC scenario with a forced initial point.
#[derive(Clone, Debug)]
pub struct NmuarScenario {
    pub problem: Problem,
    pub reference: RefPolicy,
    pub init: InitPolicy,
    pub cap: u64,
}

impl NmuarScenario {
    /// The stagnating configuration: start at `1^n` with reference point
    /// (−1, −n−1). Once the population is `{1^n, x}` with `f1(x) = n − 1`,
    /// `HVC(1^n) = n + 1 > HVC(x) = n`, so NMUAR only ever picks `1^n`.
    pub fn stagnating(kind: ProblemKind, n: usize, cap: u64) -> Result<Self> {
        Ok(Self { problem: Problem::new(kind, n)?, reference: RefPolicy::AsymmetricF2, init: InitPolicy::AllOnes, cap })
    }

    pub fn run_config(&self, seed: u64) -> RunConfig {
        let mut rc = RunConfig::new(
            self.problem,
            AlgorithmKind::Semo,
            SelectionScheme::Nmuar,
            Some(DiversityMetric::Hvc(self.reference)),
            seed,
        );
        rc.generation_cap = self.cap;
        rc.init = self.init;
        rc
    }
}

/// Fraction of `seeds` whose run hits the cap.
pub fn nmuar_asymmetric_stagnation_check(
    scenario: &NmuarScenario,
    seeds: &[u64],
    workers: usize,
) -> Result<ScenarioReport> {
    let pool = build_pool(workers)?;
    let outcomes = pool.install(|| {
        seeds.par_iter().map(|&s| run(scenario.run_config(s)).map(|r| r.outcome)).collect::<Result<Vec<_>>>()
    })?;
    Ok(ScenarioReport {
        runs: outcomes.len(),
        stagnated: outcomes.iter().filter(|&&o| o == Outcome::Stagnation).count(),
    })
}
