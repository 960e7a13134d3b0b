//! The SEMO / GSEMO / modified GSEMO generation loop.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Geometric};

use crate::archive::{Archive, Individual, InsertOutcome};
use crate::diversity::{contributions_exact, scores_into, DiversityMetric, DiversityScore, RefPolicy};
use crate::error::{invalid_config, Error, Result};
use crate::fitness::{BitString, ObjectiveVector, Problem, ProblemKind};
use crate::rng::{stream, RngStream};
use crate::selection::{SelectionScheme, Selector};

pub const DEFAULT_GENERATION_CAP: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgorithmKind {
    /// One-bit mutation.
    Semo,
    /// Standard bit mutation at rate 1/n.
    Gsemo,
    /// GSEMO restricted to parents of maximal L = LO + TZ (LOTZ only).
    ModifiedGsemo,
}

impl AlgorithmKind {
    pub fn token(self) -> &'static str {
        match self {
            Self::Semo => "semo",
            Self::Gsemo => "gsemo",
            Self::ModifiedGsemo => "mgsemo",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Semo => "SEMO",
            Self::Gsemo => "GSEMO",
            Self::ModifiedGsemo => "modified GSEMO",
        }
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "semo" => Ok(Self::Semo),
            "gsemo" => Ok(Self::Gsemo),
            "mgsemo" | "modifiedgsemo" => Ok(Self::ModifiedGsemo),
            other => Err(Error::Parse(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// Where the first search point comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum InitPolicy {
    #[default]
    Random,
    AllOnes,
    AllZeros,
}

impl InitPolicy {
    pub fn token(self) -> &'static str {
        match self {
            Self::Random => "random",
            Self::AllOnes => "ones",
            Self::AllZeros => "zeros",
        }
    }
}

impl FromStr for InitPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "random" => Ok(Self::Random),
            "ones" | "1n" => Ok(Self::AllOnes),
            "zeros" | "0n" => Ok(Self::AllZeros),
            other => Err(Error::Parse(format!("unknown init policy {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RunConfig {
    pub problem: Problem,
    pub algorithm: AlgorithmKind,
    pub scheme: SelectionScheme,
    /// `None` exactly when `scheme` is uniform.
    pub metric: Option<DiversityMetric>,
    pub generation_cap: u64,
    pub seed: u64,
    pub snapshot_every: Option<u64>,
    pub init: InitPolicy,
}

impl RunConfig {
    pub fn new(
        problem: Problem,
        algorithm: AlgorithmKind,
        scheme: SelectionScheme,
        metric: Option<DiversityMetric>,
        seed: u64,
    ) -> Self {
        Self {
            problem,
            algorithm,
            scheme,
            metric,
            generation_cap: DEFAULT_GENERATION_CAP,
            seed,
            snapshot_every: None,
            init: InitPolicy::Random,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (self.scheme, self.metric) {
            (SelectionScheme::Uniform, Some(_)) => {
                return Err(invalid_config("uniform selection takes no diversity metric"))
            }
            (s, None) if s != SelectionScheme::Uniform => {
                return Err(invalid_config(format!("{s} selection needs a diversity metric")))
            }
            _ => {}
        }
        if self.generation_cap == 0 {
            return Err(invalid_config("generation cap must be at least 1"));
        }
        if self.snapshot_every == Some(0) {
            return Err(invalid_config("snapshot interval must be at least 1"));
        }
        if self.algorithm == AlgorithmKind::ModifiedGsemo && self.problem.kind != ProblemKind::Lotz {
            return Err(invalid_config("the modified GSEMO is defined for LOTZ only"));
        }
        if let Some(DiversityMetric::Hvc(policy)) = self.metric {
            let n = self.problem.n as i64;
            if !contributions_exact(n, n, policy.resolve(self.problem.n)) {
                return Err(invalid_config(format!(
                    "reference point {} is too far out for exact contributions at n={n}",
                    policy.label()
                )));
            }
        }
        if let Some(DiversityMetric::Hvc(RefPolicy::Fixed(r))) = self.metric {
            // Objective values are >= 0, so this keeps every reachable
            // population strictly above the reference point.
            if r.r1 > -1 || r.r2 > -1 {
                return Err(invalid_config(format!("reference point {r} must be weakly dominated by (-1,-1)")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Success,
    Stagnation,
}

impl Outcome {
    pub fn token(self) -> &'static str {
        match self {
            Self::Success => "success",
            Self::Stagnation => "stagnation",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub generation: u64,
    pub population_size: usize,
    pub front_coverage: usize,
    pub gaps: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunResult {
    pub outcome: Outcome,
    /// Fitness evaluations consumed, the initial one included.
    pub generations: u64,
    pub final_front_coverage: usize,
    pub final_gaps: Vec<usize>,
    pub snapshots: Vec<Snapshot>,
}

/// Flip exactly one uniformly chosen bit.
pub fn mutate_local<R: Rng + ?Sized>(x: &BitString, rng: &mut R) -> BitString {
    let mut y = x.clone();
    y.flip(rng.random_range(0..x.len()));
    y
}

/// Flip each bit independently with probability `1/n`.
pub fn mutate_global<R: Rng + ?Sized>(x: &BitString, rng: &mut R) -> BitString {
    let mut y = x.clone();
    flip_global(&mut y, &global_skips(x.len()), rng);
    y
}

fn global_skips(n: usize) -> Geometric {
    Geometric::new(1.0 / n as f64).expect("1/n is a valid probability")
}

/// Jumps between flipped positions are geometric with success
/// probability `1/n`, which is the same law as independent per-bit coins.
fn flip_global<R: Rng + ?Sized>(y: &mut BitString, skips: &Geometric, rng: &mut R) {
    let n = y.len() as u64;
    let mut pos = skips.sample(rng);
    while pos < n {
        y.flip(pos as usize);
        pos = pos.saturating_add(1).saturating_add(skips.sample(rng));
    }
}

/// One in-progress run: archive, random stream and scratch buffers.
pub struct Run {
    config: RunConfig,
    archive: Archive,
    rng: RngStream,
    evaluations: u64,
    selector: Selector,
    skips: Geometric,
    pool: Vec<usize>,
    objectives: Vec<ObjectiveVector>,
    scores: Vec<DiversityScore>,
}

impl Run {
    /// Validate the configuration, draw and evaluate the initial search point.
    pub fn new(config: RunConfig) -> Result<Self> {
        config.validate()?;
        let mut rng = stream(config.seed);
        let n = config.problem.n;
        let first = match config.init {
            InitPolicy::Random => BitString::random(n, &mut rng),
            InitPolicy::AllOnes => BitString::ones(n),
            InitPolicy::AllZeros => BitString::zeros(n),
        };
        let first = Individual::evaluate(&config.problem, first)?;
        Ok(Self {
            archive: Archive::with_initial(config.problem, first),
            rng,
            evaluations: 1,
            selector: Selector::default(),
            skips: global_skips(n),
            pool: Vec::with_capacity(n + 1),
            objectives: Vec::with_capacity(n + 1),
            scores: Vec::with_capacity(n + 1),
            config,
        })
    }

    pub fn archive(&self) -> &Archive {
        &self.archive
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    /// Indices of the members parent selection may choose from.
    pub fn parent_pool(&self) -> Vec<usize> {
        let mut pool = Vec::new();
        self.fill_pool(&mut pool);
        pool
    }

    fn fill_pool(&self, pool: &mut Vec<usize>) {
        match self.config.algorithm {
            AlgorithmKind::ModifiedGsemo => {
                self.archive.max_l_indices(pool).expect("validated: modified GSEMO runs on LOTZ")
            }
            _ => {
                pool.clear();
                pool.extend(0..self.archive.len());
            }
        }
    }

    /// Select a parent index into the archive.
    fn select(&mut self) -> usize {
        let mut pool = std::mem::take(&mut self.pool);
        self.fill_pool(&mut pool);
        let mu = pool.len();
        let pick = match self.config.metric {
            None => self.rng.random_range(0..mu),
            Some(metric) => {
                self.objectives.clear();
                self.objectives.extend(pool.iter().map(|&i| self.archive.members()[i].objectives));
                scores_into(metric, &self.objectives, self.config.problem.n, &mut self.scores);
                self.selector
                    .select(self.config.scheme, mu, &self.scores, &mut self.rng)
                    .expect("scores match the pool size")
            }
        };
        let parent = pool[pick];
        self.pool = pool;
        parent
    }

    /// Execute one generation: one offspring, one fitness evaluation.
    pub fn step(&mut self) -> InsertOutcome {
        let parent = self.select();
        let mut child = self.archive.members()[parent].genotype.clone();
        match self.config.algorithm {
            AlgorithmKind::Semo => {
                let i = self.rng.random_range(0..child.len());
                child.flip(i);
            }
            AlgorithmKind::Gsemo | AlgorithmKind::ModifiedGsemo => flip_global(&mut child, &self.skips, &mut self.rng),
        }
        let child = Individual::evaluate(&self.config.problem, child).expect("child has length n");
        self.evaluations += 1;
        self.archive.try_insert(child)
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot {
            generation: self.evaluations,
            population_size: self.archive.len(),
            front_coverage: self.archive.front_coverage(),
            gaps: self.archive.gap_positions(),
        }
    }

    /// Step until the front is covered or the cap is reached.
    pub fn finish(mut self) -> RunResult {
        let cap = self.config.generation_cap;
        let every = self.config.snapshot_every;
        let mut snapshots = Vec::new();
        if every.is_some() {
            snapshots.push(self.snapshot());
        }
        while !self.archive.covers_full_front() && self.evaluations < cap {
            self.step();
            if every.is_some_and(|k| self.evaluations.is_multiple_of(k)) {
                snapshots.push(self.snapshot());
            }
        }
        if every.is_some() && snapshots.last().map(|s| s.generation) != Some(self.evaluations) {
            snapshots.push(self.snapshot());
        }
        let outcome = if self.archive.covers_full_front() { Outcome::Success } else { Outcome::Stagnation };
        RunResult {
            outcome,
            generations: self.evaluations,
            final_front_coverage: self.archive.front_coverage(),
            final_gaps: self.archive.gap_positions(),
            snapshots,
        }
    }
}

/// Execute one run to success or the generation cap.
pub fn run(config: RunConfig) -> Result<RunResult> {
    Ok(Run::new(config)?.finish())
}
