use serde::Deserialize;

use crate::diversity::{DiversityMetric, RefPolicy};
use crate::engine::{AlgorithmKind, InitPolicy, RunConfig, DEFAULT_GENERATION_CAP};
use crate::error::{invalid_config, Error, Result};
use crate::fitness::{Problem, ProblemKind};
use crate::rng::{derive_seed, fnv1a};
use crate::selection::SelectionScheme;

/// A batch of independent runs sharing everything but their seed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExperimentConfig {
    pub problem: ProblemKind,
    pub n: usize,
    pub algorithm: AlgorithmKind,
    pub scheme: SelectionScheme,
    pub metric: Option<DiversityMetric>,
    pub cap: u64,
    pub init: InitPolicy,
    pub runs: u64,
    pub master_seed: u64,
    pub n_sweep: Option<Vec<usize>>,
    pub workers: usize,
}

impl ExperimentConfig {
    pub fn new(
        problem: ProblemKind,
        n: usize,
        algorithm: AlgorithmKind,
        scheme: SelectionScheme,
        metric: Option<DiversityMetric>,
    ) -> Self {
        Self {
            problem,
            n,
            algorithm,
            scheme,
            metric,
            cap: DEFAULT_GENERATION_CAP,
            init: InitPolicy::Random,
            runs: 100,
            master_seed: 0,
            n_sweep: None,
            workers: 1,
        }
    }

    pub fn problem(&self) -> Result<Problem> {
        Problem::new(self.problem, self.n)
    }

    /// Canonical description of everything that shapes a run except the
    /// seed, the run count and the worker count.
    pub fn canonical(&self) -> String {
        let metric = match self.metric {
            None => "none".to_string(),
            Some(DiversityMetric::Cdc) => "cdc".to_string(),
            Some(DiversityMetric::Hvc(p)) => format!("hvc:{}", p.token()),
        };
        format!(
            "algorithm={};problem={};n={};scheme={};metric={};cap={};init={}",
            self.algorithm.token(),
            self.problem.token(),
            self.n,
            self.scheme.token(),
            metric,
            self.cap,
            self.init.token(),
        )
    }

    pub fn fingerprint(&self) -> u64 {
        fnv1a(self.canonical().as_bytes())
    }

    pub fn seed_for(&self, index: u64) -> u64 {
        derive_seed(self.master_seed, self.fingerprint(), index)
    }

    pub fn run_config(&self, index: u64) -> RunConfig {
        let problem = Problem { kind: self.problem, n: self.n };
        let mut rc = RunConfig::new(problem, self.algorithm, self.scheme, self.metric, self.seed_for(index));
        rc.generation_cap = self.cap;
        rc.init = self.init;
        rc
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(invalid_config("runs must be at least 1"));
        }
        if self.workers == 0 {
            return Err(invalid_config("workers must be at least 1"));
        }
        for &n in self.n_sweep.iter().flatten() {
            if n == 0 {
                return Err(invalid_config("sweep sizes must be at least 1"));
            }
        }
        self.problem().map_err(config_err)?;
        self.run_config(0).validate()
    }
}

/// Top-level layout of a configuration file:
///
/// ```toml
/// [experiment]
/// runs = 100
/// seed = 1
/// workers = 4
///
/// [run]
/// problem = "lotz"
/// algo = "gsemo"
/// scheme = "hdc"
/// metric = "hvc"
/// ref = "n"
/// n = 100
/// cap = 1000000
/// init = "random"
///
/// [sweep]
/// sizes = [16, 32, 64, 128]
/// ```
///
/// Every key is optional; unknown keys are rejected.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub experiment: FileExperiment,
    #[serde(default)]
    pub run: FileRun,
    #[serde(default)]
    pub sweep: FileSweep,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileExperiment {
    pub runs: Option<u64>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileRun {
    pub problem: Option<String>,
    pub algo: Option<String>,
    pub scheme: Option<String>,
    pub metric: Option<String>,
    #[serde(rename = "ref")]
    pub reference: Option<String>,
    pub n: Option<usize>,
    pub cap: Option<u64>,
    pub init: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileSweep {
    pub sizes: Option<Vec<usize>>,
}

pub fn parse_config_str(text: &str) -> Result<FileConfig> {
    toml::from_str(text).map_err(|e| Error::InvalidConfig(format!("config file: {}", e.message())))
}

impl FileConfig {
    /// Overlay `other` on `self`: every field set in `other` wins.
    pub fn merge(self, other: FileConfig) -> FileConfig {
        fn pick<T>(a: Option<T>, b: Option<T>) -> Option<T> {
            b.or(a)
        }
        FileConfig {
            experiment: FileExperiment {
                runs: pick(self.experiment.runs, other.experiment.runs),
                seed: pick(self.experiment.seed, other.experiment.seed),
                workers: pick(self.experiment.workers, other.experiment.workers),
            },
            run: FileRun {
                problem: pick(self.run.problem, other.run.problem),
                algo: pick(self.run.algo, other.run.algo),
                scheme: pick(self.run.scheme, other.run.scheme),
                metric: pick(self.run.metric, other.run.metric),
                reference: pick(self.run.reference, other.run.reference),
                n: pick(self.run.n, other.run.n),
                cap: pick(self.run.cap, other.run.cap),
                init: pick(self.run.init, other.run.init),
            },
            sweep: FileSweep { sizes: pick(self.sweep.sizes, other.sweep.sizes) },
        }
    }

    /// Resolve into a validated experiment. Missing keys take defaults:
    /// OneMinMax, n = 100, SEMO, uniform selection, cap 10⁶, 100 runs,
    /// seed 0, one worker. `metric = "hvc"` without `ref` uses (−1, −1);
    /// a metric or ref given with uniform selection is an error.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let parse = |v: &Option<String>, what: &str| -> Result<Option<String>> {
            match v {
                Some(s) if s.trim().is_empty() => Err(invalid_config(format!("{what} must not be empty"))),
                other => Ok(other.clone()),
            }
        };
        let problem: ProblemKind = match parse(&self.run.problem, "problem")? {
            Some(s) => s.parse().map_err(config_err)?,
            None => ProblemKind::OneMinMax,
        };
        let algorithm: AlgorithmKind = match parse(&self.run.algo, "algo")? {
            Some(s) => s.parse().map_err(config_err)?,
            None => AlgorithmKind::Semo,
        };
        let scheme: SelectionScheme = match parse(&self.run.scheme, "scheme")? {
            Some(s) => s.parse().map_err(config_err)?,
            None => SelectionScheme::Uniform,
        };
        let reference: Option<RefPolicy> = match parse(&self.run.reference, "ref")? {
            Some(s) => Some(s.parse().map_err(config_err)?),
            None => None,
        };
        let metric_token =
            parse(&self.run.metric, "metric")?.map(|m| m.trim().to_ascii_lowercase()).filter(|m| m != "none");
        let metric = match metric_token.as_deref() {
            None => {
                if reference.is_some() {
                    return Err(invalid_config("ref given without the hvc metric"));
                }
                None
            }
            Some("hvc") => Some(DiversityMetric::Hvc(reference.unwrap_or(RefPolicy::Unit))),
            Some("cdc") => {
                if reference.is_some() {
                    return Err(invalid_config("ref only applies to the hvc metric"));
                }
                Some(DiversityMetric::Cdc)
            }
            Some(m) => return Err(invalid_config(format!("unknown metric {m:?}"))),
        };
        let init: InitPolicy = match parse(&self.run.init, "init")? {
            Some(s) => s.parse().map_err(config_err)?,
            None => InitPolicy::Random,
        };
        let mut config = ExperimentConfig::new(problem, self.run.n.unwrap_or(100), algorithm, scheme, metric);
        config.init = init;
        if let Some(cap) = self.run.cap {
            config.cap = cap;
        }
        if let Some(runs) = self.experiment.runs {
            config.runs = runs;
        }
        if let Some(seed) = self.experiment.seed {
            config.master_seed = seed;
        }
        if let Some(w) = self.experiment.workers {
            config.workers = w;
        }
        config.n_sweep = self.sweep.sizes.clone();
        config.validate()?;
        Ok(config)
    }
}

fn config_err(e: Error) -> Error {
    match e {
        Error::Parse(m) | Error::InvalidInput(m) => Error::InvalidConfig(m),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_file_resolves() {
        let text = r#"
[experiment]
runs = 7
seed = 11
workers = 2

[run]
problem = "lotz"
algo = "mgsemo"
scheme = "hdc"
metric = "hvc"
ref = "n2"
n = 30
cap = 5000
init = "ones"

[sweep]
sizes = [8, 16]
"#;
        let c = parse_config_str(text).unwrap().resolve().unwrap();
        assert_eq!(c.problem, ProblemKind::Lotz);
        assert_eq!(c.algorithm, AlgorithmKind::ModifiedGsemo);
        assert_eq!(c.scheme, SelectionScheme::Hdc);
        assert_eq!(c.metric, Some(DiversityMetric::Hvc(RefPolicy::MinusNSquared)));
        assert_eq!((c.n, c.cap, c.runs, c.master_seed, c.workers), (30, 5000, 7, 11, 2));
        assert_eq!(c.init, InitPolicy::AllOnes);
        assert_eq!(c.n_sweep, Some(vec![8, 16]));
    }

    #[test]
    fn empty_file_gives_defaults() {
        let c = parse_config_str("").unwrap().resolve().unwrap();
        assert_eq!(
            c,
            ExperimentConfig::new(ProblemKind::OneMinMax, 100, AlgorithmKind::Semo, SelectionScheme::Uniform, None)
        );
    }

    #[test]
    fn rejects_bad_files() {
        for text in ["[run]\nfoo = 1", "[nope]\n", "[run]\nn = \"ten\"", "[run]\nn = -3", "[run\n"] {
            assert!(matches!(parse_config_str(text), Err(Error::InvalidConfig(_))), "{text}");
        }
        for text in [
            "[run]\nscheme = \"hdc\"",
            "[run]\nmetric = \"hvc\"",
            "[run]\nref = \"n\"",
            "[run]\nscheme = \"hdc\"\nmetric = \"cdc\"\nref = \"n\"",
            "[run]\nscheme = \"hdc\"\nmetric = \"xyz\"",
            "[run]\nalgo = \"mgsemo\"",
            "[run]\nn = 0",
            "[run]\ncap = 0",
            "[run]\nproblem = \"\"",
            "[experiment]\nruns = 0",
            "[experiment]\nworkers = 0",
            "[run]\nscheme = \"hdc\"\nmetric = \"hvc\"\nref = \"0,-1\"",
        ] {
            let r = parse_config_str(text).unwrap().resolve();
            assert!(matches!(r, Err(Error::InvalidConfig(_))), "{text}: {r:?}");
        }
    }

    #[test]
    fn merge_prefers_overrides() {
        let file = parse_config_str("[run]\nn = 50\nproblem = \"lotz\"").unwrap();
        let flags = FileConfig { run: FileRun { n: Some(20), ..Default::default() }, ..Default::default() };
        let c = file.merge(flags).resolve().unwrap();
        assert_eq!((c.n, c.problem), (20, ProblemKind::Lotz));
    }

    #[test]
    fn fingerprint_ignores_seed_runs_and_workers() {
        let a = ExperimentConfig::new(ProblemKind::Lotz, 10, AlgorithmKind::Gsemo, SelectionScheme::Uniform, None);
        let mut b = a.clone();
        b.runs = 3;
        b.workers = 8;
        b.master_seed = 99;
        assert_eq!(a.fingerprint(), b.fingerprint());
        b.n = 11;
        assert_ne!(a.fingerprint(), b.fingerprint());
        let mut c = a.clone();
        c.master_seed = 1;
        assert_ne!(a.seed_for(0), c.seed_for(0));
        assert_ne!(a.seed_for(0), a.seed_for(1));
    }
}
