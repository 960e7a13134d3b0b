use std::fmt::Write as _;
use std::io::{self, Write};

use crate::diversity::{DiversityMetric, RefPolicy};
use crate::engine::AlgorithmKind;
use crate::fitness::ProblemKind;
use crate::selection::SelectionScheme;

use super::{AggregateStats, ExperimentConfig, ExperimentReport, RunRecord};

pub const CSV_HEADER: &str = "run_id,algorithm,problem,n,scheme,metric,ref_r1,ref_r2,seed,outcome,generations";

/// One row per record after the header. Runs without a reference point
/// carry `na` in both reference columns.
pub fn write_csv<W: Write>(records: &[RunRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        let (metric, r1, r2) = match r.metric {
            None => ("none", "na".to_string(), "na".to_string()),
            Some(m) => match m.reference(r.problem.n) {
                Some(p) => (m.token(), p.r1.to_string(), p.r2.to_string()),
                None => (m.token(), "na".to_string(), "na".to_string()),
            },
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.run_id,
            r.algorithm.token(),
            r.problem.kind.token(),
            r.problem.n,
            r.scheme.token(),
            metric,
            r1,
            r2,
            r.seed,
            r.outcome.token(),
            r.generations,
        )?;
    }
    out.flush()
}

pub fn emit_csv(records: &[RunRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("CSV is ASCII")
}

/// Two significant decimals and a two-digit exponent: `9.14e02`.
pub fn format_sci(x: f64) -> String {
    let s = format!("{x:.2e}");
    match s.split_once('e') {
        Some((mantissa, exp)) => {
            let (sign, digits) = match exp.strip_prefix('-') {
                Some(d) => ("-", d),
                None => ("", exp),
            };
            format!("{mantissa}e{sign}{digits:0>2}")
        }
        None => s,
    }
}

/// A grid of experiments rendered as one markdown table, with a mean row
/// and an STD row per labelled row.
#[derive(Clone, Debug)]
pub struct TableSpec {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<(String, Vec<ExperimentConfig>)>,
}

/// Row order of the scheme tables.
const SCHEMES: [SelectionScheme; 6] = [
    SelectionScheme::Hdc,
    SelectionScheme::Nmuar,
    SelectionScheme::Exponential,
    SelectionScheme::Harmonic,
    SelectionScheme::PowerLaw,
    SelectionScheme::Tournament,
];

const METRICS: [DiversityMetric; 3] =
    [DiversityMetric::Hvc(RefPolicy::Unit), DiversityMetric::Hvc(RefPolicy::MinusN), DiversityMetric::Cdc];

impl TableSpec {
    /// Every experiment in row-major order.
    pub fn configs(&self) -> impl Iterator<Item = &ExperimentConfig> {
        self.rows.iter().flat_map(|(_, cells)| cells)
    }

    /// The four result tables: uniform baselines, then the scheme × metric
    /// grids for OneMinMax, LOTZ and the modified GSEMO on LOTZ. `template`
    /// supplies n, cap, runs, seed and workers.
    pub fn standard_grid(template: &ExperimentConfig) -> Vec<TableSpec> {
        let cell = |problem, algorithm, scheme, metric| ExperimentConfig {
            problem,
            algorithm,
            scheme,
            metric,
            n_sweep: None,
            ..template.clone()
        };
        let metric_columns: Vec<String> = METRICS.iter().map(|m| m.label()).collect();

        let baseline = TableSpec {
            title: format!("Uniform selection, n={}", template.n),
            columns: vec!["OneMinMax".into(), "LOTZ".into()],
            rows: [AlgorithmKind::Semo, AlgorithmKind::Gsemo]
                .into_iter()
                .map(|a| {
                    let cells = [ProblemKind::OneMinMax, ProblemKind::Lotz]
                        .into_iter()
                        .map(|p| cell(p, a, SelectionScheme::Uniform, None))
                        .collect();
                    (a.label().to_string(), cells)
                })
                .collect(),
        };

        let scheme_grid = |problem: ProblemKind, title: String| TableSpec {
            title,
            columns: metric_columns.clone(),
            rows: SCHEMES
                .iter()
                .flat_map(|&s| [AlgorithmKind::Semo, AlgorithmKind::Gsemo].map(|a| (a, s)))
                .map(|(a, s)| {
                    let cells = METRICS.iter().map(|&m| cell(problem, a, s, Some(m))).collect();
                    (format!("{} & {}", a.label(), s.label()), cells)
                })
                .collect(),
        };

        let modified = TableSpec {
            title: format!("Modified GSEMO on LOTZ, n={}", template.n),
            columns: metric_columns.clone(),
            rows: SCHEMES
                .iter()
                .map(|&s| {
                    let cells = METRICS
                        .iter()
                        .map(|&m| cell(ProblemKind::Lotz, AlgorithmKind::ModifiedGsemo, s, Some(m)))
                        .collect();
                    (s.label().to_string(), cells)
                })
                .collect(),
        };

        vec![
            baseline,
            scheme_grid(ProblemKind::OneMinMax, format!("OneMinMax, n={}", template.n)),
            scheme_grid(ProblemKind::Lotz, format!("LOTZ, n={}", template.n)),
            modified,
        ]
    }
}

fn cells(stats: &AggregateStats) -> (String, String) {
    match (stats.stagnated(), stats.mean_generations, stats.std_generations) {
        (false, Some(m), Some(s)) => (format_sci(m), format_sci(s)),
        _ => ("Stagnation".into(), "Stagnation".into()),
    }
}

/// Render `spec` with `stats` given in the order of [`TableSpec::configs`].
pub fn emit_table(spec: &TableSpec, stats: &[AggregateStats]) -> String {
    let width = spec.columns.len();
    assert_eq!(stats.len(), spec.rows.iter().map(|(_, c)| c.len()).sum::<usize>());
    let mut out = String::new();
    let _ = writeln!(out, "### {}\n", spec.title);
    let _ = writeln!(out, "| Algorithms | {} |", spec.columns.join(" | "));
    let _ = writeln!(out, "|---|{}", "---|".repeat(width));
    let mut it = stats.iter();
    for (label, row) in &spec.rows {
        let (means, stds): (Vec<String>, Vec<String>) = it.by_ref().take(row.len()).map(cells).unzip();
        let _ = writeln!(out, "| {label} | {} |", means.join(" | "));
        let _ = writeln!(out, "| | {} |", stds.join(" | "));
    }
    out
}

/// Single-experiment summary table.
pub fn emit_run_table(reports: &[ExperimentReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "| algorithm | problem | n | scheme | metric | runs | failure rate | mean | STD |");
    let _ = writeln!(out, "|---|---|---|---|---|---|---|---|---|");
    for r in reports {
        let c = &r.config;
        let metric = c.metric.map_or("none".to_string(), |m| m.label());
        let (mean, std) = match (r.stats.mean_generations, r.stats.std_generations) {
            (Some(m), Some(s)) => (format_sci(m), format_sci(s)),
            _ => ("Stagnation".into(), "Stagnation".into()),
        };
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | {:.2} | {} | {} |",
            c.algorithm.label(),
            c.problem.token(),
            c.n,
            c.scheme.label(),
            metric,
            r.stats.runs,
            r.stats.failure_rate,
            mean,
            std
        );
    }
    out
}
