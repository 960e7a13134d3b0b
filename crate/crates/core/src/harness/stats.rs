use crate::engine::Outcome;

use super::RunRecord;

/// Mean and population STD of generations over successful runs.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregateStats {
    /// `None` when no run succeeded.
    pub mean_generations: Option<f64>,
    pub std_generations: Option<f64>,
    pub failure_rate: f64,
    pub runs: u64,
    pub successes: u64,
}

impl AggregateStats {
    pub fn from_records(records: &[RunRecord]) -> Self {
        let gens: Vec<f64> =
            records.iter().filter(|r| r.outcome == Outcome::Success).map(|r| r.generations as f64).collect();
        Self::from_generations(records.len() as u64, &gens)
    }

    /// `successful` holds the generation counts of the successful runs
    /// among `runs` in total.
    pub fn from_generations(runs: u64, successful: &[f64]) -> Self {
        let successes = successful.len() as u64;
        let (mean, std) = if successful.is_empty() {
            (None, None)
        } else {
            let k = successful.len() as f64;
            let mean = successful.iter().sum::<f64>() / k;
            let var = successful.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / k;
            (Some(mean), Some(var.sqrt()))
        };
        let failure_rate = if runs == 0 { 0.0 } else { 1.0 - successes as f64 / runs as f64 };
        Self { mean_generations: mean, std_generations: std, failure_rate, runs, successes }
    }

    pub fn stagnated(&self) -> bool {
        self.failure_rate > 0.0
    }
}

/// Least-squares line through `(ln n, ln mean)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingFit {
    pub sizes: Vec<f64>,
    pub means: Vec<f64>,
    pub loglog_slope: f64,
    pub intercept: f64,
    /// Zero with exactly two points.
    pub slope_stderr: f64,
}

/// `None` with fewer than two points or no spread in `xs`.
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> Option<ScalingFit> {
    assert_eq!(xs.len(), ys.len());
    if xs.len() < 2 {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let stderr = if lx.len() > 2 {
        let ssr: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
        (ssr / (k - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Some(ScalingFit { sizes: xs.to_vec(), means: ys.to_vec(), loglog_slope: slope, intercept, slope_stderr: stderr })
}
