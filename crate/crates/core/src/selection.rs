//! Parent selection over a scored population.
//!
//! Rank-based schemes rank members by non-increasing score and pick rank
//! `i` (1-based) with probability proportional to `2^-i` (exponential),
//! `1/i^2` (power law) or `1/i` (harmonic). Members with equal scores share
//! a tie class whose internal order is uniformly random on every call.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::diversity::DiversityScore;
use crate::error::{invalid_input, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SelectionScheme {
    Uniform,
    Exponential,
    PowerLaw,
    Harmonic,
    /// Tournament of size μ drawn with replacement.
    Tournament,
    /// Highest diversity contribution, ties uniform.
    Hdc,
    /// Uniform over members whose score exceeds the population minimum.
    Nmuar,
}

impl SelectionScheme {
    pub const ALL: [Self; 7] =
        [Self::Uniform, Self::Exponential, Self::PowerLaw, Self::Harmonic, Self::Tournament, Self::Hdc, Self::Nmuar];

    pub fn token(self) -> &'static str {
        match self {
            Self::Uniform => "uniform",
            Self::Exponential => "exponential",
            Self::PowerLaw => "powerlaw",
            Self::Harmonic => "harmonic",
            Self::Tournament => "tournament",
            Self::Hdc => "hdc",
            Self::Nmuar => "nmuar",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Uniform => "uniform",
            Self::Exponential => "exponential",
            Self::PowerLaw => "power law",
            Self::Harmonic => "harmonic",
            Self::Tournament => "tournament(mu)",
            Self::Hdc => "HDC",
            Self::Nmuar => "NMUAR",
        }
    }

    pub fn is_rank_based(self) -> bool {
        matches!(self, Self::Exponential | Self::PowerLaw | Self::Harmonic)
    }

    /// Unnormalised weight of 1-based rank `i`.
    fn rank_weight(self, i: usize) -> f64 {
        let i = i as f64;
        match self {
            Self::Exponential => (-i).exp2(),
            Self::PowerLaw => 1.0 / (i * i),
            Self::Harmonic => 1.0 / i,
            _ => unreachable!("not a rank-based scheme"),
        }
    }
}

impl fmt::Display for SelectionScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for SelectionScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase().replace(['-', '_', ' '], "");
        Ok(match t.as_str() {
            "uniform" => Self::Uniform,
            "exponential" | "exp" => Self::Exponential,
            "powerlaw" | "power" => Self::PowerLaw,
            "harmonic" => Self::Harmonic,
            "tournament" | "tournamentmu" | "tournament(mu)" => Self::Tournament,
            "hdc" => Self::Hdc,
            "nmuar" => Self::Nmuar,
            _ => return Err(Error::Parse(format!("unknown selection scheme {s:?}"))),
        })
    }
}

/// Selection probability of each rank `1..=mu` under a rank-based scheme.
pub fn rank_probabilities(scheme: SelectionScheme, mu: usize) -> Result<Vec<f64>> {
    if !scheme.is_rank_based() {
        return Err(invalid_input(format!("{scheme} is not a rank-based scheme")));
    }
    if mu == 0 {
        return Err(invalid_input("population size must be at least 1"));
    }
    let w: Vec<f64> = (1..=mu).map(|i| scheme.rank_weight(i)).collect();
    let total: f64 = w.iter().sum();
    Ok(w.into_iter().map(|x| x / total).collect())
}

/// Indices ordered by non-increasing score; each tie class is shuffled.
pub fn rank_by_score<R: Rng + ?Sized>(scores: &[DiversityScore], rng: &mut R) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].cmp(&scores[a]));
    let mut start = 0;
    while start < idx.len() {
        let end = start + idx[start..].iter().take_while(|&&i| scores[i] == scores[idx[start]]).count();
        idx[start..end].shuffle(rng);
        start = end;
    }
    idx
}

/// Choose a parent index in `0..mu`. `scores` is ignored for
/// [`SelectionScheme::Uniform`] and must have length `mu` otherwise.
pub fn select_parent<R: Rng + ?Sized>(
    scheme: SelectionScheme,
    mu: usize,
    scores: &[DiversityScore],
    rng: &mut R,
) -> Result<usize> {
    Selector::default().select(scheme, mu, scores, rng)
}

/// Reusable selection state: a cumulative rank-weight table per scheme
/// and a scratch buffer, so the generation loop does not allocate.
#[derive(Debug, Default, Clone)]
pub struct Selector {
    cumulative: Vec<f64>,
    table_for: Option<SelectionScheme>,
    scratch: Vec<DiversityScore>,
}

impl Selector {
    pub fn select<R: Rng + ?Sized>(
        &mut self,
        scheme: SelectionScheme,
        mu: usize,
        scores: &[DiversityScore],
        rng: &mut R,
    ) -> Result<usize> {
        if mu == 0 {
            return Err(invalid_input("cannot select from an empty population"));
        }
        if scheme != SelectionScheme::Uniform && scores.len() != mu {
            return Err(invalid_input(format!("expected {mu} scores, got {}", scores.len())));
        }
        Ok(match scheme {
            SelectionScheme::Uniform => rng.random_range(0..mu),
            SelectionScheme::Exponential | SelectionScheme::PowerLaw | SelectionScheme::Harmonic => {
                let rank = self.sample_rank(scheme, mu, rng);
                self.member_at_rank(scores, rank, rng)
            }
            SelectionScheme::Tournament => tournament(scores, rng),
            SelectionScheme::Hdc => {
                let best = *scores.iter().max().expect("non-empty");
                nth_matching(scores, |s| s == best, rng)
            }
            SelectionScheme::Nmuar => {
                let lo = *scores.iter().min().expect("non-empty");
                let hi = *scores.iter().max().expect("non-empty");
                if lo == hi {
                    rng.random_range(0..mu)
                } else {
                    nth_matching(scores, |s| s > lo, rng)
                }
            }
        })
    }

    /// 0-based rank drawn with probability `w(rank+1) / sum_{j<=mu} w(j)`.
    fn sample_rank<R: Rng + ?Sized>(&mut self, scheme: SelectionScheme, mu: usize, rng: &mut R) -> usize {
        if self.table_for != Some(scheme) {
            self.cumulative.clear();
            self.table_for = Some(scheme);
        }
        while self.cumulative.len() < mu {
            let i = self.cumulative.len() + 1;
            let prev = self.cumulative.last().copied().unwrap_or(0.0);
            self.cumulative.push(prev + scheme.rank_weight(i));
        }
        let table = &self.cumulative[..mu];
        let u = rng.random::<f64>() * table[mu - 1];
        table.partition_point(|&c| c <= u).min(mu - 1)
    }

    /// The member holding 0-based `rank` in a ranking whose tie classes are
    /// ordered uniformly at random.
    fn member_at_rank<R: Rng + ?Sized>(&mut self, scores: &[DiversityScore], rank: usize, rng: &mut R) -> usize {
        self.scratch.clear();
        self.scratch.extend_from_slice(scores);
        let (_, &mut value, _) = self.scratch.select_nth_unstable_by(rank, |a, b| b.cmp(a));
        nth_matching(scores, |s| s == value, rng)
    }
}

/// Uniform choice among indices whose score satisfies `pred`.
fn nth_matching<R: Rng + ?Sized>(
    scores: &[DiversityScore],
    pred: impl Fn(DiversityScore) -> bool,
    rng: &mut R,
) -> usize {
    let count = scores.iter().filter(|&&s| pred(s)).count();
    debug_assert!(count > 0);
    let pick = rng.random_range(0..count);
    scores.iter().enumerate().filter(|(_, &s)| pred(s)).nth(pick).map(|(i, _)| i).expect("pick is below count")
}

/// μ draws with replacement; the best drawn score wins, ties uniform over draws.
fn tournament<R: Rng + ?Sized>(scores: &[DiversityScore], rng: &mut R) -> usize {
    let mu = scores.len();
    let mut winner = rng.random_range(0..mu);
    let mut ties = 1u32;
    for _ in 1..mu {
        let i = rng.random_range(0..mu);
        match scores[i].cmp(&scores[winner]) {
            std::cmp::Ordering::Greater => {
                winner = i;
                ties = 1;
            }
            std::cmp::Ordering::Equal => {
                ties += 1;
                if rng.random_range(0..ties) == 0 {
                    winner = i;
                }
            }
            std::cmp::Ordering::Less => {}
        }
    }
    winner
}
