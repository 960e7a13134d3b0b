//! Diversity contributions of population members: hypervolume contribution
//! (HVC) against a reference point, and crowding distance contribution (CDC).
//!
//! All inputs are objective vectors sorted strictly ascending in `f1`. HVC
//! is computed in exact integer arithmetic. CDC is kept exact as well: every
//! interior score is an integer numerator over the common denominator
//! `range(f1) * range(f2)`, so equal crowding distances compare equal.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::archive::Individual;
use crate::error::{invalid_input, Error, Result};
use crate::fitness::{ObjectiveVector, Problem};

/// A point in objective space. Hypervolume boxes span from here to each member.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ReferencePoint {
    pub r1: i64,
    pub r2: i64,
}

impl ReferencePoint {
    pub const fn new(r1: i64, r2: i64) -> Self {
        Self { r1, r2 }
    }
}

impl fmt::Display for ReferencePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.r1, self.r2)
    }
}

/// How the HVC reference point is chosen for a problem of size `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RefPolicy {
    /// (−1, −1)
    Unit,
    /// (−n, −n)
    MinusN,
    /// (−n², −n²)
    MinusNSquared,
    /// (−n−1, −1)
    AsymmetricF1,
    /// (−1, −n−1)
    AsymmetricF2,
    Fixed(ReferencePoint),
}

impl RefPolicy {
    pub fn resolve(self, n: usize) -> ReferencePoint {
        let n = n as i64;
        match self {
            Self::Unit => ReferencePoint::new(-1, -1),
            Self::MinusN => ReferencePoint::new(-n, -n),
            Self::MinusNSquared => ReferencePoint::new(-n * n, -n * n),
            Self::AsymmetricF1 => ReferencePoint::new(-n - 1, -1),
            Self::AsymmetricF2 => ReferencePoint::new(-1, -n - 1),
            Self::Fixed(r) => r,
        }
    }

    /// Short label, e.g. for table headers.
    pub fn label(self) -> String {
        match self {
            Self::Unit => "(-1,-1)".into(),
            Self::MinusN => "(-n,-n)".into(),
            Self::MinusNSquared => "(-n^2,-n^2)".into(),
            Self::AsymmetricF1 => "(-n-1,-1)".into(),
            Self::AsymmetricF2 => "(-1,-n-1)".into(),
            Self::Fixed(r) => r.to_string(),
        }
    }

    /// Canonical token accepted back by the parser.
    pub fn token(self) -> String {
        match self {
            Self::Unit => "unit".into(),
            Self::MinusN => "n".into(),
            Self::MinusNSquared => "n2".into(),
            Self::AsymmetricF1 => "asym".into(),
            Self::AsymmetricF2 => "asym2".into(),
            Self::Fixed(r) => format!("{},{}", r.r1, r.r2),
        }
    }
}

/// Accepts the preset names `unit`, `n`, `n2`, `asym`, `asym2`, their
/// symbolic spellings (`-1,-1`, `-n,-n`, `-n^2,-n^2`, `-n-1,-1`, `-1,-n-1`),
/// or a literal integer pair `r1,r2`.
impl FromStr for RefPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String =
            s.chars().filter(|c| !c.is_whitespace() && *c != '(' && *c != ')').collect::<String>().to_ascii_lowercase();
        let preset = match t.as_str() {
            "unit" | "-1,-1" => Some(Self::Unit),
            "n" | "-n,-n" => Some(Self::MinusN),
            "n2" | "-n^2,-n^2" | "-n2,-n2" => Some(Self::MinusNSquared),
            "asym" | "-n-1,-1" => Some(Self::AsymmetricF1),
            "asym2" | "-1,-n-1" => Some(Self::AsymmetricF2),
            _ => None,
        };
        if let Some(p) = preset {
            return Ok(p);
        }
        let (a, b) = t.split_once(',').ok_or_else(|| Error::Parse(format!("unknown reference point {s:?}")))?;
        let parse =
            |v: &str| v.parse::<i64>().map_err(|_| Error::Parse(format!("bad reference coordinate {v:?} in {s:?}")));
        Ok(Self::Fixed(ReferencePoint::new(parse(a)?, parse(b)?)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiversityMetric {
    Hvc(RefPolicy),
    Cdc,
}

impl DiversityMetric {
    pub fn token(self) -> &'static str {
        match self {
            Self::Hvc(_) => "hvc",
            Self::Cdc => "cdc",
        }
    }

    pub fn label(self) -> String {
        match self {
            Self::Hvc(p) => format!("HVC{}", p.label()),
            Self::Cdc => "CDC".into(),
        }
    }

    pub fn reference(self, n: usize) -> Option<ReferencePoint> {
        match self {
            Self::Hvc(p) => Some(p.resolve(n)),
            Self::Cdc => None,
        }
    }
}

/// A nonnegative diversity contribution, or the infinite value crowding
/// distance assigns to boundary members.
#[derive(Clone, Copy, Debug)]
pub enum DiversityScore {
    Finite(f64),
    Infinite,
}

impl DiversityScore {
    pub fn value(self) -> f64 {
        match self {
            Self::Finite(v) => v,
            Self::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Self::Infinite)
    }

    /// Multiply finite values by `k > 0`; infinity stays infinite.
    pub fn scaled(self, k: f64) -> Self {
        match self {
            Self::Finite(v) => Self::Finite(v * k),
            Self::Infinite => Self::Infinite,
        }
    }
}

impl PartialEq for DiversityScore {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for DiversityScore {}

impl PartialOrd for DiversityScore {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DiversityScore {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Self::Infinite, Self::Infinite) => Ordering::Equal,
            (Self::Infinite, Self::Finite(_)) => Ordering::Greater,
            (Self::Finite(_), Self::Infinite) => Ordering::Less,
            (Self::Finite(a), Self::Finite(b)) => a.total_cmp(b),
        }
    }
}

impl fmt::Display for DiversityScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(v) => write!(f, "{v}"),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

fn check_sorted(sorted: &[ObjectiveVector]) -> Result<()> {
    for w in sorted.windows(2) {
        if w[0].f1 >= w[1].f1 {
            return Err(invalid_input(format!(
                "objective vectors must be strictly ascending in f1, got {} before {}",
                w[0], w[1]
            )));
        }
        if w[0].f2 <= w[1].f2 {
            return Err(invalid_input(format!(
                "objective vectors must be mutually non-dominated, got {} before {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Hypervolume contribution of each member:
/// `(f1[i] - f1[i-1]) * (f2[i] - f2[i+1])`, with `r1` standing in for the
/// left neighbour of the first member and `r2` for the right neighbour of
/// the last.
pub fn hvc_scores(sorted: &[ObjectiveVector], reference: ReferencePoint) -> Result<Vec<DiversityScore>> {
    check_sorted(sorted)?;
    if let (Some(first), Some(last)) = (sorted.first(), sorted.last()) {
        if reference.r1 >= i64::from(first.f1) || reference.r2 >= i64::from(last.f2) {
            return Err(invalid_input(format!(
                "reference point {reference} must be strictly dominated by every member"
            )));
        }
        if !contributions_exact(i64::from(last.f1), i64::from(first.f2), reference) {
            return Err(invalid_input(format!("reference point {reference} is too far from the population")));
        }
    }
    let mut out = Vec::with_capacity(sorted.len());
    hvc_into(sorted, reference, &mut out);
    Ok(out)
}

/// Whether every contribution of points with `f1 <= max_f1` and
/// `f2 <= max_f2` is an integer below 2^53, so it converts to `f64` exactly.
pub(crate) fn contributions_exact(max_f1: i64, max_f2: i64, reference: ReferencePoint) -> bool {
    let w = i128::from(max_f1) - i128::from(reference.r1);
    let h = i128::from(max_f2) - i128::from(reference.r2);
    w * h < 1 << 53
}

fn hvc_into(sorted: &[ObjectiveVector], reference: ReferencePoint, out: &mut Vec<DiversityScore>) {
    out.clear();
    let k = sorted.len();
    for i in 0..k {
        let left = if i == 0 { reference.r1 } else { i64::from(sorted[i - 1].f1) };
        let right = if i + 1 == k { reference.r2 } else { i64::from(sorted[i + 1].f2) };
        let width = i64::from(sorted[i].f1) - left;
        let height = i64::from(sorted[i].f2) - right;
        let area = width * height;
        debug_assert!(area > 0 && area < (1 << 53));
        out.push(DiversityScore::Finite(area as f64));
    }
}

/// Exact area dominated by `points` and bounded below-left by `reference`.
///
/// Points that do not strictly dominate the reference point add nothing.
pub fn hypervolume(points: &[ObjectiveVector], reference: ReferencePoint) -> u128 {
    let (r1, r2) = (i128::from(reference.r1), i128::from(reference.r2));
    let mut pts: Vec<(i128, i128)> =
        points.iter().map(|p| (i128::from(p.f1), i128::from(p.f2))).filter(|&(a, b)| a > r1 && b > r2).collect();
    // Sweep from the largest f1 down, adding the strip each point raises.
    pts.sort_unstable_by(|a, b| b.cmp(a));
    let mut height = r2;
    let mut area = 0i128;
    for (f1, f2) in pts {
        if f2 > height {
            area += (f1 - r1) * (f2 - height);
            height = f2;
        }
    }
    area as u128
}

/// Crowding distance of each member of a single non-dominated front.
///
/// Per objective the members are sorted ascending, the first and last get
/// an infinite distance, and every other member adds the normalised gap
/// between its two neighbours. An objective whose range is zero adds
/// nothing (this only happens for a single member).
pub fn cdc_scores(sorted: &[ObjectiveVector]) -> Vec<DiversityScore> {
    crowding_distance(sorted, [0, 1])
}

fn objective(v: &ObjectiveVector, m: usize) -> i64 {
    i64::from(if m == 0 { v.f1 } else { v.f2 })
}

/// Crowding distance of `points` in any order, processing the objectives
/// in `order` (`[0, 1]` or `[1, 0]`).
pub fn crowding_distance(points: &[ObjectiveVector], order: [usize; 2]) -> Vec<DiversityScore> {
    let k = points.len();
    let ranges: [i64; 2] = [0, 1].map(|m| {
        let lo = points.iter().map(|p| objective(p, m)).min().unwrap_or(0);
        let hi = points.iter().map(|p| objective(p, m)).max().unwrap_or(0);
        hi - lo
    });
    let denom: i64 = ranges.iter().filter(|&&r| r > 0).product();
    let mut numer = vec![0i64; k];
    let mut infinite = vec![false; k];
    let mut idx: Vec<usize> = (0..k).collect();
    for m in order {
        idx.sort_by_key(|&i| objective(&points[i], m));
        if let (Some(&first), Some(&last)) = (idx.first(), idx.last()) {
            infinite[first] = true;
            infinite[last] = true;
        }
        if ranges[m] == 0 {
            continue;
        }
        let scale = denom / ranges[m];
        for j in 1..k.saturating_sub(1) {
            let gap = objective(&points[idx[j + 1]], m) - objective(&points[idx[j - 1]], m);
            numer[idx[j]] += gap * scale;
        }
    }
    (0..k)
        .map(|i| {
            if infinite[i] {
                DiversityScore::Infinite
            } else {
                DiversityScore::Finite(numer[i] as f64 / denom as f64)
            }
        })
        .collect()
}

/// Crowding distance for input already known to be ascending in `f1` and
/// descending in `f2`; same values as [`cdc_scores`] without the sorts.
fn cdc_sorted_into(sorted: &[ObjectiveVector], out: &mut Vec<DiversityScore>) {
    out.clear();
    let k = sorted.len();
    if k <= 2 {
        out.extend(std::iter::repeat_n(DiversityScore::Infinite, k));
        return;
    }
    let r1 = i64::from(sorted[k - 1].f1) - i64::from(sorted[0].f1);
    let r2 = i64::from(sorted[0].f2) - i64::from(sorted[k - 1].f2);
    let denom = (r1 * r2) as f64;
    out.push(DiversityScore::Infinite);
    for i in 1..k - 1 {
        let d1 = i64::from(sorted[i + 1].f1) - i64::from(sorted[i - 1].f1);
        let d2 = i64::from(sorted[i - 1].f2) - i64::from(sorted[i + 1].f2);
        out.push(DiversityScore::Finite((d1 * r2 + d2 * r1) as f64 / denom));
    }
    out.push(DiversityScore::Infinite);
}

/// Scores for a population sorted by `f1`, resolving the reference point
/// against the problem size.
pub fn scores(metric: DiversityMetric, population: &[Individual], problem: &Problem) -> Result<Vec<DiversityScore>> {
    let objs: Vec<ObjectiveVector> = population.iter().map(|m| m.objectives).collect();
    match metric {
        DiversityMetric::Hvc(policy) => hvc_scores(&objs, policy.resolve(problem.n)),
        DiversityMetric::Cdc => {
            check_sorted(&objs)?;
            Ok(cdc_scores(&objs))
        }
    }
}

/// Allocation-free form of [`scores`] for the generation loop. The caller
/// guarantees sortedness and a reference point below every member.
pub(crate) fn scores_into(
    metric: DiversityMetric,
    sorted: &[ObjectiveVector],
    n: usize,
    out: &mut Vec<DiversityScore>,
) {
    debug_assert!(check_sorted(sorted).is_ok());
    match metric {
        DiversityMetric::Hvc(policy) => hvc_into(sorted, policy.resolve(n), out),
        DiversityMetric::Cdc => cdc_sorted_into(sorted, out),
    }
}
