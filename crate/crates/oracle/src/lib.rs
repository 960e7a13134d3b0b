//! Brute-force reference implementations for testing.
//!
//! Nothing here shares code with the library under test: genotypes are
//! `Vec<u8>` of 0/1, objective vectors are `(i64, i64)` tuples and scores
//! are plain `f64` with `f64::INFINITY` for boundary points. Everything is
//! exponential or quadratic on purpose.

use std::collections::{BTreeSet, HashSet};

pub type Point = (i64, i64);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bench {
    OneMinMax,
    Lotz,
}

pub fn evaluate(bench: Bench, x: &[u8]) -> Point {
    match bench {
        Bench::OneMinMax => {
            let ones = x.iter().filter(|&&b| b == 1).count() as i64;
            (ones, x.len() as i64 - ones)
        }
        Bench::Lotz => {
            let lo = x.iter().take_while(|&&b| b == 1).count() as i64;
            let tz = x.iter().rev().take_while(|&&b| b == 0).count() as i64;
            (lo, tz)
        }
    }
}

pub fn dominates(a: Point, b: Point) -> bool {
    a.0 >= b.0 && a.1 >= b.1 && a != b
}

/// All genotypes of length `n`, in counting order with gene 0 as the
/// least significant bit.
pub fn all_genotypes(n: usize) -> impl Iterator<Item = Vec<u8>> {
    assert!(n <= 20, "enumeration is exponential");
    (0u32..1 << n).map(move |m| (0..n).map(|i| ((m >> i) & 1) as u8).collect())
}

/// Pareto set and front of a benchmark found by exhaustive search.
#[derive(Clone, Debug)]
pub struct FrontEnumeration {
    pub bench: Bench,
    pub n: usize,
    pub pareto_set: Vec<Vec<u8>>,
    lookup: HashSet<Vec<u8>>,
    /// Sorted by ascending first objective.
    pub front: Vec<Point>,
}

impl FrontEnumeration {
    pub fn new(bench: Bench, n: usize) -> Self {
        assert!((1..=14).contains(&n));
        let all: Vec<(Vec<u8>, Point)> = all_genotypes(n)
            .map(|x| {
                let v = evaluate(bench, &x);
                (x, v)
            })
            .collect();
        let vectors: Vec<Point> = all.iter().map(|(_, v)| *v).collect::<BTreeSet<_>>().into_iter().collect();
        let pareto_set: Vec<Vec<u8>> =
            all.iter().filter(|(_, v)| !vectors.iter().any(|w| dominates(*w, *v))).map(|(x, _)| x.clone()).collect();
        let front: BTreeSet<Point> = pareto_set.iter().map(|x| evaluate(bench, x)).collect();
        Self { bench, n, lookup: pareto_set.iter().cloned().collect(), pareto_set, front: front.into_iter().collect() }
    }

    pub fn is_pareto_optimal(&self, x: &[u8]) -> bool {
        self.lookup.contains(x)
    }
}

/// The distinct non-dominated vectors among `points`, ascending in the
/// first objective.
pub fn nondominated(points: &[Point]) -> Vec<Point> {
    let set: BTreeSet<Point> = points.iter().copied().filter(|&p| !points.iter().any(|&q| dominates(q, p))).collect();
    set.into_iter().collect()
}

/// Sequential archive semantics: a candidate is rejected when a member
/// strictly dominates it; otherwise it enters and every member it weakly
/// dominates leaves. Returns the surviving vectors, sorted.
pub fn replay_archive(sequence: &[Point]) -> Vec<Point> {
    let mut members: Vec<Point> = Vec::new();
    for &s in sequence {
        if members.iter().any(|&m| dominates(m, s)) {
            continue;
        }
        members.retain(|&m| !(s.0 >= m.0 && s.1 >= m.1));
        members.push(s);
    }
    members.sort();
    members
}

/// Number of unit cells of the integer grid covered by the union of the
/// boxes `[r, p]`.
pub fn grid_hypervolume(points: &[Point], r: Point) -> i64 {
    let (Some(max_x), Some(max_y)) = (points.iter().map(|p| p.0).max(), points.iter().map(|p| p.1).max()) else {
        return 0;
    };
    let mut count = 0;
    for x in r.0..max_x {
        for y in r.1..max_y {
            if points.iter().any(|p| x < p.0 && y < p.1) {
                count += 1;
            }
        }
    }
    count
}

/// `Ih(P) − Ih(P \ {x})` for every member, by grid counting.
pub fn hvc_by_removal(points: &[Point], r: Point) -> Vec<i64> {
    let total = grid_hypervolume(points, r);
    (0..points.len())
        .map(|i| {
            let rest: Vec<Point> = points.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &p)| p).collect();
            total - grid_hypervolume(&rest, r)
        })
        .collect()
}

/// Crowding distance as in NSGA-II: per objective, sort members, give the
/// two ends infinity and the rest the normalised gap between neighbours.
/// Equal values are ordered by index in both sorts.
pub fn crowding_distance(points: &[Point]) -> Vec<f64> {
    let k = points.len();
    let mut d = vec![0.0; k];
    if k == 0 {
        return d;
    }
    for obj in 0..2 {
        let get = |i: usize| if obj == 0 { points[i].0 } else { points[i].1 };
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&i| (get(i), i));
        let lo = get(order[0]);
        let hi = get(order[k - 1]);
        d[order[0]] = f64::INFINITY;
        d[order[k - 1]] = f64::INFINITY;
        if hi == lo {
            continue;
        }
        for w in 1..k.saturating_sub(1) {
            let gap = (get(order[w + 1]) - get(order[w - 1])) as f64;
            d[order[w]] += gap / (hi - lo) as f64;
        }
    }
    d
}

/// Good/bad labels: a member is good when flipping one of its bits leads
/// to a Pareto-optimal genotype whose vector no member has.
pub fn classify_good_bad(front: &FrontEnumeration, population: &[Vec<u8>]) -> Vec<bool> {
    let covered: BTreeSet<Point> = population.iter().map(|x| evaluate(front.bench, x)).collect();
    population
        .iter()
        .map(|x| {
            (0..x.len()).any(|i| {
                let mut y = x.clone();
                y[i] ^= 1;
                front.is_pareto_optimal(&y) && !covered.contains(&evaluate(front.bench, &y))
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Uniform,
    Exponential,
    PowerLaw,
    Harmonic,
    Tournament,
    Hdc,
    Nmuar,
}

pub const ALL_SCHEMES: [Scheme; 7] = [
    Scheme::Uniform,
    Scheme::Exponential,
    Scheme::PowerLaw,
    Scheme::Harmonic,
    Scheme::Tournament,
    Scheme::Hdc,
    Scheme::Nmuar,
];

fn rank_weights(scheme: Scheme, mu: usize) -> Vec<f64> {
    let w: Vec<f64> = (1..=mu)
        .map(|i| {
            let i = i as f64;
            match scheme {
                Scheme::Exponential => 0.5f64.powf(i),
                Scheme::PowerLaw => i.powi(-2),
                Scheme::Harmonic => i.recip(),
                _ => unreachable!(),
            }
        })
        .collect();
    let total: f64 = w.iter().sum();
    w.iter().map(|x| x / total).collect()
}

/// Probability that each index is chosen as parent given the scores.
/// Ties are broken uniformly at random. Tournament draws `μ` indices with
/// replacement and returns one of the highest-scoring draws uniformly; for
/// `μ ≤ 6` every draw sequence is enumerated, above that the order
/// statistic formula is used.
pub fn exact_selection_distribution(scheme: Scheme, scores: &[f64]) -> Vec<f64> {
    let mu = scores.len();
    assert!((1..=12).contains(&mu));
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let uniform_over = |pred: &dyn Fn(f64) -> bool| {
        let c = scores.iter().filter(|&&s| pred(s)).count() as f64;
        scores.iter().map(|&s| if pred(s) { 1.0 / c } else { 0.0 }).collect::<Vec<f64>>()
    };
    match scheme {
        Scheme::Uniform => vec![1.0 / mu as f64; mu],
        Scheme::Hdc => uniform_over(&|s| s == max),
        Scheme::Nmuar if max == min => vec![1.0 / mu as f64; mu],
        Scheme::Nmuar => uniform_over(&|s| s > min),
        Scheme::Exponential | Scheme::PowerLaw | Scheme::Harmonic => {
            let p = rank_weights(scheme, mu);
            scores
                .iter()
                .map(|&s| {
                    // Ranks occupied by this tie class are higher..higher+size.
                    let higher = scores.iter().filter(|&&t| t > s).count();
                    let size = scores.iter().filter(|&&t| t == s).count();
                    p[higher..higher + size].iter().sum::<f64>() / size as f64
                })
                .collect()
        }
        Scheme::Tournament if mu <= 6 => tournament_enumerated(scores),
        Scheme::Tournament => tournament_order_statistic(scores),
    }
}

pub fn tournament_enumerated(scores: &[f64]) -> Vec<f64> {
    let mu = scores.len();
    let mut prob = vec![0.0; mu];
    let total = mu.pow(mu as u32);
    let weight = 1.0 / total as f64;
    let mut draws = vec![0usize; mu];
    for code in 0..total {
        let mut c = code;
        for d in draws.iter_mut() {
            *d = c % mu;
            c /= mu;
        }
        let best = draws.iter().map(|&i| scores[i]).fold(f64::NEG_INFINITY, f64::max);
        let winners: Vec<usize> = draws.iter().copied().filter(|&i| scores[i] == best).collect();
        for &w in &winners {
            prob[w] += weight / winners.len() as f64;
        }
    }
    prob
}

pub fn tournament_order_statistic(scores: &[f64]) -> Vec<f64> {
    let mu = scores.len() as f64;
    scores
        .iter()
        .map(|&s| {
            let h = scores.iter().filter(|&&t| t > s).count() as f64;
            let c = scores.iter().filter(|&&t| t == s).count() as f64;
            let class = (1.0 - h / mu).powf(mu) - (1.0 - (h + c) / mu).powf(mu);
            class / c
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn grid_examples() {
        assert_eq!(grid_hypervolume(&[(2, 2)], (-1, -1)), 9);
        assert_eq!(grid_hypervolume(&[(0, 4), (4, 0)], (-1, -1)), 9);
        let front: Vec<Point> = (0..=4).map(|i| (i, 4 - i)).collect();
        // Column heights 5, 4, 3, 2, 1.
        assert_eq!(grid_hypervolume(&front, (-1, -1)), 15);
        assert_eq!(grid_hypervolume(&[], (-1, -1)), 0);
    }

    #[test]
    fn fronts_have_n_plus_one_points() {
        for n in 1..=8 {
            for bench in [Bench::OneMinMax, Bench::Lotz] {
                let f = FrontEnumeration::new(bench, n);
                assert_eq!(f.front.len(), n + 1);
                assert!(f.front.iter().all(|p| p.0 + p.1 == n as i64));
            }
            let lotz = FrontEnumeration::new(Bench::Lotz, n);
            assert_eq!(lotz.pareto_set.len(), n + 1);
            for x in &lotz.pareto_set {
                let i = x.iter().take_while(|&&b| b == 1).count();
                assert!(x[i..].iter().all(|&b| b == 0));
            }
        }
    }

    #[test]
    fn good_bad_examples() {
        let omm = FrontEnumeration::new(Bench::OneMinMax, 4);
        assert_eq!(classify_good_bad(&omm, &[vec![1, 1, 0, 0]]), vec![true]);
        let full: Vec<Vec<u8>> = (0..=4).map(|i| (0..4).map(|j| (j < i) as u8).collect()).collect();
        assert!(classify_good_bad(&omm, &full).iter().all(|&g| !g));
        let lotz = FrontEnumeration::new(Bench::Lotz, 4);
        assert_eq!(classify_good_bad(&lotz, &[vec![1, 1, 1, 1], vec![1, 1, 1, 0]]), vec![false, true]);
    }

    #[test]
    fn selection_examples() {
        assert!(close(&exact_selection_distribution(Scheme::Hdc, &[1.0, 7.0, 7.0]), &[0.0, 0.5, 0.5]));
        assert!(close(&exact_selection_distribution(Scheme::Tournament, &[1.0, 2.0]), &[0.25, 0.75]));
        assert!(close(&exact_selection_distribution(Scheme::Nmuar, &[1.0, 1.0, 5.0, 9.0]), &[0.0, 0.0, 0.5, 0.5]));
        assert!(close(&exact_selection_distribution(Scheme::Nmuar, &[3.0, 3.0]), &[0.5, 0.5]));
    }

    #[test]
    fn tournament_methods_agree() {
        let cases: [&[f64]; 4] = [
            &[1.0, 2.0, 3.0],
            &[5.0, 5.0, 1.0, f64::INFINITY],
            &[0.0, 0.0, 0.0, 0.0, 0.0],
            &[2.0, 1.0, 2.0, 3.0, 3.0, f64::INFINITY],
        ];
        for s in cases {
            assert!(close(&tournament_enumerated(s), &tournament_order_statistic(s)), "{s:?}");
        }
    }

    #[test]
    fn distributions_sum_to_one() {
        let s = [4.0, 1.0, 4.0, f64::INFINITY, 0.0, 2.0, 2.0, 9.0];
        for scheme in ALL_SCHEMES {
            for mu in 1..=s.len() {
                let p = exact_selection_distribution(scheme, &s[..mu]);
                assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12, "{scheme:?} {mu}");
            }
        }
    }

    #[test]
    fn replay_matches_filter_on_permutations() {
        let pts = [(0, 3), (1, 1), (2, 1), (1, 2), (3, 0), (2, 1)];
        assert_eq!(replay_archive(&pts), nondominated(&pts));
        let mut rev = pts;
        rev.reverse();
        assert_eq!(replay_archive(&rev), nondominated(&pts));
    }

    #[test]
    fn crowding_distance_boundary_and_interior() {
        let d = crowding_distance(&[(0, 4), (2, 2), (4, 0)]);
        assert_eq!(d[0], f64::INFINITY);
        assert_eq!(d[2], f64::INFINITY);
        assert!((d[1] - 2.0).abs() < 1e-12);
    }
}
