use divsel::archive::{Archive, Individual};
use divsel::diversity::{crowding_distance, hvc_scores};
use divsel::engine::{run, Run};
use divsel::fitness::{compare, is_good, l_attribute, DominanceRelation};
use divsel::selection::{rank_probabilities, select_parent};
use divsel::{
    AlgorithmKind, BitString, DiversityMetric, DiversityScore, ObjectiveVector, Outcome, Problem, ProblemKind,
    RefPolicy, ReferencePoint, RunConfig, SelectionScheme,
};
use divsel_oracle as oracle;
use proptest::prelude::*;

fn bits(n: usize) -> impl Strategy<Value = BitString> {
    proptest::collection::vec(any::<bool>(), n).prop_map(|b| BitString::from_bits(&b).unwrap())
}

fn sized_bits() -> impl Strategy<Value = BitString> {
    (1usize..200).prop_flat_map(bits)
}

/// A non-empty subset of front positions `0..=n`, as an ascending list.
fn front_subset() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (1usize..40).prop_flat_map(|n| {
        proptest::collection::btree_set(0..=n, 1..=n + 1).prop_map(move |s| (n, s.into_iter().collect()))
    })
}

fn front_vectors(n: usize, idx: &[usize]) -> Vec<ObjectiveVector> {
    idx.iter().map(|&i| ObjectiveVector::new(i as u32, (n - i) as u32)).collect()
}

fn diversity_favouring_holds(n: usize, idx: &[usize], scores: &[DiversityScore]) -> bool {
    let p = Problem::one_min_max(n);
    let covered = front_vectors(n, idx);
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for (k, &i) in idx.iter().enumerate() {
        if i == 0 || i == n {
            continue;
        }
        let x = BitString::front_point(n, i);
        if is_good(&p, &x, &covered).unwrap() {
            good.push(scores[k]);
        } else {
            bad.push(scores[k]);
        }
    }
    bad.iter().all(|b| good.iter().all(|g| b < g))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn oneminmax_objectives_sum_to_n(x in sized_bits()) {
        let v = Problem::one_min_max(x.len()).evaluate(&x).unwrap();
        prop_assert_eq!((v.f1 + v.f2) as usize, x.len());
    }

    #[test]
    fn lotz_full_l_means_front_shape(x in sized_bits()) {
        let n = x.len();
        let v = Problem::lotz(n).evaluate(&x).unwrap();
        if l_attribute(&x) == n {
            prop_assert_eq!(x, BitString::front_point(n, v.f1 as usize));
        }
    }

    #[test]
    fn oneminmax_vectors_never_dominate(a in 0u32..100, b in 0u32..100) {
        let n = 100;
        let r = compare(ObjectiveVector::new(a, n - a), ObjectiveVector::new(b, n - b));
        if a != b {
            prop_assert_eq!(r, DominanceRelation::Incomparable);
        } else {
            prop_assert_eq!(r, DominanceRelation::Equal);
        }
    }

    #[test]
    fn compare_is_antisymmetric(a in (0u32..9, 0u32..9), b in (0u32..9, 0u32..9)) {
        let (x, y) = (ObjectiveVector::new(a.0, a.1), ObjectiveVector::new(b.0, b.1));
        prop_assert_eq!(compare(x, y), compare(y, x).reversed());
    }

    #[test]
    fn insertion_never_loses_front_coverage(
        n in 1usize..12,
        seq in proptest::collection::vec(any::<u64>(), 1..80),
    ) {
        for p in [Problem::one_min_max(n), Problem::lotz(n)] {
            let mut archive = Archive::new(p);
            let mut covered = Vec::new();
            for m in &seq {
                let b: Vec<bool> = (0..n).map(|i| m >> (i % 64) & 1 == 1).collect();
                archive.try_insert(Individual::evaluate(&p, BitString::from_bits(&b).unwrap()).unwrap());
                let now = archive.covered_front_indices();
                prop_assert!(covered.iter().all(|i| now.contains(i)));
                prop_assert_eq!(now.len(), archive.front_coverage());
                if archive.covers_full_front() {
                    prop_assert_eq!(archive.len(), n + 1);
                }
                covered = now;
            }
        }
    }

    #[test]
    fn cdc_independent_of_objective_order((n, idx) in front_subset()) {
        let set = front_vectors(n, &idx);
        prop_assert_eq!(crowding_distance(&set, [0, 1]), crowding_distance(&set, [1, 0]));
        let mut rev = set.clone();
        rev.reverse();
        let mut back = crowding_distance(&rev, [1, 0]);
        back.reverse();
        prop_assert_eq!(back, crowding_distance(&set, [0, 1]));
    }

    #[test]
    fn bad_interior_points_have_unit_hvc((n, idx) in front_subset(), r in 1i64..5) {
        let set = front_vectors(n, &idx);
        let p = Problem::one_min_max(n);
        let hvc = hvc_scores(&set, ReferencePoint::new(-r, -r)).unwrap();
        for (k, &i) in idx.iter().enumerate() {
            if i == 0 || i == n {
                continue;
            }
            if !is_good(&p, &BitString::front_point(n, i), &set).unwrap() {
                prop_assert_eq!(hvc[k], DiversityScore::Finite(1.0));
            }
        }
    }

    #[test]
    fn diversity_favouring_on_random_fronts((n, idx) in front_subset(), r1 in 1i64..50, r2 in 1i64..50) {
        let set = front_vectors(n, &idx);
        let hvc = hvc_scores(&set, ReferencePoint::new(-r1, -r2)).unwrap();
        prop_assert!(diversity_favouring_holds(n, &idx, &hvc));
        prop_assert!(diversity_favouring_holds(n, &idx, &crowding_distance(&set, [0, 1])));
    }

    #[test]
    fn argmax_schemes_ignore_positive_scaling(
        raw in proptest::collection::vec(0u8..6, 1..10),
        inf in proptest::collection::vec(any::<bool>(), 10),
        k in 0.01f64..100.0,
    ) {
        let scores: Vec<DiversityScore> = raw
            .iter()
            .zip(&inf)
            .map(|(&v, &i)| if i && v == 5 { DiversityScore::Infinite } else { DiversityScore::Finite(v as f64) })
            .collect();
        let scaled: Vec<DiversityScore> = scores.iter().map(|s| s.scaled(k)).collect();
        let as_f64 = |s: &[DiversityScore]| s.iter().map(|d| d.value()).collect::<Vec<f64>>();
        for (ours, theirs) in [(SelectionScheme::Hdc, oracle::Scheme::Hdc), (SelectionScheme::Nmuar, oracle::Scheme::Nmuar)] {
            prop_assert_eq!(
                oracle::exact_selection_distribution(theirs, &as_f64(&scores)),
                oracle::exact_selection_distribution(theirs, &as_f64(&scaled))
            );
            let mut a = divsel::rng::stream(9);
            let mut b = divsel::rng::stream(9);
            for _ in 0..30 {
                prop_assert_eq!(
                    select_parent(ours, scores.len(), &scores, &mut a).unwrap(),
                    select_parent(ours, scaled.len(), &scaled, &mut b).unwrap()
                );
            }
        }
    }
}

/// Exact probability that a good member is selected is at least the
/// smallest of the top three rank probabilities, on every front subset
/// with a good member that does not already cover the front.
#[test]
fn good_member_selection_floor() {
    for n in 2..=9 {
        let p = Problem::one_min_max(n);
        for mask in 1u32..(1 << (n + 1)) - 1 {
            let idx: Vec<usize> = (0..=n).filter(|i| mask >> i & 1 == 1).collect();
            let set = front_vectors(n, &idx);
            let good: Vec<bool> =
                idx.iter().map(|&i| is_good(&p, &BitString::front_point(n, i), &set).unwrap()).collect();
            let mu = idx.len();
            for metric in
                [DiversityMetric::Hvc(RefPolicy::Unit), DiversityMetric::Hvc(RefPolicy::MinusN), DiversityMetric::Cdc]
            {
                let scores: Vec<f64> = match metric {
                    DiversityMetric::Cdc => crowding_distance(&set, [0, 1]),
                    m => hvc_scores(&set, m.reference(n).unwrap()).unwrap(),
                }
                .iter()
                .map(|s| s.value())
                .collect();
                for (scheme, oracle_scheme) in [
                    (SelectionScheme::Exponential, oracle::Scheme::Exponential),
                    (SelectionScheme::PowerLaw, oracle::Scheme::PowerLaw),
                    (SelectionScheme::Harmonic, oracle::Scheme::Harmonic),
                    (SelectionScheme::Tournament, oracle::Scheme::Tournament),
                ] {
                    let dist = oracle::exact_selection_distribution(oracle_scheme, &scores);
                    let p_good: f64 = dist.iter().zip(&good).filter(|(_, &g)| g).map(|(p, _)| p).sum();
                    let top = if scheme == SelectionScheme::Tournament {
                        let distinct: Vec<f64> = (0..mu.min(3))
                            .map(|h| {
                                let m = mu as f64;
                                let h = h as f64;
                                (1.0 - h / m).powf(m) - (1.0 - (h + 1.0) / m).powf(m)
                            })
                            .collect();
                        distinct
                    } else {
                        rank_probabilities(scheme, mu).unwrap().into_iter().take(3).collect()
                    };
                    let floor = top.iter().copied().fold(f64::INFINITY, f64::min);
                    assert!(p_good >= floor - 1e-12, "{scheme:?} {metric:?} {idx:?}: {p_good} < {floor}");
                }
            }
        }
    }
}

#[test]
fn semo_on_lotz_keeps_one_member_until_the_front() {
    for seed in 0..30 {
        let rc = RunConfig::new(Problem::lotz(30), AlgorithmKind::Semo, SelectionScheme::Uniform, None, seed);
        let mut r = Run::new(rc).unwrap();
        while r.archive().front_coverage() == 0 {
            assert_eq!(r.archive().len(), 1);
            r.step();
        }
    }
}

#[test]
fn coverage_is_monotone_and_generations_equal_evaluations() {
    for (kind, algo, scheme, metric) in [
        (ProblemKind::OneMinMax, AlgorithmKind::Gsemo, SelectionScheme::Hdc, Some(DiversityMetric::Cdc)),
        (
            ProblemKind::Lotz,
            AlgorithmKind::Gsemo,
            SelectionScheme::PowerLaw,
            Some(DiversityMetric::Hvc(RefPolicy::Unit)),
        ),
        (ProblemKind::Lotz, AlgorithmKind::ModifiedGsemo, SelectionScheme::Nmuar, Some(DiversityMetric::Cdc)),
        (ProblemKind::OneMinMax, AlgorithmKind::Semo, SelectionScheme::Uniform, None),
    ] {
        let mut rc = RunConfig::new(Problem::new(kind, 25).unwrap(), algo, scheme, metric, 17);
        rc.generation_cap = 20_000;
        let mut r = Run::new(rc.clone()).unwrap();
        let mut covered = r.archive().covered_front_indices();
        let mut steps = 1;
        while !r.archive().covers_full_front() && r.evaluations() < rc.generation_cap {
            r.step();
            steps += 1;
            let now = r.archive().covered_front_indices();
            assert!(covered.iter().all(|i| now.contains(i)));
            covered = now;
        }
        assert_eq!(r.evaluations(), steps);
        let result = run(rc).unwrap();
        assert_eq!(result.generations, steps);
    }
}

#[test]
fn semo_hdc_symmetric_reference_never_stagnates_on_lotz() {
    for r in [RefPolicy::Unit, RefPolicy::MinusN] {
        for seed in 0..20 {
            let rc = RunConfig::new(
                Problem::lotz(40),
                AlgorithmKind::Semo,
                SelectionScheme::Hdc,
                Some(DiversityMetric::Hvc(r)),
                seed,
            );
            assert_eq!(run(rc).unwrap().outcome, Outcome::Success);
        }
    }
}
