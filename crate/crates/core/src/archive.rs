//! The population as a mutually non-dominated set sorted by the first objective.

use crate::error::{invalid_input, Result};
use crate::fitness::{BitString, ObjectiveVector, Problem, ProblemKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Individual {
    pub genotype: BitString,
    pub objectives: ObjectiveVector,
}

impl Individual {
    pub fn evaluate(problem: &Problem, genotype: BitString) -> Result<Self> {
        let objectives = problem.evaluate(&genotype)?;
        Ok(Self { genotype, objectives })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InsertOutcome {
    pub accepted: bool,
    pub removed_count: usize,
}

/// Members are kept strictly ascending in `f1`, which for a mutually
/// non-dominated set forces `f2` strictly descending.
#[derive(Clone, Debug)]
pub struct Archive {
    problem: Problem,
    members: Vec<Individual>,
    front_count: usize,
}

impl Archive {
    pub fn new(problem: Problem) -> Self {
        Self { problem, members: Vec::with_capacity(problem.n + 1), front_count: 0 }
    }

    pub fn with_initial(problem: Problem, first: Individual) -> Self {
        let mut a = Self::new(problem);
        a.try_insert(first);
        a
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn objectives(&self) -> impl Iterator<Item = ObjectiveVector> + '_ {
        self.members.iter().map(|m| m.objectives)
    }

    /// Insert `s` unless some member strictly dominates it; on acceptance
    /// every member weakly dominated by `s` is removed, including a member
    /// with an equal objective vector.
    pub fn try_insert(&mut self, s: Individual) -> InsertOutcome {
        let v = s.objectives;
        debug_assert!(v.f1 as usize <= self.problem.n && v.f2 as usize <= self.problem.n);
        // First member with f1 >= v.f1 carries the largest f2 of that suffix.
        let pos = self.members.partition_point(|m| m.objectives.f1 < v.f1);
        if let Some(m) = self.members.get(pos) {
            if m.objectives.dominates(v) {
                return InsertOutcome { accepted: false, removed_count: 0 };
            }
        }
        // Weakly dominated members: f1 <= v.f1 and f2 <= v.f2, a contiguous run.
        let end = self.members.partition_point(|m| m.objectives.f1 <= v.f1);
        let start = self.members.partition_point(|m| m.objectives.f2 > v.f2).min(end);
        let removed_count = end - start;
        let removed_front =
            self.members[start..end].iter().filter(|m| self.problem.is_front_vector(m.objectives)).count();
        self.front_count -= removed_front;
        if self.problem.is_front_vector(v) {
            self.front_count += 1;
        }
        if removed_count == 1 {
            self.members[start] = s;
        } else {
            self.members.drain(start..end);
            self.members.insert(start, s);
        }
        InsertOutcome { accepted: true, removed_count }
    }

    /// Number of distinct Pareto-front vectors present.
    pub fn front_coverage(&self) -> usize {
        self.front_count
    }

    pub fn covers_full_front(&self) -> bool {
        self.front_count == self.problem.front_size()
    }

    /// Front indices `i` (members with vector `(i, n - i)`), ascending.
    pub fn covered_front_indices(&self) -> Vec<usize> {
        self.members
            .iter()
            .filter(|m| self.problem.is_front_vector(m.objectives))
            .map(|m| m.objectives.f1 as usize)
            .collect()
    }

    /// Front indices missing strictly between the lowest and highest
    /// covered front index.
    pub fn gap_positions(&self) -> Vec<usize> {
        gaps_between(&self.covered_front_indices())
    }

    /// Members with the largest L-dominant attribute, in `f1` order.
    pub fn max_l_subset(&self) -> Result<Vec<&Individual>> {
        let mut idx = Vec::new();
        self.max_l_indices(&mut idx)?;
        Ok(idx.into_iter().map(|i| &self.members[i]).collect())
    }

    /// Index form of [`Archive::max_l_subset`], writing into `out`.
    ///
    /// On LOTZ the objectives are exactly the leading ones and trailing
    /// zeros, so L is read off the cached objective vector.
    pub fn max_l_indices(&self, out: &mut Vec<usize>) -> Result<()> {
        if self.problem.kind != ProblemKind::Lotz {
            return Err(invalid_input("the L-dominant attribute is defined for LOTZ only"));
        }
        out.clear();
        let l = |m: &Individual| m.objectives.f1 + m.objectives.f2;
        let Some(best) = self.members.iter().map(l).max() else {
            return Ok(());
        };
        out.extend(self.members.iter().enumerate().filter(|(_, m)| l(m) == best).map(|(i, _)| i));
        Ok(())
    }
}

/// Missing integers strictly between the first and last entry of an
/// ascending list.
pub fn gaps_between(sorted: &[usize]) -> Vec<usize> {
    sorted.windows(2).flat_map(|w| (w[0] + 1)..w[1]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitness::l_attribute;

    fn ov(f1: u32, f2: u32) -> ObjectiveVector {
        ObjectiveVector::new(f1, f2)
    }

    /// An individual with a placeholder genotype; only objectives matter here.
    fn ind(n: usize, f1: u32, f2: u32) -> Individual {
        Individual { genotype: BitString::zeros(n), objectives: ov(f1, f2) }
    }

    fn vectors(a: &Archive) -> Vec<ObjectiveVector> {
        a.objectives().collect()
    }

    #[test]
    fn incomparable_pair_coexists() {
        let mut a = Archive::with_initial(Problem::one_min_max(4), ind(4, 2, 2));
        let out = a.try_insert(ind(4, 3, 1));
        assert_eq!(out, InsertOutcome { accepted: true, removed_count: 0 });
        assert_eq!(vectors(&a), vec![ov(2, 2), ov(3, 1)]);
    }

    #[test]
    fn dominating_point_replaces() {
        let mut a = Archive::with_initial(Problem::lotz(5), ind(5, 2, 2));
        let out = a.try_insert(ind(5, 3, 2));
        assert_eq!(out, InsertOutcome { accepted: true, removed_count: 1 });
        assert_eq!(vectors(&a), vec![ov(3, 2)]);
    }

    #[test]
    fn dominated_point_rejected() {
        let mut a = Archive::with_initial(Problem::lotz(5), ind(5, 3, 2));
        let out = a.try_insert(ind(5, 2, 2));
        assert_eq!(out, InsertOutcome { accepted: false, removed_count: 0 });
        assert_eq!(vectors(&a), vec![ov(3, 2)]);
    }

    #[test]
    fn equal_vector_replaces_incumbent() {
        let p = Problem::one_min_max(4);
        let a_geno: BitString = "0011".parse().unwrap();
        let b_geno: BitString = "1100".parse().unwrap();
        let mut a = Archive::with_initial(p, Individual::evaluate(&p, a_geno).unwrap());
        let out = a.try_insert(Individual::evaluate(&p, b_geno.clone()).unwrap());
        assert_eq!(out, InsertOutcome { accepted: true, removed_count: 1 });
        assert_eq!(a.len(), 1);
        assert_eq!(a.members()[0].genotype, b_geno);
    }

    #[test]
    fn removes_a_run_of_dominated_members() {
        let mut a = Archive::new(Problem::lotz(10));
        for (f1, f2) in [(0, 5), (1, 4), (2, 3), (4, 1), (6, 0)] {
            assert!(a.try_insert(ind(10, f1, f2)).accepted);
        }
        let out = a.try_insert(ind(10, 3, 5));
        assert_eq!(out.removed_count, 3);
        assert_eq!(vectors(&a), vec![ov(3, 5), ov(4, 1), ov(6, 0)]);
    }

    #[test]
    fn full_front_coverage() {
        let mut a = Archive::new(Problem::one_min_max(2));
        for (f1, f2) in [(0, 2), (2, 0)] {
            a.try_insert(ind(2, f1, f2));
        }
        assert!(!a.covers_full_front());
        a.try_insert(ind(2, 1, 1));
        assert!(a.covers_full_front());

        let mut l = Archive::new(Problem::lotz(2));
        for (f1, f2) in [(0, 2), (1, 1), (2, 0)] {
            l.try_insert(ind(2, f1, f2));
        }
        assert!(l.covers_full_front());
        assert_eq!(l.len(), 3);
    }

    #[test]
    fn off_front_members_do_not_count() {
        let mut a = Archive::new(Problem::lotz(4));
        a.try_insert(ind(4, 1, 1));
        a.try_insert(ind(4, 0, 3));
        assert_eq!(a.front_coverage(), 0);
        a.try_insert(ind(4, 1, 3));
        assert_eq!(a.front_coverage(), 1);
        assert_eq!(vectors(&a), vec![ov(1, 3)]);
    }

    #[test]
    fn gap_examples() {
        assert_eq!(gaps_between(&[0, 1, 4, 5]), vec![2, 3]);
        assert!(gaps_between(&[0, 1, 2]).is_empty());
        assert!(gaps_between(&[3]).is_empty());
        assert!(gaps_between(&[]).is_empty());

        let mut a = Archive::new(Problem::lotz(6));
        for i in [0u32, 1, 4, 5] {
            a.try_insert(ind(6, i, 6 - i));
        }
        assert_eq!(a.gap_positions(), vec![2, 3]);
    }

    #[test]
    fn max_l_subset_examples() {
        let p = Problem::lotz(7);
        let mut a = Archive::new(p);
        // L values 3, 5, 5 with vectors (1,2), (0,5), (5,0)
        for g in ["1000100", "0100000", "1111101"] {
            let x: BitString = g.parse().unwrap();
            assert!(a.try_insert(Individual::evaluate(&p, x).unwrap()).accepted);
        }
        assert_eq!(a.len(), 3);
        let ls: Vec<usize> = a.members().iter().map(|m| l_attribute(&m.genotype)).collect();
        let best = *ls.iter().max().unwrap();
        let sub = a.max_l_subset().unwrap();
        assert!(!sub.is_empty());
        assert!(sub.iter().all(|m| l_attribute(&m.genotype) == best));
        assert_eq!(sub.len(), 2);
        assert_eq!(best, 5);

        let single = Archive::with_initial(p, Individual::evaluate(&p, "1101000".parse().unwrap()).unwrap());
        assert_eq!(single.max_l_subset().unwrap().len(), 1);

        let mut front = Archive::new(p);
        for i in [0, 2, 5] {
            front.try_insert(Individual::evaluate(&p, BitString::front_point(7, i)).unwrap());
        }
        assert_eq!(front.max_l_subset().unwrap().len(), 3);
    }

    #[test]
    fn max_l_subset_rejects_oneminmax() {
        let a = Archive::with_initial(Problem::one_min_max(3), ind(3, 1, 2));
        assert!(a.max_l_subset().is_err());
    }
}
