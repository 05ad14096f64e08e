use crate::dominance::dominates;
use crate::types::Individual;

/// Fronts `F_1 ... F_c` as index sets into a population, best front first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrontPartition {
    pub fronts: Vec<Vec<usize>>,
}

impl FrontPartition {
    pub fn len(&self) -> usize {
        self.fronts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fronts.is_empty()
    }

    /// Total number of indexed individuals.
    pub fn size(&self) -> usize {
        self.fronts.iter().map(Vec::len).sum()
    }
}

/// Deb's fast non-dominated sort. Sets every member's 1-based `rank` and
/// clears its crowding distance.
///
/// Panics on an unevaluated member.
pub fn fast_nondominated_sort(members: &mut [Individual]) -> FrontPartition {
    let n = members.len();
    let objectives: Vec<&[f64]> = members.iter().map(|m| m.objectives().as_slice()).collect();

    let mut dominated_by_count = vec![0usize; n];
    let mut dominates_set: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates(objectives[i], objectives[j]) {
                dominates_set[i].push(j);
                dominated_by_count[j] += 1;
            } else if dominates(objectives[j], objectives[i]) {
                dominates_set[j].push(i);
                dominated_by_count[i] += 1;
            }
        }
    }

    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            for &q in &dominates_set[p] {
                dominated_by_count[q] -= 1;
                if dominated_by_count[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }

    for (k, front) in fronts.iter().enumerate() {
        for &i in front {
            members[i].rank = Some(k + 1);
            members[i].crowding = None;
        }
    }
    FrontPartition { fronts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{DecisionVector, ObjectiveVector};

    fn evaluated(objs: &[[f64; 2]]) -> Vec<Individual> {
        objs.iter()
            .enumerate()
            .map(|(i, f)| {
                let mut ind = Individual::new(i as u64, DecisionVector::new(vec![]));
                ind.f = Some(ObjectiveVector::from(*f));
                ind
            })
            .collect()
    }

    #[test]
    fn singleton() {
        let mut m = evaluated(&[[1.0, 1.0]]);
        assert_eq!(fast_nondominated_sort(&mut m).fronts, vec![vec![0]]);
        assert_eq!(m[0].rank, Some(1));
    }

    #[test]
    fn dominated_point_lands_in_second_front() {
        let mut m = evaluated(&[[1.0, 2.0], [2.0, 1.0], [2.0, 2.0]]);
        let p = fast_nondominated_sort(&mut m);
        assert_eq!(p.fronts, vec![vec![0, 1], vec![2]]);
        assert_eq!(m[2].rank, Some(2));
    }

    #[test]
    #[should_panic(expected = "not been evaluated")]
    fn unevaluated_member_is_rejected() {
        let mut m = vec![Individual::new(0, DecisionVector::new(vec![0.0]))];
        fast_nondominated_sort(&mut m);
    }
}
