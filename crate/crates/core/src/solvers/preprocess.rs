use crate::coverage::CoverageStructure;

/// Coverage restricted to the surviving facilities.
#[derive(Debug, Clone, PartialEq)]
pub struct Preprocessed {
    pub coverage: CoverageStructure,
    /// `original_ids[k]` is the original id of reduced facility `k`.
    pub original_ids: Vec<usize>,
}

impl Preprocessed {
    pub fn removed(&self, original_m: usize) -> usize {
        original_m - self.original_ids.len()
    }
}

/// Drops every facility whose coverage set is contained in another
/// facility's set. Among identical sets the lowest id survives.
///
/// Any selection using a dropped facility can swap it for its dominator
/// without losing coverage, so the optimal objective is unchanged.
pub fn preprocess(coverage: &CoverageStructure) -> Preprocessed {
    let sets = &coverage.facility_sets;
    let m = sets.len();
    let original_ids: Vec<usize> = (0..m)
        .filter(|&j| {
            !(0..m).any(|k| {
                k != j && sets[j].is_subset(&sets[k]) && (k < j || !sets[k].is_subset(&sets[j]))
            })
        })
        .collect();
    let reduced = original_ids.iter().map(|&j| sets[j].clone()).collect();
    Preprocessed {
        coverage: CoverageStructure::from_sets(coverage.n(), reduced, coverage.total_weight),
        original_ids,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BudgetMode;
    use crate::solvers::fixtures::with_sets;

    fn survivors(sets: &[&[usize]]) -> Vec<usize> {
        let (_, cov) = with_sets(&[1.0; 4], sets, 1, BudgetMode::AtMost);
        preprocess(&cov).original_ids
    }

    #[test]
    fn duplicates_merge_to_lowest_id() {
        assert_eq!(survivors(&[&[0, 1], &[0, 1]]), vec![0]);
        assert_eq!(survivors(&[&[2], &[0, 1], &[0, 1], &[0, 1]]), vec![0, 1]);
    }

    #[test]
    fn strict_subsets_are_dropped() {
        assert_eq!(survivors(&[&[0], &[0, 1]]), vec![1]);
        assert_eq!(survivors(&[&[], &[3]]), vec![1]);
    }

    #[test]
    fn incomparable_sets_survive() {
        assert_eq!(survivors(&[&[0, 1], &[1, 2]]), vec![0, 1]);
    }

    #[test]
    fn all_empty_keeps_one() {
        assert_eq!(survivors(&[&[], &[], &[]]), vec![0]);
    }

    #[test]
    fn neighbor_lists_use_reduced_ids() {
        let (_, cov) = with_sets(&[1.0; 4], &[&[0], &[0, 1], &[2, 3]], 1, BudgetMode::AtMost);
        let p = preprocess(&cov);
        assert_eq!(p.original_ids, vec![1, 2]);
        assert_eq!(p.coverage.demand_neighbors, vec![vec![0], vec![0], vec![1], vec![1]]);
        assert_eq!(p.removed(3), 1);
    }
}
