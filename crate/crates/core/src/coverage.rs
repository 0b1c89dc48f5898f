//! Coverage sets: which demand points each site reaches within the radius.

use crate::bitset::DemandSet;
use crate::model::{distance, Instance};

/// Absolute slack on the radius so that points exactly on the boundary are
/// covered regardless of floating-point error in the distance.
pub const DISTANCE_TOLERANCE: f64 = 1e-9;

/// The binary coverage relation `a_ij` in both orientations.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageStructure {
    /// `facility_sets[j]` holds the demand points covered by site `j`.
    pub facility_sets: Vec<DemandSet>,
    /// `demand_neighbors[i]` lists, ascending, the sites covering demand `i`.
    pub demand_neighbors: Vec<Vec<usize>>,
    pub total_weight: f64,
}

impl CoverageStructure {
    /// Builds the structure from explicit coverage sets, deriving the
    /// neighbor lists. Useful for tests and for reduced structures.
    pub fn from_sets(n: usize, facility_sets: Vec<DemandSet>, total_weight: f64) -> Self {
        let mut demand_neighbors = vec![Vec::new(); n];
        for (j, set) in facility_sets.iter().enumerate() {
            debug_assert_eq!(set.width(), n);
            for i in set.iter() {
                demand_neighbors[i].push(j);
            }
        }
        CoverageStructure {
            facility_sets,
            demand_neighbors,
            total_weight,
        }
    }

    /// Number of demand points.
    pub fn n(&self) -> usize {
        self.demand_neighbors.len()
    }

    /// Number of facilities.
    pub fn m(&self) -> usize {
        self.facility_sets.len()
    }

    pub fn empty_mask(&self) -> DemandSet {
        DemandSet::new(self.n())
    }

    /// Union of the coverage sets of `facilities`.
    pub fn covered_by<'a, I: IntoIterator<Item = &'a usize>>(&self, facilities: I) -> DemandSet {
        let mut mask = self.empty_mask();
        for &j in facilities {
            mask.union_with(&self.facility_sets[j]);
        }
        mask
    }
}

pub fn build_coverage(instance: &Instance) -> CoverageStructure {
    let n = instance.n();
    let limit = instance.radius() + DISTANCE_TOLERANCE;
    let facility_sets = instance
        .sites()
        .iter()
        .map(|site| {
            let at = site.position();
            DemandSet::from_indices(
                n,
                instance
                    .demand_points()
                    .iter()
                    .filter(|d| distance(d.position(), at) <= limit)
                    .map(|d| d.id),
            )
        })
        .collect();
    CoverageStructure::from_sets(n, facility_sets, instance.total_weight())
}

/// Total weight of the demand points in `mask`.
///
/// Always sums in ascending demand index, so equal masks give bit-identical
/// values no matter how they were assembled.
pub fn coverage_value(mask: &DemandSet, instance: &Instance) -> f64 {
    mask.iter().map(|i| instance.weight(i)).sum()
}
