//! The NSGA-II backbone.

mod crowding;
mod selection;
mod sort;
mod variation;

pub use crowding::crowding_distance;
pub use selection::{
    binary_tournament_index, binary_tournament_select, crowded_order, environmental_selection, mating_pool_indices,
};
pub use sort::{fast_nondominated_sort, FrontPartition};
pub use variation::{polynomial_mutation, reproduce, sbx_crossover, VariationParams};

use crate::types::Individual;

/// Sorts `members` into fronts and assigns crowding distances in one pass.
pub fn rank_and_crowd(members: &mut [Individual]) -> FrontPartition {
    let partition = fast_nondominated_sort(members);
    crowding_distance(members, &partition);
    partition
}
