use std::cmp::Ordering;

use super::rank_and_crowd;
use crate::rng::RngStream;
use crate::types::{Individual, Population};

/// Crowded-comparison order: lower rank first, then larger crowding, then lower id.
pub fn crowded_order(a: &Individual, b: &Individual) -> Ordering {
    a.rank_or_worst()
        .cmp(&b.rank_or_worst())
        .then_with(|| b.crowding_or_worst().total_cmp(&a.crowding_or_worst()))
        .then_with(|| a.id.cmp(&b.id))
}

/// Draws two members uniformly with replacement and returns the index of
/// the better one under [`crowded_order`].
pub fn binary_tournament_index(members: &[Individual], rng: &mut RngStream) -> usize {
    let a = rng.below(members.len());
    let b = rng.below(members.len());
    match crowded_order(&members[a], &members[b]) {
        Ordering::Greater => b,
        _ => a,
    }
}

pub fn binary_tournament_select<'a>(members: &'a [Individual], rng: &mut RngStream) -> &'a Individual {
    &members[binary_tournament_index(members, rng)]
}

/// `n` binary-tournament winners (duplicates allowed), as indices.
pub fn mating_pool_indices(members: &[Individual], n: usize, rng: &mut RngStream) -> Vec<usize> {
    (0..n).map(|_| binary_tournament_index(members, rng)).collect()
}

/// Survivor selection from the merged parent+offspring population.
///
/// Re-ranks `union`, then keeps whole fronts while they fit and fills the
/// remainder from the next front by descending crowding distance (ties by
/// lower id). Ranks and crowding of the survivors are those computed on the
/// union.
pub fn environmental_selection(mut union: Population, n: usize) -> Population {
    assert!(n <= union.len(), "cannot select {n} survivors from {}", union.len());
    rank_and_crowd(&mut union.members);
    union.members.sort_by(crowded_order);
    union.members.truncate(n);
    union
}
