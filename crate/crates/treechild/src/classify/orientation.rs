//! Backtracking search over cherry-reduction choices of an unrooted network.
//!
//! At each state the engine branches over every available cherry in both
//! orientations and every reticulated site in both coordinate orders. In
//! tree-child mode, branches violating (P1) or (P2) are pruned incrementally
//! through [`PendingConstraints`]; fruitless states are memoized by canonical
//! key plus the pending-claims digest, since identical reduced networks under
//! different outstanding claims have different feasible futures.
//!
//! Greedy reduction would be wrong here: a maximal reduction sequence of an
//! unrooted orchard network need not be complete, so exhaustive backtracking
//! is required. The budget is a node-expansion count for reproducibility.

use std::collections::HashSet;
use std::time::Instant;

use crate::cherries::Reducible;
use crate::model::{Network, RootedNetwork, UnrootedNetwork};
use crate::sequences::{build_rooted, CherryPickingSequence};

use super::{
    OrientationResult, OrientationStatus, PendingConstraints, SearchStats,
};

/// Outcome of a bounded yes/no search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundedVerdict {
    Decided(bool),
    BudgetExceeded,
}

enum Outcome {
    Found(Vec<crate::cherries::Reduction>),
    Exhausted,
    Budget,
}

struct Engine {
    tree_child_mode: bool,
    budget: u64,
    nodes_expanded: u64,
    memo_hits: u64,
    memo: HashSet<Vec<u8>>,
}

impl Engine {
    fn new(tree_child_mode: bool, budget: u64) -> Self {
        Engine {
            tree_child_mode,
            budget,
            nodes_expanded: 0,
            memo_hits: 0,
            memo: HashSet::new(),
        }
    }

    fn memo_key(&self, network: &UnrootedNetwork, claims: &PendingConstraints) -> Vec<u8> {
        let mut key = network.canonical_key().as_bytes().to_vec();
        key.push(0xff);
        key.extend(claims.digest());
        key
    }

    fn search(&mut self, network: &UnrootedNetwork, claims: &PendingConstraints) -> Outcome {
        if network.is_single_vertex() {
            return Outcome::Found(Vec::new());
        }
        if self.nodes_expanded >= self.budget {
            return Outcome::Budget;
        }
        self.nodes_expanded += 1;

        let key = self.memo_key(network, claims);
        if self.memo.contains(&key) {
            self.memo_hits += 1;
            return Outcome::Exhausted;
        }

        for step in network.available_reductions() {
            let next_claims = if self.tree_child_mode {
                match claims.after_reduction(&step) {
                    Some(c) => c,
                    None => continue,
                }
            } else {
                claims.clone()
            };
            let (next, _) = network.reduce(&step).expect("listed reductions apply");
            match self.search(&next, &next_claims) {
                Outcome::Found(mut rest) => {
                    rest.push(step);
                    return Outcome::Found(rest);
                }
                Outcome::Exhausted => {}
                Outcome::Budget => return Outcome::Budget,
            }
        }

        self.memo.insert(key);
        Outcome::Exhausted
    }

    fn stats(&self, started: Instant) -> SearchStats {
        SearchStats {
            nodes_expanded: self.nodes_expanded,
            memo_hits: self.memo_hits,
            elapsed: started.elapsed(),
        }
    }
}

/// Searches for a complete tree-child cherry-picking sequence of the unrooted
/// network and reconstructs the witnessed orientation from it. `None` is
/// returned only after the pruned search space is exhausted within budget.
pub fn find_tree_child_orientation(network: &UnrootedNetwork, budget: u64) -> OrientationResult {
    let started = Instant::now();
    let mut engine = Engine::new(true, budget);

    if network.is_single_vertex() {
        let label = network.leaf_labels()[0].clone();
        return OrientationResult {
            status: OrientationStatus::Found,
            orientation: Some(RootedNetwork::single_vertex(label)),
            sequence: Some(CherryPickingSequence::default()),
            stats: engine.stats(started),
        };
    }

    match engine.search(network, &PendingConstraints::new()) {
        Outcome::Found(mut steps) => {
            steps.reverse();
            let sequence = CherryPickingSequence::new(steps);
            let orientation =
                build_rooted(&sequence).expect("complete sequences reverse-construct");
            debug_assert!(orientation.is_tree_child_structural());
            debug_assert!(orientation
                .unroot()
                .is_ok_and(|u| u.is_isomorphic_to(network)));
            OrientationResult {
                status: OrientationStatus::Found,
                orientation: Some(orientation),
                sequence: Some(sequence),
                stats: engine.stats(started),
            }
        }
        Outcome::Exhausted => OrientationResult::none(engine.stats(started)),
        Outcome::Budget => OrientationResult::budget_exceeded(engine.stats(started)),
    }
}

/// True iff some complete cherry-reduction sequence exists: the same engine
/// without (P1)/(P2) pruning. Deciding this for unrooted networks is hard in
/// general, hence the budget.
pub fn is_orchard_unrooted(network: &UnrootedNetwork, budget: u64) -> BoundedVerdict {
    let mut engine = Engine::new(false, budget);
    if network.is_single_vertex() {
        return BoundedVerdict::Decided(true);
    }
    match engine.search(network, &PendingConstraints::new()) {
        Outcome::Found(_) => BoundedVerdict::Decided(true),
        Outcome::Exhausted => BoundedVerdict::Decided(false),
        Outcome::Budget => BoundedVerdict::BudgetExceeded,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::DEFAULT_SEARCH_BUDGET;
    use crate::io::parse_unrooted;
    use crate::model::LeafLabel;

    #[test]
    fn single_edge_orients_to_the_cherry_network() {
        let u = parse_unrooted("unrooted\na b\n").unwrap();
        let result = find_tree_child_orientation(&u, DEFAULT_SEARCH_BUDGET);
        assert_eq!(result.status, OrientationStatus::Found);
        let r = result.orientation.unwrap();
        assert_eq!(r.leaf_count(), 2);
        assert_eq!(r.reticulation_number(), 0);
        assert!(r.unroot().unwrap().is_isomorphic_to(&u));
    }

    #[test]
    fn single_vertex_orients_trivially() {
        let u = UnrootedNetwork::single_vertex(LeafLabel::new("a").unwrap());
        let result = find_tree_child_orientation(&u, DEFAULT_SEARCH_BUDGET);
        assert_eq!(result.status, OrientationStatus::Found);
        assert!(result.sequence.unwrap().is_empty());
    }

    #[test]
    fn triangle_with_three_leaves_is_orientable() {
        let u = parse_unrooted("unrooted\nu v\nv w\nw u\nu a\nv b\nw c\n").unwrap();
        let result = find_tree_child_orientation(&u, DEFAULT_SEARCH_BUDGET);
        assert_eq!(result.status, OrientationStatus::Found);
        let r = result.orientation.unwrap();
        assert_eq!(r.reticulation_number(), u.reticulation_number());
        assert!(r.is_tree_child_structural());
        assert!(r.unroot().unwrap().is_isomorphic_to(&u));
    }

    #[test]
    fn unrooted_trees_are_orchard() {
        let u = parse_unrooted("unrooted\nu a\nu v\nv b\nv c\nu d\n").unwrap();
        assert!(u.reticulation_number() == 0);
        assert_eq!(is_orchard_unrooted(&u, DEFAULT_SEARCH_BUDGET), BoundedVerdict::Decided(true));
    }

    #[test]
    fn tiny_budget_reports_exhaustion() {
        let u = parse_unrooted("unrooted\nu v\nv w\nw u\nu a\nv b\nw c\n").unwrap();
        let result = find_tree_child_orientation(&u, 1);
        assert_eq!(result.status, OrientationStatus::BudgetExceeded);
    }
}
