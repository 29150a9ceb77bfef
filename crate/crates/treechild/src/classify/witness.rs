//! Searches for the two structural witnesses the test suite freezes as
//! fixtures: an unrooted tree-child network with a stalling maximal
//! reduction sequence (greedy reduction is insufficient for unrooted
//! networks), and a rooted stack-free orchard non-tree-child network whose
//! complete sequences all violate (P1).

use std::collections::BTreeSet;

use crate::cherries::Reducible;
use crate::model::{CanonicalKey, Network, RootedNetwork, UnrootedNetwork};
use crate::sequences::{check_tree_child, CherryPickingSequence};

use super::{
    enumerate_complete_sequences, enumerate_rooted_orchard, find_tree_child_orientation,
    OrientationStatus,
};

/// First maximal-but-incomplete reduction sequence of the network, if any.
///
/// Suppression is confluent, so a state reached by reordering the same
/// reductions is the identical graph (same surviving vertex ids); an exact
/// fingerprint of edges and labels therefore dedups revisits without any
/// canonical-form computation.
pub fn find_stalled_maximal<N: Reducible>(network: &N) -> Option<CherryPickingSequence> {
    fn go<N: Reducible>(
        network: &N,
        prefix: &mut Vec<crate::cherries::Reduction>,
        seen: &mut std::collections::HashSet<Vec<u8>>,
    ) -> Option<CherryPickingSequence> {
        let steps = network.available_reductions();
        if steps.is_empty() {
            if network.is_single_vertex() {
                return None;
            }
            return Some(CherryPickingSequence::new(prefix.clone()));
        }
        if !seen.insert(network.exact_fingerprint()) {
            return None;
        }
        for step in steps {
            let (next, _) = network.reduce(&step).expect("listed reductions apply");
            prefix.push(step);
            let found = go(&next, prefix, seen);
            prefix.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
    go(network, &mut Vec::new(), &mut std::collections::HashSet::new())
}

/// Exhaustively searches small unrooted tree-child networks for one where
/// some maximal reduction sequence stalls short of completeness. Returns the
/// network, the stalling sequence, and the tree-child orientation that the
/// backtracking search still finds.
///
/// The corpus is exhaustive over unrooted tree-child networks within the
/// bounds: every such network is the unrooting of a rooted tree-child
/// network, and those are enumerated completely.
pub fn find_greedy_stall_witness(
    max_leaves: usize,
    max_rets: usize,
    budget: u64,
) -> Option<(UnrootedNetwork, CherryPickingSequence, RootedNetwork)> {
    let mut seen: BTreeSet<CanonicalKey> = BTreeSet::new();
    for rooted in super::enumerate_rooted_tree_child(max_leaves, max_rets) {
        let Ok(network) = rooted.unroot() else {
            continue;
        };
        if network.vertex_count() <= 2 || !seen.insert(network.canonical_key()) {
            continue;
        }
        let Some(stall) = find_stalled_maximal(&network) else {
            continue;
        };
        let oriented = find_tree_child_orientation(&network, budget);
        if oriented.status == OrientationStatus::Found {
            return Some((network, stall, oriented.orientation.unwrap()));
        }
    }
    None
}

/// Exhaustively searches small rooted stack-free orchard networks that are
/// not tree-child for one where every complete sequence violates (P1),
/// showing (P1) alone cannot characterise stack-free orchard networks.
pub fn find_p1_insufficiency_witness(
    max_leaves: usize,
    max_rets: usize,
    sequence_cap: usize,
) -> Option<RootedNetwork> {
    for network in enumerate_rooted_orchard(max_leaves, max_rets) {
        if !network.is_stack_free() || network.is_tree_child_structural() {
            continue;
        }
        let Ok(sequences) = enumerate_complete_sequences(&network, sequence_cap) else {
            continue;
        };
        if !sequences.is_empty()
            && sequences
                .iter()
                .all(|s| !check_tree_child(s).p1_violations.is_empty())
        {
            return Some(network);
        }
    }
    None
}
