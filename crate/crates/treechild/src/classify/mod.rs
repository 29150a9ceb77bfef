//! Decision procedures: rooted orchard and tree-child classification, the
//! backtracking search for tree-child orientations of unrooted networks,
//! brute-force oracles for desk-scale cross-validation, exhaustive
//! enumeration, and corpus generation.

mod brute;
mod enumerate;
mod generate;
mod orientation;
mod witness;

use std::collections::BTreeSet;
use std::time::Duration;

use crate::cherries::{Reducible, Reduction, ReductionKind};
use crate::model::{LeafLabel, RootedNetwork};
use crate::sequences::{
    apply_sequence, check_tree_child, CherryPickingSequence, ReductionTrace, SequenceVerdict,
};

pub use brute::{brute_force_tree_child_orientation, OracleError, DEFAULT_ORACLE_EDGE_CAP};
pub use enumerate::{
    enumerate_complete_sequences, enumerate_maximal_traces, enumerate_rooted_orchard,
    enumerate_rooted_tree_child, enumerate_unrooted_corpus, EnumerateError,
};
pub use generate::{generate_tree_child, relocate_random_reticulation_arc, GenerateError};
pub use orientation::{find_tree_child_orientation, is_orchard_unrooted, BoundedVerdict};
pub use witness::{find_greedy_stall_witness, find_p1_insufficiency_witness, find_stalled_maximal};

/// Default node-expansion budget for the orientation search.
pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

/// Everything the rooted classifier decides about one network.
#[derive(Debug, Clone)]
pub struct RootedClassification {
    /// Some complete cherry-reduction sequence exists; by maximality this is
    /// decided by a single greedy trace.
    pub orchard: bool,
    /// No stack and no sibling reticulations.
    pub tree_child_structural: bool,
    /// The greedy trace is complete and its sequence satisfies (P1) and (P2).
    pub tree_child_by_sequence: bool,
    pub stack_free: bool,
    /// The greedy maximal trace and its sequence; the sequence verdict is
    /// populated when the trace is complete.
    pub witness: Option<ClassificationWitness>,
}

#[derive(Debug, Clone)]
pub struct ClassificationWitness {
    pub trace: ReductionTrace<RootedNetwork>,
    pub sequence: CherryPickingSequence,
    pub verdict: Option<SequenceVerdict>,
}

/// Classifies a rooted network by computing one greedy maximal reduction
/// trace. Tie-breaking picks the smallest available reduction (cherries
/// before reticulated cherries, then by labels); maximality makes the choice
/// irrelevant for the orchard verdict, and the tree-child characterisation
/// makes it irrelevant for the sequence verdict.
pub fn classify_rooted(network: &RootedNetwork) -> RootedClassification {
    let mut steps = Vec::new();
    let mut current = network.clone();
    loop {
        let Some(step) = current.available_reductions().into_iter().next() else {
            break;
        };
        let (next, _) = current
            .reduce(&step)
            .expect("listed reductions are applicable");
        steps.push(step);
        current = next;
    }
    let sequence = CherryPickingSequence::new(steps);
    let trace = apply_sequence(network, &sequence).expect("greedy steps replay");
    debug_assert!(trace.is_maximal());
    let orchard = trace.is_complete();
    let verdict = orchard.then(|| check_tree_child(&sequence));
    let tree_child_by_sequence = verdict.as_ref().is_some_and(|v| v.tree_child);
    let stack_free = network.is_stack_free();
    let tree_child_structural = network.is_tree_child_structural();
    RootedClassification {
        orchard,
        tree_child_structural,
        tree_child_by_sequence,
        stack_free,
        witness: Some(ClassificationWitness { trace, sequence, verdict }),
    }
}

/// How far the bounded searches got.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrientationStatus {
    Found,
    None,
    BudgetExceeded,
}

/// Search counters. `elapsed` varies across runs and is excluded from any
/// determinism guarantee.
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub memo_hits: u64,
    pub elapsed: Duration,
}

/// Result of the tree-child orientation search: a rooted tree-child network
/// plus the witnessing sequence, or a certified "none", or budget exhaustion.
#[derive(Debug, Clone)]
pub struct OrientationResult {
    pub status: OrientationStatus,
    pub orientation: Option<RootedNetwork>,
    pub sequence: Option<CherryPickingSequence>,
    pub stats: SearchStats,
}

impl OrientationResult {
    pub(crate) fn none(stats: SearchStats) -> Self {
        OrientationResult { status: OrientationStatus::None, orientation: None, sequence: None, stats }
    }

    pub(crate) fn budget_exceeded(stats: SearchStats) -> Self {
        OrientationResult {
            status: OrientationStatus::BudgetExceeded,
            orientation: None,
            sequence: None,
            stats,
        }
    }
}

/// Outstanding (P1)/(P2) obligations during the sequence search: a claimed
/// label's next containing item must be a cherry, and no cherry may discharge
/// two claims at once. At most one claim per label can be outstanding, since
/// a second one would already violate (P1).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PendingConstraints {
    claims: BTreeSet<LeafLabel>,
}

impl PendingConstraints {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_claimed(&self, label: &LeafLabel) -> bool {
        self.claims.contains(label)
    }

    pub fn len(&self) -> usize {
        self.claims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.claims.is_empty()
    }

    /// The constraints after applying one reduction, or None when the step
    /// violates (P1) or (P2).
    ///
    /// A reticulated item containing any claimed label makes that claim's
    /// successor reticulated, breaking (P1). A cherry item containing two
    /// claimed labels gives both claims the same successor index, breaking
    /// (P2). Otherwise a cherry discharges the claims it contains and a
    /// reticulated item installs a claim on its first coordinate.
    pub fn after_reduction(&self, reduction: &Reduction) -> Option<Self> {
        match reduction.kind {
            ReductionKind::ReticulatedCherry => {
                if self.is_claimed(&reduction.x) || self.is_claimed(&reduction.y) {
                    return None;
                }
                let mut next = self.clone();
                next.claims.insert(reduction.x.clone());
                Some(next)
            }
            ReductionKind::Cherry => {
                if self.is_claimed(&reduction.x) && self.is_claimed(&reduction.y) {
                    return None;
                }
                let mut next = self.clone();
                next.claims.remove(&reduction.x);
                next.claims.remove(&reduction.y);
                Some(next)
            }
        }
    }

    /// Deterministic digest for memoization keys.
    pub fn digest(&self) -> Vec<u8> {
        let mut bytes = Vec::new();
        for label in &self.claims {
            bytes.extend(label.as_str().as_bytes());
            bytes.push(0);
        }
        bytes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cherries::Reduction;
    use crate::io::parse_rooted;
    use crate::sequences::build_rooted;

    fn label(s: &str) -> LeafLabel {
        LeafLabel::new(s).unwrap()
    }

    fn seq(items: &[(&str, &str, bool)]) -> CherryPickingSequence {
        items
            .iter()
            .map(|&(x, y, cherry)| {
                if cherry {
                    Reduction::cherry(label(x), label(y))
                } else {
                    Reduction::reticulated(label(x), label(y))
                }
            })
            .collect()
    }

    #[test]
    fn running_example_classifies_tree_child_and_orchard() {
        let network = build_rooted(&seq(&[
            ("b", "a", false),
            ("c", "b", true),
            ("b", "a", false),
            ("b", "a", true),
        ]))
        .unwrap();
        let c = classify_rooted(&network);
        assert!(c.orchard);
        assert!(c.tree_child_structural);
        assert!(c.tree_child_by_sequence);
        assert!(c.stack_free);
        let witness = c.witness.unwrap();
        assert!(witness.trace.is_complete());
        assert_eq!(witness.sequence.len(), 4);
    }

    #[test]
    fn stacked_network_is_orchard_but_not_tree_child() {
        let network = build_rooted(&seq(&[
            ("b", "a", false),
            ("b", "a", false),
            ("b", "c", true),
            ("a", "c", true),
        ]))
        .unwrap();
        let c = classify_rooted(&network);
        assert!(c.orchard);
        assert!(!c.tree_child_structural);
        assert!(!c.tree_child_by_sequence);
        assert!(!c.stack_free);
    }

    #[test]
    fn rooted_trees_are_orchard_tree_child_stack_free() {
        let network = parse_rooted("((a,b),(c,d));").unwrap();
        let c = classify_rooted(&network);
        assert!(c.orchard && c.tree_child_structural && c.tree_child_by_sequence && c.stack_free);
    }

    #[test]
    fn single_vertex_classifies_cleanly() {
        let network = RootedNetwork::single_vertex(label("a"));
        let c = classify_rooted(&network);
        assert!(c.orchard && c.tree_child_structural && c.tree_child_by_sequence);
        assert!(c.witness.unwrap().trace.is_complete());
    }

    #[test]
    fn pending_constraints_track_p1_p2_incrementally() {
        let constraints = PendingConstraints::new();
        // reticulated (b,a) claims b
        let after = constraints
            .after_reduction(&Reduction::reticulated(label("b"), label("a")))
            .unwrap();
        assert!(after.is_claimed(&label("b")));
        // a second reticulated item containing b violates (P1)
        assert!(after.after_reduction(&Reduction::reticulated(label("b"), label("c"))).is_none());
        assert!(after.after_reduction(&Reduction::reticulated(label("c"), label("b"))).is_none());
        // a cherry containing b discharges the claim
        let discharged = after
            .after_reduction(&Reduction::cherry(label("c"), label("b")))
            .unwrap();
        assert!(discharged.is_empty());
        // two claims discharged by the same cherry violate (P2)
        let two = after
            .after_reduction(&Reduction::reticulated(label("c"), label("a")))
            .unwrap();
        assert!(two.after_reduction(&Reduction::cherry(label("b"), label("c"))).is_none());
        assert!(two.after_reduction(&Reduction::cherry(label("c"), label("b"))).is_none());
    }
}
