//! Rooted and unrooted binary tree-child phylogenetic networks.
//!
//! The crate provides:
//!
//! - validated network values and their structural queries ([`model`]),
//! - cherry and reticulated-cherry reductions with inverse expansions
//!   ([`cherries`]),
//! - cherry-picking sequences, the (P1)/(P2) tree-child predicates and the
//!   related (P)/(P3) predicates, replay, and the reverse construction that
//!   builds a rooted network from a complete sequence ([`sequences`]),
//! - decision procedures: rooted orchard / tree-child classification, a
//!   backtracking search for tree-child orientations of unrooted networks,
//!   brute-force oracles, and corpus generation ([`classify`]),
//! - text formats: extended Newick for rooted networks, an edge-list format
//!   for unrooted networks, and a line-based sequence format ([`io`]).

pub mod cherries;
pub mod classify;
pub mod io;
pub mod model;
pub mod sequences;

pub use cherries::{Reducible, Reduction, ReductionKind, ReductionSite};
pub use model::{
    are_isomorphic_rooted, are_isomorphic_unrooted, LeafLabel, Network, NetworkKind,
    RootedNetwork, UnrootedNetwork, ValidationReport,
};
pub use sequences::{
    apply_sequence, build_rooted, check_p, check_p3, check_tree_child, is_complete_for,
    successor_index, CherryPickingSequence, ReductionTrace, SequenceVerdict,
};
