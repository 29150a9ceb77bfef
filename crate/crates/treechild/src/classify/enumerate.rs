//! Exhaustive desk-scale enumeration: complete sequences and maximal traces
//! of one network, all small rooted orchard networks, and a corpus of small
//! unrooted networks for oracle sweeps.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::cherries::{Reducible, Reduction};
use crate::model::{
    pool_label, rooted_shape_key, unrooted_shape_key, unrooted_shape_order, CanonicalKey,
    LeafLabel, RawUnrooted, RootedNetwork, UnrootedNetwork,
};
use crate::sequences::CherryPickingSequence;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumerateError {
    #[error("enumeration exceeded the cap of {cap}")]
    CapExceeded { cap: usize },
}

/// All complete cherry-picking sequences of a network, by depth-first
/// enumeration of every applicable reduction at every step (including both
/// orientations of unrooted reticulated sites). Errors out when more than
/// `cap` sequences exist.
pub fn enumerate_complete_sequences<N: Reducible>(
    network: &N,
    cap: usize,
) -> Result<Vec<CherryPickingSequence>, EnumerateError> {
    fn go<N: Reducible>(
        network: &N,
        prefix: &mut Vec<Reduction>,
        out: &mut Vec<CherryPickingSequence>,
        cap: usize,
    ) -> Result<(), EnumerateError> {
        if network.is_single_vertex() {
            if out.len() >= cap {
                return Err(EnumerateError::CapExceeded { cap });
            }
            out.push(CherryPickingSequence::new(prefix.clone()));
            return Ok(());
        }
        for step in network.available_reductions() {
            let (next, _) = network.reduce(&step).expect("listed reductions apply");
            prefix.push(step);
            go(&next, prefix, out, cap)?;
            prefix.pop();
        }
        Ok(())
    }
    let mut out = Vec::new();
    go(network, &mut Vec::new(), &mut out, cap)?;
    Ok(out)
}

/// All maximal reduction sequences (every one ends in an irreducible
/// network), reported as (sequence, reached a single vertex).
pub fn enumerate_maximal_traces<N: Reducible>(
    network: &N,
    cap: usize,
) -> Result<Vec<(CherryPickingSequence, bool)>, EnumerateError> {
    fn go<N: Reducible>(
        network: &N,
        prefix: &mut Vec<Reduction>,
        out: &mut Vec<(CherryPickingSequence, bool)>,
        cap: usize,
    ) -> Result<(), EnumerateError> {
        let steps = network.available_reductions();
        if steps.is_empty() {
            if out.len() >= cap {
                return Err(EnumerateError::CapExceeded { cap });
            }
            out.push((CherryPickingSequence::new(prefix.clone()), network.is_single_vertex()));
            return Ok(());
        }
        for step in steps {
            let (next, _) = network.reduce(&step).expect("listed reductions apply");
            prefix.push(step);
            go(&next, prefix, out, cap)?;
            prefix.pop();
        }
        Ok(())
    }
    let mut out = Vec::new();
    go(network, &mut Vec::new(), &mut out, cap)?;
    Ok(out)
}

/// Exhaustively enumerates rooted orchard networks up to the given leaf and
/// reticulation counts, one canonically labelled representative per
/// unlabelled shape.
///
/// Every orchard network arises by reverse-expanding some complete sequence,
/// so breadth-first closure of the two expansion moves from the single
/// vertex reaches exactly the orchard class.
pub fn enumerate_rooted_orchard(max_leaves: usize, max_rets: usize) -> Vec<RootedNetwork> {
    assert!(max_leaves >= 1);
    let mut seen: BTreeSet<CanonicalKey> = BTreeSet::new();
    let mut out: Vec<RootedNetwork> = Vec::new();
    let mut frontier = vec![RootedNetwork::single_vertex(pool_label(0))];
    seen.insert(rooted_shape_key(&frontier[0]));
    out.push(frontier[0].clone());

    while let Some(network) = frontier.pop() {
        let leaves = network.leaf_count();
        let rets = network.reticulation_number();
        let mut candidates: Vec<RootedNetwork> = Vec::new();
        if leaves < max_leaves {
            // New labels enter in pool order; shape dedup erases the
            // remaining label arbitrariness.
            let fresh = pool_label(leaves);
            for y in network.leaf_labels() {
                let step = Reduction::cherry(fresh.clone(), (*y).clone());
                candidates.push(network.expand(&step).expect("cherry expansion applies"));
            }
        }
        if rets < max_rets {
            let labels: Vec<LeafLabel> = network.leaf_labels().into_iter().cloned().collect();
            for x in &labels {
                for y in &labels {
                    if x == y {
                        continue;
                    }
                    let step = Reduction::reticulated(x.clone(), y.clone());
                    candidates.push(network.expand(&step).expect("reticulated expansion applies"));
                }
            }
        }
        for candidate in candidates {
            if seen.insert(rooted_shape_key(&candidate)) {
                out.push(candidate.clone());
                frontier.push(candidate);
            }
        }
    }
    out
}

/// Exhaustively enumerates rooted tree-child networks up to the given
/// bounds, one representative per shape. Correct because reducing a
/// tree-child network yields a tree-child network, so every member reduces
/// to the single vertex through tree-child intermediates and is therefore
/// reached by expansions that never leave the class.
pub fn enumerate_rooted_tree_child(max_leaves: usize, max_rets: usize) -> Vec<RootedNetwork> {
    assert!(max_leaves >= 1);
    let mut seen: BTreeSet<CanonicalKey> = BTreeSet::new();
    let mut out: Vec<RootedNetwork> = Vec::new();
    let mut frontier = vec![RootedNetwork::single_vertex(pool_label(0))];
    seen.insert(rooted_shape_key(&frontier[0]));
    out.push(frontier[0].clone());

    while let Some(network) = frontier.pop() {
        let leaves = network.leaf_count();
        let rets = network.reticulation_number();
        let mut candidates: Vec<RootedNetwork> = Vec::new();
        if leaves < max_leaves {
            let fresh = pool_label(leaves);
            for y in network.leaf_labels() {
                let step = Reduction::cherry(fresh.clone(), (*y).clone());
                candidates.push(network.expand(&step).expect("cherry expansion applies"));
            }
        }
        if rets < max_rets {
            let labels: Vec<LeafLabel> = network.leaf_labels().into_iter().cloned().collect();
            for x in &labels {
                for y in &labels {
                    if x == y {
                        continue;
                    }
                    let step = Reduction::reticulated(x.clone(), y.clone());
                    candidates.push(network.expand(&step).expect("reticulated expansion applies"));
                }
            }
        }
        for candidate in candidates {
            if !candidate.is_tree_child_structural() {
                continue;
            }
            if seen.insert(rooted_shape_key(&candidate)) {
                out.push(candidate.clone());
                frontier.push(candidate);
            }
        }
    }
    out
}

/// Relabels an unrooted network canonically: leaves take pool labels in
/// shape-canonical order.
fn relabel_canonically(network: &UnrootedNetwork) -> UnrootedNetwork {
    let order = unrooted_shape_order(network);
    let mut raw = RawUnrooted::new();
    for (u, v) in network.edges() {
        raw.add_edge(u.0, v.0);
    }
    for v in network.vertex_ids() {
        raw.add_vertex(v.0);
    }
    let mut next = 0usize;
    for v in order {
        if network.label(v).is_some() {
            raw.set_label(v.0, pool_label(next).as_str());
            next += 1;
        }
    }
    UnrootedNetwork::from_raw(&raw).expect("relabelling preserves validity")
}

/// Exhaustively generated corpus of small unrooted networks, one canonically
/// labelled representative per shape: the closure of the single vertex and
/// the single edge under three growth moves, each of which inverts a clean
/// reduction:
///
///  - attach a new leaf to a subdivided edge,
///  - subdivide two distinct edges and join them by a new edge,
///  - expand an internal vertex into a triangle.
///
/// The closure covers every shape reachable by repeatedly undoing a leaf
/// deletion, a cycle-edge deletion, or a triangle contraction whose
/// suppressions stay simple; callers can append hand-built exotics for
/// shapes locked behind parallel-edge obstructions.
pub fn enumerate_unrooted_corpus(max_leaves: usize, max_rets: usize) -> Vec<UnrootedNetwork> {
    assert!(max_leaves >= 1);
    let mut seen: BTreeSet<CanonicalKey> = BTreeSet::new();
    let mut out: Vec<UnrootedNetwork> = Vec::new();

    let push = |network: UnrootedNetwork,
                    seen: &mut BTreeSet<CanonicalKey>,
                    out: &mut Vec<UnrootedNetwork>,
                    frontier: &mut Vec<UnrootedNetwork>| {
        if seen.insert(unrooted_shape_key(&network)) {
            out.push(relabel_canonically(&network));
            frontier.push(network);
        }
    };

    let mut frontier: Vec<UnrootedNetwork> = Vec::new();
    push(
        UnrootedNetwork::single_vertex(pool_label(0)),
        &mut seen,
        &mut out,
        &mut frontier,
    );
    if max_leaves >= 2 {
        let mut raw = RawUnrooted::new();
        raw.add_edge(0, 1).set_label(0, "a").set_label(1, "b");
        push(
            UnrootedNetwork::from_raw(&raw).unwrap(),
            &mut seen,
            &mut out,
            &mut frontier,
        );
    }

    while let Some(network) = frontier.pop() {
        let leaves = network.leaf_count();
        let rets = network.reticulation_number();
        let edges = network.edges();

        if leaves < max_leaves && !network.is_single_vertex() {
            for &(u, v) in &edges {
                let mut grown = network.clone();
                let mid = grown.fresh_id();
                let leaf = grown.fresh_id();
                grown.insert_vertex(mid, None);
                grown.insert_vertex(leaf, Some(fresh_pool_label(&grown)));
                grown.remove_edge(u, v);
                grown.add_edge(u, mid);
                grown.add_edge(mid, v);
                grown.add_edge(mid, leaf);
                debug_assert!(grown.revalidate().ok());
                push(grown, &mut seen, &mut out, &mut frontier);
            }
        }

        if rets < max_rets {
            for (i, &(a, b)) in edges.iter().enumerate() {
                for &(c, d) in &edges[i + 1..] {
                    let mut grown = network.clone();
                    let s1 = grown.fresh_id();
                    let s2 = grown.fresh_id();
                    grown.insert_vertex(s1, None);
                    grown.insert_vertex(s2, None);
                    grown.remove_edge(a, b);
                    grown.add_edge(a, s1);
                    grown.add_edge(s1, b);
                    grown.remove_edge(c, d);
                    grown.add_edge(c, s2);
                    grown.add_edge(s2, d);
                    grown.add_edge(s1, s2);
                    debug_assert!(grown.revalidate().ok());
                    push(grown, &mut seen, &mut out, &mut frontier);
                }
            }
            // Triangle expansion of an internal vertex.
            for v in network.vertex_ids().collect::<Vec<_>>() {
                if network.degree(v) != 3 {
                    continue;
                }
                let nbrs: Vec<_> = network.neighbours(v).to_vec();
                let mut grown = network.clone();
                let t: Vec<_> = (0..3).map(|_| grown.fresh_id()).collect();
                for &ti in &t {
                    grown.insert_vertex(ti, None);
                }
                for (&n, &ti) in nbrs.iter().zip(&t) {
                    grown.remove_edge(v, n);
                    grown.add_edge(ti, n);
                }
                grown.remove_vertex(v);
                grown.add_edge(t[0], t[1]);
                grown.add_edge(t[1], t[2]);
                grown.add_edge(t[2], t[0]);
                debug_assert!(grown.revalidate().ok());
                push(grown, &mut seen, &mut out, &mut frontier);
            }
        }
    }
    out
}

fn fresh_pool_label(network: &UnrootedNetwork) -> LeafLabel {
    (0..)
        .map(pool_label)
        .find(|l| !network.has_leaf(l))
        .expect("the pool is unbounded")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{parse_rooted, parse_unrooted};
    use crate::sequences::check_tree_child;

    #[test]
    fn cherry_network_has_two_complete_sequences() {
        let n = parse_rooted("(a,b);").unwrap();
        let seqs = enumerate_complete_sequences(&n, 100).unwrap();
        let rendered: BTreeSet<String> = seqs.iter().map(|s| s.to_string()).collect();
        assert_eq!(rendered.len(), 2);
        assert!(rendered.contains("([a,b])"));
        assert!(rendered.contains("([b,a])"));
    }

    #[test]
    fn unrooted_cherry_counts_both_reticulated_orientations() {
        // triangle: first reduction has 3 sites x 2 orientations
        let u = parse_unrooted("unrooted\nu v\nv w\nw u\nu a\nv b\nw c\n").unwrap();
        let seqs = enumerate_complete_sequences(&u, 1000).unwrap();
        assert!(!seqs.is_empty());
        // Every complete sequence of this tree-child instance's length is 3+1-1.
        for seq in &seqs {
            assert_eq!(seq.len(), 3);
        }
        // Some but not necessarily all are tree-child; at least one must be.
        assert!(seqs.iter().any(|s| check_tree_child(s).tree_child));
    }

    #[test]
    fn cap_is_enforced() {
        let n = parse_rooted("((a,b),(c,d));").unwrap();
        let err = enumerate_complete_sequences(&n, 1).unwrap_err();
        assert_eq!(err, EnumerateError::CapExceeded { cap: 1 });
    }

    #[test]
    fn orchard_enumeration_small_counts() {
        let nets = enumerate_rooted_orchard(3, 0);
        // Shapes: single vertex, cherry, one 3-leaf tree shape.
        assert_eq!(nets.len(), 3);
        let nets = enumerate_rooted_orchard(4, 0);
        // Adds the two 4-leaf tree shapes (caterpillar and balanced).
        assert_eq!(nets.len(), 5);
        for n in &nets {
            assert!(n.revalidate().ok());
        }
    }

    #[test]
    fn unrooted_corpus_contains_trees_and_cycles() {
        let corpus = enumerate_unrooted_corpus(4, 1);
        assert!(corpus.iter().any(|u| u.reticulation_number() == 0 && u.leaf_count() == 4));
        assert!(corpus.iter().any(|u| u.reticulation_number() == 1));
        for u in &corpus {
            assert!(u.revalidate().ok());
            assert!(u.leaf_count() <= 4);
            assert!(u.reticulation_number() <= 1);
        }
        // Canonical labelling means every leaf set is a prefix of the pool.
        for u in &corpus {
            for (i, l) in u.leaf_map().keys().enumerate() {
                assert_eq!(*l, pool_label(i));
            }
        }
    }

    #[test]
    fn maximal_traces_distinguish_complete_from_stalled() {
        let n = parse_rooted("(a,b);").unwrap();
        let traces = enumerate_maximal_traces(&n, 10).unwrap();
        assert_eq!(traces.len(), 2);
        assert!(traces.iter().all(|(_, complete)| *complete));
    }
}
