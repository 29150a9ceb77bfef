//! Leaf-label-respecting isomorphism and canonical forms.
//!
//! Both network kinds are mapped onto a coloured graph whose initial colours
//! encode leaf labels. Colour refinement (1-WL) plus individualization on
//! ambiguous cells yields a canonical vertex ordering; the minimum adjacency
//! encoding over all discrete refinements is the canonical form. Instances
//! are desk scale, so the exponential fallback is acceptable.
//!
//! Two independent routes are provided and cross-checked in tests: canonical
//! key equality, and an explicit backtracking search for a label-fixing
//! bijection.

use std::collections::BTreeMap;
use std::fmt;

use super::rooted::{RootedNetwork, VertexId};
use super::unrooted::UnrootedNetwork;

/// Opaque canonical key: equal keys iff the networks are isomorphic under a
/// leaf-label-fixing (and, for rooted networks, direction-preserving) map.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey(")?;
        for b in self.0.iter().take(12) {
            write!(f, "{b:02x}")?;
        }
        if self.0.len() > 12 {
            write!(f, "..")?;
        }
        write!(f, ")")
    }
}

pub(crate) struct ColouredGraph {
    n: usize,
    directed: bool,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    init: Vec<u32>,
    /// Original vertex ids in index order, for mapping permutations back.
    ids: Vec<VertexId>,
}

const INTERNAL_COLOUR: u32 = 0;
const SHAPE_LEAF_COLOUR: u32 = 1;
const LABEL_COLOUR_BASE: u32 = 2;

impl ColouredGraph {
    pub(crate) fn from_rooted(net: &RootedNetwork, labelled: bool) -> Self {
        let ids: Vec<VertexId> = net.vertex_ids().collect();
        let index: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let rank: BTreeMap<_, u32> = net
            .leaf_map()
            .keys()
            .enumerate()
            .map(|(i, l)| (l.clone(), i as u32))
            .collect();
        let mut out = vec![Vec::new(); ids.len()];
        let mut inn = vec![Vec::new(); ids.len()];
        for (u, v) in net.arcs() {
            out[index[&u]].push(index[&v]);
            inn[index[&v]].push(index[&u]);
        }
        let init = ids
            .iter()
            .map(|&v| match net.label(v) {
                Some(l) if labelled => LABEL_COLOUR_BASE + rank[l],
                Some(_) => SHAPE_LEAF_COLOUR,
                None => INTERNAL_COLOUR,
            })
            .collect();
        ColouredGraph { n: ids.len(), directed: true, out, inn, init, ids }
    }

    pub(crate) fn from_unrooted(net: &UnrootedNetwork, labelled: bool) -> Self {
        let ids: Vec<VertexId> = net.vertex_ids().collect();
        let index: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let rank: BTreeMap<_, u32> = net
            .leaf_map()
            .keys()
            .enumerate()
            .map(|(i, l)| (l.clone(), i as u32))
            .collect();
        let mut out = vec![Vec::new(); ids.len()];
        for (u, v) in net.edges() {
            out[index[&u]].push(index[&v]);
            out[index[&v]].push(index[&u]);
        }
        let init = ids
            .iter()
            .map(|&v| match net.label(v) {
                Some(l) if labelled => LABEL_COLOUR_BASE + rank[l],
                Some(_) => SHAPE_LEAF_COLOUR,
                None => INTERNAL_COLOUR,
            })
            .collect();
        ColouredGraph { n: ids.len(), directed: false, out, inn: vec![Vec::new(); ids.len()], init, ids }
    }
}

type Signature = (u32, Vec<u32>, Vec<u32>);

fn signatures(g: &ColouredGraph, colour: &[u32]) -> Vec<Signature> {
    (0..g.n)
        .map(|v| {
            let mut a: Vec<u32> = g.out[v].iter().map(|&u| colour[u]).collect();
            a.sort_unstable();
            let mut b: Vec<u32> = g.inn[v].iter().map(|&u| colour[u]).collect();
            b.sort_unstable();
            (colour[v], a, b)
        })
        .collect()
}

fn colour_count(colour: &[u32]) -> usize {
    let mut c: Vec<u32> = colour.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Refines to a stable partition; classes only ever split.
fn refine(g: &ColouredGraph, colour: &mut Vec<u32>) {
    let mut classes = colour_count(colour);
    loop {
        let sigs = signatures(g, colour);
        let mut order: Vec<Signature> = sigs.clone();
        order.sort();
        order.dedup();
        let rank: BTreeMap<&Signature, u32> =
            order.iter().enumerate().map(|(i, s)| (s, i as u32)).collect();
        for v in 0..g.n {
            colour[v] = rank[&sigs[v]];
        }
        let new_classes = order.len();
        if new_classes == classes {
            return;
        }
        classes = new_classes;
    }
}

fn is_discrete(g: &ColouredGraph, colour: &[u32]) -> bool {
    colour_count(colour) == g.n
}

/// Adjacency encoding under a discrete colouring. Smaller is "more canonical".
fn encode(g: &ColouredGraph, colour: &[u32]) -> Vec<u32> {
    let mut pos_to_vertex = vec![0usize; g.n];
    for v in 0..g.n {
        pos_to_vertex[colour[v] as usize] = v;
    }
    let mut enc = Vec::with_capacity(2 + 3 * g.n);
    enc.push(g.n as u32);
    enc.push(g.directed as u32);
    for &v in &pos_to_vertex {
        enc.push(g.init[v]);
        let mut nbrs: Vec<u32> = g.out[v].iter().map(|&u| colour[u]).collect();
        nbrs.sort_unstable();
        enc.push(nbrs.len() as u32);
        enc.extend(nbrs);
    }
    enc
}

/// Splits v into its own cell, ordered just before its former cell mates.
fn individualize(colour: &[u32], v: usize) -> Vec<u32> {
    let mut c: Vec<u32> = colour.iter().map(|&x| 2 * x + 1).collect();
    c[v] = 2 * colour[v];
    c
}

/// First non-singleton cell in colour order, as its member vertices.
fn target_cell(g: &ColouredGraph, colour: &[u32]) -> Option<Vec<usize>> {
    let mut by_colour: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for v in 0..g.n {
        by_colour.entry(colour[v]).or_default().push(v);
    }
    by_colour.into_values().find(|cell| cell.len() > 1)
}

fn canonical_search(g: &ColouredGraph, mut colour: Vec<u32>, best: &mut Option<(Vec<u32>, Vec<u32>)>) {
    refine(g, &mut colour);
    match target_cell(g, &colour) {
        None => {
            let enc = encode(g, &colour);
            let replace = match best {
                None => true,
                Some((b, _)) => enc < *b,
            };
            if replace {
                *best = Some((enc, colour));
            }
        }
        Some(cell) => {
            for v in cell {
                canonical_search(g, individualize(&colour, v), best);
            }
        }
    }
}

/// Canonical encoding and the vertex order (by canonical position) realizing it.
pub(crate) fn canonical_form(g: &ColouredGraph) -> (Vec<u32>, Vec<VertexId>) {
    let mut best = None;
    canonical_search(g, g.init.clone(), &mut best);
    let (enc, colour) = best.expect("graphs are non-empty");
    let mut order = vec![VertexId(0); g.n];
    for v in 0..g.n {
        order[colour[v] as usize] = g.ids[v];
    }
    (enc, order)
}

fn key_bytes(kind: u8, labels: &[&str], enc: &[u32]) -> CanonicalKey {
    let mut bytes = vec![kind];
    bytes.extend((labels.len() as u32).to_le_bytes());
    for l in labels {
        bytes.extend((l.len() as u32).to_le_bytes());
        bytes.extend(l.as_bytes());
    }
    for x in enc {
        bytes.extend(x.to_le_bytes());
    }
    CanonicalKey(bytes)
}

pub fn rooted_canonical_key(net: &RootedNetwork) -> CanonicalKey {
    let g = ColouredGraph::from_rooted(net, true);
    let (enc, _) = canonical_form(&g);
    let labels: Vec<&str> = net.leaf_map().keys().map(|l| l.as_str()).collect();
    key_bytes(b'R', &labels, &enc)
}

pub fn unrooted_canonical_key(net: &UnrootedNetwork) -> CanonicalKey {
    let g = ColouredGraph::from_unrooted(net, true);
    let (enc, _) = canonical_form(&g);
    let labels: Vec<&str> = net.leaf_map().keys().map(|l| l.as_str()).collect();
    key_bytes(b'U', &labels, &enc)
}

/// Canonical key with leaf labels erased: equal iff the unlabelled shapes are
/// isomorphic. Used to deduplicate exhaustively generated corpora.
pub fn rooted_shape_key(net: &RootedNetwork) -> CanonicalKey {
    let g = ColouredGraph::from_rooted(net, false);
    let (enc, _) = canonical_form(&g);
    key_bytes(b'r', &[], &enc)
}

pub fn unrooted_shape_key(net: &UnrootedNetwork) -> CanonicalKey {
    let g = ColouredGraph::from_unrooted(net, false);
    let (enc, _) = canonical_form(&g);
    key_bytes(b'u', &[], &enc)
}

/// Vertices of a rooted network in canonical position order.
pub(crate) fn rooted_canonical_order(net: &RootedNetwork) -> Vec<VertexId> {
    canonical_form(&ColouredGraph::from_rooted(net, true)).1
}

/// Vertices of an unrooted network in canonical position order.
pub(crate) fn unrooted_canonical_order(net: &UnrootedNetwork) -> Vec<VertexId> {
    canonical_form(&ColouredGraph::from_unrooted(net, true)).1
}

/// Vertices in canonical order with labels erased; used to relabel corpus
/// networks canonically.
pub(crate) fn unrooted_shape_order(net: &UnrootedNetwork) -> Vec<VertexId> {
    canonical_form(&ColouredGraph::from_unrooted(net, false)).1
}

// ---------------------------------------------------------------------------
// Explicit bijection search, the second route.

fn refine_pair(g: &ColouredGraph, h: &ColouredGraph, cg: &mut Vec<u32>, ch: &mut Vec<u32>) -> bool {
    let mut classes = colour_count(cg);
    loop {
        let sg = signatures(g, cg);
        let sh = signatures(h, ch);
        let mut order: Vec<Signature> = sg.iter().chain(sh.iter()).cloned().collect();
        order.sort();
        order.dedup();
        let rank: BTreeMap<&Signature, u32> =
            order.iter().enumerate().map(|(i, s)| (s, i as u32)).collect();
        for v in 0..g.n {
            cg[v] = rank[&sg[v]];
        }
        for v in 0..h.n {
            ch[v] = rank[&sh[v]];
        }
        // Histograms must match for an isomorphism to exist.
        let mut hist_g = vec![0usize; order.len()];
        let mut hist_h = vec![0usize; order.len()];
        for &c in cg.iter() {
            hist_g[c as usize] += 1;
        }
        for &c in ch.iter() {
            hist_h[c as usize] += 1;
        }
        if hist_g != hist_h {
            return false;
        }
        let new_classes = order.len();
        if new_classes == classes {
            return true;
        }
        classes = new_classes;
    }
}

fn verify_discrete_map(g: &ColouredGraph, h: &ColouredGraph, cg: &[u32], ch: &[u32]) -> bool {
    let mut map = vec![usize::MAX; g.n]; // g vertex -> h vertex
    let mut h_by_colour = vec![usize::MAX; g.n];
    for u in 0..h.n {
        h_by_colour[ch[u] as usize] = u;
    }
    for v in 0..g.n {
        map[v] = h_by_colour[cg[v] as usize];
    }
    for v in 0..g.n {
        if g.init[v] != h.init[map[v]] {
            return false;
        }
        let mut gs: Vec<usize> = g.out[v].iter().map(|&w| map[w]).collect();
        gs.sort_unstable();
        let mut hs: Vec<usize> = h.out[map[v]].clone();
        hs.sort_unstable();
        if gs != hs {
            return false;
        }
    }
    true
}

fn iso_search(g: &ColouredGraph, h: &ColouredGraph, cg: Vec<u32>, ch: Vec<u32>) -> bool {
    let mut cg = cg;
    let mut ch = ch;
    if !refine_pair(g, h, &mut cg, &mut ch) {
        return false;
    }
    if is_discrete(g, &cg) {
        return verify_discrete_map(g, h, &cg, &ch);
    }
    let cell = target_cell(g, &cg).expect("non-discrete colouring has a non-singleton cell");
    let c = cg[cell[0]];
    let v = cell[0];
    for u in 0..h.n {
        if ch[u] == c && iso_search(g, h, individualize(&cg, v), individualize(&ch, u)) {
            return true;
        }
    }
    false
}

/// Explicit search for a direction-preserving, label-fixing isomorphism.
pub(crate) fn coloured_isomorphic(g: &ColouredGraph, h: &ColouredGraph) -> bool {
    if g.n != h.n || g.directed != h.directed {
        return false;
    }
    iso_search(g, h, g.init.clone(), h.init.clone())
}

/// True iff a graph isomorphism fixing every leaf label (and preserving arc
/// direction) exists between the two rooted networks.
pub fn are_isomorphic_rooted(a: &RootedNetwork, b: &RootedNetwork) -> bool {
    if a.leaf_map().keys().ne(b.leaf_map().keys()) {
        return false;
    }
    let g = ColouredGraph::from_rooted(a, true);
    let h = ColouredGraph::from_rooted(b, true);
    coloured_isomorphic(&g, &h)
}

/// True iff a label-fixing graph isomorphism exists between the two unrooted
/// networks.
pub fn are_isomorphic_unrooted(a: &UnrootedNetwork, b: &UnrootedNetwork) -> bool {
    if a.leaf_map().keys().ne(b.leaf_map().keys()) {
        return false;
    }
    let g = ColouredGraph::from_unrooted(a, true);
    let h = ColouredGraph::from_unrooted(b, true);
    coloured_isomorphic(&g, &h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::rooted::RawRooted;
    use crate::model::unrooted::RawUnrooted;

    fn rooted(arcs: &[(u32, u32)], labels: &[(u32, &str)]) -> RootedNetwork {
        let mut raw = RawRooted::new();
        for &(u, v) in arcs {
            raw.add_arc(u, v);
        }
        for &(v, l) in labels {
            raw.set_label(v, l);
        }
        RootedNetwork::from_raw(&raw).unwrap()
    }

    fn unrooted(edges: &[(u32, u32)], labels: &[(u32, &str)]) -> UnrootedNetwork {
        let mut raw = RawUnrooted::new();
        for &(u, v) in edges {
            raw.add_edge(u, v);
        }
        for &(v, l) in labels {
            raw.set_label(v, l);
        }
        UnrootedNetwork::from_raw(&raw).unwrap()
    }

    #[test]
    fn network_is_isomorphic_to_itself() {
        let n = rooted(&[(0, 1), (0, 2)], &[(1, "a"), (2, "b")]);
        assert!(are_isomorphic_rooted(&n, &n));
        assert_eq!(rooted_canonical_key(&n), rooted_canonical_key(&n));
    }

    #[test]
    fn internal_relabelling_preserves_key() {
        let a = rooted(&[(0, 1), (0, 2), (1, 3), (1, 4)], &[(2, "c"), (3, "a"), (4, "b")]);
        let b = rooted(&[(9, 7), (9, 5), (7, 2), (7, 1)], &[(5, "c"), (2, "a"), (1, "b")]);
        assert!(are_isomorphic_rooted(&a, &b));
        assert_eq!(rooted_canonical_key(&a), rooted_canonical_key(&b));
    }

    #[test]
    fn different_tree_topologies_differ() {
        // ((a,b),c) vs ((a,c),b)
        let a = rooted(&[(0, 1), (0, 2), (1, 3), (1, 4)], &[(2, "c"), (3, "a"), (4, "b")]);
        let b = rooted(&[(0, 1), (0, 2), (1, 3), (1, 4)], &[(2, "b"), (3, "a"), (4, "c")]);
        assert!(!are_isomorphic_rooted(&a, &b));
        assert_ne!(rooted_canonical_key(&a), rooted_canonical_key(&b));
    }

    #[test]
    fn label_swap_on_symmetric_shape_is_isomorphic() {
        // Cherry (a,b): swapping which vertex carries a and b is an automorphism.
        let a = unrooted(&[(0, 1)], &[(0, "a"), (1, "b")]);
        let b = unrooted(&[(5, 9)], &[(9, "a"), (5, "b")]);
        assert!(are_isomorphic_unrooted(&a, &b));
        assert_eq!(unrooted_canonical_key(&a), unrooted_canonical_key(&b));
    }

    #[test]
    fn shape_key_ignores_labels() {
        let a = unrooted(&[(0, 1), (1, 2), (1, 3)], &[(0, "a"), (2, "b"), (3, "c")]);
        let b = unrooted(&[(0, 1), (1, 2), (1, 3)], &[(0, "x"), (2, "y"), (3, "z")]);
        assert_ne!(unrooted_canonical_key(&a), unrooted_canonical_key(&b));
        assert_eq!(unrooted_shape_key(&a), unrooted_shape_key(&b));
    }

    #[test]
    fn directed_symmetric_diamond_canonicalizes() {
        // root -> u, root -> w, u -> r, w -> r, r -> a, u -> b, w -> c:
        // swapping u/w with b/c relabelled is an isomorphism test on a
        // reticulated shape.
        let a = rooted(
            &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (1, 5), (2, 6)],
            &[(4, "a"), (5, "b"), (6, "c")],
        );
        let b = rooted(
            &[(10, 11), (10, 12), (11, 13), (12, 13), (13, 14), (11, 15), (12, 16)],
            &[(14, "a"), (15, "c"), (16, "b")],
        );
        assert!(are_isomorphic_rooted(&a, &b));
        assert_eq!(rooted_canonical_key(&a), rooted_canonical_key(&b));
    }
}
