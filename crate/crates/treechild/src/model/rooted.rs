use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::label::LeafLabel;
use super::report::ValidationReport;
use super::unrooted::{RawUnrooted, UnrootedNetwork};

/// Opaque vertex identifier. Identifiers are dense at construction and never
/// reused within one value's lifetime, so reduction audits stay unambiguous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A raw directed graph with a partial leaf labelling, as handed to
/// `validate_rooted`. No invariants are assumed.
#[derive(Debug, Clone, Default)]
pub struct RawRooted {
    pub vertices: BTreeSet<u32>,
    pub arcs: Vec<(u32, u32)>,
    pub labels: BTreeMap<u32, String>,
}

impl RawRooted {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: u32) -> &mut Self {
        self.vertices.insert(v);
        self
    }

    pub fn add_arc(&mut self, from: u32, to: u32) -> &mut Self {
        self.vertices.insert(from);
        self.vertices.insert(to);
        self.arcs.push((from, to));
        self
    }

    pub fn set_label(&mut self, v: u32, label: impl Into<String>) -> &mut Self {
        self.vertices.insert(v);
        self.labels.insert(v, label.into());
        self
    }
}

#[derive(Debug, Clone)]
struct RootedVertex {
    parents: Vec<VertexId>,
    children: Vec<VertexId>,
    label: Option<LeafLabel>,
}

/// A validated rooted binary phylogenetic network: a leaf-labelled DAG with a
/// unique root of in-degree 0 and out-degree 2, whose internal vertices are
/// tree vertices (in 1, out 2) or reticulations (in 2, out 1), or the
/// degenerate single labelled vertex.
///
/// Values are immutable; reductions and expansions return fresh networks.
#[derive(Clone)]
pub struct RootedNetwork {
    vertices: BTreeMap<VertexId, RootedVertex>,
    leaf_map: BTreeMap<LeafLabel, VertexId>,
    root: VertexId,
    next_id: u32,
}

/// Runs every rooted-network invariant against a raw graph and reports all
/// violations rather than the first one.
pub fn validate_rooted(raw: &RawRooted) -> ValidationReport {
    let mut report = ValidationReport::default();
    let ids: Vec<u32> = raw.vertices.iter().copied().collect();

    for &(u, v) in &raw.arcs {
        if u == v {
            report.push("loop", format!("arc ({u},{u}) is a loop"), vec![VertexId(u)]);
        }
    }
    {
        let mut seen = BTreeSet::new();
        for &(u, v) in &raw.arcs {
            if !seen.insert((u, v)) {
                report.push(
                    "parallel-arcs",
                    format!("arc ({u},{v}) appears more than once"),
                    vec![VertexId(u), VertexId(v)],
                );
            }
        }
    }

    let mut label_owners: BTreeMap<&str, Vec<u32>> = BTreeMap::new();
    for (&v, name) in &raw.labels {
        if let Err(e) = LeafLabel::new(name.clone()) {
            report.push("label-syntax", e.to_string(), vec![VertexId(v)]);
        }
        label_owners.entry(name.as_str()).or_default().push(v);
    }
    for (name, owners) in &label_owners {
        if owners.len() > 1 {
            report.push(
                "label-duplicate",
                format!("label {name:?} is assigned to {} vertices", owners.len()),
                owners.iter().map(|&v| VertexId(v)).collect(),
            );
        }
    }

    let mut indeg: BTreeMap<u32, usize> = ids.iter().map(|&v| (v, 0)).collect();
    let mut outdeg: BTreeMap<u32, usize> = ids.iter().map(|&v| (v, 0)).collect();
    for &(u, v) in &raw.arcs {
        *outdeg.get_mut(&u).unwrap() += 1;
        *indeg.get_mut(&v).unwrap() += 1;
    }

    if ids.is_empty() {
        report.push("root-count", "graph has no vertices".into(), vec![]);
        return report;
    }

    if ids.len() == 1 {
        // |X| = 1 base case: one isolated labelled vertex.
        let v = ids[0];
        if !raw.arcs.is_empty() {
            report.push("loop", "single-vertex graph must have no arcs".into(), vec![VertexId(v)]);
        }
        if !raw.labels.contains_key(&v) {
            report.push("leaf-unlabelled", format!("isolated vertex {} is unlabelled", VertexId(v)), vec![VertexId(v)]);
        }
        return report;
    }

    let roots: Vec<u32> = ids.iter().copied().filter(|v| indeg[v] == 0).collect();
    if roots.len() != 1 {
        report.push(
            "root-count",
            format!("expected exactly one in-degree-0 vertex, found {}", roots.len()),
            roots.iter().map(|&v| VertexId(v)).collect(),
        );
    }

    for &v in &ids {
        let (din, dout) = (indeg[&v], outdeg[&v]);
        let labelled = raw.labels.contains_key(&v);
        match (din, dout) {
            (0, 2) => {
                if labelled {
                    report.push("labelled-internal", format!("root {} carries a leaf label", VertexId(v)), vec![VertexId(v)]);
                }
            }
            (0, _) => {
                report.push(
                    "degree-profile",
                    format!("in-degree-0 vertex {} has out-degree {dout}, expected 2", VertexId(v)),
                    vec![VertexId(v)],
                );
            }
            (1, 0) => {
                if !labelled {
                    report.push("leaf-unlabelled", format!("leaf {} is unlabelled", VertexId(v)), vec![VertexId(v)]);
                }
            }
            (_, 0) => {
                report.push(
                    "degree-profile",
                    format!("out-degree-0 vertex {} has in-degree {din}, expected 1", VertexId(v)),
                    vec![VertexId(v)],
                );
            }
            (1, 2) | (2, 1) => {
                if labelled {
                    report.push("labelled-internal", format!("internal vertex {} carries a leaf label", VertexId(v)), vec![VertexId(v)]);
                }
            }
            _ => {
                report.push(
                    "degree-profile",
                    format!("vertex {} has in-degree {din} and out-degree {dout}", VertexId(v)),
                    vec![VertexId(v)],
                );
            }
        }
    }

    // Kahn topological sort; leftovers witness a directed cycle.
    {
        let mut deg = indeg.clone();
        let mut queue: Vec<u32> = ids.iter().copied().filter(|v| deg[v] == 0).collect();
        let mut succ: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for &(u, v) in &raw.arcs {
            succ.entry(u).or_default().push(v);
        }
        let mut removed = 0usize;
        while let Some(v) = queue.pop() {
            removed += 1;
            for &w in succ.get(&v).into_iter().flatten() {
                let d = deg.get_mut(&w).unwrap();
                *d -= 1;
                if *d == 0 {
                    queue.push(w);
                }
            }
        }
        if removed != ids.len() {
            let cyclic: Vec<VertexId> =
                ids.iter().copied().filter(|v| deg[v] > 0).map(VertexId).collect();
            report.push(
                "acyclicity",
                format!("{} vertices lie on directed cycles", cyclic.len()),
                cyclic,
            );
        }
    }

    report
}

#[derive(Debug, Error, Clone)]
#[error("rooted network validation failed: {report}")]
pub struct InvalidNetwork {
    pub report: ValidationReport,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnrootError {
    #[error("suppressing the root would create a parallel edge between {0} and {1}")]
    ParallelEdge(VertexId, VertexId),
}

impl RootedNetwork {
    /// Builds a validated network from a raw graph, or returns the full
    /// violation report.
    pub fn from_raw(raw: &RawRooted) -> Result<Self, InvalidNetwork> {
        let report = validate_rooted(raw);
        if !report.ok() {
            return Err(InvalidNetwork { report });
        }
        let mut vertices: BTreeMap<VertexId, RootedVertex> = raw
            .vertices
            .iter()
            .map(|&v| {
                (
                    VertexId(v),
                    RootedVertex {
                        parents: Vec::new(),
                        children: Vec::new(),
                        label: raw.labels.get(&v).map(|s| LeafLabel::new(s.clone()).unwrap()),
                    },
                )
            })
            .collect();
        for &(u, v) in &raw.arcs {
            vertices.get_mut(&VertexId(u)).unwrap().children.push(VertexId(v));
            vertices.get_mut(&VertexId(v)).unwrap().parents.push(VertexId(u));
        }
        for vtx in vertices.values_mut() {
            vtx.parents.sort();
            vtx.children.sort();
        }
        let root = *vertices
            .iter()
            .find(|(_, vtx)| vtx.parents.is_empty())
            .map(|(id, _)| id)
            .expect("validated graph has a root");
        let leaf_map = vertices
            .iter()
            .filter_map(|(&id, vtx)| vtx.label.clone().map(|l| (l, id)))
            .collect();
        let next_id = raw.vertices.iter().max().map_or(0, |&m| m + 1);
        Ok(RootedNetwork { vertices, leaf_map, root, next_id })
    }

    /// The |X| = 1 network: a single labelled vertex, also serving as root.
    pub fn single_vertex(label: LeafLabel) -> Self {
        let id = VertexId(0);
        let mut vertices = BTreeMap::new();
        vertices.insert(id, RootedVertex { parents: vec![], children: vec![], label: Some(label.clone()) });
        let mut leaf_map = BTreeMap::new();
        leaf_map.insert(label, id);
        RootedNetwork { vertices, leaf_map, root: id, next_id: 1 }
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.keys().copied()
    }

    pub fn arcs(&self) -> Vec<(VertexId, VertexId)> {
        let mut arcs = Vec::new();
        for (&v, vtx) in &self.vertices {
            for &c in &vtx.children {
                arcs.push((v, c));
            }
        }
        arcs
    }

    pub fn arc_count(&self) -> usize {
        self.vertices.values().map(|v| v.children.len()).sum()
    }

    pub fn parents(&self, v: VertexId) -> &[VertexId] {
        &self.vertices[&v].parents
    }

    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.vertices[&v].children
    }

    pub fn label(&self, v: VertexId) -> Option<&LeafLabel> {
        self.vertices[&v].label.as_ref()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains_key(&v)
    }

    pub fn leaf_map(&self) -> &BTreeMap<LeafLabel, VertexId> {
        &self.leaf_map
    }

    pub fn leaf_vertex(&self, label: &LeafLabel) -> Option<VertexId> {
        self.leaf_map.get(label).copied()
    }

    pub fn has_leaf(&self, label: &LeafLabel) -> bool {
        self.leaf_map.contains_key(label)
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_map.len()
    }

    pub fn leaf_labels(&self) -> Vec<&LeafLabel> {
        self.leaf_map.keys().collect()
    }

    pub fn is_single_vertex(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.vertices[&v].children.is_empty()
    }

    pub fn is_reticulation(&self, v: VertexId) -> bool {
        self.vertices[&v].parents.len() == 2
    }

    pub fn is_tree_vertex(&self, v: VertexId) -> bool {
        let vtx = &self.vertices[&v];
        vtx.parents.len() == 1 && vtx.children.len() == 2
    }

    /// The unique parent of a leaf (or of any in-degree-1 vertex).
    pub fn parent_of(&self, v: VertexId) -> Option<VertexId> {
        match self.vertices[&v].parents.as_slice() {
            [p] => Some(*p),
            _ => None,
        }
    }

    /// Number of reticulations, i.e. in-degree-2 vertices.
    pub fn reticulation_number(&self) -> usize {
        self.vertices.values().filter(|v| v.parents.len() == 2).count()
    }

    pub fn reticulations(&self) -> Vec<VertexId> {
        self.vertices
            .iter()
            .filter(|(_, v)| v.parents.len() == 2)
            .map(|(&id, _)| id)
            .collect()
    }

    pub fn has_arc(&self, from: VertexId, to: VertexId) -> bool {
        self.vertices.get(&from).is_some_and(|v| v.children.contains(&to))
    }

    /// True iff no arc joins two reticulations.
    pub fn is_stack_free(&self) -> bool {
        !self
            .arcs()
            .iter()
            .any(|&(u, v)| self.is_reticulation(u) && self.is_reticulation(v))
    }

    /// True iff some vertex has two reticulation children.
    pub fn has_sibling_reticulations(&self) -> bool {
        self.vertices.values().any(|vtx| {
            vtx.children.iter().filter(|&&c| self.is_reticulation(c)).count() >= 2
        })
    }

    /// Tree-child test via the stack / sibling-reticulation equivalence.
    pub fn is_tree_child_structural(&self) -> bool {
        self.is_stack_free() && !self.has_sibling_reticulations()
    }

    /// Tree-child test via the defining property: every non-leaf vertex has a
    /// child that is a tree vertex or a leaf. Kept separate from
    /// `is_tree_child_structural` so the two routes can be cross-checked.
    pub fn is_tree_child_by_children(&self) -> bool {
        self.vertices.iter().all(|(_, vtx)| {
            vtx.children.is_empty()
                || vtx.children.iter().any(|&c| !self.is_reticulation(c))
        })
    }

    /// Exports the network back to a raw graph (used for revalidation).
    pub fn to_raw(&self) -> RawRooted {
        let mut raw = RawRooted::new();
        for (&v, vtx) in &self.vertices {
            raw.add_vertex(v.0);
            if let Some(l) = &vtx.label {
                raw.set_label(v.0, l.as_str());
            }
            for &c in &vtx.children {
                raw.add_arc(v.0, c.0);
            }
        }
        raw
    }

    /// Re-runs the validation rule set on this value.
    pub fn revalidate(&self) -> ValidationReport {
        validate_rooted(&self.to_raw())
    }

    /// Suppresses the root and drops arc directions. Fails when the root's
    /// children are already joined by an arc, since the result would need a
    /// parallel edge and therefore is not a phylogenetic network.
    pub fn unroot(&self) -> Result<UnrootedNetwork, UnrootError> {
        if self.is_single_vertex() {
            let label = self.leaf_map.keys().next().unwrap().clone();
            return Ok(UnrootedNetwork::single_vertex(label));
        }
        let children = &self.vertices[&self.root].children;
        let (a, b) = (children[0], children[1]);
        if self.has_arc(a, b) || self.has_arc(b, a) {
            return Err(UnrootError::ParallelEdge(a, b));
        }
        let mut raw = RawUnrooted::new();
        for (&v, vtx) in &self.vertices {
            if v == self.root {
                continue;
            }
            if let Some(l) = &vtx.label {
                raw.set_label(v.0, l.as_str());
            }
            for &c in &vtx.children {
                raw.add_edge(v.0, c.0);
            }
        }
        raw.add_edge(a.0, b.0);
        Ok(UnrootedNetwork::from_raw(&raw)
            .expect("unrooting a validated network yields a valid network"))
    }

    // Internal mutators used by reductions and expansions. Callers are
    // responsible for restoring the invariants before the value escapes.

    pub(crate) fn fresh_id(&mut self) -> VertexId {
        let id = VertexId(self.next_id);
        self.next_id += 1;
        id
    }

    pub(crate) fn insert_vertex(&mut self, v: VertexId, label: Option<LeafLabel>) {
        if let Some(l) = &label {
            self.leaf_map.insert(l.clone(), v);
        }
        self.vertices.insert(v, RootedVertex { parents: vec![], children: vec![], label });
    }

    pub(crate) fn remove_vertex(&mut self, v: VertexId) {
        if let Some(vtx) = self.vertices.remove(&v) {
            debug_assert!(vtx.parents.is_empty() && vtx.children.is_empty());
            if let Some(l) = vtx.label {
                self.leaf_map.remove(&l);
            }
        }
    }

    pub(crate) fn add_arc(&mut self, from: VertexId, to: VertexId) {
        let c = &mut self.vertices.get_mut(&from).unwrap().children;
        c.push(to);
        c.sort();
        let p = &mut self.vertices.get_mut(&to).unwrap().parents;
        p.push(from);
        p.sort();
    }

    pub(crate) fn remove_arc(&mut self, from: VertexId, to: VertexId) {
        let c = &mut self.vertices.get_mut(&from).unwrap().children;
        c.retain(|&x| x != to);
        let p = &mut self.vertices.get_mut(&to).unwrap().parents;
        let before = p.len();
        p.retain(|&x| x != from);
        debug_assert!(before > p.len(), "arc {from}->{to} was absent");
    }

    /// Splices out an (in 1, out 1) vertex, connecting parent to child.
    pub(crate) fn suppress(&mut self, v: VertexId) {
        let (p, c) = {
            let vtx = &self.vertices[&v];
            debug_assert!(vtx.parents.len() == 1 && vtx.children.len() == 1);
            (vtx.parents[0], vtx.children[0])
        };
        self.remove_arc(p, v);
        self.remove_arc(v, c);
        self.remove_vertex(v);
        self.add_arc(p, c);
    }

    pub(crate) fn set_root(&mut self, v: VertexId) {
        self.root = v;
    }
}

impl fmt::Debug for RootedNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootedNetwork(root={}, ", self.root)?;
        let arcs: Vec<String> = self.arcs().iter().map(|(u, v)| format!("{u}->{v}")).collect();
        let labels: Vec<String> = self
            .leaf_map
            .iter()
            .map(|(l, v)| format!("{v}={l}"))
            .collect();
        write!(f, "arcs=[{}], leaves=[{}])", arcs.join(", "), labels.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cherry_raw() -> RawRooted {
        let mut raw = RawRooted::new();
        raw.add_arc(0, 1).add_arc(0, 2).set_label(1, "a").set_label(2, "b");
        raw
    }

    #[test]
    fn single_labelled_vertex_is_valid() {
        let mut raw = RawRooted::new();
        raw.set_label(0, "a");
        assert!(validate_rooted(&raw).ok());
        let n = RootedNetwork::from_raw(&raw).unwrap();
        assert!(n.is_single_vertex());
        assert_eq!(n.reticulation_number(), 0);
    }

    #[test]
    fn smallest_cherry_network_is_valid() {
        let report = validate_rooted(&cherry_raw());
        assert!(report.ok(), "{report}");
        let n = RootedNetwork::from_raw(&cherry_raw()).unwrap();
        assert_eq!(n.leaf_count(), 2);
        assert_eq!(n.arc_count(), 2);
    }

    #[test]
    fn in2_out2_vertex_is_a_degree_profile_violation() {
        // Hand-built 6-vertex graph whose vertex 3 has in-degree 2, out-degree 2.
        let mut raw = RawRooted::new();
        raw.add_arc(0, 1)
            .add_arc(0, 2)
            .add_arc(1, 3)
            .add_arc(2, 3)
            .add_arc(3, 4)
            .add_arc(3, 5)
            .add_arc(1, 4)
            .add_arc(2, 5);
        raw.set_label(4, "a").set_label(5, "b");
        let report = validate_rooted(&raw);
        assert!(!report.ok());
        assert!(report.has_rule("degree-profile"), "{report}");
        // vertices 4 and 5 also break the profile (in-degree 2, out-degree 0)
        assert!(report.violations.len() >= 2);
    }

    #[test]
    fn collects_all_violations_not_just_first() {
        let mut raw = RawRooted::new();
        raw.add_arc(0, 0); // loop
        raw.add_arc(0, 1);
        raw.add_arc(0, 1); // parallel
        raw.set_label(0, "dup").set_label(1, "dup");
        let report = validate_rooted(&raw);
        assert!(report.has_rule("loop"));
        assert!(report.has_rule("parallel-arcs"));
        assert!(report.has_rule("label-duplicate"));
    }

    #[test]
    fn cycle_is_reported() {
        let mut raw = RawRooted::new();
        raw.add_arc(0, 1).add_arc(1, 2).add_arc(2, 1);
        raw.set_label(2, "a");
        let report = validate_rooted(&raw);
        assert!(report.has_rule("acyclicity"), "{report}");
    }

    #[test]
    fn trees_are_tree_child_and_stack_free() {
        let n = RootedNetwork::from_raw(&cherry_raw()).unwrap();
        assert!(n.is_stack_free());
        assert!(!n.has_sibling_reticulations());
        assert!(n.is_tree_child_structural());
        assert!(n.is_tree_child_by_children());
    }

    #[test]
    fn unroot_cherry_gives_single_edge() {
        let n = RootedNetwork::from_raw(&cherry_raw()).unwrap();
        let u = n.unroot().unwrap();
        assert_eq!(u.edge_count(), 1);
        assert_eq!(u.leaf_count(), 2);
    }

    #[test]
    fn unroot_rejects_arc_between_root_children() {
        // root -> u, root -> v, u -> v, u -> a, v -> b
        let mut raw = RawRooted::new();
        raw.add_arc(0, 1).add_arc(0, 2).add_arc(1, 2).add_arc(1, 3).add_arc(2, 4);
        raw.set_label(3, "a").set_label(4, "b");
        let n = RootedNetwork::from_raw(&raw).unwrap();
        assert!(n.is_tree_child_structural());
        assert!(matches!(n.unroot(), Err(UnrootError::ParallelEdge(_, _))));
    }
}
