use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::label::LeafLabel;
use super::report::ValidationReport;
use super::rooted::VertexId;

/// A raw undirected graph with a partial leaf labelling, as handed to
/// `validate_unrooted`.
#[derive(Debug, Clone, Default)]
pub struct RawUnrooted {
    pub vertices: BTreeSet<u32>,
    pub edges: Vec<(u32, u32)>,
    pub labels: BTreeMap<u32, String>,
}

impl RawUnrooted {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: u32) -> &mut Self {
        self.vertices.insert(v);
        self
    }

    pub fn add_edge(&mut self, u: u32, v: u32) -> &mut Self {
        self.vertices.insert(u);
        self.vertices.insert(v);
        self.edges.push((u.min(v), u.max(v)));
        self
    }

    pub fn set_label(&mut self, v: u32, label: impl Into<String>) -> &mut Self {
        self.vertices.insert(v);
        self.labels.insert(v, label.into());
        self
    }
}

#[derive(Debug, Clone)]
struct UnrootedVertex {
    neighbours: Vec<VertexId>,
    label: Option<LeafLabel>,
}

/// A validated unrooted binary phylogenetic network: a connected simple
/// undirected graph whose internal vertices all have degree 3 and whose
/// degree-1 vertices are bijectively labelled, or a single labelled vertex.
#[derive(Clone)]
pub struct UnrootedNetwork {
    vertices: BTreeMap<VertexId, UnrootedVertex>,
    leaf_map: BTreeMap<LeafLabel, VertexId>,
    next_id: u32,
}

/// Runs every unrooted-network invariant against a raw graph.
pub fn validate_unrooted(raw: &RawUnrooted) -> ValidationReport {
    let mut report = ValidationReport::default();
    let ids: Vec<u32> = raw.vertices.iter().copied().collect();

    for &(u, v) in &raw.edges {
        if u == v {
            report.push("loop", format!("edge {{{u},{u}}} is a loop"), vec![VertexId(u)]);
        }
    }
    {
        let mut seen = BTreeSet::new();
        for &(u, v) in &raw.edges {
            if !seen.insert((u, v)) {
                report.push(
                    "parallel-edges",
                    format!("edge {{{u},{v}}} appears more than once"),
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

    if ids.is_empty() {
        report.push("connectivity", "graph has no vertices".into(), vec![]);
        return report;
    }

    let mut degree: BTreeMap<u32, usize> = ids.iter().map(|&v| (v, 0)).collect();
    for &(u, v) in &raw.edges {
        *degree.get_mut(&u).unwrap() += 1;
        *degree.get_mut(&v).unwrap() += 1;
    }

    if ids.len() == 1 {
        let v = ids[0];
        if !raw.edges.is_empty() {
            // only loops can exist on one vertex; already reported above
        } else if !raw.labels.contains_key(&v) {
            report.push("leaf-unlabelled", format!("isolated vertex {} is unlabelled", VertexId(v)), vec![VertexId(v)]);
        }
        return report;
    }

    for &v in &ids {
        let d = degree[&v];
        let labelled = raw.labels.contains_key(&v);
        match d {
            1 => {
                if !labelled {
                    report.push("leaf-unlabelled", format!("leaf {} is unlabelled", VertexId(v)), vec![VertexId(v)]);
                }
            }
            3 => {
                if labelled {
                    report.push("labelled-internal", format!("internal vertex {} carries a leaf label", VertexId(v)), vec![VertexId(v)]);
                }
            }
            _ => {
                report.push(
                    "degree-profile",
                    format!("vertex {} has degree {d}, expected 1 or 3", VertexId(v)),
                    vec![VertexId(v)],
                );
            }
        }
    }

    // Connectivity by flood fill from the smallest vertex.
    {
        let mut adj: BTreeMap<u32, Vec<u32>> = ids.iter().map(|&v| (v, vec![])).collect();
        for &(u, v) in &raw.edges {
            adj.get_mut(&u).unwrap().push(v);
            adj.get_mut(&v).unwrap().push(u);
        }
        let mut seen = BTreeSet::new();
        let mut stack = vec![ids[0]];
        while let Some(v) = stack.pop() {
            if seen.insert(v) {
                stack.extend(adj[&v].iter().copied());
            }
        }
        if seen.len() != ids.len() {
            let missing: Vec<VertexId> =
                ids.iter().copied().filter(|v| !seen.contains(v)).map(VertexId).collect();
            report.push(
                "connectivity",
                format!("{} vertices are unreachable from {}", missing.len(), VertexId(ids[0])),
                missing,
            );
        }
    }

    report
}

#[derive(Debug, Error, Clone)]
#[error("unrooted network validation failed: {report}")]
pub struct InvalidUnrooted {
    pub report: ValidationReport,
}

impl UnrootedNetwork {
    pub fn from_raw(raw: &RawUnrooted) -> Result<Self, InvalidUnrooted> {
        let report = validate_unrooted(raw);
        if !report.ok() {
            return Err(InvalidUnrooted { report });
        }
        let mut vertices: BTreeMap<VertexId, UnrootedVertex> = raw
            .vertices
            .iter()
            .map(|&v| {
                (
                    VertexId(v),
                    UnrootedVertex {
                        neighbours: Vec::new(),
                        label: raw.labels.get(&v).map(|s| LeafLabel::new(s.clone()).unwrap()),
                    },
                )
            })
            .collect();
        for &(u, v) in &raw.edges {
            vertices.get_mut(&VertexId(u)).unwrap().neighbours.push(VertexId(v));
            vertices.get_mut(&VertexId(v)).unwrap().neighbours.push(VertexId(u));
        }
        for vtx in vertices.values_mut() {
            vtx.neighbours.sort();
        }
        let leaf_map = vertices
            .iter()
            .filter_map(|(&id, vtx)| vtx.label.clone().map(|l| (l, id)))
            .collect();
        let next_id = raw.vertices.iter().max().map_or(0, |&m| m + 1);
        Ok(UnrootedNetwork { vertices, leaf_map, next_id })
    }

    pub fn single_vertex(label: LeafLabel) -> Self {
        let id = VertexId(0);
        let mut vertices = BTreeMap::new();
        vertices.insert(id, UnrootedVertex { neighbours: vec![], label: Some(label.clone()) });
        let mut leaf_map = BTreeMap::new();
        leaf_map.insert(label, id);
        UnrootedNetwork { vertices, leaf_map, next_id: 1 }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.keys().copied()
    }

    /// Edges as normalized (smaller id, larger id) pairs, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut edges = Vec::new();
        for (&v, vtx) in &self.vertices {
            for &w in &vtx.neighbours {
                if v < w {
                    edges.push((v, w));
                }
            }
        }
        edges
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.values().map(|v| v.neighbours.len()).sum::<usize>() / 2
    }

    pub fn neighbours(&self, v: VertexId) -> &[VertexId] {
        &self.vertices[&v].neighbours
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.vertices[&v].neighbours.len()
    }

    pub fn label(&self, v: VertexId) -> Option<&LeafLabel> {
        self.vertices[&v].label.as_ref()
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

    pub fn is_single_edge(&self) -> bool {
        self.vertices.len() == 2 && self.edge_count() == 1
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.degree(v) <= 1 && self.vertices[&v].label.is_some()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.vertices.get(&u).is_some_and(|x| x.neighbours.contains(&v))
    }

    /// |E| - (|V| - 1); zero exactly for trees.
    pub fn reticulation_number(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    /// All bridges, via one lowpoint DFS. An edge lies on a cycle iff it is
    /// not returned here.
    pub fn bridges(&self) -> BTreeSet<(VertexId, VertexId)> {
        let ids: Vec<VertexId> = self.vertices.keys().copied().collect();
        let index: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let n = ids.len();
        let mut visit = vec![usize::MAX; n];
        let mut low = vec![usize::MAX; n];
        let mut bridges = BTreeSet::new();
        if n == 0 {
            return bridges;
        }
        // Iterative DFS; parent edge tracked by the neighbour position it came in on.
        let mut stack: Vec<(usize, usize, usize)> = Vec::new(); // (vertex, parent, next neighbour idx)
        let start = 0usize;
        visit[start] = 0;
        low[start] = 0;
        let mut clock = 1usize;
        stack.push((start, usize::MAX, 0));
        while let Some(&mut (v, parent, ref mut next)) = stack.last_mut() {
            let nbrs = &self.vertices[&ids[v]].neighbours;
            if *next < nbrs.len() {
                let w = index[&nbrs[*next]];
                *next += 1;
                if visit[w] == usize::MAX {
                    visit[w] = clock;
                    low[w] = clock;
                    clock += 1;
                    stack.push((w, v, 0));
                } else if w != parent {
                    low[v] = low[v].min(visit[w]);
                }
            } else {
                stack.pop();
                if let Some(&mut (p, _, _)) = stack.last_mut() {
                    low[p] = low[p].min(low[v]);
                    if low[v] > visit[p] {
                        let (a, b) = (ids[p].min(ids[v]), ids[p].max(ids[v]));
                        bridges.insert((a, b));
                    }
                }
            }
        }
        bridges
    }

    /// True iff {u,v} is an edge lying on a cycle.
    pub fn is_cycle_edge(&self, u: VertexId, v: VertexId) -> bool {
        let key = (u.min(v), u.max(v));
        self.has_edge(u, v) && !self.bridges().contains(&key)
    }

    pub fn to_raw(&self) -> RawUnrooted {
        let mut raw = RawUnrooted::new();
        for (&v, vtx) in &self.vertices {
            raw.add_vertex(v.0);
            if let Some(l) = &vtx.label {
                raw.set_label(v.0, l.as_str());
            }
            for &w in &vtx.neighbours {
                if v < w {
                    raw.add_edge(v.0, w.0);
                }
            }
        }
        raw
    }

    pub fn revalidate(&self) -> ValidationReport {
        validate_unrooted(&self.to_raw())
    }

    // Internal mutators for reductions; callers restore invariants.

    pub(crate) fn fresh_id(&mut self) -> VertexId {
        let id = VertexId(self.next_id);
        self.next_id += 1;
        id
    }

    pub(crate) fn insert_vertex(&mut self, v: VertexId, label: Option<LeafLabel>) {
        if let Some(l) = &label {
            self.leaf_map.insert(l.clone(), v);
        }
        self.vertices.insert(v, UnrootedVertex { neighbours: vec![], label });
    }

    pub(crate) fn remove_vertex(&mut self, v: VertexId) {
        if let Some(vtx) = self.vertices.remove(&v) {
            debug_assert!(vtx.neighbours.is_empty());
            if let Some(l) = vtx.label {
                self.leaf_map.remove(&l);
            }
        }
    }

    pub(crate) fn add_edge(&mut self, u: VertexId, v: VertexId) {
        debug_assert!(u != v);
        let a = &mut self.vertices.get_mut(&u).unwrap().neighbours;
        a.push(v);
        a.sort();
        let b = &mut self.vertices.get_mut(&v).unwrap().neighbours;
        b.push(u);
        b.sort();
    }

    pub(crate) fn remove_edge(&mut self, u: VertexId, v: VertexId) {
        let a = &mut self.vertices.get_mut(&u).unwrap().neighbours;
        a.retain(|&x| x != v);
        let b = &mut self.vertices.get_mut(&v).unwrap().neighbours;
        let before = b.len();
        b.retain(|&x| x != u);
        debug_assert!(before > b.len(), "edge {{{u},{v}}} was absent");
    }

    /// Splices out a degree-2 vertex, joining its two neighbours.
    pub(crate) fn suppress(&mut self, v: VertexId) {
        let (a, b) = {
            let nbrs = &self.vertices[&v].neighbours;
            debug_assert!(nbrs.len() == 2);
            (nbrs[0], nbrs[1])
        };
        self.remove_edge(v, a);
        self.remove_edge(v, b);
        self.remove_vertex(v);
        debug_assert!(!self.has_edge(a, b), "suppression would create a parallel edge");
        self.add_edge(a, b);
    }
}

impl fmt::Debug for UnrootedNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
        let labels: Vec<String> = self
            .leaf_map
            .iter()
            .map(|(l, v)| format!("{v}={l}"))
            .collect();
        write!(f, "UnrootedNetwork(edges=[{}], leaves=[{}])", edges.join(", "), labels.join(", "))
    }
}
