//! Brute-force tree-child orientation oracle.
//!
//! Inverts the orientation definition literally: for every edge, subdivide it
//! with a candidate root, then enumerate acyclic direction assignments
//! consistent with the binary degree profile and test the resulting rooted
//! network. Constraint propagation forces leaf and root edges and every edge
//! incident to a vertex whose profile is already determined, so branching
//! effectively happens on cycle edges only. Exhaustive at desk scale.

use std::time::Instant;

use thiserror::Error;

use crate::model::{RawRooted, RootedNetwork, UnrootedNetwork, VertexId};

use super::{classify_rooted, OrientationResult, OrientationStatus, SearchStats};

/// Default guard on |E| for the oracle.
pub const DEFAULT_ORACLE_EDGE_CAP: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("network has {edges} edges, above the oracle cap of {cap}")]
    TooLarge { edges: usize, cap: usize },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Dir {
    Unset,
    Forward,  // edge (u, v) directed u -> v
    Backward, // directed v -> u
}

struct Assignment {
    edges: Vec<(usize, usize)>,
    dirs: Vec<Dir>,
    indeg: Vec<u8>,
    outdeg: Vec<u8>,
    target_deg: Vec<u8>,
    incident: Vec<Vec<usize>>,
    root: usize,
    tried: u64,
}

impl Assignment {
    /// Sets one direction and propagates forced consequences. Returns the
    /// edges set (for undo), or None on contradiction.
    fn assign(&mut self, edge: usize, forward: bool) -> Option<Vec<usize>> {
        let mut set = Vec::new();
        if !self.set_dir(edge, forward, &mut set) {
            self.undo(&set);
            return None;
        }
        let mut cursor = 0;
        while cursor < set.len() {
            let e = set[cursor];
            cursor += 1;
            let (u, v) = self.edges[e];
            for w in [u, v] {
                if !self.propagate_vertex(w, &mut set) {
                    self.undo(&set);
                    return None;
                }
            }
        }
        Some(set)
    }

    fn set_dir(&mut self, edge: usize, forward: bool, set: &mut Vec<usize>) -> bool {
        match self.dirs[edge] {
            Dir::Unset => {}
            Dir::Forward => return forward,
            Dir::Backward => return !forward,
        }
        let (u, v) = self.edges[edge];
        let (from, to) = if forward { (u, v) } else { (v, u) };
        self.dirs[edge] = if forward { Dir::Forward } else { Dir::Backward };
        self.outdeg[from] += 1;
        self.indeg[to] += 1;
        set.push(edge);
        self.vertex_ok(from) && self.vertex_ok(to)
    }

    fn vertex_ok(&self, w: usize) -> bool {
        let deg = self.target_deg[w];
        let (din, dout) = (self.indeg[w], self.outdeg[w]);
        if w == self.root {
            return din == 0;
        }
        match deg {
            1 => dout == 0,           // leaves take their single edge inward
            2 => din == 0,            // only the root has degree 2
            _ => din <= 2 && dout <= 2 && !(din == 2 && dout == 2),
        }
    }

    /// Forces the remaining edges at a vertex whose profile is decided.
    fn propagate_vertex(&mut self, w: usize, set: &mut Vec<usize>) -> bool {
        let deg = self.target_deg[w];
        if deg != 3 || w == self.root {
            return self.force_all(w, set);
        }
        let (din, dout) = (self.indeg[w], self.outdeg[w]);
        // Internal profile is (1,2) or (2,1).
        if din == 2 {
            self.force_remaining(w, true, set)
        } else if dout == 2 {
            self.force_remaining(w, false, set)
        } else if din == 1 && dout == 1 {
            true // third edge still free in either profile
        } else {
            true
        }
    }

    /// Root edges point outward; leaf edges point inward.
    fn force_all(&mut self, w: usize, set: &mut Vec<usize>) -> bool {
        let outward = w == self.root;
        self.force_remaining(w, outward, set)
    }

    /// Directs every unset edge at w outward (true) or inward (false).
    fn force_remaining(&mut self, w: usize, outward: bool, set: &mut Vec<usize>) -> bool {
        for i in 0..self.incident[w].len() {
            let e = self.incident[w][i];
            if self.dirs[e] != Dir::Unset {
                continue;
            }
            let (u, _) = self.edges[e];
            let forward = (u == w) == outward;
            if !self.set_dir(e, forward, set) {
                return false;
            }
        }
        true
    }

    fn undo(&mut self, set: &[usize]) {
        for &e in set {
            let (u, v) = self.edges[e];
            let (from, to) = match self.dirs[e] {
                Dir::Forward => (u, v),
                Dir::Backward => (v, u),
                Dir::Unset => unreachable!("undo of unset edge"),
            };
            self.outdeg[from] -= 1;
            self.indeg[to] -= 1;
            self.dirs[e] = Dir::Unset;
        }
    }

    fn first_unset(&self) -> Option<usize> {
        self.dirs.iter().position(|d| *d == Dir::Unset)
    }
}

/// Exhaustive search over direction assignments for one root placement.
fn orient_with_root(
    assignment: &mut Assignment,
    vertex_count: usize,
    labels: &[(usize, String)],
) -> Option<RootedNetwork> {
    match assignment.first_unset() {
        None => {
            assignment.tried += 1;
            let mut raw = RawRooted::new();
            for i in 0..vertex_count {
                raw.add_vertex(i as u32);
            }
            for (e, &(u, v)) in assignment.edges.iter().enumerate() {
                match assignment.dirs[e] {
                    Dir::Forward => raw.add_arc(u as u32, v as u32),
                    Dir::Backward => raw.add_arc(v as u32, u as u32),
                    Dir::Unset => unreachable!(),
                };
            }
            for (v, name) in labels {
                raw.set_label(*v as u32, name.clone());
            }
            // Validation performs the acyclicity and degree-profile check.
            let network = RootedNetwork::from_raw(&raw).ok()?;
            network.is_tree_child_structural().then_some(network)
        }
        Some(edge) => {
            for forward in [true, false] {
                if let Some(set) = assignment.assign(edge, forward) {
                    if let Some(found) = orient_with_root(assignment, vertex_count, labels) {
                        return Some(found);
                    }
                    assignment.undo(&set);
                }
            }
            None
        }
    }
}

/// Enumerates every root position and every consistent acyclic direction
/// assignment, returning the first tree-child orientation found, or a
/// certified "none" after exhausting all of them.
pub fn brute_force_tree_child_orientation(
    network: &UnrootedNetwork,
) -> Result<OrientationResult, OracleError> {
    brute_force_tree_child_orientation_with_cap(network, DEFAULT_ORACLE_EDGE_CAP)
}

pub fn brute_force_tree_child_orientation_with_cap(
    network: &UnrootedNetwork,
    cap: usize,
) -> Result<OrientationResult, OracleError> {
    let started = Instant::now();
    let edge_count = network.edge_count();
    if edge_count > cap {
        return Err(OracleError::TooLarge { edges: edge_count, cap });
    }

    if network.is_single_vertex() {
        let label = network.leaf_labels()[0].clone();
        return Ok(OrientationResult {
            status: OrientationStatus::Found,
            orientation: Some(RootedNetwork::single_vertex(label)),
            sequence: Some(crate::sequences::CherryPickingSequence::default()),
            stats: SearchStats { elapsed: started.elapsed(), ..Default::default() },
        });
    }

    let ids: Vec<VertexId> = network.vertex_ids().collect();
    let index = |v: VertexId| ids.iter().position(|&x| x == v).unwrap();
    let base_edges: Vec<(usize, usize)> = network
        .edges()
        .into_iter()
        .map(|(u, v)| (index(u), index(v)))
        .collect();
    let labels: Vec<(usize, String)> = ids
        .iter()
        .enumerate()
        .filter_map(|(i, &v)| network.label(v).map(|l| (i, l.to_string())))
        .collect();

    let mut tried = 0u64;
    for (root_edge, &(eu, ev)) in base_edges.iter().enumerate() {
        // Subdivide the chosen edge with the root vertex.
        let root = ids.len();
        let mut edges: Vec<(usize, usize)> = base_edges.clone();
        edges.remove(root_edge);
        edges.push((root, eu));
        edges.push((root, ev));

        let n = ids.len() + 1;
        let mut incident = vec![Vec::new(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            incident[u].push(e);
            incident[v].push(e);
        }
        let mut target_deg = vec![0u8; n];
        for &(u, v) in &edges {
            target_deg[u] += 1;
            target_deg[v] += 1;
        }

        let mut assignment = Assignment {
            dirs: vec![Dir::Unset; edges.len()],
            indeg: vec![0; n],
            outdeg: vec![0; n],
            target_deg,
            incident,
            edges,
            root,
            tried: 0,
        };

        // Seed: root edges outward, leaf edges inward; cascades through the
        // propagation rules.
        let mut ok = true;
        let mut seed = Vec::new();
        for w in 0..n {
            if !assignment.propagate_vertex(w, &mut seed) {
                ok = false;
                break;
            }
        }
        let mut cursor = 0;
        while ok && cursor < seed.len() {
            let (u, v) = assignment.edges[seed[cursor]];
            cursor += 1;
            for w in [u, v] {
                if !assignment.propagate_vertex(w, &mut seed) {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            if let Some(found) = orient_with_root(&mut assignment, n, &labels) {
                let sequence = classify_rooted(&found)
                    .witness
                    .map(|w| w.sequence);
                return Ok(OrientationResult {
                    status: OrientationStatus::Found,
                    orientation: Some(found),
                    sequence,
                    stats: SearchStats {
                        nodes_expanded: tried + assignment.tried,
                        memo_hits: 0,
                        elapsed: started.elapsed(),
                    },
                });
            }
        }
        tried += assignment.tried;
    }

    Ok(OrientationResult::none(SearchStats {
        nodes_expanded: tried,
        memo_hits: 0,
        elapsed: started.elapsed(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_unrooted;
    use crate::model::Network;

    #[test]
    fn single_edge_is_found() {
        let u = parse_unrooted("unrooted\na b\n").unwrap();
        let result = brute_force_tree_child_orientation(&u).unwrap();
        assert_eq!(result.status, OrientationStatus::Found);
    }

    #[test]
    fn unrooted_trees_are_found_tree_child() {
        let u = parse_unrooted("unrooted\nu a\nu v\nv b\nv c\nu d\n").unwrap();
        let result = brute_force_tree_child_orientation(&u).unwrap();
        assert_eq!(result.status, OrientationStatus::Found);
        let r = result.orientation.unwrap();
        assert!(r.is_tree_child_structural());
        assert!(r.unroot().unwrap().is_isomorphic_to(&u));
    }

    #[test]
    fn triangle_instance_is_found() {
        let u = parse_unrooted("unrooted\nu v\nv w\nw u\nu a\nv b\nw c\n").unwrap();
        let result = brute_force_tree_child_orientation(&u).unwrap();
        assert_eq!(result.status, OrientationStatus::Found);
        let r = result.orientation.unwrap();
        assert_eq!(r.reticulation_number(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let u = parse_unrooted("unrooted\nu v\nv w\nw u\nu a\nv b\nw c\n").unwrap();
        let err = brute_force_tree_child_orientation_with_cap(&u, 3).unwrap_err();
        assert!(matches!(err, OracleError::TooLarge { .. }));
    }
}
