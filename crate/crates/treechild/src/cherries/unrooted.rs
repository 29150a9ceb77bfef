use crate::model::{LeafLabel, UnrootedNetwork};

use super::{Reducible, Reduction, ReductionAudit, ReduceError, ReductionSite, SiteWitness};

impl Reducible for UnrootedNetwork {
    fn list_cherries(&self) -> Vec<(LeafLabel, LeafLabel)> {
        if self.is_single_edge() {
            let mut labels = self.leaf_map().keys();
            let a = labels.next().unwrap().clone();
            let b = labels.next().unwrap().clone();
            return vec![(a, b)];
        }
        let mut out = Vec::new();
        let leaves: Vec<_> = self.leaf_map().iter().collect();
        for (i, (a, &va)) in leaves.iter().enumerate() {
            for (b, &vb) in &leaves[i + 1..] {
                if self.neighbours(va).first() == self.neighbours(vb).first() {
                    out.push(((*a).clone(), (*b).clone()));
                }
            }
        }
        out
    }

    fn list_reticulated_cherries(&self) -> Vec<ReductionSite> {
        if self.vertex_count() <= 2 {
            return Vec::new();
        }
        let bridges = self.bridges();
        let mut out = Vec::new();
        let leaves: Vec<_> = self.leaf_map().iter().collect();
        for (i, (a, &va)) in leaves.iter().enumerate() {
            let u = self.neighbours(va)[0];
            for (b, &vb) in &leaves[i + 1..] {
                let v = self.neighbours(vb)[0];
                if u == v || !self.has_edge(u, v) {
                    continue;
                }
                // {u,v} lies on a cycle iff it is not a bridge.
                if !bridges.contains(&(u.min(v), u.max(v))) {
                    out.push(ReductionSite {
                        reduction: Reduction::reticulated((*a).clone(), (*b).clone()),
                        witness: SiteWitness::UnrootedReticulation { near_x: u, near_y: v },
                    });
                }
            }
        }
        out
    }

    fn reduce(&self, reduction: &Reduction) -> Result<(Self, ReductionAudit), ReduceError> {
        match reduction.kind {
            super::ReductionKind::Cherry => reduce_cherry(self, reduction),
            super::ReductionKind::ReticulatedCherry => reduce_reticulated(self, reduction),
        }
    }
}

fn reduce_cherry(
    net: &UnrootedNetwork,
    reduction: &Reduction,
) -> Result<(UnrootedNetwork, ReductionAudit), ReduceError> {
    let not_applicable = || ReduceError::NotApplicable(reduction.clone());
    let vx = net.leaf_vertex(&reduction.x).ok_or_else(not_applicable)?;
    let vy = net.leaf_vertex(&reduction.y).ok_or_else(not_applicable)?;
    let mut audit = ReductionAudit { applied: Some(reduction.clone()), ..Default::default() };

    if net.is_single_edge() {
        let mut next = net.clone();
        next.remove_edge(vx, vy);
        next.remove_vertex(vx);
        audit.removed_vertices.push(vx);
        audit.removed_links.push((vx.min(vy), vx.max(vy)));
        return Ok((next, audit));
    }

    let px = *net.neighbours(vx).first().ok_or_else(not_applicable)?;
    let py = *net.neighbours(vy).first().ok_or_else(not_applicable)?;
    if px != py {
        return Err(not_applicable());
    }
    let mut next = net.clone();
    next.remove_edge(px, vx);
    next.remove_vertex(vx);
    audit.removed_vertices.push(vx);
    audit.removed_links.push((px.min(vx), px.max(vx)));
    // The shared neighbour drops to degree 2: vy plus one internal vertex, so
    // suppression cannot create a parallel edge.
    let other = *next.neighbours(px).iter().find(|&&w| w != vy).unwrap();
    next.suppress(px);
    audit.removed_vertices.push(px);
    audit.added_links.push((vy.min(other), vy.max(other)));
    debug_assert!(next.revalidate().ok(), "cherry reduction broke validity: {next:?}");
    Ok((next, audit))
}

fn reduce_reticulated(
    net: &UnrootedNetwork,
    reduction: &Reduction,
) -> Result<(UnrootedNetwork, ReductionAudit), ReduceError> {
    let not_applicable = || ReduceError::NotApplicable(reduction.clone());
    let vx = net.leaf_vertex(&reduction.x).ok_or_else(not_applicable)?;
    let vy = net.leaf_vertex(&reduction.y).ok_or_else(not_applicable)?;
    if net.vertex_count() <= 2 {
        return Err(not_applicable());
    }
    let u = *net.neighbours(vx).first().ok_or_else(not_applicable)?;
    let v = *net.neighbours(vy).first().ok_or_else(not_applicable)?;
    if u == v || !net.is_cycle_edge(u, v) {
        return Err(not_applicable());
    }

    let mut next = net.clone();
    let mut audit = ReductionAudit { applied: Some(reduction.clone()), ..Default::default() };
    next.remove_edge(u, v);
    audit.removed_links.push((u.min(v), u.max(v)));
    // Both endpoints drop to degree 2; their leaf neighbours keep suppression
    // from ever producing a parallel edge.
    let wu = *next.neighbours(u).iter().find(|&&w| w != vx).unwrap();
    next.suppress(u);
    audit.removed_vertices.push(u);
    audit.added_links.push((vx.min(wu), vx.max(wu)));
    let wv = *next.neighbours(v).iter().find(|&&w| w != vy).unwrap();
    next.suppress(v);
    audit.removed_vertices.push(v);
    audit.added_links.push((vy.min(wv), vy.max(wv)));
    debug_assert!(next.revalidate().ok(), "reticulated reduction broke validity: {next:?}");
    Ok((next, audit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{are_isomorphic_unrooted, RawUnrooted};

    fn label(s: &str) -> LeafLabel {
        LeafLabel::new(s).unwrap()
    }

    fn single_edge() -> UnrootedNetwork {
        let mut raw = RawUnrooted::new();
        raw.add_edge(0, 1).set_label(0, "a").set_label(1, "b");
        UnrootedNetwork::from_raw(&raw).unwrap()
    }

    /// Triangle u,v,w with leaves a-u, b-v, c-w: reticulated cherries on all
    /// three pairs.
    fn triangle() -> UnrootedNetwork {
        let mut raw = RawUnrooted::new();
        raw.add_edge(0, 1).add_edge(1, 2).add_edge(2, 0);
        raw.add_edge(0, 3).add_edge(1, 4).add_edge(2, 5);
        raw.set_label(3, "a").set_label(4, "b").set_label(5, "c");
        UnrootedNetwork::from_raw(&raw).unwrap()
    }

    #[test]
    fn single_edge_is_a_cherry() {
        let u = single_edge();
        assert_eq!(u.list_cherries(), vec![(label("a"), label("b"))]);
        let (v, _) = u.reduce(&Reduction::cherry(label("a"), label("b"))).unwrap();
        assert!(v.is_single_vertex());
        assert!(v.has_leaf(&label("b")));
    }

    #[test]
    fn triangle_has_three_reticulated_cherries_and_no_cherry() {
        let u = triangle();
        assert!(u.list_cherries().is_empty());
        let sites = u.list_reticulated_cherries();
        assert_eq!(sites.len(), 3);
    }

    #[test]
    fn unrooted_reticulated_reduction_is_orientation_symmetric() {
        let u = triangle();
        let (red_ab, _) = u.reduce(&Reduction::reticulated(label("a"), label("b"))).unwrap();
        let (red_ba, _) = u.reduce(&Reduction::reticulated(label("b"), label("a"))).unwrap();
        assert!(are_isomorphic_unrooted(&red_ab, &red_ba));
        assert_eq!(red_ab.reticulation_number(), u.reticulation_number() - 1);
        assert_eq!(red_ab.leaf_count(), u.leaf_count());
    }

    #[test]
    fn tree_has_no_reticulated_cherries() {
        let mut raw = RawUnrooted::new();
        raw.add_edge(0, 1).add_edge(0, 2).add_edge(0, 3);
        raw.set_label(1, "a").set_label(2, "b").set_label(3, "c");
        let u = UnrootedNetwork::from_raw(&raw).unwrap();
        assert!(u.list_reticulated_cherries().is_empty());
        assert_eq!(u.list_cherries().len(), 3);
    }

    #[test]
    fn cherry_reduction_decrements_leaf_count() {
        let u = triangle();
        // No cherry on the triangle: reduce must fail.
        let err = u.reduce(&Reduction::cherry(label("a"), label("b"))).unwrap_err();
        assert!(matches!(err, ReduceError::NotApplicable(_)));
        // Star on three leaves does have cherries.
        let mut raw = RawUnrooted::new();
        raw.add_edge(0, 1).add_edge(0, 2).add_edge(0, 3);
        raw.set_label(1, "a").set_label(2, "b").set_label(3, "c");
        let star = UnrootedNetwork::from_raw(&raw).unwrap();
        let (v, _) = star.reduce(&Reduction::cherry(label("a"), label("b"))).unwrap();
        assert_eq!(v.leaf_count(), 2);
        assert!(v.is_single_edge());
    }
}
