//! Cherry and reticulated-cherry detection, reduction, and (for rooted
//! networks) the inverse expansions.

mod rooted;
mod unrooted;

use std::fmt;

use thiserror::Error;

use crate::model::{LeafLabel, Network, VertexId};

pub use rooted::ExpandError;

/// The two reduction operations on leaf pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReductionKind {
    Cherry,
    ReticulatedCherry,
}

/// One sequence element: cherry `[x,y]` or reticulated cherry `(x,y)`.
///
/// A cherry reduction deletes leaf `x`. In a rooted network the first
/// coordinate of a reticulated cherry is always the reticulation leaf; in an
/// unrooted network either orientation names the same reduction.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Reduction {
    pub kind: ReductionKind,
    pub x: LeafLabel,
    pub y: LeafLabel,
}

impl Reduction {
    pub fn cherry(x: LeafLabel, y: LeafLabel) -> Self {
        assert!(x != y, "reduction coordinates must differ");
        Reduction { kind: ReductionKind::Cherry, x, y }
    }

    pub fn reticulated(x: LeafLabel, y: LeafLabel) -> Self {
        assert!(x != y, "reduction coordinates must differ");
        Reduction { kind: ReductionKind::ReticulatedCherry, x, y }
    }

    pub fn is_cherry(&self) -> bool {
        self.kind == ReductionKind::Cherry
    }

    pub fn contains(&self, label: &LeafLabel) -> bool {
        &self.x == label || &self.y == label
    }

    /// The same reduction with swapped coordinates.
    pub fn flipped(&self) -> Self {
        Reduction { kind: self.kind, x: self.y.clone(), y: self.x.clone() }
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ReductionKind::Cherry => write!(f, "[{},{}]", self.x, self.y),
            ReductionKind::ReticulatedCherry => write!(f, "({},{})", self.x, self.y),
        }
    }
}

impl fmt::Debug for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Where a reduction attaches to the host network at detection time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SiteWitness {
    /// Common parent of the two cherry leaves.
    CherryParent { parent: VertexId },
    /// Rooted reticulated cherry (x,y): p_x is a reticulation and the arc
    /// (p_y, p_x) is the reticulation arc to delete.
    RootedReticulation { ret: VertexId, tree_parent: VertexId },
    /// Unrooted reticulated cherry (x,y): the reticulation edge joins the
    /// neighbours of x and y.
    UnrootedReticulation { near_x: VertexId, near_y: VertexId },
}

/// A reduction together with the vertex or edge identifiers realizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionSite {
    pub reduction: Reduction,
    pub witness: SiteWitness,
}

/// Site-level record of what one reduction removed and rewired; links are
/// arcs for rooted networks and normalized edges for unrooted ones.
#[derive(Debug, Clone, Default)]
pub struct ReductionAudit {
    /// The reduction in the orientation actually applied.
    pub applied: Option<Reduction>,
    pub removed_vertices: Vec<VertexId>,
    pub removed_links: Vec<(VertexId, VertexId)>,
    pub added_links: Vec<(VertexId, VertexId)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("reduction {0} has no site in the network")]
    NotApplicable(Reduction),
    #[error("requested {requested} but only {valid} is a reticulated cherry")]
    WrongOrientation { requested: Reduction, valid: Reduction },
}

/// Networks that support cherry reductions; implemented for both kinds.
pub trait Reducible: Network {
    /// All cherries as unordered label pairs, reported once with x < y.
    fn list_cherries(&self) -> Vec<(LeafLabel, LeafLabel)>;

    /// All reticulated cherries with their witnesses. Rooted sites carry the
    /// reticulation-leaf-first orientation; unrooted sites are normalized to
    /// x < y and admit both orientations.
    fn list_reticulated_cherries(&self) -> Vec<ReductionSite>;

    /// Applies one reduction, returning the reduced network and an audit of
    /// the removed identifiers. The input is never mutated.
    fn reduce(&self, reduction: &Reduction) -> Result<(Self, ReductionAudit), ReduceError>;

    /// Every reduction currently applicable, in deterministic order: cherry
    /// items (both orientations) sorted by labels, then reticulated items
    /// sorted, including both orientations for unrooted networks.
    fn available_reductions(&self) -> Vec<Reduction> {
        let mut out = Vec::new();
        for (a, b) in self.list_cherries() {
            out.push(Reduction::cherry(a.clone(), b.clone()));
            out.push(Reduction::cherry(b, a));
        }
        let cherry_count = out.len();
        out[..cherry_count].sort();
        let mut rets = Vec::new();
        for site in self.list_reticulated_cherries() {
            match site.witness {
                SiteWitness::RootedReticulation { .. } => rets.push(site.reduction),
                _ => {
                    rets.push(site.reduction.flipped());
                    rets.push(site.reduction);
                }
            }
        }
        rets.sort();
        out.extend(rets);
        out
    }

    /// True iff no cherry and no reticulated cherry exists.
    fn is_irreducible(&self) -> bool {
        self.list_cherries().is_empty() && self.list_reticulated_cherries().is_empty()
    }
}
