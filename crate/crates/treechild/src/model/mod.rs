//! Validated rooted and unrooted binary phylogenetic networks and their
//! structural queries.

mod iso;
mod label;
mod report;
mod rooted;
mod unrooted;

pub use iso::{
    are_isomorphic_rooted, are_isomorphic_unrooted, rooted_canonical_key, rooted_shape_key,
    unrooted_canonical_key, unrooted_shape_key, CanonicalKey,
};
pub(crate) use iso::{rooted_canonical_order, unrooted_canonical_order, unrooted_shape_order};
pub use label::{pool_label, LabelError, LeafLabel, RESERVED_LABEL_CHARS};
pub use report::{ValidationReport, Violation};
pub use rooted::{validate_rooted, InvalidNetwork, RawRooted, RootedNetwork, UnrootError, VertexId};
pub use unrooted::{validate_unrooted, InvalidUnrooted, RawUnrooted, UnrootedNetwork};

/// Which of the two network kinds a value is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetworkKind {
    Rooted,
    Unrooted,
}

impl std::fmt::Display for NetworkKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NetworkKind::Rooted => write!(f, "rooted"),
            NetworkKind::Unrooted => write!(f, "unrooted"),
        }
    }
}

/// Queries shared by both network kinds, used by the sequence and classifier
/// machinery to stay generic over rooted and unrooted values.
pub trait Network: Clone {
    fn kind(&self) -> NetworkKind;
    fn leaf_count(&self) -> usize;
    fn has_leaf(&self, label: &LeafLabel) -> bool;
    fn leaf_labels(&self) -> Vec<&LeafLabel>;
    fn is_single_vertex(&self) -> bool;
    fn reticulation_number(&self) -> usize;
    fn canonical_key(&self) -> CanonicalKey;
    fn is_isomorphic_to(&self, other: &Self) -> bool;

    /// Byte fingerprint of the exact vertex-id-level structure: equal
    /// fingerprints iff the graphs are identical (not merely isomorphic).
    /// Cheap, unlike `canonical_key`.
    fn exact_fingerprint(&self) -> Vec<u8>;
}

impl Network for RootedNetwork {
    fn kind(&self) -> NetworkKind {
        NetworkKind::Rooted
    }

    fn leaf_count(&self) -> usize {
        self.leaf_count()
    }

    fn has_leaf(&self, label: &LeafLabel) -> bool {
        self.has_leaf(label)
    }

    fn leaf_labels(&self) -> Vec<&LeafLabel> {
        self.leaf_labels()
    }

    fn is_single_vertex(&self) -> bool {
        self.is_single_vertex()
    }

    fn reticulation_number(&self) -> usize {
        self.reticulation_number()
    }

    fn canonical_key(&self) -> CanonicalKey {
        rooted_canonical_key(self)
    }

    fn is_isomorphic_to(&self, other: &Self) -> bool {
        are_isomorphic_rooted(self, other)
    }

    fn exact_fingerprint(&self) -> Vec<u8> {
        let mut bytes = Vec::new();
        for (u, v) in self.arcs() {
            bytes.extend(u.0.to_le_bytes());
            bytes.extend(v.0.to_le_bytes());
        }
        bytes.push(0xfe);
        for (label, v) in self.leaf_map() {
            bytes.extend(label.as_str().as_bytes());
            bytes.push(0);
            bytes.extend(v.0.to_le_bytes());
        }
        bytes
    }
}

impl Network for UnrootedNetwork {
    fn kind(&self) -> NetworkKind {
        NetworkKind::Unrooted
    }

    fn leaf_count(&self) -> usize {
        self.leaf_count()
    }

    fn has_leaf(&self, label: &LeafLabel) -> bool {
        self.has_leaf(label)
    }

    fn leaf_labels(&self) -> Vec<&LeafLabel> {
        self.leaf_labels()
    }

    fn is_single_vertex(&self) -> bool {
        self.is_single_vertex()
    }

    fn reticulation_number(&self) -> usize {
        self.reticulation_number()
    }

    fn canonical_key(&self) -> CanonicalKey {
        unrooted_canonical_key(self)
    }

    fn is_isomorphic_to(&self, other: &Self) -> bool {
        are_isomorphic_unrooted(self, other)
    }

    fn exact_fingerprint(&self) -> Vec<u8> {
        let mut bytes = Vec::new();
        for (u, v) in self.edges() {
            bytes.extend(u.0.to_le_bytes());
            bytes.extend(v.0.to_le_bytes());
        }
        bytes.push(0xfe);
        for (label, v) in self.leaf_map() {
            bytes.extend(label.as_str().as_bytes());
            bytes.push(0);
            bytes.extend(v.0.to_le_bytes());
        }
        bytes
    }
}
