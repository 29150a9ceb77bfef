//! Cherry-picking sequences: successor machinery, the tree-child predicates
//! (P1) and (P2), the related predicates (P) and (P3), sequence replay, and
//! constructive network building.
//!
//! Sequence positions are 1-based throughout, matching the usual notation
//! s(1), s(2), .. for successor indices.

use std::fmt;

use thiserror::Error;

use crate::cherries::{Reducible, Reduction, ReductionAudit, ReduceError, ReductionKind};
use crate::model::{LeafLabel, RootedNetwork};

/// An ordered list of reductions r_1 .. r_k.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct CherryPickingSequence {
    items: Vec<Reduction>,
}

impl CherryPickingSequence {
    pub fn new(items: Vec<Reduction>) -> Self {
        CherryPickingSequence { items }
    }

    pub fn items(&self) -> &[Reduction] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// The item at 1-based position i.
    pub fn item(&self, i: usize) -> Option<&Reduction> {
        (1..=self.items.len()).contains(&i).then(|| &self.items[i - 1])
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Reduction> {
        self.items.iter()
    }

    /// Distinct labels mentioned anywhere in the sequence.
    pub fn labels(&self) -> Vec<LeafLabel> {
        let mut labels: Vec<LeafLabel> = self
            .items
            .iter()
            .flat_map(|r| [r.x.clone(), r.y.clone()])
            .collect();
        labels.sort();
        labels.dedup();
        labels
    }

    pub fn reticulated_count(&self) -> usize {
        self.items.iter().filter(|r| !r.is_cherry()).count()
    }
}

impl fmt::Display for CherryPickingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.items.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for CherryPickingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromIterator<Reduction> for CherryPickingSequence {
    fn from_iter<T: IntoIterator<Item = Reduction>>(iter: T) -> Self {
        CherryPickingSequence::new(iter.into_iter().collect())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequenceError {
    #[error("position {0} is out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("item {index} is not a cherry item, (P) is defined on all-cherry sequences")]
    NonCherryItem { index: usize },
}

/// s(i): the smallest j > i such that r_j contains x_i, or None when no such
/// j exists (the infinity case).
pub fn successor_index(
    seq: &CherryPickingSequence,
    i: usize,
) -> Result<Option<usize>, SequenceError> {
    let k = seq.len();
    if i == 0 || i > k {
        return Err(SequenceError::IndexOutOfRange(i, k));
    }
    let x = &seq.items()[i - 1].x;
    Ok((i + 1..=k).find(|&j| seq.items()[j - 1].contains(x)))
}

/// Verdict of the tree-child check, with all offending positions and the
/// successor map for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceVerdict {
    pub tree_child: bool,
    /// Positions i with r_i reticulated, s(i) finite, and S(i) reticulated.
    pub p1_violations: Vec<usize>,
    /// Pairs i < j, both reticulated, with equal finite successor indices.
    pub p2_violations: Vec<(usize, usize)>,
    pub satisfies_p3: bool,
    /// Some(verdict) when every item is a cherry, None otherwise.
    pub satisfies_p: Option<bool>,
    /// s(i) for each position, None marking infinity.
    pub successors: Vec<Option<usize>>,
}

/// Checks (P1) and (P2) and fills in the related predicates.
pub fn check_tree_child(seq: &CherryPickingSequence) -> SequenceVerdict {
    let k = seq.len();
    let successors: Vec<Option<usize>> = (1..=k)
        .map(|i| successor_index(seq, i).expect("position in range"))
        .collect();

    let mut p1_violations = Vec::new();
    for i in 1..=k {
        let r = &seq.items()[i - 1];
        if r.is_cherry() {
            continue;
        }
        if let Some(j) = successors[i - 1] {
            if !seq.items()[j - 1].is_cherry() {
                p1_violations.push(i);
            }
        }
    }

    let mut p2_violations = Vec::new();
    for i in 1..=k {
        if seq.items()[i - 1].is_cherry() {
            continue;
        }
        for j in i + 1..=k {
            if seq.items()[j - 1].is_cherry() {
                continue;
            }
            if let (Some(si), Some(sj)) = (successors[i - 1], successors[j - 1]) {
                if si == sj {
                    p2_violations.push((i, j));
                }
            }
        }
    }

    SequenceVerdict {
        tree_child: p1_violations.is_empty() && p2_violations.is_empty(),
        p1_violations,
        p2_violations,
        satisfies_p3: check_p3(seq),
        satisfies_p: check_p(seq).ok(),
        successors,
    }
}

/// (P3): no first coordinate reappears as a later second coordinate.
pub fn check_p3(seq: &CherryPickingSequence) -> bool {
    let items = seq.items();
    (0..items.len()).all(|i| items[i + 1..].iter().all(|r| r.y != items[i].x))
}

/// (P): the same condition as (P3), defined only for all-cherry sequences.
pub fn check_p(seq: &CherryPickingSequence) -> Result<bool, SequenceError> {
    if let Some(pos) = seq.iter().position(|r| !r.is_cherry()) {
        return Err(SequenceError::NonCherryItem { index: pos + 1 });
    }
    Ok(check_p3(seq))
}

/// A replayed chain of networks N_0 .. N_m with the reductions that produced
/// each step.
#[derive(Debug, Clone)]
pub struct ReductionTrace<N: Reducible> {
    networks: Vec<N>,
    steps: Vec<Reduction>,
    audits: Vec<ReductionAudit>,
    maximal: bool,
    complete: bool,
}

impl<N: Reducible> ReductionTrace<N> {
    pub fn networks(&self) -> &[N] {
        &self.networks
    }

    pub fn initial(&self) -> &N {
        &self.networks[0]
    }

    pub fn last(&self) -> &N {
        self.networks.last().expect("traces hold at least N_0")
    }

    pub fn steps(&self) -> &[Reduction] {
        &self.steps
    }

    pub fn audits(&self) -> &[ReductionAudit] {
        &self.audits
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// No cherry or reticulated cherry is left in the final network.
    pub fn is_maximal(&self) -> bool {
        self.maximal
    }

    /// The final network is a single vertex.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn sequence(&self) -> CherryPickingSequence {
        CherryPickingSequence::new(self.steps.clone())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ApplyError {
    #[error("step {index} is not applicable: {source}")]
    StepInapplicable {
        index: usize,
        #[source]
        source: ReduceError,
    },
}

/// Replays a sequence on a network. Fails at the first inapplicable step.
/// On an unrooted network a reticulated item matches its site in either
/// coordinate order; the audit records the orientation actually applied.
pub fn apply_sequence<N: Reducible>(
    network: &N,
    seq: &CherryPickingSequence,
) -> Result<ReductionTrace<N>, ApplyError> {
    let mut networks = vec![network.clone()];
    let mut audits = Vec::new();
    for (idx, step) in seq.iter().enumerate() {
        let current = networks.last().unwrap();
        let result = match current.reduce(step) {
            Ok(ok) => Ok(ok),
            Err(first_err) => {
                // The 2^r(U) association: unrooted reticulated items are
                // orientation-free, so retry flipped before giving up.
                if current.kind() == crate::model::NetworkKind::Unrooted
                    && step.kind == ReductionKind::ReticulatedCherry
                {
                    current.reduce(&step.flipped()).map_err(|_| first_err)
                } else {
                    Err(first_err)
                }
            }
        };
        match result {
            Ok((next, audit)) => {
                networks.push(next);
                audits.push(audit);
            }
            Err(source) => {
                return Err(ApplyError::StepInapplicable { index: idx + 1, source });
            }
        }
    }
    let last = networks.last().unwrap();
    let complete = last.is_single_vertex();
    let maximal = last.is_irreducible();
    Ok(ReductionTrace {
        networks,
        steps: seq.items().to_vec(),
        audits,
        maximal,
        complete,
    })
}

/// True iff the replay succeeds and ends in a single vertex. When it does,
/// the sequence length necessarily equals |X| + r(N) - 1.
pub fn is_complete_for<N: Reducible>(seq: &CherryPickingSequence, network: &N) -> bool {
    match apply_sequence(network, seq) {
        Ok(trace) => {
            if trace.is_complete() {
                debug_assert_eq!(
                    seq.len(),
                    network.leaf_count() + network.reticulation_number() - 1,
                    "complete sequence length must be |X| + r - 1"
                );
                true
            } else {
                false
            }
        }
        Err(_) => false,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("cannot build from an empty sequence")]
    Empty,
    #[error("last item {0} must be a cherry")]
    LastItemNotCherry(Reduction),
    #[error("reverse expansion failed at position {index}: {source}")]
    ExpansionFailed {
        index: usize,
        #[source]
        source: crate::cherries::ExpandError,
    },
}

/// Reverse construction: builds the rooted network whose complete reduction
/// replay is exactly the given sequence, by expanding items back to front
/// starting from the single vertex y_k.
pub fn build_rooted(seq: &CherryPickingSequence) -> Result<RootedNetwork, BuildError> {
    let last = seq.items().last().ok_or(BuildError::Empty)?;
    if !last.is_cherry() {
        return Err(BuildError::LastItemNotCherry(last.clone()));
    }
    let mut network = RootedNetwork::single_vertex(last.y.clone());
    for (idx, step) in seq.iter().enumerate().rev() {
        network = network
            .expand(step)
            .map_err(|source| BuildError::ExpansionFailed { index: idx + 1, source })?;
    }
    Ok(network)
}

#[cfg(test)]
mod tests {
    use super::*;


    fn label(s: &str) -> LeafLabel {
        LeafLabel::new(s).unwrap()
    }

    fn cherry(x: &str, y: &str) -> Reduction {
        Reduction::cherry(label(x), label(y))
    }

    fn ret(x: &str, y: &str) -> Reduction {
        Reduction::reticulated(label(x), label(y))
    }

    /// ((b,a),[c,b],(b,a),[b,a])
    fn fig1_sequence() -> CherryPickingSequence {
        CherryPickingSequence::new(vec![
            ret("b", "a"),
            cherry("c", "b"),
            ret("b", "a"),
            cherry("b", "a"),
        ])
    }

    #[test]
    fn successor_indices_of_the_running_example() {
        let seq = fig1_sequence();
        assert_eq!(successor_index(&seq, 1).unwrap(), Some(2));
        assert_eq!(successor_index(&seq, 3).unwrap(), Some(4));
        // x_2 = c never reappears
        assert_eq!(successor_index(&seq, 2).unwrap(), None);
        assert!(successor_index(&seq, 0).is_err());
        assert!(successor_index(&seq, 5).is_err());
    }

    #[test]
    fn successor_indices_of_the_six_item_sequence() {
        // ((d,c),(b,c),[c,d],(a,d),[a,d],[b,d]): s(1)=3, s(2)=6, s(4)=5
        let seq = CherryPickingSequence::new(vec![
            ret("d", "c"),
            ret("b", "c"),
            cherry("c", "d"),
            ret("a", "d"),
            cherry("a", "d"),
            cherry("b", "d"),
        ]);
        assert_eq!(successor_index(&seq, 1).unwrap(), Some(3));
        assert_eq!(successor_index(&seq, 2).unwrap(), Some(6));
        assert_eq!(successor_index(&seq, 4).unwrap(), Some(5));
        assert!(check_tree_child(&seq).tree_child);
    }

    #[test]
    fn running_example_is_tree_child() {
        let verdict = check_tree_child(&fig1_sequence());
        assert!(verdict.tree_child);
        assert!(verdict.p1_violations.is_empty());
        assert!(verdict.p2_violations.is_empty());
    }

    #[test]
    fn sigma_prime_violates_p1() {
        // ((c,d),(b,c),[c,d],(a,d),[a,d],[b,d]) fails: S(1) = (b,c) is reticulated.
        let seq = CherryPickingSequence::new(vec![
            ret("c", "d"),
            ret("b", "c"),
            cherry("c", "d"),
            ret("a", "d"),
            cherry("a", "d"),
            cherry("b", "d"),
        ]);
        let verdict = check_tree_child(&seq);
        assert!(!verdict.tree_child);
        assert_eq!(verdict.p1_violations, vec![1]);
    }

    #[test]
    fn stack_sequence_violates_p1_at_position_one() {
        // ((b,a),(b,a),[b,c],[a,c]): s(1)=2 and S(1) is reticulated.
        let seq = CherryPickingSequence::new(vec![
            ret("b", "a"),
            ret("b", "a"),
            cherry("b", "c"),
            cherry("a", "c"),
        ]);
        let verdict = check_tree_child(&seq);
        assert!(!verdict.tree_child);
        assert_eq!(verdict.p1_violations, vec![1]);
        assert!(verdict.satisfies_p3);
    }

    #[test]
    fn p2_violation_detected() {
        // (a,c) and (b,c) both have successor [a,b]: s(1)=s(2)=3.
        let seq = CherryPickingSequence::new(vec![
            ret("a", "c"),
            ret("b", "c"),
            cherry("a", "b"),
            cherry("b", "c"),
        ]);
        let verdict = check_tree_child(&seq);
        assert!(!verdict.tree_child);
        assert!(verdict.p1_violations.is_empty());
        assert_eq!(verdict.p2_violations, vec![(1, 2)]);
    }

    #[test]
    fn p3_on_the_four_concluding_sequences() {
        let sigma1 = CherryPickingSequence::new(vec![ret("c", "b"), ret("a", "b"), cherry("b", "c"), cherry("c", "a")]);
        let sigma2 = CherryPickingSequence::new(vec![ret("c", "b"), ret("a", "b"), cherry("b", "c"), cherry("a", "c")]);
        let sigma3 = CherryPickingSequence::new(vec![ret("c", "b"), ret("a", "b"), cherry("c", "b"), cherry("b", "a")]);
        let sigma4 = CherryPickingSequence::new(vec![ret("c", "b"), ret("a", "b"), cherry("c", "b"), cherry("a", "b")]);
        assert!(!check_p3(&sigma1));
        assert!(!check_p3(&sigma2));
        assert!(!check_p3(&sigma3));
        assert!(check_p3(&sigma4));
    }

    #[test]
    fn p3_is_vacuously_true_on_the_empty_sequence() {
        assert!(check_p3(&CherryPickingSequence::default()));
    }

    #[test]
    fn p_requires_all_cherry_items() {
        let ok = CherryPickingSequence::new(vec![cherry("x", "y"), cherry("y", "z")]);
        assert_eq!(check_p(&ok), Ok(true));
        let bad = CherryPickingSequence::new(vec![cherry("x", "y"), cherry("z", "x")]);
        assert_eq!(check_p(&bad), Ok(false));
        let mixed = CherryPickingSequence::new(vec![ret("b", "a"), cherry("c", "b")]);
        assert_eq!(check_p(&mixed), Err(SequenceError::NonCherryItem { index: 1 }));
    }

    #[test]
    fn build_single_cherry() {
        let seq = CherryPickingSequence::new(vec![cherry("a", "b")]);
        let n = build_rooted(&seq).unwrap();
        assert_eq!(n.leaf_count(), 2);
        assert_eq!(n.reticulation_number(), 0);
        assert!(is_complete_for(&seq, &n));
    }

    #[test]
    fn build_the_running_example_network() {
        let seq = fig1_sequence();
        let n = build_rooted(&seq).unwrap();
        assert_eq!(n.leaf_count(), 3);
        assert_eq!(n.reticulation_number(), 2);
        assert!(n.is_stack_free());
        assert!(!n.has_sibling_reticulations());
        let trace = apply_sequence(&n, &seq).unwrap();
        assert!(trace.is_complete());
        assert_eq!(trace.len(), 4);
        // 4 = |X| + r - 1 = 3 + 2 - 1
        assert_eq!(seq.len(), n.leaf_count() + n.reticulation_number() - 1);
        // a trace re-exposes its own sequence exactly
        assert_eq!(trace.sequence(), seq);
    }

    #[test]
    fn build_rejects_malformed_sequences() {
        assert!(matches!(build_rooted(&CherryPickingSequence::default()), Err(BuildError::Empty)));
        let not_cherry_last = CherryPickingSequence::new(vec![cherry("a", "b"), ret("a", "b")]);
        assert!(matches!(build_rooted(&not_cherry_last), Err(BuildError::LastItemNotCherry(_))));
        // (c,d) needs both labels present when expanding back to front.
        let needs_missing = CherryPickingSequence::new(vec![ret("c", "d"), cherry("a", "b")]);
        assert!(matches!(
            build_rooted(&needs_missing),
            Err(BuildError::ExpansionFailed { index: 1, .. })
        ));
    }

    #[test]
    fn apply_fails_with_the_step_index() {
        let seq = fig1_sequence();
        let n = build_rooted(&seq).unwrap();
        let bad = CherryPickingSequence::new(vec![cherry("a", "b")]);
        let err = apply_sequence(&n, &bad).unwrap_err();
        assert!(matches!(err, ApplyError::StepInapplicable { index: 1, .. }));
    }

    #[test]
    fn the_stack_sequence_builds_a_stacked_network() {
        let seq = CherryPickingSequence::new(vec![
            ret("b", "a"),
            ret("b", "a"),
            cherry("b", "c"),
            cherry("a", "c"),
        ]);
        let n = build_rooted(&seq).unwrap();
        assert!(!n.is_stack_free());
        assert!(!n.is_tree_child_structural());
        assert!(is_complete_for(&seq, &n));
    }
}
