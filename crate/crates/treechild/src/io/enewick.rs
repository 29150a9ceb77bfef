//! Extended Newick for rooted networks.
//!
//! Reticulations use `#H<id>` hybrid tags appearing exactly twice: the
//! occurrence carrying the subtree attaches the reticulation's child, the
//! other occurrence is a cross-reference. Example:
//! `((a,(b)#H1),(#H1,c));` is a three-leaf network with one reticulation
//! above b. Branch lengths and internal labels are out of scope.

use std::collections::BTreeMap;

use crate::model::{
    rooted_canonical_order, RawRooted, RootedNetwork, VertexId, RESERVED_LABEL_CHARS,
};

use super::error::ParseError;

enum Ast {
    Leaf { name: String },
    Internal { children: Vec<Ast>, hybrid: Option<u32> },
    HybridRef { id: u32 },
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { text, bytes: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn found_here(&self) -> String {
        match self.text[self.pos..].chars().next() {
            Some(c) => format!("{c:?}"),
            None => "end of input".to_string(),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError::syntax(self.text, self.pos, &format!("{:?}", c as char), self.found_here()))
        }
    }

    fn parse_name(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        while let Some(b) = self.peek() {
            let c = b as char;
            if c.is_whitespace() || RESERVED_LABEL_CHARS.contains(&c) {
                break;
            }
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ParseError::syntax(self.text, start, "a name", self.found_here()));
        }
        Ok(self.text[start..self.pos].to_string())
    }

    fn parse_hybrid_tag(&mut self) -> Result<u32, ParseError> {
        // caller consumed '#'
        if self.peek() != Some(b'H') {
            return Err(ParseError::syntax(self.text, self.pos, "'H' after '#'", self.found_here()));
        }
        self.pos += 1;
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ParseError::syntax(self.text, start, "hybrid tag digits", self.found_here()));
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| ParseError::syntax(self.text, start, "hybrid tag number", self.found_here()))
    }

    fn parse_node(&mut self) -> Result<Ast, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let mut children = vec![self.parse_node()?];
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                            children.push(self.parse_node()?);
                        }
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => {
                            return Err(ParseError::syntax(
                                self.text,
                                self.pos,
                                "',' or ')'",
                                self.found_here(),
                            ))
                        }
                    }
                }
                self.skip_ws();
                let hybrid = if self.peek() == Some(b'#') {
                    self.pos += 1;
                    Some(self.parse_hybrid_tag()?)
                } else {
                    None
                };
                Ok(Ast::Internal { children, hybrid })
            }
            Some(b'#') => {
                self.pos += 1;
                Ok(Ast::HybridRef { id: self.parse_hybrid_tag()? })
            }
            _ => Ok(Ast::Leaf { name: self.parse_name()? }),
        }
    }
}

#[derive(Default)]
struct GraphBuilder {
    raw: RawRooted,
    next: u32,
    hybrids: BTreeMap<u32, (u32, usize)>, // tag -> (vertex, occurrence count)
}

impl GraphBuilder {
    fn fresh(&mut self) -> u32 {
        let v = self.next;
        self.next += 1;
        self.raw.add_vertex(v);
        v
    }

    fn hybrid_vertex(&mut self, tag: u32) -> u32 {
        match self.hybrids.get_mut(&tag) {
            Some((v, count)) => {
                *count += 1;
                *v
            }
            None => {
                let v = self.fresh();
                self.hybrids.insert(tag, (v, 1));
                v
            }
        }
    }

    fn attach(&mut self, ast: &Ast, parent: Option<u32>) -> u32 {
        let v = match ast {
            Ast::Leaf { name } => {
                let v = self.fresh();
                self.raw.set_label(v, name.clone());
                v
            }
            Ast::Internal { children, hybrid } => {
                let v = match hybrid {
                    Some(tag) => self.hybrid_vertex(*tag),
                    None => self.fresh(),
                };
                for child in children {
                    self.attach(child, Some(v));
                }
                v
            }
            Ast::HybridRef { id } => self.hybrid_vertex(*id),
        };
        if let Some(p) = parent {
            self.raw.add_arc(p, v);
        }
        v
    }
}

/// Parses one extended-Newick network, validating the result.
pub fn parse_rooted(text: &str) -> Result<RootedNetwork, ParseError> {
    let mut parser = Parser::new(text);
    parser.skip_ws();
    if parser.peek().is_none() {
        return Err(ParseError::syntax(text, parser.pos, "a network", "end of input"));
    }
    let ast = parser.parse_node()?;
    parser.expect(b';')?;
    parser.skip_ws();
    if parser.peek().is_some() {
        return Err(ParseError::syntax(text, parser.pos, "end of input after ';'", parser.found_here()));
    }

    let mut builder = GraphBuilder::default();
    builder.attach(&ast, None);
    for (tag, (_, count)) in &builder.hybrids {
        if *count != 2 {
            return Err(ParseError::Semantic {
                detail: format!("hybrid tag #H{tag} appears {count} times, expected exactly 2"),
            });
        }
    }
    RootedNetwork::from_raw(&builder.raw).map_err(|e| ParseError::Invalid { report: e.report })
}

/// Parses a document with one network per non-empty line.
pub fn parse_rooted_document(text: &str) -> Result<Vec<RootedNetwork>, ParseError> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(parse_rooted)
        .collect()
}

/// Serializes deterministically: children are emitted in canonical-form
/// order, so isomorphic networks produce byte-equal text.
pub fn serialize_rooted(network: &RootedNetwork) -> String {
    if network.is_single_vertex() {
        let label = network.leaf_labels()[0];
        return format!("{label};");
    }
    let order = rooted_canonical_order(network);
    let pos: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut hybrid_ids: BTreeMap<VertexId, usize> = BTreeMap::new();
    for &v in &order {
        if network.is_reticulation(v) {
            let id = hybrid_ids.len() + 1;
            hybrid_ids.insert(v, id);
        }
    }
    let mut seen = BTreeMap::new();
    let mut out = String::new();
    write_vertex(network, network.root(), &pos, &hybrid_ids, &mut seen, &mut out);
    out.push(';');
    out
}

fn write_vertex(
    network: &RootedNetwork,
    v: VertexId,
    pos: &BTreeMap<VertexId, usize>,
    hybrid_ids: &BTreeMap<VertexId, usize>,
    seen: &mut BTreeMap<VertexId, bool>,
    out: &mut String,
) {
    if let Some(&tag) = hybrid_ids.get(&v) {
        if seen.insert(v, true).is_some() {
            out.push_str(&format!("#H{tag}"));
            return;
        }
        let child = network.children(v)[0];
        out.push('(');
        write_vertex(network, child, pos, hybrid_ids, seen, out);
        out.push(')');
        out.push_str(&format!("#H{tag}"));
        return;
    }
    if let Some(label) = network.label(v) {
        out.push_str(label.as_str());
        return;
    }
    let mut children: Vec<VertexId> = network.children(v).to_vec();
    children.sort_by_key(|c| pos[c]);
    out.push('(');
    for (i, c) in children.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_vertex(network, *c, pos, hybrid_ids, seen, out);
    }
    out.push(')');
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cherries::Reducible;
    use crate::model::are_isomorphic_rooted;
    use crate::sequences::{build_rooted, CherryPickingSequence};
    use crate::Reduction;

    fn label(s: &str) -> crate::LeafLabel {
        crate::LeafLabel::new(s).unwrap()
    }

    #[test]
    fn parses_the_smallest_network() {
        let n = parse_rooted("(a,b);").unwrap();
        assert_eq!(n.leaf_count(), 2);
        assert_eq!(n.reticulation_number(), 0);
        assert_eq!(n.list_cherries(), vec![(label("a"), label("b"))]);
    }

    #[test]
    fn parses_single_vertex() {
        let n = parse_rooted("a;").unwrap();
        assert!(n.is_single_vertex());
        assert_eq!(serialize_rooted(&n), "a;");
    }

    #[test]
    fn parses_one_reticulation_network() {
        let n = parse_rooted("((a,(b)#H1),(#H1,c));").unwrap();
        assert_eq!(n.leaf_count(), 3);
        assert_eq!(n.reticulation_number(), 1);
        let sites = n.list_reticulated_cherries();
        let pairs: Vec<(String, String)> = sites
            .iter()
            .map(|s| (s.reduction.x.to_string(), s.reduction.y.to_string()))
            .collect();
        assert!(pairs.contains(&("b".into(), "a".into())));
        assert!(pairs.contains(&("b".into(), "c".into())));
    }

    #[test]
    fn unbalanced_parenthesis_is_a_positioned_syntax_error() {
        let err = parse_rooted("((a,b);").unwrap_err();
        match err {
            ParseError::Syntax { position, .. } => assert_eq!(position.offset, 6),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn hybrid_tag_count_is_checked() {
        let err = parse_rooted("((a,(b)#H1),c);").unwrap_err();
        assert!(matches!(err, ParseError::Semantic { .. }), "{err:?}");
        let err = parse_rooted("((#H1,(b)#H1),(#H1,c));").unwrap_err();
        assert!(matches!(err, ParseError::Semantic { .. }), "{err:?}");
    }

    #[test]
    fn duplicate_labels_are_rejected_via_validation() {
        let err = parse_rooted("(a,a);").unwrap_err();
        assert!(matches!(err, ParseError::Invalid { .. }), "{err:?}");
    }

    #[test]
    fn serialization_round_trips_the_running_example() {
        let seq = CherryPickingSequence::new(vec![
            Reduction::reticulated(label("b"), label("a")),
            Reduction::cherry(label("c"), label("b")),
            Reduction::reticulated(label("b"), label("a")),
            Reduction::cherry(label("b"), label("a")),
        ]);
        let n = build_rooted(&seq).unwrap();
        let text = serialize_rooted(&n);
        let reparsed = parse_rooted(&text).unwrap();
        assert!(are_isomorphic_rooted(&n, &reparsed), "{text}");
    }

    #[test]
    fn serialization_is_canonical_across_isomorphic_inputs() {
        let a = parse_rooted("((a,(b)#H1),(#H1,c));").unwrap();
        let b = parse_rooted("((#H7,c),((b)#H7,a));").unwrap();
        assert!(are_isomorphic_rooted(&a, &b));
        assert_eq!(serialize_rooted(&a), serialize_rooted(&b));
    }
}
