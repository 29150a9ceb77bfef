//! Edge-list format for unrooted networks.
//!
//! The document starts with a header line `unrooted`, followed by one edge
//! per line as two whitespace-separated tokens. Tokens of degree 1 after
//! assembly are leaves and their token is their label; internal tokens are
//! arbitrary identifiers. The single-vertex network is a lone token line.

use std::collections::BTreeMap;

use crate::model::{unrooted_canonical_order, RawUnrooted, UnrootedNetwork, VertexId};

use super::error::ParseError;

/// Parses the edge-list format, validating the result.
pub fn parse_unrooted(text: &str) -> Result<UnrootedNetwork, ParseError> {
    let mut offset = 0usize;
    let mut header_seen = false;
    let mut ids: BTreeMap<&str, u32> = BTreeMap::new();
    let mut raw = RawUnrooted::new();
    let mut singleton: Option<&str> = None;
    let mut edge_lines = 0usize;

    for line in text.split_inclusive('\n') {
        let line_start = offset;
        offset += line.len();
        let content = line.trim_end_matches(['\n', '\r']);
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if !header_seen {
            if tokens != ["unrooted"] {
                return Err(ParseError::syntax(
                    text,
                    line_start,
                    "header line \"unrooted\"",
                    content.trim().to_string(),
                ));
            }
            header_seen = true;
            continue;
        }
        match tokens.as_slice() {
            [single] => {
                if edge_lines > 0 || singleton.is_some() {
                    return Err(ParseError::syntax(
                        text,
                        line_start,
                        "two tokens per edge line",
                        (*single).to_string(),
                    ));
                }
                singleton = Some(single);
            }
            [a, b] => {
                if singleton.is_some() {
                    return Err(ParseError::Semantic {
                        detail: "single-vertex line mixed with edge lines".into(),
                    });
                }
                let next = ids.len() as u32;
                let ia = *ids.entry(a).or_insert(next);
                let next = ids.len() as u32;
                let ib = *ids.entry(b).or_insert(next);
                raw.add_edge(ia, ib);
                edge_lines += 1;
            }
            more => {
                return Err(ParseError::syntax(
                    text,
                    line_start,
                    "two tokens per edge line",
                    format!("{} tokens", more.len()),
                ));
            }
        }
    }

    if !header_seen {
        return Err(ParseError::syntax(text, text.len(), "header line \"unrooted\"", "end of input"));
    }
    if let Some(name) = singleton {
        let mut raw = RawUnrooted::new();
        raw.add_vertex(0);
        raw.set_label(0, name);
        return UnrootedNetwork::from_raw(&raw).map_err(|e| ParseError::Invalid { report: e.report });
    }
    if edge_lines == 0 {
        return Err(ParseError::syntax(text, text.len(), "at least one edge line", "end of input"));
    }

    // Degree-1 tokens are the leaves; their token is their label.
    let mut degree: BTreeMap<u32, usize> = BTreeMap::new();
    for &(u, v) in &raw.edges {
        *degree.entry(u).or_default() += 1;
        *degree.entry(v).or_default() += 1;
    }
    for (name, &id) in &ids {
        if degree.get(&id).copied().unwrap_or(0) == 1 {
            raw.set_label(id, *name);
        }
    }
    UnrootedNetwork::from_raw(&raw).map_err(|e| ParseError::Invalid { report: e.report })
}

/// Serializes deterministically: internal vertices are named by canonical
/// position (with a prefix chosen to avoid clashing with leaf labels) and
/// edges are emitted sorted.
pub fn serialize_unrooted(network: &UnrootedNetwork) -> String {
    let mut out = String::from("unrooted\n");
    if network.is_single_vertex() {
        out.push_str(network.leaf_labels()[0].as_str());
        out.push('\n');
        return out;
    }
    let order = unrooted_canonical_order(network);
    let pos: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    // Pick an internal-name prefix no leaf label can collide with.
    let mut prefix = String::from("v");
    let collides = |prefix: &str, network: &UnrootedNetwork| {
        network.leaf_labels().iter().any(|l| {
            l.as_str()
                .strip_prefix(prefix)
                .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
        })
    };
    while collides(&prefix, network) {
        prefix.push('v');
    }

    let name = |v: VertexId| -> String {
        match network.label(v) {
            Some(l) => l.to_string(),
            None => format!("{prefix}{}", pos[&v]),
        }
    };
    let mut edges: Vec<(usize, usize)> = network
        .edges()
        .into_iter()
        .map(|(u, v)| {
            let (a, b) = (pos[&u], pos[&v]);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort();
    for (a, b) in edges {
        out.push_str(&name(order[a]));
        out.push(' ');
        out.push_str(&name(order[b]));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::are_isomorphic_unrooted;

    #[test]
    fn parses_a_single_edge() {
        let u = parse_unrooted("unrooted\na b\n").unwrap();
        assert!(u.is_single_edge());
        assert_eq!(u.leaf_count(), 2);
    }

    #[test]
    fn parses_single_vertex() {
        let u = parse_unrooted("unrooted\na\n").unwrap();
        assert!(u.is_single_vertex());
        assert_eq!(serialize_unrooted(&u), "unrooted\na\n");
    }

    #[test]
    fn three_tokens_is_a_syntax_error() {
        let err = parse_unrooted("unrooted\na b c\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }), "{err:?}");
    }

    #[test]
    fn missing_header_is_a_syntax_error() {
        let err = parse_unrooted("a b\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }));
    }

    #[test]
    fn crlf_input_is_accepted() {
        let u = parse_unrooted("unrooted\r\na b\r\n").unwrap();
        assert!(u.is_single_edge());
    }

    #[test]
    fn round_trips_a_reticulated_network() {
        let text = "unrooted\nu1 u2\nu2 u3\nu3 u1\nu1 a\nu2 b\nu3 c\n";
        let u = parse_unrooted(text).unwrap();
        assert_eq!(u.reticulation_number(), 1);
        let serialized = serialize_unrooted(&u);
        let reparsed = parse_unrooted(&serialized).unwrap();
        assert!(are_isomorphic_unrooted(&u, &reparsed), "{serialized}");
    }

    #[test]
    fn internal_names_avoid_label_collisions() {
        // Leaves deliberately named like internal vertices.
        let text = "unrooted\nx y\ny z\nz x\nx v0\ny v1\nz v2\n";
        let u = parse_unrooted(text).unwrap();
        let serialized = serialize_unrooted(&u);
        let reparsed = parse_unrooted(&serialized).unwrap();
        assert!(are_isomorphic_unrooted(&u, &reparsed), "{serialized}");
    }

    #[test]
    fn serialization_is_canonical_across_isomorphic_inputs() {
        let a = parse_unrooted("unrooted\nu1 u2\nu2 u3\nu3 u1\nu1 a\nu2 b\nu3 c\n").unwrap();
        let b = parse_unrooted("unrooted\nq b\np a\np q\nq r\nr p\nr c\n").unwrap();
        assert!(are_isomorphic_unrooted(&a, &b));
        assert_eq!(serialize_unrooted(&a), serialize_unrooted(&b));
    }
}
