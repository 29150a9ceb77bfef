//! Line-based sequence files: `C x y` for the cherry [x,y], `R x y` for the
//! reticulated cherry (x,y) with x the first coordinate. Round-trips exactly.

use crate::cherries::Reduction;
use crate::model::LeafLabel;
use crate::sequences::CherryPickingSequence;

use super::error::ParseError;

pub fn parse_sequence(text: &str) -> Result<CherryPickingSequence, ParseError> {
    let mut items = Vec::new();
    let mut offset = 0usize;
    for line in text.split_inclusive('\n') {
        let line_start = offset;
        offset += line.len();
        let content = line.trim_end_matches(['\n', '\r']);
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let [tag, x, y] = tokens.as_slice() else {
            return Err(ParseError::syntax(
                text,
                line_start,
                "\"C x y\" or \"R x y\"",
                content.trim().to_string(),
            ));
        };
        let parse_label = |s: &str| {
            LeafLabel::new(s).map_err(|e| ParseError::Semantic { detail: e.to_string() })
        };
        let (x, y) = (parse_label(x)?, parse_label(y)?);
        if x == y {
            return Err(ParseError::Semantic {
                detail: format!("reduction coordinates must differ, got {x} twice"),
            });
        }
        let item = match *tag {
            "C" => Reduction::cherry(x, y),
            "R" => Reduction::reticulated(x, y),
            other => {
                return Err(ParseError::syntax(
                    text,
                    line_start,
                    "tag 'C' or 'R'",
                    other.to_string(),
                ))
            }
        };
        items.push(item);
    }
    Ok(CherryPickingSequence::new(items))
}

pub fn serialize_sequence(seq: &CherryPickingSequence) -> String {
    let mut out = String::new();
    for item in seq.iter() {
        let tag = if item.is_cherry() { 'C' } else { 'R' };
        out.push_str(&format!("{tag} {} {}\n", item.x, item.y));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_running_example() {
        let seq = parse_sequence("R b a\nC c b\nR b a\nC b a\n").unwrap();
        assert_eq!(seq.to_string(), "((b,a),[c,b],(b,a),[b,a])");
    }

    #[test]
    fn empty_text_is_the_empty_sequence() {
        assert!(parse_sequence("").unwrap().is_empty());
        assert!(parse_sequence("\n  \n").unwrap().is_empty());
    }

    #[test]
    fn unknown_tag_is_a_syntax_error() {
        let err = parse_sequence("X a b\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }), "{err:?}");
    }

    #[test]
    fn round_trips_exactly() {
        let text = "R b a\nC c b\nR b a\nC b a\n";
        let seq = parse_sequence(text).unwrap();
        assert_eq!(serialize_sequence(&seq), text);
    }
}
