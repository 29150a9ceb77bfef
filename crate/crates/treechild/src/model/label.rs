use std::fmt;

use thiserror::Error;

/// Characters that may not appear in a leaf label because the text formats
/// reserve them (eNewick punctuation, hybrid tags, quoting, comments).
pub const RESERVED_LABEL_CHARS: &[char] = &['(', ')', ',', ';', ':', '#', '\'', '"', '[', ']'];

/// A leaf label: a non-empty token without whitespace or reserved characters.
///
/// Labels are unique within one network; the network types enforce that.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LeafLabel(String);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LabelError {
    #[error("leaf label must not be empty")]
    Empty,
    #[error("leaf label {0:?} contains whitespace")]
    Whitespace(String),
    #[error("leaf label {0:?} contains reserved character {1:?}")]
    ReservedChar(String, char),
}

impl LeafLabel {
    pub fn new(name: impl Into<String>) -> Result<Self, LabelError> {
        let name = name.into();
        if name.is_empty() {
            return Err(LabelError::Empty);
        }
        if name.chars().any(|c| c.is_whitespace()) {
            return Err(LabelError::Whitespace(name));
        }
        if let Some(c) = name.chars().find(|c| RESERVED_LABEL_CHARS.contains(c)) {
            return Err(LabelError::ReservedChar(name, c));
        }
        Ok(LeafLabel(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for LeafLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for LeafLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl std::str::FromStr for LeafLabel {
    type Err = LabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LeafLabel::new(s)
    }
}

/// The n-th label of the default generation pool: a, b, .., z, a1, b1, ..
pub fn pool_label(index: usize) -> LeafLabel {
    let letter = (b'a' + (index % 26) as u8) as char;
    let round = index / 26;
    let name = if round == 0 {
        letter.to_string()
    } else {
        format!("{letter}{round}")
    };
    LeafLabel::new(name).expect("pool labels are always valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_plain_tokens() {
        assert!(LeafLabel::new("a").is_ok());
        assert!(LeafLabel::new("taxon_12.3-x").is_ok());
    }

    #[test]
    fn rejects_empty_whitespace_and_reserved() {
        assert_eq!(LeafLabel::new(""), Err(LabelError::Empty));
        assert!(matches!(LeafLabel::new("a b"), Err(LabelError::Whitespace(_))));
        for c in RESERVED_LABEL_CHARS {
            let name = format!("x{c}y");
            assert!(matches!(LeafLabel::new(name), Err(LabelError::ReservedChar(_, _))));
        }
    }

    #[test]
    fn pool_labels_are_distinct() {
        let labels: Vec<_> = (0..60).map(pool_label).collect();
        for (i, a) in labels.iter().enumerate() {
            for b in &labels[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }
}
