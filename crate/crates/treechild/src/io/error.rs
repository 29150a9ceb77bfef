use thiserror::Error;

use crate::model::ValidationReport;

/// Byte offset plus human-oriented line/column, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
}

impl Position {
    pub fn at(text: &str, offset: usize) -> Self {
        let clamped = offset.min(text.len());
        let mut line = 1;
        let mut column = 1;
        for c in text[..clamped].chars() {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        Position { offset: clamped, line, column }
    }
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Error, Clone)]
pub enum ParseError {
    #[error("syntax error at {position}: expected {expected}, found {found}")]
    Syntax {
        position: Position,
        expected: String,
        found: String,
    },
    #[error("semantic error: {detail}")]
    Semantic { detail: String },
    #[error("network validation failed: {report}")]
    Invalid { report: ValidationReport },
}

impl ParseError {
    pub(crate) fn syntax(text: &str, offset: usize, expected: &str, found: impl Into<String>) -> Self {
        ParseError::Syntax {
            position: Position::at(text, offset),
            expected: expected.to_string(),
            found: found.into(),
        }
    }

    /// The error's position, when it carries one.
    pub fn position(&self) -> Option<Position> {
        match self {
            ParseError::Syntax { position, .. } => Some(*position),
            _ => None,
        }
    }
}
