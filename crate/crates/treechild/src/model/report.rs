use std::fmt;

use super::VertexId;

/// Outcome of validating a raw graph against the network invariants.
///
/// Validation never fails fast: `violations` enumerates every broken rule so
/// the CLI can show complete diagnostics.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

/// One broken validation rule, with the vertices or links involved.
#[derive(Debug, Clone)]
pub struct Violation {
    /// Stable machine-readable rule identifier, e.g. "degree-profile".
    pub rule: &'static str,
    pub detail: String,
    pub subjects: Vec<VertexId>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn push(&mut self, rule: &'static str, detail: String, subjects: Vec<VertexId>) {
        self.violations.push(Violation { rule, detail, subjects });
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}: {}", v.rule, v.detail)?;
        }
        Ok(())
    }
}
