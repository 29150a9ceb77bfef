//! Bit-exact text formats: extended Newick for rooted networks, an edge-list
//! format for unrooted networks, and line-based sequence files.
//!
//! All formats are UTF-8; LF line endings are emitted, CRLF is accepted on
//! input. Serializers are deterministic: networks with equal canonical keys
//! produce byte-equal output.

mod edgelist;
mod enewick;
mod error;
mod seqfile;

pub use edgelist::{parse_unrooted, serialize_unrooted};
pub use enewick::{parse_rooted, parse_rooted_document, serialize_rooted};
pub use error::{ParseError, Position};
pub use seqfile::{parse_sequence, serialize_sequence};
