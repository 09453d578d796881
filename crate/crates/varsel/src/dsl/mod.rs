//! The `.fm` text format for feature models.
//!
//! ```text
//! # comment
//! feature Root mandatory "Display name"
//!   feature A optional
//!   alt {
//!     feature B
//!     feature C
//!   }
//! constraint A => B
//! ```
//!
//! Hierarchy is given by two-space indentation. `or { .. }` and
//! `alt { .. }` blocks open a group under the enclosing feature; their
//! members take no modifier. Outside groups the modifier defaults to
//! `mandatory`. Constraints start at column 1 and use `!`, `&`, `|`, `=>`
//! and parentheses.

pub mod bundled;
mod parser;
mod serialize;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use parser::{parse, parse_expr};
pub use serialize::serialize;

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub fn new(line: usize, column: usize) -> Self {
        Self { line: line.max(1), column: column.max(1) }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ParseErrorCode {
    Syntax,
    DuplicateId,
    UnknownRef,
    BadGroup,
}

impl fmt::Display for ParseErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorCode::Syntax => "SYNTAX",
            ParseErrorCode::DuplicateId => "DUPLICATE_ID",
            ParseErrorCode::UnknownRef => "UNKNOWN_REF",
            ParseErrorCode::BadGroup => "BAD_GROUP",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {code}: {message}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub code: ParseErrorCode,
}

impl ParseError {
    pub fn new(span: SourceSpan, code: ParseErrorCode, message: impl Into<String>) -> Self {
        let message = message.into();
        debug_assert!(!message.is_empty());
        Self { span, message, code }
    }
}
