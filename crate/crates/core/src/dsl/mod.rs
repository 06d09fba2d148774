//! The `.hott` language: groups, groupoids, families and queries.

pub mod ast;
mod eval;
mod lexer;
mod parser;
mod pretty;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use ast::Span;
pub use eval::{evaluate, Answer, EvalError, Evaluator, QueryResult, RelativeReport, Value};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{parse, MAX_DEPTH};
pub use pretty::{expr_to_string, pretty, query_to_string};

/// A located parse error.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Diagnostic {
    pub message: String,
    pub span: Span,
    /// 1-based.
    pub line: usize,
    /// 1-based, counted in characters.
    pub column: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expected: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Diagnostic {
    pub fn new(src: &str, span: Span, message: impl Into<String>) -> Self {
        let (line, column) = line_col(src, span.start);
        Diagnostic {
            message: message.into(),
            span,
            line,
            column,
            expected: Vec::new(),
            note: None,
        }
    }

    pub fn with_expected(mut self, expected: Vec<String>) -> Self {
        self.expected = expected;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if let Some(note) = &self.note {
            write!(f, "\n  note: {note}")?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostic {}

/// 1-based line and column of byte `offset`; offsets inside a multibyte
/// character count as that character.
pub fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let mut offset = offset.min(src.len());
    while !src.is_char_boundary(offset) {
        offset -= 1;
    }
    let before = &src[..offset];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    (line, before[line_start..].chars().count() + 1)
}

/// Like [`parse`], for input that may not be UTF-8.
pub fn parse_bytes(bytes: &[u8]) -> Result<ast::Program, Diagnostic> {
    match std::str::from_utf8(bytes) {
        Ok(src) => parse(src),
        Err(e) => {
            let at = e.valid_up_to();
            let valid = std::str::from_utf8(&bytes[..at]).expect("prefix is valid");
            let end = at + e.error_len().unwrap_or(bytes.len() - at);
            Err(Diagnostic::new(valid, Span::new(at, end), "input is not valid UTF-8"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_columns() {
        assert_eq!(line_col("ab\ncd", 4), (2, 2));
        assert_eq!(line_col("éa", 2), (1, 2));
        assert_eq!(line_col("", 7), (1, 1));
    }

    #[test]
    fn invalid_utf8_is_a_diagnostic() {
        let e = parse_bytes(b"card(\xff)").unwrap_err();
        assert_eq!(e.span, Span::new(5, 6));
        assert_eq!((e.line, e.column), (1, 6));
    }
}
