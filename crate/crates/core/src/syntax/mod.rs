//! MetaGPML abstract syntax, parser and pretty-printer.

mod ast;
mod lexer;
mod parser;
mod render;

use thiserror::Error;

pub use ast::*;
pub use parser::{is_keyword, parse_condition, parse_pattern, parse_query};
pub use render::{render, render_condition, render_expression, render_pattern, Render};

/// A parse failure with the position of the offending token.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("error: {message} at {line}:{col}")]
pub struct SyntaxError {
    pub message: String,
    /// Byte offset into the input.
    pub offset: usize,
    /// 1-based line.
    pub line: usize,
    /// 1-based column, counted in characters.
    pub col: usize,
    /// Tokens that would have been accepted, when known.
    pub expected: Vec<String>,
    eof: bool,
}

impl SyntaxError {
    pub(crate) fn new(message: impl Into<String>, pos: lexer::Pos, expected: Vec<String>) -> Self {
        SyntaxError {
            message: message.into(),
            offset: pos.offset,
            line: pos.line,
            col: pos.col,
            expected,
            eof: false,
        }
    }

    pub(crate) fn at_eof(mut self, eof: bool) -> Self {
        self.eof = eof;
        self
    }

    /// Whether the input ended before the construct was complete, so that
    /// more text could still make it parse.
    pub fn is_incomplete(&self) -> bool {
        self.eof
    }
}
