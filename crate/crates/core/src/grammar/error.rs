use std::fmt;

use thiserror::Error;

use super::token::Position;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unterminated string")]
    UnterminatedString,
    #[error("illegal character {0:?}")]
    IllegalCharacter(char),
    #[error("unbalanced delimiter")]
    UnbalancedDelimiter,
    #[error("trailing tokens after the root ludeme")]
    TrailingTokens,
    #[error("expected a ludeme keyword after '('")]
    ExpectedKeyword,
    #[error("empty description")]
    EmptyInput,
    #[error("expected '(' at the start of a ludeme")]
    ExpectedNode,
    #[error("unknown ludeme `{0}`")]
    UnknownLudeme(String),
    #[error("`{keyword}` takes {expected} but got {found}")]
    Arity {
        keyword: String,
        expected: String,
        found: usize,
    },
    #[error("`{keyword}` expects {expected} here")]
    Category { keyword: String, expected: String },
    #[error("{0}")]
    IntRange(String),
    #[error("role {role} is out of range for a {players}-player game")]
    RoleOutOfRange { role: String, players: i64 },
    #[error("root ludeme must be `{expected}`")]
    WrongRoot { expected: String },
}

/// An error located in the description text.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseError {
    pub pos: Position,
    pub kind: ParseErrorKind,
    /// The offending lexeme or keyword.
    pub lexeme: String,
}

impl ParseError {
    pub fn new(pos: Position, kind: ParseErrorKind, lexeme: String) -> Self {
        ParseError { pos, kind, lexeme }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} (at `{}`)", self.pos, self.kind, self.lexeme)
    }
}
