//! The game-description language: tokens, trees, the ludeme registry and
//! everything derived from it.
//!
//! Lexical rules: `//` comments run to the end of the line, identifiers
//! are case-sensitive, and strings have no escape sequences. Braces hold
//! ordered lists and may be used for any repeated parameter.

mod ast;
mod ebnf;
mod error;
mod parser;
mod printer;
pub mod registry;
mod token;
mod validate;

pub use ast::{Arg, LudemeNode};
pub use ebnf::{emit_grammar, production_count};
pub use error::{ParseError, ParseErrorKind};
pub use parser::{parse, parse_str};
pub use printer::{print, print_inline};
pub use registry::{LudemeSignature, Param, ParamKind, Registry, Repeat};
pub use token::{tokenize, Position, Token, TokenKind};
pub use validate::{validate, validate_as};

/// Parses and validates a complete game description.
pub fn load(text: &str, registry: &Registry) -> Result<LudemeNode, Vec<ParseError>> {
    let tree = parse_str(text).map_err(|e| vec![e])?;
    validate(&tree, registry)?;
    Ok(tree)
}
