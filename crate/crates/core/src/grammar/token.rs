use std::fmt;

use serde::{Deserialize, Serialize};

use super::error::{ParseError, ParseErrorKind};

/// 1-based line and column of a lexeme in the source text.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct Position {
    pub line: u32,
    pub column: u32,
}

impl Position {
    pub fn new(line: u32, column: u32) -> Self {
        Position { line, column }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TokenKind {
    OpenParen,
    CloseParen,
    OpenBrace,
    CloseBrace,
    Str,
    Int,
    Ident,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// The lexeme exactly as written, including the quotes of a string.
    pub text: String,
    pub pos: Position,
}

impl Token {
    /// Contents of a string token without its delimiting quotes.
    pub fn string_value(&self) -> &str {
        debug_assert_eq!(self.kind, TokenKind::Str);
        &self.text[1..self.text.len() - 1]
    }
}

/// Splits description text into tokens. `//` starts a comment running to
/// the end of the line. Strings have no escape sequences and may not span
/// lines.
pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    let mut line = 1u32;
    let mut column = 1u32;

    while let Some(&(start, ch)) = chars.peek() {
        let pos = Position::new(line, column);
        let single = |kind| Token {
            kind,
            text: ch.to_string(),
            pos,
        };
        match ch {
            '\n' => {
                chars.next();
                line += 1;
                column = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                column += 1;
            }
            '(' | ')' | '{' | '}' => {
                chars.next();
                column += 1;
                tokens.push(single(match ch {
                    '(' => TokenKind::OpenParen,
                    ')' => TokenKind::CloseParen,
                    '{' => TokenKind::OpenBrace,
                    _ => TokenKind::CloseBrace,
                }));
            }
            '/' if text[start..].starts_with("//") => {
                while let Some(&(_, c)) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '"' => {
                chars.next();
                column += 1;
                let mut end = None;
                while let Some(&(i, c)) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    column += 1;
                    if c == '"' {
                        end = Some(i + 1);
                        break;
                    }
                }
                let Some(end) = end else {
                    let lexeme: String = text[start..].lines().next().unwrap_or("").to_string();
                    return Err(ParseError::new(
                        pos,
                        ParseErrorKind::UnterminatedString,
                        lexeme,
                    ));
                };
                tokens.push(Token {
                    kind: TokenKind::Str,
                    text: text[start..end].to_string(),
                    pos,
                });
            }
            c if c == '-' || c.is_ascii_digit() => {
                chars.next();
                column += 1;
                let mut end = start + 1;
                while let Some(&(i, d)) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    chars.next();
                    column += 1;
                    end = i + 1;
                }
                if c == '-' && end == start + 1 {
                    return Err(ParseError::new(
                        pos,
                        ParseErrorKind::IllegalCharacter('-'),
                        "-".into(),
                    ));
                }
                tokens.push(Token {
                    kind: TokenKind::Int,
                    text: text[start..end].to_string(),
                    pos,
                });
            }
            c if c.is_ascii_alphabetic() => {
                chars.next();
                column += 1;
                let mut end = start + 1;
                while let Some(&(i, d)) = chars.peek() {
                    if !d.is_ascii_alphanumeric() {
                        break;
                    }
                    chars.next();
                    column += 1;
                    end = i + 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Ident,
                    text: text[start..end].to_string(),
                    pos,
                });
            }
            other => {
                return Err(ParseError::new(
                    pos,
                    ParseErrorKind::IllegalCharacter(other),
                    other.to_string(),
                ));
            }
        }
    }
    Ok(tokens)
}
