use super::ast::{Arg, LudemeNode};
use super::error::{ParseError, ParseErrorKind};
use super::token::{tokenize, Token, TokenKind};

/// Builds the tree for a single parenthesised ludeme from a token list.
/// Any tokens left after the root's closing paren are an error.
pub fn parse(tokens: &[Token]) -> Result<LudemeNode, ParseError> {
    let Some(first) = tokens.first() else {
        return Err(ParseError::new(
            Default::default(),
            ParseErrorKind::EmptyInput,
            String::new(),
        ));
    };
    if first.kind != TokenKind::OpenParen {
        return Err(ParseError::new(
            first.pos,
            ParseErrorKind::ExpectedNode,
            first.text.clone(),
        ));
    }
    let mut parser = Parser { tokens, at: 0 };
    let root = parser.node()?;
    if let Some(extra) = tokens.get(parser.at) {
        let kind = if matches!(extra.kind, TokenKind::CloseParen | TokenKind::CloseBrace) {
            ParseErrorKind::UnbalancedDelimiter
        } else {
            ParseErrorKind::TrailingTokens
        };
        return Err(ParseError::new(extra.pos, kind, extra.text.clone()));
    }
    Ok(root)
}

/// Tokenizes then parses `text`.
pub fn parse_str(text: &str) -> Result<LudemeNode, ParseError> {
    parse(&tokenize(text)?)
}

struct Parser<'a> {
    tokens: &'a [Token],
    at: usize,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Option<&'a Token> {
        let tok = self.tokens.get(self.at)?;
        self.at += 1;
        Some(tok)
    }

    fn unclosed(open: &Token) -> ParseError {
        ParseError::new(
            open.pos,
            ParseErrorKind::UnbalancedDelimiter,
            open.text.clone(),
        )
    }

    /// Parses a node whose `(` is the current token.
    fn node(&mut self) -> Result<LudemeNode, ParseError> {
        let open = self.bump().expect("caller checked for '('");
        let keyword = match self.bump() {
            Some(t) if t.kind == TokenKind::Ident => t.text.clone(),
            Some(t) => {
                return Err(ParseError::new(
                    t.pos,
                    ParseErrorKind::ExpectedKeyword,
                    t.text.clone(),
                ));
            }
            None => return Err(Self::unclosed(open)),
        };
        let mut args = Vec::new();
        loop {
            match self.tokens.get(self.at) {
                None => return Err(Self::unclosed(open)),
                Some(t) if t.kind == TokenKind::CloseParen => {
                    self.at += 1;
                    return Ok(LudemeNode {
                        keyword,
                        args,
                        pos: open.pos,
                    });
                }
                Some(t) if t.kind == TokenKind::CloseBrace => {
                    return Err(ParseError::new(
                        t.pos,
                        ParseErrorKind::UnbalancedDelimiter,
                        t.text.clone(),
                    ));
                }
                Some(_) => args.push(self.arg()?),
            }
        }
    }

    fn list(&mut self) -> Result<Arg, ParseError> {
        let open = self.bump().expect("caller checked for '{'");
        let mut items = Vec::new();
        loop {
            match self.tokens.get(self.at) {
                None => return Err(Self::unclosed(open)),
                Some(t) if t.kind == TokenKind::CloseBrace => {
                    self.at += 1;
                    return Ok(Arg::List(items, open.pos));
                }
                Some(t) if t.kind == TokenKind::CloseParen => {
                    return Err(ParseError::new(
                        t.pos,
                        ParseErrorKind::UnbalancedDelimiter,
                        t.text.clone(),
                    ));
                }
                Some(_) => items.push(self.arg()?),
            }
        }
    }

    fn arg(&mut self) -> Result<Arg, ParseError> {
        let tok = &self.tokens[self.at];
        Ok(match tok.kind {
            TokenKind::OpenParen => Arg::Node(self.node()?),
            TokenKind::OpenBrace => self.list()?,
            TokenKind::Str => {
                self.at += 1;
                Arg::Str(tok.string_value().to_string(), tok.pos)
            }
            TokenKind::Int => {
                self.at += 1;
                let value = tok.text.parse::<i64>().map_err(|_| {
                    ParseError::new(
                        tok.pos,
                        ParseErrorKind::IntRange(format!(
                            "integer {} does not fit in 64 bits",
                            tok.text
                        )),
                        tok.text.clone(),
                    )
                })?;
                Arg::Int(value, tok.pos)
            }
            TokenKind::Ident => {
                self.at += 1;
                Arg::Ident(tok.text.clone(), tok.pos)
            }
            TokenKind::CloseParen | TokenKind::CloseBrace => unreachable!("handled by caller"),
        })
    }
}
