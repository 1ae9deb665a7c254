use super::ast::{Arg, LudemeNode};
use super::error::{ParseError, ParseErrorKind};
use super::registry::{
    LudemeSignature, Param, ParamKind, Registry, Repeat, GAME_CATEGORY, ROLE_CATEGORY,
};

/// Checks a complete game description against the registry: the root must
/// be a `game`, every keyword registered, every argument of the right kind
/// and arity, and every player role within the declared player count.
pub fn validate(tree: &LudemeNode, registry: &Registry) -> Result<(), Vec<ParseError>> {
    validate_as(tree, registry, Some(GAME_CATEGORY))
}

/// Like [`validate`] but for a fragment whose root must belong to `category`
/// (or to any category when `None`).
pub fn validate_as(
    tree: &LudemeNode,
    registry: &Registry,
    category: Option<&str>,
) -> Result<(), Vec<ParseError>> {
    let mut v = Validator {
        registry,
        players: declared_players(tree),
        errors: Vec::new(),
    };
    match (category, registry.signature(&tree.keyword)) {
        (Some(cat), Some(sig)) if sig.category != cat => v.errors.push(ParseError::new(
            tree.pos,
            ParseErrorKind::WrongRoot {
                expected: cat.to_string(),
            },
            tree.keyword.clone(),
        )),
        _ => v.node(tree),
    }
    if v.errors.is_empty() {
        Ok(())
    } else {
        Err(v.errors)
    }
}

/// Player count from the description's `(mode N ...)`, if present and sane.
fn declared_players(tree: &LudemeNode) -> i64 {
    tree.child("mode")
        .and_then(|m| match m.args.first() {
            Some(Arg::Int(n, _)) if (1..=2).contains(n) => Some(*n),
            _ => None,
        })
        .unwrap_or(2)
}

/// `P<k>` identifiers name players whether or not the registry lists them.
fn player_index(ident: &str) -> Option<i64> {
    let digits = ident.strip_prefix('P')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

struct Validator<'a> {
    registry: &'a Registry,
    players: i64,
    errors: Vec<ParseError>,
}

impl Validator<'_> {
    fn error(&mut self, pos: super::Position, kind: ParseErrorKind, lexeme: String) {
        self.errors.push(ParseError::new(pos, kind, lexeme));
    }

    fn node(&mut self, node: &LudemeNode) {
        let Some(sig) = self.registry.signature(&node.keyword) else {
            self.error(
                node.pos,
                ParseErrorKind::UnknownLudeme(node.keyword.clone()),
                node.keyword.clone(),
            );
            return;
        };
        let (min, max) = (sig.min_args(), sig.max_args());
        let count = node.args.len();
        let list_form =
            matches!(sig.params.last(), Some(p) if matches!(p.repeat, Repeat::Many { .. }));
        if count < min.saturating_sub(usize::from(list_form)) || max.is_some_and(|m| count > m) {
            self.arity(node, sig);
            return;
        }
        let mut args = node.args.iter().peekable();
        for param in &sig.params {
            match param.repeat {
                Repeat::One => match args.next() {
                    Some(arg) => self.arg(node, param, arg),
                    None => return self.arity(node, sig),
                },
                Repeat::Optional => {
                    if let Some(arg) = args.peek() {
                        if self.fits(&param.kind, arg) {
                            self.arg(node, param, arg);
                            args.next();
                        }
                    }
                }
                Repeat::Many { min } => {
                    let rest: Vec<&Arg> = args.by_ref().collect();
                    match rest.as_slice() {
                        [Arg::List(items, pos)] => {
                            if items.len() < min {
                                self.error(*pos, self.arity_kind(node, sig), "{".into());
                            }
                            for item in items {
                                self.arg(node, param, item);
                            }
                        }
                        positional => {
                            if positional.len() < min {
                                return self.arity(node, sig);
                            }
                            for item in positional {
                                self.arg(node, param, item);
                            }
                        }
                    }
                }
            }
        }
        if let Some(extra) = args.next() {
            let kind = self.arity_kind(node, sig);
            self.error(extra.pos(), kind, extra.lexeme());
        }
    }

    fn arity_kind(&self, node: &LudemeNode, sig: &LudemeSignature) -> ParseErrorKind {
        let expected = match (sig.min_args(), sig.max_args()) {
            (a, Some(b)) if a == b => format!("{a} argument{}", if a == 1 { "" } else { "s" }),
            (a, Some(b)) => format!("{a} to {b} arguments"),
            (a, None) => format!("at least {a} argument{}", if a == 1 { "" } else { "s" }),
        };
        ParseErrorKind::Arity {
            keyword: node.keyword.clone(),
            expected,
            found: node.args.len(),
        }
    }

    fn arity(&mut self, node: &LudemeNode, sig: &LudemeSignature) {
        let kind = self.arity_kind(node, sig);
        self.error(node.pos, kind, node.keyword.clone());
    }

    /// Shallow check used to decide whether an optional parameter is present.
    fn fits(&self, kind: &ParamKind, arg: &Arg) -> bool {
        match (kind, arg) {
            (ParamKind::Int { .. }, Arg::Int(..)) | (ParamKind::Str, Arg::Str(..)) => true,
            (ParamKind::Category(c), Arg::Node(n)) => self
                .registry
                .signature(&n.keyword)
                .is_some_and(|s| &s.category == c),
            (ParamKind::Category(c), Arg::Ident(id, _)) => self.registry.is_terminal(c, id),
            _ => false,
        }
    }

    fn arg(&mut self, parent: &LudemeNode, param: &Param, arg: &Arg) {
        let mismatch = |expected: String| ParseErrorKind::Category {
            keyword: parent.keyword.clone(),
            expected,
        };
        match (&param.kind, arg) {
            (ParamKind::Int { min, max }, Arg::Int(v, pos)) => {
                let in_range = *v >= *min && max.is_none_or(|m| *v <= m);
                if !in_range {
                    let msg = match max {
                        Some(m) if *m == *min => format!("{} must be {min}", param.name),
                        Some(m) if *m == *min + 1 => format!("{} must be {min} or {m}", param.name),
                        Some(m) => format!("{} must be between {min} and {m}", param.name),
                        None => format!("{} must be at least {min}", param.name),
                    };
                    self.error(*pos, ParseErrorKind::IntRange(msg), v.to_string());
                }
            }
            (ParamKind::Str, Arg::Str(..)) => {}
            (ParamKind::Category(cat), Arg::Node(n)) => match self.registry.signature(&n.keyword) {
                None => self.error(
                    n.pos,
                    ParseErrorKind::UnknownLudeme(n.keyword.clone()),
                    n.keyword.clone(),
                ),
                Some(sig) if &sig.category != cat => {
                    self.error(
                        n.pos,
                        mismatch(format!("a {cat} (`{}` is a {})", n.keyword, sig.category)),
                        n.keyword.clone(),
                    );
                }
                Some(_) => self.node(n),
            },
            (ParamKind::Category(cat), Arg::Ident(id, pos)) => {
                let player = player_index(id).filter(|_| cat == ROLE_CATEGORY);
                match player {
                    Some(k) if k < 1 || k > self.players || !self.registry.is_terminal(cat, id) => {
                        self.error(
                            *pos,
                            ParseErrorKind::RoleOutOfRange {
                                role: id.clone(),
                                players: self.players,
                            },
                            id.clone(),
                        );
                    }
                    _ if self.registry.is_terminal(cat, id) => {}
                    _ => self.error(*pos, mismatch(format!("a {cat}")), id.clone()),
                }
            }
            (kind, other) => {
                let expected = match kind {
                    ParamKind::Int { .. } => "an integer".to_string(),
                    ParamKind::Str => "a string".to_string(),
                    ParamKind::Category(c) => format!("a {c}"),
                };
                self.error(other.pos(), mismatch(expected), other.lexeme());
                // Unknown keywords nested in a misplaced list are still reported.
                if let Arg::List(items, _) = other {
                    for item in items {
                        if let Arg::Node(n) = item {
                            self.unknown_only(n);
                        }
                    }
                }
            }
        }
    }

    fn unknown_only(&mut self, node: &LudemeNode) {
        for n in node.walk() {
            if self.registry.signature(&n.keyword).is_none() {
                self.error(
                    n.pos,
                    ParseErrorKind::UnknownLudeme(n.keyword.clone()),
                    n.keyword.clone(),
                );
            }
        }
    }
}
