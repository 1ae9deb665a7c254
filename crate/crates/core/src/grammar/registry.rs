//! The ludeme registry: the single table from which the validator, the
//! grammar emitter and the generator all derive the language.

use std::collections::BTreeSet;

use thiserror::Error;

/// Category of positions that accept player roles.
pub const ROLE_CATEGORY: &str = "role";

/// Category of the root ludeme of a complete game description.
pub const GAME_CATEGORY: &str = "game";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamKind {
    /// Integer literal within `min..=max` (unbounded above when `max` is `None`).
    Int {
        min: i64,
        max: Option<i64>,
    },
    Str,
    /// A ludeme node of the category, or one of the category's terminal identifiers.
    Category(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Repeat {
    One,
    Optional,
    /// Zero or more positional occurrences, or a single `{...}` list, with at least `min` items.
    Many {
        min: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub kind: ParamKind,
    pub repeat: Repeat,
}

impl Param {
    pub fn one(name: &str, kind: ParamKind) -> Self {
        Param {
            name: name.into(),
            kind,
            repeat: Repeat::One,
        }
    }

    pub fn many(name: &str, kind: ParamKind, min: usize) -> Self {
        Param {
            name: name.into(),
            kind,
            repeat: Repeat::Many { min },
        }
    }

    pub fn optional(name: &str, kind: ParamKind) -> Self {
        Param {
            name: name.into(),
            kind,
            repeat: Repeat::Optional,
        }
    }

    pub(crate) fn min_count(&self) -> usize {
        match self.repeat {
            Repeat::One => 1,
            Repeat::Optional => 0,
            Repeat::Many { min } => min,
        }
    }
}

pub fn int(min: i64, max: Option<i64>) -> ParamKind {
    ParamKind::Int { min, max }
}

pub fn category(name: &str) -> ParamKind {
    ParamKind::Category(name.into())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LudemeSignature {
    pub keyword: String,
    pub category: String,
    pub params: Vec<Param>,
}

impl LudemeSignature {
    pub fn new(keyword: &str, category: &str, params: Vec<Param>) -> Self {
        LudemeSignature {
            keyword: keyword.into(),
            category: category.into(),
            params,
        }
    }

    pub(crate) fn min_args(&self) -> usize {
        self.params.iter().map(Param::min_count).sum()
    }

    /// `None` when a repeated parameter makes the count unbounded.
    pub(crate) fn max_args(&self) -> Option<usize> {
        self.params.iter().try_fold(0, |acc, p| match p.repeat {
            Repeat::Many { .. } => None,
            _ => Some(acc + 1),
        })
    }
}

/// Identifiers that stand for themselves in a category, e.g. outcomes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerminalSet {
    pub category: String,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RegistryError {
    #[error("ludeme `{0}` is registered twice")]
    DuplicateKeyword(String),
    #[error("`{keyword}` refers to undefined category `{category}`")]
    UndefinedCategory { keyword: String, category: String },
    #[error("`{0}`: a repeated parameter must be the last parameter")]
    RepeatNotLast(String),
    #[error("category `{0}` shares its name with a ludeme but has other members")]
    CategoryClash(String),
    #[error("`{keyword}`: integer bounds {min}..{max} are empty")]
    EmptyRange { keyword: String, min: i64, max: i64 },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Registry {
    signatures: Vec<LudemeSignature>,
    terminals: Vec<TerminalSet>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry::default()
    }

    /// The built-in language: every ludeme needed by the shipped game library.
    pub fn builtin() -> Self {
        use ParamKind::Str;
        let mut r = Registry::empty();
        let sigs = [
            LudemeSignature::new(
                "game",
                "game",
                vec![
                    Param::one("name", Str),
                    Param::one("mode", category("mode")),
                    Param::one("equipment", category("equipment")),
                    Param::one("rules", category("rules")),
                ],
            ),
            LudemeSignature::new(
                "mode",
                "mode",
                vec![
                    Param::one("players", int(1, Some(2))),
                    Param::one("start", category("addToEmpty")),
                ],
            ),
            LudemeSignature::new("addToEmpty", "addToEmpty", vec![]),
            LudemeSignature::new(
                "equipment",
                "equipment",
                vec![Param::many("items", category("item"), 0)],
            ),
            LudemeSignature::new("HexBoard", "item", vec![Param::one("side", int(2, None))]),
            LudemeSignature::new(
                "SquareBoard",
                "item",
                vec![Param::one("side", int(2, None))],
            ),
            LudemeSignature::new(
                "ball",
                "item",
                vec![Param::one("owner", category(ROLE_CATEGORY))],
            ),
            LudemeSignature::new(
                "region",
                "item",
                vec![
                    Param::one("owner", category(ROLE_CATEGORY)),
                    Param::one("cells", category("edge")),
                ],
            ),
            LudemeSignature::new(
                "edge",
                "edge",
                vec![Param::one("side", category("direction"))],
            ),
            LudemeSignature::new(
                "rules",
                "rules",
                vec![
                    Param::one("play", category("play")),
                    Param::many("end", category("end"), 1),
                ],
            ),
            LudemeSignature::new("play", "play", vec![Param::one("move", category("to"))]),
            LudemeSignature::new("to", "to", vec![Param::one("target", category("target"))]),
            LudemeSignature::new("empty", "target", vec![]),
            LudemeSignature::new(
                "end",
                "end",
                vec![
                    Param::one("condition", category("condition")),
                    Param::one("result", category("result")),
                ],
            ),
            LudemeSignature::new(
                "connect",
                "condition",
                vec![Param::one("who", category(ROLE_CATEGORY))],
            ),
            LudemeSignature::new(
                "line",
                "condition",
                vec![
                    Param::one("n", int(2, None)),
                    Param::one("who", category(ROLE_CATEGORY)),
                ],
            ),
            LudemeSignature::new("full", "condition", vec![]),
            LudemeSignature::new("noMoves", "condition", vec![]),
            LudemeSignature::new(
                "result",
                "result",
                vec![
                    Param::one("who", category(ROLE_CATEGORY)),
                    Param::one("outcome", category("outcome")),
                ],
            ),
            LudemeSignature::new("mover", ROLE_CATEGORY, vec![]),
        ];
        for sig in sigs {
            r.add(sig).expect("built-in signatures are well formed");
        }
        r.add_terminals(ROLE_CATEGORY, &["P1", "P2", "mover", "Each"]);
        r.add_terminals("outcome", &["Win", "Loss", "Draw"]);
        r.add_terminals("direction", &["N", "S", "E", "W", "NE", "NW", "SE", "SW"]);
        r.check().expect("built-in registry is consistent");
        r
    }

    /// Registers a ludeme. Category references are checked by [`Registry::check`]
    /// once the whole registry is assembled.
    pub fn add(&mut self, sig: LudemeSignature) -> Result<(), RegistryError> {
        if self.signature(&sig.keyword).is_some() {
            return Err(RegistryError::DuplicateKeyword(sig.keyword));
        }
        let last = sig.params.len().saturating_sub(1);
        for (i, p) in sig.params.iter().enumerate() {
            if matches!(p.repeat, Repeat::Many { .. }) && i != last {
                return Err(RegistryError::RepeatNotLast(sig.keyword));
            }
            if let ParamKind::Int {
                min,
                max: Some(max),
            } = p.kind
            {
                if max < min {
                    return Err(RegistryError::EmptyRange {
                        keyword: sig.keyword,
                        min,
                        max,
                    });
                }
            }
        }
        self.signatures.push(sig);
        Ok(())
    }

    pub fn add_terminals(&mut self, category: &str, values: &[&str]) {
        match self.terminals.iter_mut().find(|t| t.category == category) {
            Some(set) => set.values.extend(values.iter().map(|v| v.to_string())),
            None => self.terminals.push(TerminalSet {
                category: category.into(),
                values: values.iter().map(|v| v.to_string()).collect(),
            }),
        }
    }

    /// Checks that every referenced category exists and that a category
    /// named after a ludeme contains only that ludeme.
    pub fn check(&self) -> Result<(), RegistryError> {
        let defined: BTreeSet<&str> = self.categories().into_iter().collect();
        for sig in &self.signatures {
            for p in &sig.params {
                if let ParamKind::Category(c) = &p.kind {
                    if !defined.contains(c.as_str()) {
                        return Err(RegistryError::UndefinedCategory {
                            keyword: sig.keyword.clone(),
                            category: c.clone(),
                        });
                    }
                }
            }
        }
        for cat in defined {
            if self.signature(cat).is_some() && !self.is_sole_category(cat) {
                return Err(RegistryError::CategoryClash(cat.to_string()));
            }
        }
        Ok(())
    }

    pub fn signatures(&self) -> &[LudemeSignature] {
        &self.signatures
    }

    pub fn terminal_sets(&self) -> &[TerminalSet] {
        &self.terminals
    }

    pub fn signature(&self, keyword: &str) -> Option<&LudemeSignature> {
        self.signatures.iter().find(|s| s.keyword == keyword)
    }

    pub fn keywords(&self) -> impl Iterator<Item = &str> {
        self.signatures.iter().map(|s| s.keyword.as_str())
    }

    /// All categories in order of first appearance.
    pub fn categories(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        let names = self
            .signatures
            .iter()
            .map(|s| s.category.as_str())
            .chain(self.terminals.iter().map(|t| t.category.as_str()));
        for name in names {
            if !out.contains(&name) {
                out.push(name);
            }
        }
        out
    }

    /// Ludemes belonging to a category, in registration order.
    pub fn members(&self, category: &str) -> impl Iterator<Item = &LudemeSignature> {
        let category = category.to_string();
        self.signatures
            .iter()
            .filter(move |s| s.category == category)
    }

    pub fn terminals<'a>(&'a self, category: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.terminals
            .iter()
            .filter(move |t| t.category == category)
            .flat_map(|t| t.values.iter().map(String::as_str))
    }

    pub fn is_terminal(&self, category: &str, ident: &str) -> bool {
        self.terminals(category).any(|t| t == ident)
    }

    /// True when the category is just the ludeme of the same name. Such a
    /// category needs no production of its own in the grammar.
    pub fn is_sole_category(&self, category: &str) -> bool {
        let mut members = self.members(category);
        matches!(members.next(), Some(s) if s.keyword == category)
            && members.next().is_none()
            && self.terminals(category).next().is_none()
    }
}
