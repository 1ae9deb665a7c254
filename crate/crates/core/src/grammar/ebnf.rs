//! Grammar emission. Each registered ludeme yields one production named by
//! its keyword; each category that is not simply a ludeme of the same name
//! yields one production listing its alternatives.
//!
//! Notation: `'x'` is a literal token, `STRING` a string literal,
//! `INT[a..b]` / `INT[a..]` an integer literal within bounds, `[ x ]`
//! optional, `x*` / `x+` repetition and `|` alternation. Repeated
//! parameters may be written positionally or as one `{ ... }` list.

use std::fmt::Write;

use super::registry::{Param, ParamKind, Registry, Repeat};

pub fn emit_grammar(registry: &Registry) -> String {
    let mut out = String::new();
    for sig in registry.signatures() {
        let mut rhs = format!("'(' '{}'", sig.keyword);
        for p in &sig.params {
            rhs.push(' ');
            rhs.push_str(&param(p));
        }
        rhs.push_str(" ')'");
        writeln!(out, "{} ::= {}", sig.keyword, rhs).unwrap();
    }
    for cat in registry.categories() {
        if registry.is_sole_category(cat) {
            continue;
        }
        let alternatives: Vec<String> = registry
            .members(cat)
            .map(|s| s.keyword.clone())
            .chain(registry.terminals(cat).map(|t| format!("'{t}'")))
            .collect();
        writeln!(out, "{} ::= {}", cat, alternatives.join(" | ")).unwrap();
    }
    out
}

/// Number of productions in emitted grammar text.
pub fn production_count(grammar: &str) -> usize {
    grammar.lines().filter(|l| l.contains(" ::= ")).count()
}

fn symbol(kind: &ParamKind) -> String {
    match kind {
        ParamKind::Int {
            min,
            max: Some(max),
        } => format!("INT[{min}..{max}]"),
        ParamKind::Int { min, max: None } => format!("INT[{min}..]"),
        ParamKind::Str => "STRING".into(),
        ParamKind::Category(c) => c.clone(),
    }
}

fn param(p: &Param) -> String {
    let s = symbol(&p.kind);
    match p.repeat {
        Repeat::One => s,
        Repeat::Optional => format!("[ {s} ]"),
        Repeat::Many { min } => {
            let seq = match min {
                0 => format!("{s}*"),
                1 => format!("{s}+"),
                k => {
                    let mut parts = vec![s.clone(); k - 1];
                    parts.push(format!("{s}+"));
                    parts.join(" ")
                }
            };
            format!("( '{{' {seq} '}}' | {seq} )")
        }
    }
}
