use super::ast::{Arg, LudemeNode};

const WIDTH: usize = 72;
const INDENT: &str = "  ";

/// Canonical text for a tree. Nodes that fit on one line are printed
/// inline; larger nodes put each argument after the keyword's leading
/// atoms on its own indented line. Brace lists are always broken, one
/// item per line.
pub fn print(tree: &LudemeNode) -> String {
    let mut out = String::new();
    node(tree, 0, &mut out);
    out.push('\n');
    out
}

/// Single-line rendering.
pub fn print_inline(tree: &LudemeNode) -> String {
    let mut out = String::new();
    inline_node(tree, &mut out);
    out
}

fn inline_node(n: &LudemeNode, out: &mut String) {
    out.push('(');
    out.push_str(&n.keyword);
    for a in &n.args {
        out.push(' ');
        inline_arg(a, out);
    }
    out.push(')');
}

fn inline_arg(a: &Arg, out: &mut String) {
    match a {
        Arg::Node(n) => inline_node(n, out),
        Arg::Int(v, _) => out.push_str(&v.to_string()),
        Arg::Str(s, _) => {
            out.push('"');
            out.push_str(s);
            out.push('"');
        }
        Arg::Ident(s, _) => out.push_str(s),
        Arg::List(items, _) => {
            out.push('{');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                inline_arg(item, out);
            }
            out.push('}');
        }
    }
}

fn has_list(n: &LudemeNode) -> bool {
    n.args.iter().any(|a| match a {
        Arg::List(..) => true,
        Arg::Node(c) => has_list(c),
        _ => false,
    })
}

fn is_atom(a: &Arg) -> bool {
    matches!(a, Arg::Int(..) | Arg::Str(..) | Arg::Ident(..))
}

fn newline(depth: usize, out: &mut String) {
    out.push('\n');
    for _ in 0..depth {
        out.push_str(INDENT);
    }
}

fn node(n: &LudemeNode, depth: usize, out: &mut String) {
    let flat = print_inline(n);
    if !has_list(n) && depth * INDENT.len() + flat.len() <= WIDTH {
        out.push_str(&flat);
        return;
    }
    out.push('(');
    out.push_str(&n.keyword);
    let leading = n.args.iter().take_while(|a| is_atom(a)).count();
    for a in &n.args[..leading] {
        out.push(' ');
        inline_arg(a, out);
    }
    for (i, a) in n.args[leading..].iter().enumerate() {
        if i == 0 && matches!(a, Arg::List(..)) {
            out.push(' ');
            arg(a, depth, out);
        } else {
            newline(depth + 1, out);
            arg(a, depth + 1, out);
        }
    }
    out.push(')');
}

fn arg(a: &Arg, depth: usize, out: &mut String) {
    match a {
        Arg::Node(n) => node(n, depth, out),
        Arg::List(items, _) => {
            out.push('{');
            for item in items {
                newline(depth + 1, out);
                arg(item, depth + 1, out);
            }
            newline(depth, out);
            out.push('}');
        }
        atom => inline_arg(atom, out),
    }
}
