use super::token::Position;

/// One parenthesised ludeme: a keyword and its ordered arguments.
///
/// Equality is structural: source positions are carried for error
/// reporting but ignored when comparing trees.
#[derive(Clone, Debug)]
pub struct LudemeNode {
    pub keyword: String,
    pub args: Vec<Arg>,
    pub pos: Position,
}

#[derive(Clone, Debug)]
pub enum Arg {
    Node(LudemeNode),
    Int(i64, Position),
    Str(String, Position),
    /// A bare identifier such as a role (`P1`, `Each`), outcome or direction.
    Ident(String, Position),
    /// A brace-delimited, ordered list.
    List(Vec<Arg>, Position),
}

impl LudemeNode {
    pub fn new(keyword: impl Into<String>, args: Vec<Arg>) -> Self {
        LudemeNode {
            keyword: keyword.into(),
            args,
            pos: Position::default(),
        }
    }

    /// Depth-first iteration over this node and every node below it,
    /// including nodes inside lists.
    pub fn walk(&self) -> impl Iterator<Item = &LudemeNode> {
        let mut stack = vec![self];
        std::iter::from_fn(move || {
            let node = stack.pop()?;
            for arg in node.args.iter().rev() {
                arg.push_nodes(&mut stack);
            }
            Some(node)
        })
    }

    pub fn node_count(&self) -> usize {
        self.walk().count()
    }

    /// Number of nested ludemes on the longest root-to-leaf path, the root counting as 1.
    pub fn depth(&self) -> usize {
        1 + self.args.iter().map(Arg::depth).max().unwrap_or(0)
    }

    pub fn contains_keyword(&self, keyword: &str) -> bool {
        self.walk().any(|n| n.keyword == keyword)
    }

    /// First direct child node with the given keyword, looking inside lists too.
    pub fn child(&self, keyword: &str) -> Option<&LudemeNode> {
        self.children().find(|n| n.keyword == keyword)
    }

    /// Direct child nodes, with list members flattened in order.
    pub fn children(&self) -> impl Iterator<Item = &LudemeNode> {
        self.args.iter().flat_map(|a| match a {
            Arg::Node(n) => vec![n],
            Arg::List(items, _) => items
                .iter()
                .filter_map(|i| match i {
                    Arg::Node(n) => Some(n),
                    _ => None,
                })
                .collect(),
            _ => Vec::new(),
        })
    }
}

impl Arg {
    pub fn pos(&self) -> Position {
        match self {
            Arg::Node(n) => n.pos,
            Arg::Int(_, p) | Arg::Str(_, p) | Arg::Ident(_, p) | Arg::List(_, p) => *p,
        }
    }

    pub fn node(node: LudemeNode) -> Self {
        Arg::Node(node)
    }

    pub fn int(v: i64) -> Self {
        Arg::Int(v, Position::default())
    }

    pub fn string(s: impl Into<String>) -> Self {
        Arg::Str(s.into(), Position::default())
    }

    pub fn ident(s: impl Into<String>) -> Self {
        Arg::Ident(s.into(), Position::default())
    }

    pub fn list(items: Vec<Arg>) -> Self {
        Arg::List(items, Position::default())
    }

    /// Text used when pointing at this argument in an error.
    pub fn lexeme(&self) -> String {
        match self {
            Arg::Node(n) => n.keyword.clone(),
            Arg::Int(v, _) => v.to_string(),
            Arg::Str(s, _) => format!("\"{s}\""),
            Arg::Ident(s, _) => s.clone(),
            Arg::List(..) => "{".to_string(),
        }
    }

    fn depth(&self) -> usize {
        match self {
            Arg::Node(n) => n.depth(),
            Arg::List(items, _) => items.iter().map(Arg::depth).max().unwrap_or(0),
            _ => 0,
        }
    }

    fn push_nodes<'a>(&'a self, stack: &mut Vec<&'a LudemeNode>) {
        match self {
            Arg::Node(n) => stack.push(n),
            Arg::List(items, _) => {
                for item in items.iter().rev() {
                    item.push_nodes(stack);
                }
            }
            _ => {}
        }
    }
}

impl PartialEq for LudemeNode {
    fn eq(&self, other: &Self) -> bool {
        self.keyword == other.keyword && self.args == other.args
    }
}

impl Eq for LudemeNode {}

impl PartialEq for Arg {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Arg::Node(a), Arg::Node(b)) => a == b,
            (Arg::Int(a, _), Arg::Int(b, _)) => a == b,
            (Arg::Str(a, _), Arg::Str(b, _)) => a == b,
            (Arg::Ident(a, _), Arg::Ident(b, _)) => a == b,
            (Arg::List(a, _), Arg::List(b, _)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Arg {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_ignores_positions() {
        let mut a = LudemeNode::new("to", vec![Arg::node(LudemeNode::new("empty", vec![]))]);
        let b = a.clone();
        a.pos = Position::new(4, 2);
        assert_eq!(a, b);
    }

    #[test]
    fn walk_visits_list_members_in_order() {
        let tree = LudemeNode::new(
            "equipment",
            vec![Arg::list(vec![
                Arg::node(LudemeNode::new("HexBoard", vec![Arg::int(3)])),
                Arg::node(LudemeNode::new("ball", vec![Arg::ident("Each")])),
            ])],
        );
        let kws: Vec<_> = tree.walk().map(|n| n.keyword.as_str()).collect();
        assert_eq!(kws, ["equipment", "HexBoard", "ball"]);
        assert_eq!(tree.depth(), 2);
        assert_eq!(tree.children().count(), 2);
    }
}
