//! Independent oracles shared by the integration and acceptance tests.
//! None of them call into the engine's own rule logic.
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use ludeme::engine::{GameSpec, GameState, Move, Player, Status};
use ludeme::grammar::registry::ROLE_CATEGORY;
use ludeme::grammar::{Arg, LudemeNode, ParamKind, Registry, Repeat};
use rand::Rng;

/// Hex on an 11x11 board, laid out as it is usually published.
pub const HEX_TEXT: &str = r#"(game "Hex"
  (mode 2 (addToEmpty))
  (equipment {
    (HexBoard 11)
    (ball Each)
    (region P1 (edge NE)) (region P1 (edge SW))
    (region P2 (edge NW)) (region P2 (edge SE))
  }
  )
  (rules
    (play (to (empty)))
    (end
       (connect (mover))
       (result (mover) Win)
    )
  )
)"#;

pub fn hex_text(side: usize) -> String {
    HEX_TEXT.replace("(HexBoard 11)", &format!("(HexBoard {side})"))
}

// ---- Tic-Tac-Toe ----

const LINES: [[usize; 3]; 8] = [
    [0, 1, 2],
    [3, 4, 5],
    [6, 7, 8],
    [0, 3, 6],
    [1, 4, 7],
    [2, 5, 8],
    [0, 4, 8],
    [2, 4, 6],
];

/// 0 empty, 1 first player, 2 second player; cell `r * 3 + c`.
pub type Ttt = [u8; 9];

/// `Some(0)` draw, `Some(p)` player p won, `None` still going.
pub fn ttt_verdict(b: &Ttt) -> Option<u8> {
    for l in LINES {
        if b[l[0]] != 0 && b[l[0]] == b[l[1]] && b[l[1]] == b[l[2]] {
            return Some(b[l[0]]);
        }
    }
    b.iter().all(|&c| c != 0).then_some(0)
}

fn engine_verdict(status: &Status) -> Option<u8> {
    let t = status.terminal()?;
    Some(match t.winner() {
        Some(Player::P1) => 1,
        Some(Player::P2) => 2,
        None => 0,
    })
}

fn raw(state: &GameState) -> Ttt {
    let mut b = [0; 9];
    for (i, c) in state.cells().iter().enumerate() {
        b[i] = match c {
            None => 0,
            Some(Player::P1) => 1,
            Some(Player::P2) => 2,
        };
    }
    b
}

/// Walks every position reachable from the empty board, stopping at
/// finished games, and compares the engine's status with [`ttt_verdict`].
/// Returns the number of distinct positions and the disagreements.
pub fn ttt_check_all(spec: &GameSpec) -> (usize, Vec<String>) {
    let mut seen: HashMap<Ttt, ()> = HashMap::new();
    let mut bad = Vec::new();
    let mut stack = vec![spec.initial_state()];
    while let Some(state) = stack.pop() {
        let b = raw(&state);
        if seen.insert(b, ()).is_some() {
            continue;
        }
        let expected = ttt_verdict(&b);
        let got = engine_verdict(&spec.status(&state));
        if expected != got {
            bad.push(format!("{b:?}: oracle {expected:?}, engine {got:?}"));
        }
        if expected.is_some() {
            continue;
        }
        for cell in 0..9 {
            if b[cell] == 0 {
                stack.push(spec.apply(&state, Move(cell)).expect("empty cell is legal"));
            }
        }
    }
    (seen.len(), bad)
}

// ---- Hex ----

/// Axial rhombus adjacency, from the board's textbook definition.
fn hex_neighbors(side: usize, r: usize, c: usize) -> Vec<(usize, usize)> {
    let n = side as isize;
    let (r, c) = (r as isize, c as isize);
    [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)]
        .iter()
        .map(|(dr, dc)| (r + dr, c + dc))
        .filter(|&(r, c)| r >= 0 && c >= 0 && r < n && c < n)
        .map(|(r, c)| (r as usize, c as usize))
        .collect()
}

/// Breadth-first search: does `who` link its two edges? The first player
/// joins the bottom and top rows, the second the left and right columns.
pub fn hex_bfs(side: usize, cells: &[Option<Player>], who: Player) -> bool {
    let at = |r: usize, c: usize| cells[r * side + c];
    let start: Vec<(usize, usize)> = (0..side)
        .map(|i| if who == Player::P1 { (0, i) } else { (i, 0) })
        .filter(|&(r, c)| at(r, c) == Some(who))
        .collect();
    let mut seen = vec![false; side * side];
    let mut queue: VecDeque<(usize, usize)> = start.into_iter().collect();
    for &(r, c) in &queue {
        seen[r * side + c] = true;
    }
    while let Some((r, c)) = queue.pop_front() {
        let goal = if who == Player::P1 {
            r == side - 1
        } else {
            c == side - 1
        };
        if goal {
            return true;
        }
        for (nr, nc) in hex_neighbors(side, r, c) {
            if !seen[nr * side + nc] && at(nr, nc) == Some(who) {
                seen[nr * side + nc] = true;
                queue.push_back((nr, nc));
            }
        }
    }
    false
}

/// A full board with the pieces split as alternating play would leave them.
pub fn random_full_board(side: usize, rng: &mut impl Rng) -> Vec<Option<Player>> {
    let cells = side * side;
    let mut order: Vec<usize> = (0..cells).collect();
    rand::seq::SliceRandom::shuffle(order.as_mut_slice(), rng);
    let mut board = vec![None; cells];
    for (k, cell) in order.into_iter().enumerate() {
        board[cell] = Some(if k % 2 == 0 { Player::P1 } else { Player::P2 });
    }
    board
}

// ---- Random registry trees ----

/// Builds a tree that conforms to `registry`, rooted at `game`. Integer
/// parameters stay within a small window above their minimum so boards
/// remain small; roles respect the player count chosen for `mode`.
pub fn random_tree(registry: &Registry, rng: &mut impl Rng) -> LudemeNode {
    let mut players = 2;
    node_of(registry, "game", rng, &mut players)
}

fn node_of(
    registry: &Registry,
    keyword: &str,
    rng: &mut impl Rng,
    players: &mut i64,
) -> LudemeNode {
    let sig = registry.signature(keyword).expect("registered").clone();
    let mut args = Vec::new();
    for p in &sig.params {
        let count = match p.repeat {
            Repeat::One => 1,
            Repeat::Optional => rng.random_range(0..=1),
            Repeat::Many { min } => rng.random_range(min..=min + 3),
        };
        let items: Vec<Arg> = (0..count)
            .map(|_| {
                let a = arg_of(registry, &p.kind, rng, players);
                if p.name == "players" {
                    if let Arg::Int(v, _) = a {
                        *players = v;
                    }
                }
                a
            })
            .collect();
        match p.repeat {
            Repeat::Many { .. } if rng.random_bool(0.5) => args.push(Arg::list(items)),
            _ => args.extend(items),
        }
    }
    LudemeNode::new(keyword, args)
}

fn arg_of(registry: &Registry, kind: &ParamKind, rng: &mut impl Rng, players: &mut i64) -> Arg {
    match kind {
        ParamKind::Int { min, max } => {
            let hi = max.unwrap_or(min + 8).min(min + 8);
            Arg::int(rng.random_range(*min..=hi))
        }
        ParamKind::Str => {
            let len = rng.random_range(0..8);
            Arg::string(
                (0..len)
                    .map(|_| rng.random_range(b'a'..=b'z') as char)
                    .collect::<String>(),
            )
        }
        ParamKind::Category(cat) => {
            let mut terminals: Vec<String> = registry.terminals(cat).map(String::from).collect();
            if cat == ROLE_CATEGORY {
                terminals.retain(|t| !t.starts_with('P'));
                terminals.extend((1..=*players).map(|k| format!("P{k}")));
            }
            let members: Vec<String> = registry.members(cat).map(|s| s.keyword.clone()).collect();
            let pick = rng.random_range(0..terminals.len() + members.len());
            if pick < terminals.len() {
                Arg::ident(terminals[pick].clone())
            } else {
                Arg::node(node_of(
                    registry,
                    &members[pick - terminals.len()],
                    rng,
                    players,
                ))
            }
        }
    }
}

/// Renames one randomly chosen node to a keyword the registry lacks.
pub fn with_unknown_keyword(
    tree: &LudemeNode,
    registry: &Registry,
    rng: &mut impl Rng,
) -> LudemeNode {
    let target = rng.random_range(0..tree.node_count());
    let mut unknown = format!("zz{}", rng.random_range(0..1000));
    while registry.signature(&unknown).is_some() {
        unknown.push('q');
    }
    let mut out = tree.clone();
    let mut k = 0;
    rename(&mut out, target, &mut k, &unknown);
    out
}

fn rename(node: &mut LudemeNode, target: usize, k: &mut usize, to: &str) -> bool {
    if *k == target {
        node.keyword = to.to_string();
        return true;
    }
    *k += 1;
    node.args.iter_mut().any(|a| rename_arg(a, target, k, to))
}

fn rename_arg(arg: &mut Arg, target: usize, k: &mut usize, to: &str) -> bool {
    match arg {
        Arg::Node(n) => rename(n, target, k, to),
        Arg::List(items, _) => items.iter_mut().any(|a| rename_arg(a, target, k, to)),
        _ => false,
    }
}
