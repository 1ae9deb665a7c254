use crate::grammar::{self, Arg, LudemeNode, Registry};

use super::board::{BoardFamily, BoardGraph, CellId, Direction};
use super::error::{CompileError, LoadError, MoveError};
use super::{GameState, Move, Outcome, Player, Status, Terminal};

/// A role as written in a rule: a fixed player, whoever just moved, or everyone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoleRef {
    Player(Player),
    Mover,
    Each,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Condition {
    Connect(RoleRef),
    Line { n: usize, who: RoleRef },
    Full,
    NoMoves,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndRule {
    pub condition: Condition,
    pub who: RoleRef,
    pub outcome: Outcome,
}

/// A compiled, playable game.
#[derive(Clone, Debug)]
pub struct GameSpec {
    name: String,
    players: usize,
    board: BoardGraph,
    end_rules: Vec<EndRule>,
    description: LudemeNode,
}

impl GameSpec {
    /// Compiles a validated description.
    pub fn compile(tree: &LudemeNode) -> Result<GameSpec, CompileError> {
        let malformed = |what: &str| CompileError::Malformed(what.to_string());
        let name = match tree.args.first() {
            Some(Arg::Str(s, _)) => s.clone(),
            _ => return Err(malformed("game")),
        };
        let mode = tree.child("mode").ok_or_else(|| malformed("mode"))?;
        let players = match mode.args.first() {
            Some(Arg::Int(n @ 1..=2, _)) => *n as usize,
            _ => return Err(malformed("mode")),
        };
        let equipment = tree
            .child("equipment")
            .ok_or_else(|| malformed("equipment"))?;
        let items: Vec<&LudemeNode> = equipment.children().collect();

        let boards: Vec<&LudemeNode> = items
            .iter()
            .copied()
            .filter(|n| matches!(n.keyword.as_str(), "HexBoard" | "SquareBoard"))
            .collect();
        if boards.len() != 1 {
            return Err(CompileError::BoardCount(boards.len()));
        }
        let family = if boards[0].keyword == "HexBoard" {
            BoardFamily::Hex
        } else {
            BoardFamily::Square
        };
        let side = match boards[0].args.first() {
            Some(Arg::Int(n, _)) => {
                usize::try_from(*n).map_err(|_| CompileError::BoardTooSmall(0))?
            }
            _ => return Err(malformed(&boards[0].keyword)),
        };
        let mut board = BoardGraph::new(family, side)?;

        let all_players = Player::all(players);
        let mut has_piece = vec![false; players];
        for item in &items {
            match item.keyword.as_str() {
                "HexBoard" | "SquareBoard" => {}
                "ball" => match role(item.args.first())? {
                    RoleRef::Each => has_piece.iter_mut().for_each(|h| *h = true),
                    RoleRef::Player(p) if p.index() < players => has_piece[p.index()] = true,
                    RoleRef::Player(p) => return Err(CompileError::NoPieces(p)),
                    RoleRef::Mover => {
                        return Err(CompileError::Unsupported {
                            what: "piece owner",
                            found: "mover".into(),
                        })
                    }
                },
                "region" => {
                    let owner = match role(item.args.first())? {
                        RoleRef::Player(p) if p.index() < players => p,
                        other => return Err(CompileError::RegionOwner(format!("{other:?}"))),
                    };
                    let edge = item
                        .child("edge")
                        .and_then(|e| match e.args.first() {
                            Some(Arg::Ident(d, _)) => d.parse::<Direction>().ok(),
                            _ => None,
                        })
                        .ok_or_else(|| malformed("region"))?;
                    board.add_edge_region(owner, edge)?;
                }
                other => {
                    return Err(CompileError::Unsupported {
                        what: "equipment item",
                        found: other.into(),
                    })
                }
            }
        }
        if let Some(p) = all_players.iter().find(|p| !has_piece[p.index()]) {
            return Err(CompileError::NoPieces(*p));
        }

        let rules = tree.child("rules").ok_or_else(|| malformed("rules"))?;
        let play = rules.child("play").ok_or_else(|| malformed("play"))?;
        let target = play.child("to").and_then(|t| t.children().next());
        if !matches!(target, Some(n) if n.keyword == "empty") {
            return Err(CompileError::Unsupported {
                what: "play rule",
                found: grammar::print_inline(play),
            });
        }
        let mut end_rules = Vec::new();
        for end in rules.children().filter(|n| n.keyword == "end") {
            let cond_node = end
                .args
                .first()
                .and_then(as_node)
                .ok_or_else(|| malformed("end"))?;
            let result = end.child("result").ok_or_else(|| malformed("end"))?;
            let condition = match cond_node.keyword.as_str() {
                "connect" => Condition::Connect(role(cond_node.args.first())?),
                "line" => match cond_node.args.as_slice() {
                    [Arg::Int(n, _), who] if *n >= 2 => Condition::Line {
                        n: *n as usize,
                        who: role(Some(who))?,
                    },
                    _ => return Err(malformed("line")),
                },
                "full" => Condition::Full,
                "noMoves" => Condition::NoMoves,
                other => {
                    return Err(CompileError::Unsupported {
                        what: "end condition",
                        found: other.into(),
                    })
                }
            };
            let outcome = match result.args.get(1) {
                Some(Arg::Ident(o, _)) => match o.as_str() {
                    "Win" => Outcome::Win,
                    "Loss" => Outcome::Loss,
                    "Draw" => Outcome::Draw,
                    _ => return Err(malformed("result")),
                },
                _ => return Err(malformed("result")),
            };
            end_rules.push(EndRule {
                condition,
                who: role(result.args.first())?,
                outcome,
            });
        }
        if end_rules.is_empty() {
            return Err(malformed("rules"));
        }
        for rule in &end_rules {
            if let Condition::Connect(who) = rule.condition {
                let needed = match who {
                    RoleRef::Player(p) => vec![p],
                    RoleRef::Mover | RoleRef::Each => all_players.clone(),
                };
                if let Some(p) = needed.into_iter().find(|p| board.region_count(*p) < 2) {
                    return Err(CompileError::ConnectNeedsRegions(p));
                }
            }
            if players == 2 && rule.who == RoleRef::Each && rule.outcome != Outcome::Draw {
                return Err(CompileError::Unsupported {
                    what: "result",
                    found: format!("Each {:?}", rule.outcome),
                });
            }
            for who in [rule.who, condition_role(&rule.condition)] {
                if let RoleRef::Player(p) = who {
                    if p.index() >= players {
                        return Err(CompileError::NoPieces(p));
                    }
                }
            }
        }

        Ok(GameSpec {
            name,
            players,
            board,
            end_rules,
            description: tree.clone(),
        })
    }

    /// Parses, validates against the built-in registry and compiles.
    pub fn from_text(text: &str) -> Result<GameSpec, LoadError> {
        let tree = grammar::load(text, &Registry::builtin()).map_err(LoadError::Invalid)?;
        Ok(GameSpec::compile(&tree)?)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn board(&self) -> &BoardGraph {
        &self.board
    }

    pub fn end_rules(&self) -> &[EndRule] {
        &self.end_rules
    }

    pub fn description(&self) -> &LudemeNode {
        &self.description
    }

    pub fn cell_count(&self) -> usize {
        self.board.cell_count()
    }

    /// Broad family used to group results: puzzles, connection games and line games.
    pub fn category(&self) -> &'static str {
        if self.players == 1 {
            return "puzzle";
        }
        let has = |f: fn(&Condition) -> bool| self.end_rules.iter().any(|r| f(&r.condition));
        if has(|c| matches!(c, Condition::Connect(_))) {
            "connection"
        } else if has(|c| matches!(c, Condition::Line { .. })) {
            "line"
        } else {
            "other"
        }
    }

    pub fn initial_state(&self) -> GameState {
        GameState {
            cells: vec![None; self.cell_count()],
            mover: Player::P1,
            moves: 0,
        }
    }

    /// Empty cells in ascending order; an error once the game has ended.
    pub fn legal_moves(&self, state: &GameState) -> Result<Vec<Move>, MoveError> {
        if self.status(state).is_terminal() {
            return Err(MoveError::GameOver);
        }
        Ok(state.empty_cells().map(Move).collect())
    }

    fn check_move(&self, state: &GameState, mv: Move) -> Result<(), MoveError> {
        if mv.0 >= self.cell_count() {
            return Err(MoveError::OutOfRange {
                cell: mv.0,
                cells: self.cell_count(),
            });
        }
        if state.cells[mv.0].is_some() {
            return Err(MoveError::Occupied(self.board.label(mv.0).to_string()));
        }
        Ok(())
    }

    /// The forward model: the state after `mv`, leaving `state` untouched.
    pub fn apply(&self, state: &GameState, mv: Move) -> Result<GameState, MoveError> {
        self.check_move(state, mv)?;
        if self.status(state).is_terminal() {
            return Err(MoveError::GameOver);
        }
        let mut next = state.clone();
        self.place(&mut next, mv);
        Ok(next)
    }

    /// Plays `mv` in place and returns the resulting status, looking only at
    /// what the move could have changed. `state` must be ongoing and `mv`
    /// legal; search code relies on this to avoid a full rule scan per ply.
    pub fn advance(&self, state: &mut GameState, mv: Move) -> Status {
        debug_assert!(self.check_move(state, mv).is_ok());
        self.place(state, mv);
        self.evaluate(state, Some(mv.0))
    }

    fn place(&self, state: &mut GameState, mv: Move) {
        state.cells[mv.0] = Some(state.mover);
        state.moves += 1;
        if self.players == 2 {
            state.mover = state.mover.opponent();
        }
    }

    /// Plays `mv` with full legality checks and reports the new status.
    pub fn step(&self, state: &GameState, mv: Move) -> Result<(GameState, Status), MoveError> {
        let next = self.apply(state, mv)?;
        let status = self.evaluate(&next, Some(mv.0));
        Ok((next, status))
    }

    /// Evaluates the end rules in order, `mover` meaning the player who made
    /// the last move. The first rule that holds decides. A full board where
    /// no rule holds is a draw.
    pub fn status(&self, state: &GameState) -> Status {
        self.evaluate(state, None)
    }

    pub fn last_mover(&self, state: &GameState) -> Player {
        if self.players == 1 {
            Player::P1
        } else {
            state.mover.opponent()
        }
    }

    fn evaluate(&self, state: &GameState, last: Option<CellId>) -> Status {
        let last_mover = self.last_mover(state);
        let empty = state.cells.len() - state.moves as usize;
        for (index, rule) in self.end_rules.iter().enumerate() {
            let holds = match &rule.condition {
                Condition::Full | Condition::NoMoves => empty == 0,
                Condition::Connect(who) => self.resolve(*who, last_mover).any(|p| match last {
                    Some(cell) => {
                        p == last_mover && self.board.connected_through(&state.cells, p, cell)
                    }
                    None => self.board.connected(&state.cells, p),
                }),
                Condition::Line { n, who } => self.resolve(*who, last_mover).any(|p| match last {
                    Some(cell) => {
                        p == last_mover && self.board.line_through(&state.cells, p, cell, *n)
                    }
                    None => self.board.line_exists(&state.cells, p, *n),
                }),
            };
            if holds {
                return Status::Over(self.terminal(rule, last_mover, Some(index)));
            }
        }
        if empty == 0 {
            return Status::Over(Terminal {
                outcomes: vec![Outcome::Draw; self.players],
                rule: None,
            });
        }
        Status::Ongoing
    }

    fn resolve(&self, who: RoleRef, last_mover: Player) -> impl Iterator<Item = Player> {
        let players: Vec<Player> = match who {
            RoleRef::Player(p) => vec![p],
            RoleRef::Mover => vec![last_mover],
            RoleRef::Each => Player::all(self.players),
        };
        players.into_iter()
    }

    fn terminal(&self, rule: &EndRule, last_mover: Player, index: Option<usize>) -> Terminal {
        let named: Vec<Player> = self.resolve(rule.who, last_mover).collect();
        let outcomes = Player::all(self.players)
            .into_iter()
            .map(|p| {
                if named.contains(&p) {
                    rule.outcome
                } else {
                    rule.outcome.opposite()
                }
            })
            .collect();
        Terminal {
            outcomes,
            rule: index,
        }
    }

    pub fn label(&self, mv: Move) -> &str {
        self.board.label(mv.0)
    }

    pub fn parse_move(&self, label: &str) -> Result<Move, MoveError> {
        self.board
            .cell_by_label(label)
            .map(Move)
            .ok_or_else(|| MoveError::UnknownLabel(label.to_string()))
    }
}

fn as_node(arg: &Arg) -> Option<&LudemeNode> {
    match arg {
        Arg::Node(n) => Some(n),
        _ => None,
    }
}

fn condition_role(c: &Condition) -> RoleRef {
    match c {
        Condition::Connect(who) | Condition::Line { who, .. } => *who,
        _ => RoleRef::Each,
    }
}

fn role(arg: Option<&Arg>) -> Result<RoleRef, CompileError> {
    let name = match arg {
        Some(Arg::Ident(s, _)) => s.as_str(),
        Some(Arg::Node(n)) if n.args.is_empty() => n.keyword.as_str(),
        _ => return Err(CompileError::Malformed("role".into())),
    };
    Ok(match name {
        "P1" => RoleRef::Player(Player::P1),
        "P2" => RoleRef::Player(Player::P2),
        "mover" => RoleRef::Mover,
        "Each" => RoleRef::Each,
        other => {
            return Err(CompileError::Unsupported {
                what: "role",
                found: other.into(),
            })
        }
    })
}
