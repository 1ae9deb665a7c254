use serde::{Deserialize, Serialize};

use crate::engine::{
    playout, GameSpec, GameState, Move, Outcome, PlayoutEnd, Status, UniformRandom,
    DEFAULT_MOVE_CAP,
};
use crate::grammar::{validate, LudemeNode, ParseErrorKind, Registry};
use crate::rng::derive_seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FilterConfig {
    pub playouts: usize,
    pub move_cap: usize,
    pub seed: u64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            playouts: 20,
            move_cap: DEFAULT_MOVE_CAP,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub valid: bool,
    pub reasons: Vec<String>,
}

impl Verdict {
    fn invalid(reasons: Vec<String>) -> Self {
        Verdict {
            valid: false,
            reasons,
        }
    }
}

/// Screens a candidate: it must validate and compile, every seeded random
/// playout must finish before the move cap, and the game must not be
/// decided almost at once.
pub fn filter_valid(tree: &LudemeNode, config: &FilterConfig) -> Verdict {
    if let Err(errors) = validate(tree, &Registry::builtin()) {
        let reasons = errors
            .iter()
            .map(|e| match &e.kind {
                ParseErrorKind::UnknownLudeme(k) => format!("unknown ludeme `{k}`"),
                _ => e.to_string(),
            })
            .collect();
        return Verdict::invalid(reasons);
    }
    let spec = match GameSpec::compile(tree) {
        Ok(spec) => spec,
        Err(e) => return Verdict::invalid(vec![format!("does not compile: {e}")]),
    };
    let mut reasons = Vec::new();
    let mut one_move = 0;
    for i in 0..config.playouts {
        let t = playout(
            &spec,
            &spec.initial_state(),
            &mut UniformRandom,
            derive_seed(config.seed, i as u64),
            config.move_cap,
        );
        if t.end == PlayoutEnd::MoveCap {
            reasons.push(format!("playout {i} reached the move cap"));
        }
        if t.moves.len() <= 1 {
            one_move += 1;
        }
    }
    if config.playouts > 0 && one_move == config.playouts {
        reasons.push("the first move ends every playout".into());
    }
    if spec.players() == 2 {
        let root = spec.initial_state();
        if forced_win(&spec, &root, 3) {
            reasons.push("P1 can force a win by its second placement".into());
        } else if forced_loss(&spec, &root, 2) {
            reasons.push("P2 can force a win with its first placement".into());
        }
    }
    Verdict {
        valid: reasons.is_empty(),
        reasons,
    }
}

/// Can the player to move force a win within `plies` placements?
fn forced_win(spec: &GameSpec, state: &GameState, plies: usize) -> bool {
    if plies == 0 {
        return false;
    }
    let me = state.mover();
    state.empty_cells().any(|cell| {
        let mut next = state.clone();
        match spec.advance(&mut next, Move(cell)) {
            Status::Over(t) => t.outcome(me) == Outcome::Win,
            Status::Ongoing => forced_loss(spec, &next, plies - 1),
        }
    })
}

/// Does every move of the player to move lose within `plies` placements?
fn forced_loss(spec: &GameSpec, state: &GameState, plies: usize) -> bool {
    if plies == 0 {
        return false;
    }
    let me = state.mover();
    state.empty_cells().all(|cell| {
        let mut next = state.clone();
        match spec.advance(&mut next, Move(cell)) {
            Status::Over(t) => t.outcome(me) == Outcome::Loss,
            Status::Ongoing => forced_win(spec, &next, plies - 1),
        }
    })
}
