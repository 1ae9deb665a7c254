use rand::Rng;

use crate::rng::{seeded, GameRng};

use super::{GameSpec, GameState, Move, Status, Terminal};

/// Ply limit applied to playouts of generated games.
pub const DEFAULT_MOVE_CAP: usize = 1000;

/// Chooses moves during a playout.
pub trait Policy {
    fn choose(
        &mut self,
        spec: &GameSpec,
        state: &GameState,
        legal: &[Move],
        rng: &mut GameRng,
    ) -> Move;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct UniformRandom;

impl Policy for UniformRandom {
    fn choose(&mut self, _: &GameSpec, _: &GameState, legal: &[Move], rng: &mut GameRng) -> Move {
        legal[rng.random_range(0..legal.len())]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlayoutEnd {
    Terminal(Terminal),
    /// The move cap was reached first; scored as a draw but reported apart.
    MoveCap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub moves: Vec<Move>,
    pub end: PlayoutEnd,
}

/// Plays from `state` with `policy` until the game ends or `cap` moves
/// have been made. Deterministic for a given seed.
pub fn playout(
    spec: &GameSpec,
    state: &GameState,
    policy: &mut dyn Policy,
    seed: u64,
    cap: usize,
) -> Trajectory {
    assert!(cap >= 1, "move cap must be positive");
    let mut rng = seeded(seed);
    let mut state = state.clone();
    let mut moves = Vec::new();
    let mut status = spec.status(&state);
    let mut legal: Vec<Move> = state.empty_cells().map(Move).collect();
    while !status.is_terminal() && moves.len() < cap {
        let mv = policy.choose(spec, &state, &legal, &mut rng);
        status = spec.advance(&mut state, mv);
        legal.retain(|m| *m != mv);
        moves.push(mv);
    }
    let end = match status {
        Status::Over(t) => PlayoutEnd::Terminal(t),
        Status::Ongoing => PlayoutEnd::MoveCap,
    };
    Trajectory { moves, end }
}

impl GameSpec {
    /// Uniform-random rollout in place, the inner loop of the Monte Carlo
    /// agents. `state` must be ongoing.
    pub fn random_rollout(
        &self,
        state: &mut GameState,
        rng: &mut GameRng,
        cap: usize,
    ) -> PlayoutEnd {
        let mut empty: Vec<usize> = state.empty_cells().collect();
        for _ in 0..cap {
            if empty.is_empty() {
                break;
            }
            let cell = empty.swap_remove(rng.random_range(0..empty.len()));
            if let Status::Over(t) = self.advance(state, Move(cell)) {
                return PlayoutEnd::Terminal(t);
            }
        }
        PlayoutEnd::MoveCap
    }
}
