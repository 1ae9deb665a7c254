use crate::engine::{GameState, Move, PlayoutEnd, Status, DEFAULT_MOVE_CAP};
use crate::rng::{seeded, GameRng};

use super::{reward, Agent, AgentError, Budget, Deadline, ForwardModel, Observation, Regime};

/// Flat Monte Carlo: random playouts shared round-robin across the root
/// moves; the move with the best mean result wins, ties to the lowest cell.
pub fn flat_mc(fm: &ForwardModel, root: &GameState, budget: &Budget, rng: &mut GameRng) -> Move {
    let moves: Vec<Move> = root.empty_cells().map(Move).collect();
    if moves.len() == 1 {
        return moves[0];
    }
    let me = root.mover();
    let mut totals = vec![0.0f64; moves.len()];
    let mut counts = vec![0u64; moves.len()];
    let deadline = Deadline::start(budget);
    let mut done = 0u64;
    while !deadline.expired(done) {
        let i = (done % moves.len() as u64) as usize;
        let mut state = root.clone();
        let end = match fm.advance(&mut state, moves[i]) {
            Status::Over(t) => PlayoutEnd::Terminal(t),
            Status::Ongoing => fm.random_rollout(&mut state, rng, DEFAULT_MOVE_CAP),
        };
        totals[i] += reward(&end, me);
        counts[i] += 1;
        done += 1;
    }
    let mut best = 0;
    let mut best_mean = f64::NEG_INFINITY;
    for i in 0..moves.len() {
        if counts[i] == 0 {
            continue;
        }
        let mean = totals[i] / counts[i] as f64;
        if mean > best_mean {
            best_mean = mean;
            best = i;
        }
    }
    moves[best]
}

pub struct FlatMonteCarlo {
    iterations: Option<u64>,
    rng: GameRng,
}

impl FlatMonteCarlo {
    pub fn new(iterations: Option<u64>, seed: u64) -> Self {
        FlatMonteCarlo {
            iterations,
            rng: seeded(seed),
        }
    }
}

impl Agent for FlatMonteCarlo {
    fn name(&self) -> String {
        "flat-mc".into()
    }

    fn supports(&self, regime: Regime) -> bool {
        regime == Regime::ForwardModel
    }

    fn select_move(&mut self, obs: &Observation, budget: &Budget) -> Result<Move, AgentError> {
        let fm = obs
            .forward_model()
            .ok_or_else(|| AgentError::NeedsForwardModel {
                agent: self.name(),
                regime: obs.regime(),
            })?;
        Ok(flat_mc(
            fm,
            obs.state(),
            &budget.capped(self.iterations),
            &mut self.rng,
        ))
    }
}
