use rand::Rng;

use crate::engine::Move;
use crate::rng::{seeded, GameRng};

use super::{Agent, AgentError, Budget, Observation, Regime};

/// Uniformly random legal moves. Plays under every regime.
pub struct RandomAgent {
    rng: GameRng,
}

impl RandomAgent {
    pub fn new(seed: u64) -> Self {
        RandomAgent { rng: seeded(seed) }
    }
}

impl Agent for RandomAgent {
    fn name(&self) -> String {
        "random".into()
    }

    fn supports(&self, _: Regime) -> bool {
        true
    }

    fn select_move(&mut self, obs: &Observation, _: &Budget) -> Result<Move, AgentError> {
        let legal = obs.legal_moves();
        Ok(legal[self.rng.random_range(0..legal.len())])
    }
}
