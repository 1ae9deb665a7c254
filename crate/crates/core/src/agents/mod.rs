//! The agent contract and the baseline agents.
//!
//! What an agent may see depends on the information regime. Every regime
//! supplies the current state and the legal moves; only the forward-model
//! regime adds a simulator, and only the description regime adds the
//! game's ludeme tree.

mod config;
mod flat_mc;
mod random;
mod uct;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{GameSpec, GameState, Move, MoveError, Player, PlayoutEnd, Status};
use crate::grammar::LudemeNode;
use crate::rng::GameRng;

pub use config::{AgentConfig, AgentKind, DEFAULT_C};
pub use flat_mc::{flat_mc, FlatMonteCarlo};
pub use random::RandomAgent;
pub use uct::{uct_search, SearchResult, Uct};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    ForwardModel,
    DescriptionOnly,
    Blind,
}

impl FromStr for Regime {
    type Err = AgentError;

    fn from_str(s: &str) -> Result<Self, AgentError> {
        match s {
            "forward-model" => Ok(Regime::ForwardModel),
            "description-only" => Ok(Regime::DescriptionOnly),
            "blind" => Ok(Regime::Blind),
            other => Err(AgentError::Config(format!("unknown regime `{other}`"))),
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::ForwardModel => "forward-model",
            Regime::DescriptionOnly => "description-only",
            Regime::Blind => "blind",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AgentError {
    #[error("{agent} needs a forward model but the regime is {regime}")]
    NeedsForwardModel { agent: String, regime: Regime },
    #[error("observation has no legal moves")]
    NoLegalMoves,
    #[error("bad agent configuration: {0}")]
    Config(String),
    #[error("agent failed: {0}")]
    Failed(String),
}

/// Simulator handed to agents in the forward-model regime. It works on
/// copies of states and never exposes the description.
#[derive(Clone, Debug)]
pub struct ForwardModel {
    spec: Arc<GameSpec>,
}

impl ForwardModel {
    pub fn new(spec: Arc<GameSpec>) -> Self {
        ForwardModel { spec }
    }

    pub fn players(&self) -> usize {
        self.spec.players()
    }

    pub fn legal_moves(&self, state: &GameState) -> Result<Vec<Move>, MoveError> {
        self.spec.legal_moves(state)
    }

    pub fn apply(&self, state: &GameState, mv: Move) -> Result<GameState, MoveError> {
        self.spec.apply(state, mv)
    }

    pub fn status(&self, state: &GameState) -> Status {
        self.spec.status(state)
    }

    /// In-place step without legality checks; see [`GameSpec::advance`].
    pub fn advance(&self, state: &mut GameState, mv: Move) -> Status {
        self.spec.advance(state, mv)
    }

    pub fn random_rollout(
        &self,
        state: &mut GameState,
        rng: &mut GameRng,
        cap: usize,
    ) -> PlayoutEnd {
        self.spec.random_rollout(state, rng, cap)
    }

    pub fn last_mover(&self, state: &GameState) -> Player {
        self.spec.last_mover(state)
    }
}

#[derive(Clone, Debug)]
pub enum Knowledge {
    ForwardModel(ForwardModel),
    Description(Arc<LudemeNode>),
    Blind,
}

/// What an agent is shown when asked for a move.
#[derive(Clone, Debug)]
pub struct Observation {
    state: GameState,
    legal: Vec<Move>,
    knowledge: Knowledge,
}

impl Observation {
    pub fn new(
        state: GameState,
        legal: Vec<Move>,
        knowledge: Knowledge,
    ) -> Result<Self, AgentError> {
        if legal.is_empty() {
            return Err(AgentError::NoLegalMoves);
        }
        Ok(Observation {
            state,
            legal,
            knowledge,
        })
    }

    /// Builds the observation a regime allows for an ongoing `state`.
    pub fn for_regime(
        spec: &Arc<GameSpec>,
        state: &GameState,
        regime: Regime,
    ) -> Result<Self, AgentError> {
        let legal = spec
            .legal_moves(state)
            .map_err(|_| AgentError::NoLegalMoves)?;
        let knowledge = match regime {
            Regime::ForwardModel => Knowledge::ForwardModel(ForwardModel::new(spec.clone())),
            Regime::DescriptionOnly => Knowledge::Description(Arc::new(spec.description().clone())),
            Regime::Blind => Knowledge::Blind,
        };
        Observation::new(state.clone(), legal, knowledge)
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn legal_moves(&self) -> &[Move] {
        &self.legal
    }

    pub fn regime(&self) -> Regime {
        match self.knowledge {
            Knowledge::ForwardModel(_) => Regime::ForwardModel,
            Knowledge::Description(_) => Regime::DescriptionOnly,
            Knowledge::Blind => Regime::Blind,
        }
    }

    pub fn forward_model(&self) -> Option<&ForwardModel> {
        match &self.knowledge {
            Knowledge::ForwardModel(fm) => Some(fm),
            _ => None,
        }
    }

    pub fn description(&self) -> Option<&LudemeNode> {
        match &self.knowledge {
            Knowledge::Description(d) => Some(d),
            _ => None,
        }
    }
}

/// Per-move thinking limits. At least one limit is always set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    time: Option<Duration>,
    iterations: Option<u64>,
}

impl Budget {
    pub fn new(time: Option<Duration>, iterations: Option<u64>) -> Result<Self, AgentError> {
        if time.is_none() && iterations.is_none() {
            return Err(AgentError::Config(
                "a budget needs a time or an iteration limit".into(),
            ));
        }
        Ok(Budget { time, iterations })
    }

    pub fn iterations(n: u64) -> Self {
        Budget {
            time: None,
            iterations: Some(n),
        }
    }

    pub fn time(limit: Duration) -> Self {
        Budget {
            time: Some(limit),
            iterations: None,
        }
    }

    pub fn time_limit(&self) -> Option<Duration> {
        self.time
    }

    pub fn iteration_limit(&self) -> Option<u64> {
        self.iterations
    }

    /// The tighter of this budget and an extra iteration cap.
    pub fn capped(self, iterations: Option<u64>) -> Self {
        let iterations = match (self.iterations, iterations) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Budget { iterations, ..self }
    }
}

/// A compiled game offered during a training phase.
#[derive(Clone, Debug)]
pub struct TrainingGame {
    pub id: String,
    pub spec: Arc<GameSpec>,
}

pub trait Agent: Send {
    fn name(&self) -> String;

    /// Whether the agent can play under a regime at all.
    fn supports(&self, regime: Regime) -> bool;

    /// Picks one of the observation's legal moves.
    fn select_move(&mut self, obs: &Observation, budget: &Budget) -> Result<Move, AgentError>;

    /// Optional learning phase before evaluation. The baselines ignore it.
    fn train(&mut self, _games: &[TrainingGame], _budget: Duration) {}
}

/// Tracks a [`Budget`] during a search loop.
pub(crate) struct Deadline {
    start: web_time::Instant,
    time: Option<Duration>,
    iterations: Option<u64>,
}

impl Deadline {
    pub(crate) fn start(budget: &Budget) -> Self {
        Deadline {
            start: web_time::Instant::now(),
            time: budget.time,
            iterations: budget.iterations,
        }
    }

    pub(crate) fn expired(&self, done: u64) -> bool {
        self.iterations.is_some_and(|n| done >= n)
            || self.time.is_some_and(|t| self.start.elapsed() >= t)
    }
}

pub(crate) fn reward(end: &PlayoutEnd, player: Player) -> f64 {
    match end {
        PlayoutEnd::Terminal(t) => t.outcome(player).score(),
        PlayoutEnd::MoveCap => 0.5,
    }
}
