//! Compiled games and the forward model: board topology, state, legal
//! moves, end-rule evaluation and playouts.

mod board;
mod error;
pub mod library;
mod playout;
mod spec;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use board::{column_name, BoardFamily, BoardGraph, CellId, Direction, Region};
pub use error::{CompileError, LoadError, MoveError};
pub use playout::{playout, PlayoutEnd, Policy, Trajectory, UniformRandom, DEFAULT_MOVE_CAP};
pub use spec::{Condition, EndRule, GameSpec, RoleRef};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Player {
    P1,
    P2,
}

impl Player {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Player> {
        match i {
            0 => Some(Player::P1),
            1 => Some(Player::P2),
            _ => None,
        }
    }

    pub fn opponent(self) -> Player {
        match self {
            Player::P1 => Player::P2,
            Player::P2 => Player::P1,
        }
    }

    /// The first `count` players in seat order.
    pub fn all(count: usize) -> Vec<Player> {
        [Player::P1, Player::P2].into_iter().take(count).collect()
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Win,
    Loss,
    Draw,
}

impl Outcome {
    pub fn opposite(self) -> Outcome {
        match self {
            Outcome::Win => Outcome::Loss,
            Outcome::Loss => Outcome::Win,
            Outcome::Draw => Outcome::Draw,
        }
    }

    /// 1 for a win, 0.5 for a draw, 0 for a loss.
    pub fn score(self) -> f64 {
        match self {
            Outcome::Win => 1.0,
            Outcome::Draw => 0.5,
            Outcome::Loss => 0.0,
        }
    }
}

/// A placement on one cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Move(pub CellId);

/// Board occupancy plus whose turn it is. Cheap to clone; the forward model
/// never mutates a state it is given.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GameState {
    cells: Vec<Option<Player>>,
    mover: Player,
    moves: u32,
}

impl GameState {
    pub fn cells(&self) -> &[Option<Player>] {
        &self.cells
    }

    pub fn mover(&self) -> Player {
        self.mover
    }

    pub fn move_count(&self) -> u32 {
        self.moves
    }

    pub fn empty_cells(&self) -> impl Iterator<Item = CellId> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_none())
            .map(|(i, _)| i)
    }
}

/// Per-player outcomes of a finished game and the index of the end rule
/// that decided it (`None` for the full-board fallback draw).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Terminal {
    pub outcomes: Vec<Outcome>,
    pub rule: Option<usize>,
}

impl Terminal {
    pub fn outcome(&self, player: Player) -> Outcome {
        self.outcomes[player.index()]
    }

    pub fn winner(&self) -> Option<Player> {
        self.outcomes
            .iter()
            .position(|o| *o == Outcome::Win)
            .and_then(Player::from_index)
    }

    pub fn is_draw(&self) -> bool {
        self.outcomes.iter().all(|o| *o == Outcome::Draw)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Ongoing,
    Over(Terminal),
}

impl Status {
    pub fn is_terminal(&self) -> bool {
        matches!(self, Status::Over(_))
    }

    pub fn terminal(&self) -> Option<&Terminal> {
        match self {
            Status::Over(t) => Some(t),
            Status::Ongoing => None,
        }
    }
}

#[cfg(test)]
mod tests;
