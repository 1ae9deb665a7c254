use thiserror::Error;

use crate::grammar::ParseError;

use super::Player;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("board side must be at least 2, got {0}")]
    BoardTooSmall(usize),
    #[error("equipment must contain exactly one board, found {0}")]
    BoardCount(usize),
    #[error("player {0} has no pieces")]
    NoPieces(Player),
    #[error("region owner must be a player, got `{0}`")]
    RegionOwner(String),
    #[error("player {0} has more than 32 regions")]
    TooManyRegions(Player),
    #[error("connect requires two regions for player {0}")]
    ConnectNeedsRegions(Player),
    #[error("unsupported {what} `{found}`")]
    Unsupported { what: &'static str, found: String },
    #[error("malformed `{0}` clause")]
    Malformed(String),
}

/// Failure to turn description text into a playable game.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("{}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<ParseError>),
    #[error(transparent)]
    Compile(#[from] CompileError),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("cell {cell} is off the board ({cells} cells)")]
    OutOfRange { cell: usize, cells: usize },
    #[error("cell {0} is occupied")]
    Occupied(String),
    #[error("no cell is labelled `{0}`")]
    UnknownLabel(String),
    #[error("the game is over")]
    GameOver,
}
