//! The shipped game library.

use super::GameSpec;

/// `(id, description)` for every library game.
pub const GAMES: &[(&str, &str)] = &[
    ("hex", include_str!("../../../../games/hex.lud")),
    ("hex5", include_str!("../../../../games/hex5.lud")),
    ("tictactoe", include_str!("../../../../games/tictactoe.lud")),
    ("gomoku", include_str!("../../../../games/gomoku.lud")),
    ("no-three", include_str!("../../../../games/no-three.lud")),
];

pub fn text(id: &str) -> Option<&'static str> {
    GAMES.iter().find(|(g, _)| *g == id).map(|(_, t)| *t)
}

/// Compiles a library game. Panics only if a shipped description is broken,
/// which the tests rule out.
pub fn game(id: &str) -> Option<GameSpec> {
    text(id).map(|t| GameSpec::from_text(t).unwrap_or_else(|e| panic!("library game {id}: {e}")))
}
