use ludeme::rng::derive_seed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::GameCatalog;
use crate::competitor::Competitor;
use crate::live::MatchObserver;
use crate::play::{play_all, MatchSettings, MatchSetup};
use crate::record::{MatchRecord, RecordStore, StoreError};
use crate::standings::Standings;

#[derive(Debug, Error)]
pub enum TournamentError {
    #[error("need at least {needed} competitors, got {got}")]
    TooFewCompetitors { needed: usize, got: usize },
    #[error("no games to play")]
    NoGames,
    #[error("duplicate competitor id `{0}`")]
    DuplicateId(String),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Store(#[from] StoreError),
}

pub(crate) fn check_entrants(
    competitors: &[Competitor],
    needed: usize,
) -> Result<(), TournamentError> {
    if competitors.len() < needed {
        return Err(TournamentError::TooFewCompetitors {
            needed,
            got: competitors.len(),
        });
    }
    for (i, c) in competitors.iter().enumerate() {
        if competitors[..i].iter().any(|d| d.id == c.id) {
            return Err(TournamentError::DuplicateId(c.id.clone()));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RoundRobinConfig {
    pub event: String,
    /// Games per pair, game and color assignment.
    pub repeats: u32,
    pub seed: u64,
    #[serde(flatten)]
    pub settings: MatchSettings,
}

impl Default for RoundRobinConfig {
    fn default() -> Self {
        RoundRobinConfig {
            event: "round-robin".into(),
            repeats: 1,
            seed: 0,
            settings: MatchSettings::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Tournament {
    pub standings: Standings,
    pub records: Vec<MatchRecord>,
}

/// The full schedule: per game, every unordered pair with both color
/// assignments, `repeats` times. In one-player games each competitor
/// plays `repeats` solo games.
pub fn round_robin_schedule(
    games: &GameCatalog,
    competitors: &[Competitor],
    config: &RoundRobinConfig,
) -> Vec<MatchSetup> {
    let mut out = Vec::new();
    let mut push = |game: &str, spec, seats: Vec<Competitor>| {
        let index = out.len() as u64;
        let seed = derive_seed(config.seed, index);
        out.push(
            config
                .settings
                .setup(&config.event, None, index, game, spec, seats, seed),
        );
    };
    for (game, spec) in games.iter() {
        if spec.players() == 1 {
            for c in competitors {
                for _ in 0..config.repeats {
                    push(game, spec, vec![c.clone()]);
                }
            }
            continue;
        }
        for i in 0..competitors.len() {
            for j in i + 1..competitors.len() {
                for _ in 0..config.repeats {
                    push(
                        game,
                        spec,
                        vec![competitors[i].clone(), competitors[j].clone()],
                    );
                    push(
                        game,
                        spec,
                        vec![competitors[j].clone(), competitors[i].clone()],
                    );
                }
            }
        }
    }
    out
}

/// Plays a round robin. Records are appended to `store` in schedule
/// order, so equal configurations produce identical files.
pub fn run_round_robin(
    games: &GameCatalog,
    competitors: &[Competitor],
    config: &RoundRobinConfig,
    store: Option<&RecordStore>,
    observer: Option<&dyn MatchObserver>,
) -> Result<Tournament, TournamentError> {
    check_entrants(competitors, 2)?;
    if games.is_empty() {
        return Err(TournamentError::NoGames);
    }
    config
        .settings
        .clock
        .check()
        .map_err(TournamentError::Config)?;
    let schedule = round_robin_schedule(games, competitors, config);
    let records = play_all(&schedule, config.settings.workers, observer);
    if let Some(store) = store {
        store.append_all(&records)?;
    }
    let mut standings = Standings::with_entrants(competitors.iter().map(|c| c.id.as_str()));
    for r in &records {
        standings.add(r);
    }
    Ok(Tournament { standings, records })
}
