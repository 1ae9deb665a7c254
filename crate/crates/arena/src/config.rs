//! Event files: one TOML document naming the games, agents, regime, clock
//! and seeds of a tournament.
//!
//! ```toml
//! name = "weekly"
//! format = "round-robin"
//! seed = 7
//! games = ["hex5", "tictactoe"]
//!
//! [clock]
//! per_move_ms = 2000
//!
//! [[agents]]
//! id = "uct"
//! agent = "uct?iters=1000"
//! ```

use std::path::Path;

use ludeme::agents::{AgentConfig, Regime};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{CatalogError, GameCatalog};
use crate::competitor::Competitor;
use crate::elimination::{run_elimination, EliminationConfig, EliminationResult};
use crate::league::{run_league, League, LeagueConfig};
use crate::live::MatchObserver;
use crate::play::{MatchSettings, TimeControl};
use crate::record::{RecordStore, Timestamp};
use crate::round_robin::{run_round_robin, RoundRobinConfig, Tournament, TournamentError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("bad event file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("agent `{id}`: {message}")]
    Agent { id: String, message: String },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    RoundRobin,
    Elimination,
    League,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "round-robin" => Ok(Format::RoundRobin),
            "elimination" => Ok(Format::Elimination),
            "league" => Ok(Format::League),
            _ => Err(format!(
                "unknown format `{s}` (round-robin, elimination, league)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentEntry {
    pub id: String,
    /// Agent spec such as `uct?c=1.41&iters=10000`.
    pub agent: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct EliminationSection {
    pub bracket_size: usize,
    pub games_per_match: usize,
    pub benchmark_games: usize,
}

impl Default for EliminationSection {
    fn default() -> Self {
        let d = EliminationConfig::default();
        EliminationSection {
            bracket_size: d.bracket_size,
            games_per_match: d.games_per_match,
            benchmark_games: d.benchmark_games,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct LeagueSection {
    pub double: bool,
}

impl Default for LeagueSection {
    fn default() -> Self {
        LeagueSection { double: true }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EventConfig {
    pub name: String,
    pub format: Format,
    pub seed: u64,
    pub repeats: u32,
    pub regime: Regime,
    pub workers: usize,
    pub timestamps: Timestamp,
    pub move_cap: usize,
    /// Library ids, or stems of files in `games_dir`.
    pub games: Vec<String>,
    pub games_dir: Option<String>,
    pub clock: TimeControl,
    pub agents: Vec<AgentEntry>,
    pub elimination: EliminationSection,
    pub league: LeagueSection,
}

impl Default for EventConfig {
    fn default() -> Self {
        let s = MatchSettings::default();
        EventConfig {
            name: "event".into(),
            format: Format::RoundRobin,
            seed: 0,
            repeats: 1,
            regime: s.regime,
            workers: s.workers,
            timestamps: s.timestamp,
            move_cap: s.move_cap,
            games: Vec::new(),
            games_dir: None,
            clock: s.clock,
            agents: Vec::new(),
            elimination: EliminationSection::default(),
            league: LeagueSection::default(),
        }
    }
}

/// What an event produced.
pub enum EventOutcome {
    RoundRobin(Tournament),
    Elimination(EliminationResult),
    League(League),
}

impl EventConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let c: EventConfig = toml::from_str(text)?;
        c.clock.check().map_err(ConfigError::Invalid)?;
        if c.repeats == 0 {
            return Err(ConfigError::Invalid("repeats must be positive".into()));
        }
        Ok(c)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn settings(&self) -> MatchSettings {
        MatchSettings {
            regime: self.regime,
            clock: self.clock,
            timestamp: self.timestamps,
            workers: self.workers,
            move_cap: self.move_cap,
        }
    }

    /// The listed games, looked up in `games_dir` (relative to `base`) and
    /// then in the library. An empty list means every available game.
    pub fn catalog(&self, base: &Path) -> Result<GameCatalog, ConfigError> {
        let library = GameCatalog::library();
        let local = match &self.games_dir {
            Some(dir) => GameCatalog::load_dir(base.join(dir))?,
            None => GameCatalog::new(),
        };
        if self.games.is_empty() {
            let mut all = library;
            for (id, spec) in local.iter() {
                all.insert_shared(id, spec.clone());
            }
            return Ok(all);
        }
        let mut out = GameCatalog::new();
        for id in &self.games {
            let spec = local.get(id).or_else(|_| library.get(id))?;
            out.insert_shared(id, spec.clone());
        }
        Ok(out)
    }

    pub fn competitors(&self) -> Result<Vec<Competitor>, ConfigError> {
        self.agents
            .iter()
            .map(|a| {
                let err = |message: String| ConfigError::Agent {
                    id: a.id.clone(),
                    message,
                };
                let config: AgentConfig = a
                    .agent
                    .parse()
                    .map_err(|e: ludeme::agents::AgentError| err(e.to_string()))?;
                Competitor::builtin(&a.id, config).map_err(|e| err(e.to_string()))
            })
            .collect()
    }

    pub fn run(
        &self,
        games: &GameCatalog,
        store: Option<&RecordStore>,
        observer: Option<&dyn MatchObserver>,
    ) -> Result<EventOutcome, ConfigError> {
        let competitors = self.competitors()?;
        let settings = self.settings();
        let wrap = |e: TournamentError| ConfigError::Invalid(e.to_string());
        Ok(match self.format {
            Format::RoundRobin => {
                let config = RoundRobinConfig {
                    event: self.name.clone(),
                    repeats: self.repeats,
                    seed: self.seed,
                    settings,
                };
                EventOutcome::RoundRobin(
                    run_round_robin(games, &competitors, &config, store, observer).map_err(wrap)?,
                )
            }
            Format::Elimination => {
                let config = EliminationConfig {
                    event: self.name.clone(),
                    bracket_size: self.elimination.bracket_size,
                    games_per_match: self.elimination.games_per_match,
                    benchmark_games: self.elimination.benchmark_games,
                    seed: self.seed,
                    settings,
                };
                EventOutcome::Elimination(
                    run_elimination(games, &competitors, &config, store, observer).map_err(wrap)?,
                )
            }
            Format::League => {
                let config = LeagueConfig {
                    event: self.name.clone(),
                    double: self.league.double,
                    seed: self.seed,
                    settings,
                };
                EventOutcome::League(
                    run_league(games, &competitors, config, store, observer).map_err(wrap)?,
                )
            }
        })
    }
}
