//! Competition platform for ludeme games: clocked matches, round-robin,
//! elimination and league formats, Glicko-2 ratings, the leaderboard and
//! the append-only match record store.

mod audit;
mod catalog;
mod competitor;
pub mod config;
mod elimination;
pub mod glicko;
mod leaderboard;
mod league;
mod live;
mod play;
mod record;
mod round_robin;
mod standings;

pub use audit::{audit, replay, AuditReport};
pub use catalog::{CatalogError, GameCatalog};
pub use competitor::{AgentFactory, Competitor};
pub use elimination::{
    run_elimination, Bracket, EliminationConfig, EliminationResult, MiniMatch, BENCHMARK_ID,
};
pub use glicko::{glicko2_update, GameResult, GlickoError, Rating};
pub use leaderboard::{
    update_leaderboard, Leaderboard, LeaderboardConfig, LeaderboardError, PeriodPolicy,
    Quarantined, RatingState, WinStats, HUMAN_PREFIX,
};
pub use league::{league_fixtures, run_league, League, LeagueConfig};
pub use live::{EventKind, LiveEvent, MatchObserver};
pub use play::{run_match, MatchSettings, MatchSetup, TimeControl};
pub use record::{MatchRecord, RecordStore, StoreError, Termination, Timestamp};
pub use round_robin::{
    round_robin_schedule, run_round_robin, RoundRobinConfig, Tournament, TournamentError,
};
pub use standings::{Standing, Standings};
