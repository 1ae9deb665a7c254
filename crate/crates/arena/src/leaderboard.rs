use std::collections::{BTreeMap, HashMap};

use ludeme::engine::Outcome;
use serde::{Deserialize, Serialize};

use crate::audit::replay;
use crate::catalog::GameCatalog;
use crate::glicko::{glicko2_update, GameResult, GlickoError, Rating, DEFAULT_TAU};
use crate::record::{MatchRecord, RecordStore, StoreError};

/// Competitor ids with this prefix are people playing through the service.
pub const HUMAN_PREFIX: &str = "human:";

/// How records are grouped into rating periods.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PeriodPolicy {
    /// One period per (event, round); records without a round are a period each.
    #[default]
    Round,
    /// One period per record.
    Match,
    /// A single period for everything.
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LeaderboardConfig {
    pub period: PeriodPolicy,
    pub tau: f64,
    /// Whether human results enter the ratings (they always count for win %).
    pub rate_humans: bool,
}

impl Default for LeaderboardConfig {
    fn default() -> Self {
        LeaderboardConfig {
            period: PeriodPolicy::Round,
            tau: DEFAULT_TAU,
            rate_humans: true,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct WinStats {
    pub games: u32,
    pub wins: u32,
    pub draws: u32,
    pub losses: u32,
    /// Wins over games, in percent; draws are not wins.
    pub win_pct: f64,
}

impl WinStats {
    fn add(&mut self, outcome: Outcome) {
        self.games += 1;
        match outcome {
            Outcome::Win => self.wins += 1,
            Outcome::Draw => self.draws += 1,
            Outcome::Loss => self.losses += 1,
        }
        self.win_pct = 100.0 * self.wins as f64 / self.games as f64;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatingState {
    pub id: String,
    pub human: bool,
    #[serde(flatten)]
    pub overall: WinStats,
    pub rating: f64,
    pub rd: f64,
    pub volatility: f64,
    pub per_game: BTreeMap<String, WinStats>,
    pub per_category: BTreeMap<String, WinStats>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Quarantined {
    pub match_id: String,
    pub reason: String,
}

/// Everyone ranked by rating, then deviation, then id.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Leaderboard {
    pub table: Vec<RatingState>,
    pub quarantined: Vec<Quarantined>,
}

impl Leaderboard {
    /// Recomputes the table from scratch. Records that fail replay are
    /// left out and listed in `quarantined`.
    pub fn compute(
        records: &[MatchRecord],
        catalog: &GameCatalog,
        config: &LeaderboardConfig,
    ) -> Result<Self, GlickoError> {
        let mut quarantined = Vec::new();
        let mut valid = Vec::new();
        for r in records {
            let check = catalog
                .get(&r.game_id)
                .map_err(|e| e.to_string())
                .and_then(|spec| replay(r, spec).map(|_| spec.category()));
            match check {
                Ok(category) => valid.push((r, category)),
                Err(reason) => quarantined.push(Quarantined {
                    match_id: r.match_id.clone(),
                    reason,
                }),
            }
        }

        let mut rows: BTreeMap<String, RatingState> = BTreeMap::new();
        for (r, category) in &valid {
            for (id, outcome) in r.agents.iter().zip(&r.result) {
                let row = rows.entry(id.clone()).or_insert_with(|| RatingState {
                    id: id.clone(),
                    human: id.starts_with(HUMAN_PREFIX),
                    overall: WinStats::default(),
                    rating: Rating::default().r,
                    rd: Rating::default().rd,
                    volatility: Rating::default().sigma,
                    per_game: BTreeMap::new(),
                    per_category: BTreeMap::new(),
                });
                row.overall.add(*outcome);
                row.per_game
                    .entry(r.game_id.clone())
                    .or_default()
                    .add(*outcome);
                row.per_category
                    .entry(category.to_string())
                    .or_default()
                    .add(*outcome);
            }
        }

        let rated = |id: &str| config.rate_humans || !id.starts_with(HUMAN_PREFIX);
        let mut ratings: BTreeMap<String, Rating> = BTreeMap::new();
        for period in periods(&valid, config.period) {
            let before = ratings.clone();
            let mut games: BTreeMap<&str, Vec<GameResult>> = BTreeMap::new();
            for r in period {
                if r.agents.len() != 2 || !r.agents.iter().all(|a| rated(a)) {
                    continue;
                }
                for seat in 0..2 {
                    let me = &r.agents[seat];
                    let them = &r.agents[1 - seat];
                    let opponent = before.get(them).copied().unwrap_or_default();
                    games.entry(me).or_default().push(GameResult {
                        opponent,
                        score: r.result[seat].score(),
                    });
                }
            }
            for id in games.keys() {
                ratings.entry(id.to_string()).or_default();
            }
            for (id, rating) in ratings.iter_mut() {
                let results = games.get(id.as_str()).map(Vec::as_slice).unwrap_or(&[]);
                let start = before.get(id).copied().unwrap_or_default();
                *rating = glicko2_update(start, results, config.tau)?;
            }
        }
        for (id, rating) in &ratings {
            if let Some(row) = rows.get_mut(id) {
                row.rating = rating.r;
                row.rd = rating.rd;
                row.volatility = rating.sigma;
            }
        }

        let mut table: Vec<RatingState> = rows.into_values().collect();
        table.sort_by(|a, b| {
            b.rating
                .total_cmp(&a.rating)
                .then(a.rd.total_cmp(&b.rd))
                .then_with(|| a.id.cmp(&b.id))
        });
        Ok(Leaderboard { table, quarantined })
    }

    pub fn get(&self, id: &str) -> Option<&RatingState> {
        self.table.iter().find(|r| r.id == id)
    }
}

fn periods<'a>(
    valid: &[(&'a MatchRecord, &str)],
    policy: PeriodPolicy,
) -> Vec<Vec<&'a MatchRecord>> {
    let mut out: Vec<Vec<&MatchRecord>> = Vec::new();
    let mut index: HashMap<(String, u32), usize> = HashMap::new();
    for (r, _) in valid {
        match (policy, r.round) {
            (PeriodPolicy::All, _) => {
                if out.is_empty() {
                    out.push(Vec::new());
                }
                out[0].push(r);
            }
            (PeriodPolicy::Round, Some(round)) => {
                let slot = *index.entry((r.event.clone(), round)).or_insert_with(|| {
                    out.push(Vec::new());
                    out.len() - 1
                });
                out[slot].push(r);
            }
            _ => out.push(vec![r]),
        }
    }
    out
}

/// Adds a batch to the store and returns the refreshed table. Records in
/// the batch that fail replay go to the store's quarantine file instead.
pub fn update_leaderboard(
    store: &RecordStore,
    new: &[MatchRecord],
    catalog: &GameCatalog,
    config: &LeaderboardConfig,
) -> Result<Leaderboard, LeaderboardError> {
    for r in new {
        let check = catalog
            .get(&r.game_id)
            .map_err(|e| e.to_string())
            .and_then(|spec| replay(r, spec));
        match check {
            Ok(()) => store.append(r)?,
            Err(reason) => store.quarantine(&r.to_json_line(), &reason)?,
        }
    }
    let mut board = Leaderboard::compute(&store.records()?, catalog, config)?;
    for r in new {
        if !board.quarantined.iter().any(|q| q.match_id == r.match_id) {
            if let Err(reason) = catalog
                .get(&r.game_id)
                .map_err(|e| e.to_string())
                .and_then(|s| replay(r, s))
            {
                board.quarantined.push(Quarantined {
                    match_id: r.match_id.clone(),
                    reason,
                });
            }
        }
    }
    Ok(board)
}

#[derive(Debug, thiserror::Error)]
pub enum LeaderboardError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Rating(#[from] GlickoError),
}
