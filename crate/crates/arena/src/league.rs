use std::collections::BTreeMap;

use ludeme::engine::Outcome;
use ludeme::rng::derive_seed;
use serde::{Deserialize, Serialize};

use crate::catalog::GameCatalog;
use crate::competitor::Competitor;
use crate::leaderboard::{Leaderboard, LeaderboardConfig};
use crate::live::MatchObserver;
use crate::play::{play_all, MatchSettings};
use crate::record::{MatchRecord, RecordStore, Termination, Timestamp};
use crate::round_robin::{check_entrants, TournamentError};
use crate::standings::Standings;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LeagueConfig {
    pub event: String,
    /// Home and away fixtures for every pair.
    pub double: bool,
    pub seed: u64,
    #[serde(flatten)]
    pub settings: MatchSettings,
}

impl Default for LeagueConfig {
    fn default() -> Self {
        LeagueConfig {
            event: "league".into(),
            double: true,
            seed: 0,
            settings: MatchSettings::default(),
        }
    }
}

/// Round-by-round fixtures for `n` entrants by the circle method, as
/// (first seat, second seat) index pairs. With an odd count one entrant
/// rests each round. The double schedule repeats the rounds with seats swapped.
pub fn league_fixtures(n: usize, double: bool) -> Vec<Vec<(usize, usize)>> {
    if n < 2 {
        return Vec::new();
    }
    let m = n + n % 2;
    let mut ring: Vec<usize> = (1..m).collect();
    let mut rounds = Vec::new();
    for r in 0..m - 1 {
        let mut round = Vec::new();
        let mut pairs = vec![(0, ring[0])];
        for k in 1..m / 2 {
            pairs.push((ring[k], ring[m - 1 - k]));
        }
        for (k, (a, b)) in pairs.into_iter().enumerate() {
            if a >= n || b >= n {
                continue;
            }
            // Alternate seats so nobody keeps the first move.
            if (r + k) % 2 == 0 {
                round.push((a, b));
            } else {
                round.push((b, a));
            }
        }
        rounds.push(round);
        ring.rotate_right(1);
    }
    if double {
        let second: Vec<Vec<(usize, usize)>> = rounds
            .iter()
            .map(|round| round.iter().map(|&(a, b)| (b, a)).collect())
            .collect();
        rounds.extend(second);
    }
    rounds
}

/// A league in progress. Every fixture plays each league game once with
/// the listed seats. Agents can be replaced or withdrawn between rounds;
/// an entrant without an agent forfeits its fixtures for that round.
pub struct League {
    config: LeagueConfig,
    games: GameCatalog,
    entrants: Vec<String>,
    agents: BTreeMap<String, Competitor>,
    fixtures: Vec<Vec<(usize, usize)>>,
    next_round: usize,
    index: u64,
    records: Vec<MatchRecord>,
    standings: Standings,
}

impl League {
    pub fn new(
        games: &GameCatalog,
        competitors: &[Competitor],
        config: LeagueConfig,
    ) -> Result<Self, TournamentError> {
        check_entrants(competitors, 2)?;
        if games.is_empty() {
            return Err(TournamentError::NoGames);
        }
        if let Some((id, _)) = games.iter().find(|(_, s)| s.players() != 2) {
            return Err(TournamentError::Config(format!(
                "league games must be two-player; `{id}` is not"
            )));
        }
        config
            .settings
            .clock
            .check()
            .map_err(TournamentError::Config)?;
        let entrants: Vec<String> = competitors.iter().map(|c| c.id.clone()).collect();
        Ok(League {
            fixtures: league_fixtures(entrants.len(), config.double),
            standings: Standings::with_entrants(entrants.iter().map(String::as_str)),
            agents: competitors
                .iter()
                .map(|c| (c.id.clone(), c.clone()))
                .collect(),
            entrants,
            config,
            games: games.clone(),
            next_round: 0,
            index: 0,
            records: Vec::new(),
        })
    }

    pub fn fixtures(&self) -> &[Vec<(usize, usize)>] {
        &self.fixtures
    }

    pub fn entrants(&self) -> &[String] {
        &self.entrants
    }

    pub fn rounds(&self) -> usize {
        self.fixtures.len()
    }

    /// Rounds already played.
    pub fn played(&self) -> usize {
        self.next_round
    }

    pub fn is_finished(&self) -> bool {
        self.next_round >= self.fixtures.len()
    }

    /// Uploads a new version of an entrant's agent for later rounds.
    pub fn replace(&mut self, competitor: Competitor) -> Result<(), TournamentError> {
        if !self.entrants.contains(&competitor.id) {
            return Err(TournamentError::Config(format!(
                "`{}` is not in this league",
                competitor.id
            )));
        }
        self.agents.insert(competitor.id.clone(), competitor);
        Ok(())
    }

    /// Withdraws an entrant's agent; it forfeits until replaced.
    pub fn remove(&mut self, id: &str) -> Option<Competitor> {
        self.agents.remove(id)
    }

    pub fn standings(&self) -> &Standings {
        &self.standings
    }

    pub fn records(&self) -> &[MatchRecord] {
        &self.records
    }

    pub fn ratings(&self, config: &LeaderboardConfig) -> Leaderboard {
        Leaderboard::compute(&self.records, &self.games, config).expect("ratings converge")
    }

    /// Plays the next round and returns its records; `None` once finished.
    pub fn play_round(
        &mut self,
        store: Option<&RecordStore>,
        observer: Option<&dyn MatchObserver>,
    ) -> Result<Option<Vec<MatchRecord>>, TournamentError> {
        let Some(fixtures) = self.fixtures.get(self.next_round).cloned() else {
            return Ok(None);
        };
        let round = self.next_round as u32 + 1;
        let settings = &self.config.settings;
        let mut slots: Vec<Option<MatchRecord>> = Vec::new();
        let mut setups = Vec::new();
        for (a, b) in fixtures {
            let ids = [&self.entrants[a], &self.entrants[b]];
            let present = ids.map(|id| self.agents.get(id).cloned());
            for (game, spec) in self.games.iter() {
                let index = self.index;
                self.index += 1;
                let seed = derive_seed(self.config.seed, index);
                match &present {
                    [Some(x), Some(y)] => {
                        setups.push(settings.setup(
                            &self.config.event,
                            Some(round),
                            index,
                            game,
                            spec,
                            vec![x.clone(), y.clone()],
                            seed,
                        ));
                        slots.push(None);
                    }
                    // Nobody shows up: nothing to record.
                    [None, None] => {}
                    _ => {
                        let seat = if present[0].is_none() { 0 } else { 1 };
                        let at = match settings.timestamp {
                            Timestamp::Wall => Timestamp::now_ms(),
                            Timestamp::Logical => index,
                        };
                        slots.push(Some(MatchRecord {
                            match_id: format!("{}-{index:05}", self.config.event),
                            game_id: game.to_string(),
                            agents: ids.iter().map(|s| s.to_string()).collect(),
                            regime: settings.regime,
                            moves: Vec::new(),
                            result: (0..2)
                                .map(|i| {
                                    if i == seat {
                                        Outcome::Loss
                                    } else {
                                        Outcome::Win
                                    }
                                })
                                .collect(),
                            rule: None,
                            seed,
                            violations: vec![0, 0],
                            started_at: at,
                            ended_at: at,
                            termination: Termination::Forfeit {
                                seat,
                                reason: format!("no agent for round {round}"),
                            },
                            agent_versions: present
                                .iter()
                                .map(|c| c.as_ref().map(|c| c.version.clone()).unwrap_or_default())
                                .collect(),
                            event: self.config.event.clone(),
                            round: Some(round),
                        }));
                    }
                }
            }
        }
        let mut played = play_all(&setups, settings.workers, observer).into_iter();
        let records: Vec<MatchRecord> = slots
            .into_iter()
            .map(|slot| slot.unwrap_or_else(|| played.next().expect("one record per setup")))
            .collect();
        if let Some(store) = store {
            store.append_all(&records)?;
        }
        for r in &records {
            self.standings.add(r);
        }
        self.records.extend(records.iter().cloned());
        self.next_round += 1;
        Ok(Some(records))
    }
}

/// Plays a whole league.
pub fn run_league(
    games: &GameCatalog,
    competitors: &[Competitor],
    config: LeagueConfig,
    store: Option<&RecordStore>,
    observer: Option<&dyn MatchObserver>,
) -> Result<League, TournamentError> {
    let mut league = League::new(games, competitors, config)?;
    while league.play_round(store, observer)?.is_some() {}
    Ok(league)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn circle_method_pairs_everyone_once_per_half() {
        for n in 2..9 {
            let rounds = league_fixtures(n, true);
            let m = n + n % 2;
            assert_eq!(rounds.len(), 2 * (m - 1));
            let all: Vec<_> = rounds.iter().flatten().copied().collect();
            assert_eq!(all.len(), n * (n - 1));
            let distinct: BTreeSet<_> = all.iter().copied().collect();
            assert_eq!(
                distinct.len(),
                n * (n - 1),
                "every ordered pair exactly once"
            );
            for round in &rounds {
                let mut seen = BTreeSet::new();
                for &(a, b) in round {
                    assert!(seen.insert(a) && seen.insert(b));
                }
            }
        }
        let four = league_fixtures(4, true);
        assert_eq!(four.len(), 6);
        assert_eq!(four.iter().map(Vec::len).sum::<usize>(), 12);
    }
}
