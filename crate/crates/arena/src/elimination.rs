use ludeme::agents::{AgentConfig, AgentKind};
use ludeme::engine::Outcome;
use ludeme::rng::{derive_seed, seeded};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::catalog::GameCatalog;
use crate::competitor::Competitor;
use crate::live::MatchObserver;
use crate::play::{play_all, MatchSettings, MatchSetup};
use crate::record::{MatchRecord, RecordStore};
use crate::round_robin::{check_entrants, TournamentError};
use crate::standings::Standings;

/// Id of the reference opponent in the qualifying phase.
pub const BENCHMARK_ID: &str = "benchmark-random";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EliminationConfig {
    pub event: String,
    /// Entrants admitted to the knockout; a qualifier runs when more enter.
    pub bracket_size: usize,
    /// Games per mini-match; must be odd.
    pub games_per_match: usize,
    /// Games in the qualifying benchmark, each played in both seats.
    pub benchmark_games: usize,
    pub seed: u64,
    #[serde(flatten)]
    pub settings: MatchSettings,
}

impl Default for EliminationConfig {
    fn default() -> Self {
        EliminationConfig {
            event: "elimination".into(),
            bracket_size: 8,
            games_per_match: 3,
            benchmark_games: 3,
            seed: 0,
            settings: MatchSettings::default(),
        }
    }
}

/// One pairing of the knockout. `b` is `None` for a bye.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MiniMatch {
    pub round: u32,
    pub a: String,
    pub b: Option<String>,
    pub games: Vec<String>,
    pub wins: [u32; 2],
    pub points: [u32; 2],
    pub winner: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bracket {
    pub rounds: Vec<Vec<MiniMatch>>,
}

impl Bracket {
    /// Mini-matches actually played (byes excluded).
    pub fn pairings(&self) -> usize {
        self.rounds
            .iter()
            .flatten()
            .filter(|m| m.b.is_some())
            .count()
    }
}

#[derive(Clone, Debug)]
pub struct EliminationResult {
    pub champion: String,
    pub bracket: Bracket,
    /// Qualifying table against the benchmark, when one ran.
    pub qualifier: Option<Standings>,
    /// Entrants that did not make the bracket.
    pub eliminated_in_qualifier: Vec<String>,
    pub records: Vec<MatchRecord>,
}

/// Bracket order for `size` slots (a power of two): seed 1 meets the
/// lowest seed, and the top two seeds can only meet in the final.
fn seed_order(size: usize) -> Vec<usize> {
    let mut order = vec![0];
    while order.len() < size {
        let n = order.len() * 2;
        order = order.iter().flat_map(|&s| [s, n - 1 - s]).collect();
    }
    order
}

fn pick_games(catalog: &GameCatalog, count: usize, seed: u64) -> Vec<String> {
    let ids: Vec<String> = catalog.ids().map(String::from).collect();
    let mut rng = seeded(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut pool = ids.clone();
        pool.shuffle(&mut rng);
        out.extend(pool.into_iter().take(count - out.len()));
    }
    out
}

/// Runs a knockout. Entrants are seeded in the given order, or by the
/// qualifier table when there are more entrants than bracket slots.
pub fn run_elimination(
    games: &GameCatalog,
    competitors: &[Competitor],
    config: &EliminationConfig,
    store: Option<&RecordStore>,
    observer: Option<&dyn MatchObserver>,
) -> Result<EliminationResult, TournamentError> {
    check_entrants(competitors, 2)?;
    if games.is_empty() {
        return Err(TournamentError::NoGames);
    }
    if config.games_per_match % 2 == 0 {
        return Err(TournamentError::Config(
            "games per mini-match must be odd".into(),
        ));
    }
    if config.bracket_size < 2 {
        return Err(TournamentError::Config(
            "bracket size must be at least 2".into(),
        ));
    }
    config
        .settings
        .clock
        .check()
        .map_err(TournamentError::Config)?;

    let mut records = Vec::new();
    let mut index = 0u64;
    let mut seeds: Vec<Competitor> = competitors.to_vec();
    let mut qualifier = None;
    let mut eliminated = Vec::new();

    if competitors.len() > config.bracket_size {
        let benchmark = Competitor::builtin(
            BENCHMARK_ID,
            AgentConfig::new(AgentKind::Random).with_seed(config.seed),
        )
        .expect("random agent builds");
        let chosen = pick_games(
            games,
            config.benchmark_games.max(1),
            derive_seed(config.seed, 0x9a11),
        );
        let event = format!("{}-qualifier", config.event);
        let mut setups = Vec::new();
        for c in competitors {
            for game in &chosen {
                let spec = games.get(game).expect("picked from the catalog");
                let mut seatings = vec![vec![c.clone()]];
                if spec.players() == 2 {
                    seatings = vec![
                        vec![c.clone(), benchmark.clone()],
                        vec![benchmark.clone(), c.clone()],
                    ];
                }
                for seats in seatings {
                    let seed = derive_seed(config.seed, index);
                    setups.push(config.settings.setup(
                        &event,
                        Some(0),
                        index,
                        game,
                        spec,
                        seats,
                        seed,
                    ));
                    index += 1;
                }
            }
        }
        let played = play_all(&setups, config.settings.workers, observer);
        let table = Standings::from_records(&played);
        records.extend(played);
        let points = |c: &Competitor| table.get(&c.id).map_or(0, |s| s.points);
        // Stable sort keeps entry order among equal scores.
        seeds.sort_by_key(|c| std::cmp::Reverse(points(c)));
        eliminated = seeds
            .split_off(config.bracket_size)
            .into_iter()
            .map(|c| c.id)
            .collect();
        qualifier = Some(table);
    }

    let size = seeds.len().next_power_of_two();
    let mut slots: Vec<Option<(usize, Competitor)>> = seed_order(size)
        .into_iter()
        .map(|s| seeds.get(s).map(|c| (s, c.clone())))
        .collect();

    let mut bracket = Bracket::default();
    let mut round = 1u32;
    while slots.len() > 1 {
        let chosen = pick_games(
            games,
            config.games_per_match,
            derive_seed(config.seed, 0x10000 + round as u64),
        );
        let event = config.event.clone();
        let mut setups: Vec<MatchSetup> = Vec::new();
        let mut pairs = Vec::new();
        for pair in slots.chunks(2) {
            let (a, b) = (pair[0].clone(), pair[1].clone());
            let start = setups.len();
            if let (Some((_, x)), Some((_, y))) = (&a, &b) {
                for (k, game) in chosen.iter().enumerate() {
                    let spec = games.get(game).expect("picked from the catalog");
                    let seats = match (spec.players(), k % 2) {
                        (1, _) => vec![x.clone()],
                        (_, 0) => vec![x.clone(), y.clone()],
                        _ => vec![y.clone(), x.clone()],
                    };
                    let seed = derive_seed(config.seed, index);
                    setups.push(config.settings.setup(
                        &event,
                        Some(round),
                        index,
                        game,
                        spec,
                        seats.clone(),
                        seed,
                    ));
                    index += 1;
                    if spec.players() == 1 {
                        let seed = derive_seed(config.seed, index);
                        setups.push(config.settings.setup(
                            &event,
                            Some(round),
                            index,
                            game,
                            spec,
                            vec![y.clone()],
                            seed,
                        ));
                        index += 1;
                    }
                }
            }
            pairs.push((a, b, start..setups.len()));
        }
        let played = play_all(&setups, config.settings.workers, observer);

        let mut next = Vec::new();
        let mut matches = Vec::new();
        for (a, b, range) in pairs {
            let (winner, mm) = match (a, b) {
                (Some(x), Some(y)) => {
                    let mut wins = [0u32; 2];
                    let mut points = [0u32; 2];
                    for r in &played[range] {
                        for (side, id) in [&x.1.id, &y.1.id].into_iter().enumerate() {
                            if let Some(seat) = r.seat_of(id) {
                                match r.result[seat] {
                                    Outcome::Win => {
                                        wins[side] += 1;
                                        points[side] += 3;
                                    }
                                    Outcome::Draw => points[side] += 1,
                                    Outcome::Loss => {}
                                }
                            }
                        }
                    }
                    let x_wins = (wins[0], points[0], std::cmp::Reverse(x.0))
                        > (wins[1], points[1], std::cmp::Reverse(y.0));
                    let w = if x_wins { x.clone() } else { y.clone() };
                    let mm = MiniMatch {
                        round,
                        a: x.1.id.clone(),
                        b: Some(y.1.id.clone()),
                        games: chosen.clone(),
                        wins,
                        points,
                        winner: w.1.id.clone(),
                    };
                    (Some(w), Some(mm))
                }
                (Some(x), None) | (None, Some(x)) => {
                    let mm = MiniMatch {
                        round,
                        a: x.1.id.clone(),
                        b: None,
                        games: Vec::new(),
                        wins: [0, 0],
                        points: [0, 0],
                        winner: x.1.id.clone(),
                    };
                    (Some(x), Some(mm))
                }
                (None, None) => (None, None),
            };
            next.push(winner);
            matches.extend(mm);
        }
        records.extend(played);
        bracket.rounds.push(matches);
        slots = next;
        round += 1;
    }

    if let Some(store) = store {
        store.append_all(&records)?;
    }
    let champion = slots[0].as_ref().expect("a champion remains").1.id.clone();
    Ok(EliminationResult {
        champion,
        bracket,
        qualifier,
        eliminated_in_qualifier: eliminated,
        records,
    })
}
