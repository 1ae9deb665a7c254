use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::agents::{Agent, Budget, Observation, RandomAgent, Regime, Uct, DEFAULT_C};
use crate::engine::{
    playout, GameSpec, Outcome, Player, PlayoutEnd, Status, Terminal, UniformRandom,
    DEFAULT_MOVE_CAP,
};
use crate::rng::derive_seed;

use super::par_map;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalConfig {
    /// Iterations per move for the uct-vs-uct playouts.
    pub uct_iterations: u64,
    /// Games of uct against random behind the strategic-depth proxy.
    pub depth_games: usize,
    pub depth_iterations: u64,
    pub move_cap: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            uct_iterations: 1000,
            depth_games: 20,
            depth_iterations: 1000,
            move_cap: DEFAULT_MOVE_CAP,
        }
    }
}

/// Outcome rates of one pair of policies. In a puzzle a solo loss is
/// counted in the P2 column.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolicyProfile {
    pub policy: String,
    pub playouts: usize,
    pub p1_win: f64,
    pub p2_win: f64,
    pub draw: f64,
    pub cap: f64,
    pub mean_length: f64,
}

/// Self-play quality metrics of a game.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalProfile {
    pub playouts: usize,
    pub p1_win: f64,
    pub p2_win: f64,
    pub draw: f64,
    pub cap: f64,
    pub mean_length: f64,
    /// 1 minus the gap between the two players' shares of decisive games.
    pub balance: f64,
    /// 1 minus the draw rate.
    pub decisiveness: f64,
    /// Strategic-depth proxy: how often uct beats random.
    pub depth: f64,
    /// Rule-complexity proxy: node count of the description.
    pub complexity: usize,
    pub by_policy: Vec<PolicyProfile>,
}

#[derive(Clone, Copy, Default)]
struct Tally {
    games: usize,
    p1: usize,
    p2: usize,
    draw: usize,
    cap: usize,
    moves: usize,
}

impl Tally {
    fn add(&mut self, end: &PlayoutEnd, length: usize) {
        self.games += 1;
        self.moves += length;
        match end {
            PlayoutEnd::MoveCap => self.cap += 1,
            PlayoutEnd::Terminal(t) => match t.outcome(Player::P1) {
                Outcome::Draw => self.draw += 1,
                Outcome::Win => self.p1 += 1,
                Outcome::Loss => self.p2 += 1,
            },
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.games += other.games;
        self.p1 += other.p1;
        self.p2 += other.p2;
        self.draw += other.draw;
        self.cap += other.cap;
        self.moves += other.moves;
        self
    }

    fn rate(&self, n: usize) -> f64 {
        if self.games == 0 {
            0.0
        } else {
            n as f64 / self.games as f64
        }
    }

    fn profile(&self, policy: &str) -> PolicyProfile {
        PolicyProfile {
            policy: policy.into(),
            playouts: self.games,
            p1_win: self.rate(self.p1),
            p2_win: self.rate(self.p2),
            draw: self.rate(self.draw),
            cap: self.rate(self.cap),
            mean_length: self.rate(self.moves),
        }
    }
}

/// Plays `n` random-vs-random and `n` uct-vs-uct games and aggregates
/// their outcome rates; also measures the depth proxy. Deterministic for a
/// given seed.
pub fn evaluate_game(spec: &GameSpec, n: usize, seed: u64, config: &EvalConfig) -> EvalProfile {
    assert!(n >= 1, "at least one playout per policy");
    let shared = Arc::new(spec.clone());

    let random = par_map((0..n).collect(), |i| {
        let t = playout(
            &shared,
            &shared.initial_state(),
            &mut UniformRandom,
            derive_seed(seed, i as u64),
            config.move_cap,
        );
        let mut tally = Tally::default();
        tally.add(&t.end, t.moves.len());
        tally
    })
    .into_iter()
    .fold(Tally::default(), Tally::merge);

    let uct = par_map((0..n).collect(), |i| {
        let s = derive_seed(seed ^ 0x5eed_0001, i as u64);
        let mut seats: Vec<Box<dyn Agent>> = (0..shared.players())
            .map(|p| uct_agent(config.uct_iterations, derive_seed(s, p as u64)))
            .collect();
        let (end, length) = agent_game(&shared, &mut seats, config.uct_iterations, config.move_cap);
        let mut tally = Tally::default();
        tally.add(&end, length);
        tally
    })
    .into_iter()
    .fold(Tally::default(), Tally::merge);

    let depth = depth_proxy(&shared, seed, config, &random);

    let all = random.merge(uct);
    let decisive = all.p1 + all.p2;
    let balance = if decisive == 0 {
        1.0
    } else {
        1.0 - (all.p1 as f64 - all.p2 as f64).abs() / decisive as f64
    };
    let draw = all.rate(all.draw);
    EvalProfile {
        playouts: all.games,
        p1_win: all.rate(all.p1),
        p2_win: all.rate(all.p2),
        draw,
        cap: all.rate(all.cap),
        mean_length: all.rate(all.moves),
        balance,
        decisiveness: 1.0 - draw,
        depth,
        complexity: spec.description().node_count(),
        by_policy: vec![random.profile("random"), uct.profile("uct")],
    }
}

fn uct_agent(iterations: u64, seed: u64) -> Box<dyn Agent> {
    Box::new(Uct::new(DEFAULT_C, Some(iterations), seed).expect("default constant is positive"))
}

/// Plays one game with `seats[p]` moving for player `p`.
fn agent_game(
    spec: &Arc<GameSpec>,
    seats: &mut [Box<dyn Agent>],
    iterations: u64,
    cap: usize,
) -> (PlayoutEnd, usize) {
    let mut state = spec.initial_state();
    let budget = Budget::iterations(iterations);
    let mut length = 0;
    loop {
        if let Status::Over(t) = spec.status(&state) {
            return (PlayoutEnd::Terminal(t), length);
        }
        if length >= cap {
            return (PlayoutEnd::MoveCap, length);
        }
        let obs = Observation::for_regime(spec, &state, Regime::ForwardModel)
            .expect("ongoing game has moves");
        let seat = &mut seats[state.mover().index()];
        let mv = seat
            .select_move(&obs, &budget)
            .expect("baseline agents play forward-model games");
        spec.advance(&mut state, mv);
        length += 1;
    }
}

fn depth_proxy(spec: &Arc<GameSpec>, seed: u64, config: &EvalConfig, random: &Tally) -> f64 {
    let games = config.depth_games;
    if games == 0 {
        return 0.0;
    }
    let results: Vec<Option<Terminal>> = par_map((0..games).collect(), |i| {
        let s = derive_seed(seed ^ 0xdee9_0002, i as u64);
        let uct_seat = if spec.players() == 1 { 0 } else { i % 2 };
        let mut seats: Vec<Box<dyn Agent>> = (0..spec.players())
            .map(|p| {
                if p == uct_seat {
                    uct_agent(config.depth_iterations, derive_seed(s, p as u64))
                } else {
                    Box::new(RandomAgent::new(derive_seed(s, p as u64))) as Box<dyn Agent>
                }
            })
            .collect();
        match agent_game(spec, &mut seats, config.depth_iterations, config.move_cap).0 {
            PlayoutEnd::Terminal(t) => Some(t),
            PlayoutEnd::MoveCap => None,
        }
    });
    let uct_wins = results
        .iter()
        .enumerate()
        .filter(|(i, t)| {
            let seat = if spec.players() == 1 {
                Player::P1
            } else {
                Player::from_index(i % 2).expect("two seats")
            };
            t.as_ref().is_some_and(|t| t.outcome(seat) == Outcome::Win)
        })
        .count() as f64
        / games as f64;
    if spec.players() == 1 {
        // Puzzles have no opponent: measure how much search improves on random play.
        (uct_wins - random.rate(random.p1)).max(0.0)
    } else {
        uct_wins
    }
}
