use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError, Sender};
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use ludeme::agents::{Agent, AgentError, Budget, Observation, Regime, TrainingGame};
use ludeme::engine::{GameSpec, Move, Outcome, Status, DEFAULT_MOVE_CAP};
use ludeme::rng::{derive_seed, seeded};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::competitor::Competitor;
use crate::live::{EventKind, LiveEvent, MatchObserver};
use crate::record::{MatchRecord, Termination, Timestamp};

/// Clock settings. A move that overruns `per_move_ms` is replaced by a
/// seeded random legal move and counts as a violation; the game is
/// forfeited right after the `max_violations`-th substitute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TimeControl {
    pub setup_ms: u64,
    pub per_move_ms: u64,
    pub max_violations: u32,
}

impl Default for TimeControl {
    fn default() -> Self {
        TimeControl {
            setup_ms: 60_000,
            per_move_ms: 5_000,
            max_violations: 3,
        }
    }
}

impl TimeControl {
    pub fn new(setup_ms: u64, per_move_ms: u64) -> Result<Self, String> {
        let tc = TimeControl {
            setup_ms,
            per_move_ms,
            ..Default::default()
        };
        tc.check()?;
        Ok(tc)
    }

    pub fn check(&self) -> Result<(), String> {
        if self.setup_ms == 0 || self.per_move_ms == 0 || self.max_violations == 0 {
            return Err("clock times and the violation limit must be positive".into());
        }
        Ok(())
    }

    fn per_move(&self) -> Duration {
        Duration::from_millis(self.per_move_ms)
    }

    /// What the agent is told it may use; the margin absorbs scheduling jitter.
    fn agent_budget(&self) -> Budget {
        Budget::time(Duration::from_millis((self.per_move_ms * 9 / 10).max(1)))
    }
}

/// Everything needed to play one match.
#[derive(Clone)]
pub struct MatchSetup {
    pub match_id: String,
    pub event: String,
    pub round: Option<u32>,
    pub game_id: String,
    pub spec: Arc<GameSpec>,
    /// One competitor per seat.
    pub seats: Vec<Competitor>,
    pub regime: Regime,
    pub clock: TimeControl,
    pub seed: u64,
    pub timestamp: Timestamp,
    /// Schedule position, used by logical timestamps.
    pub index: u64,
    pub training: Vec<TrainingGame>,
    pub move_cap: usize,
}

impl MatchSetup {
    pub fn new(
        match_id: &str,
        game_id: &str,
        spec: Arc<GameSpec>,
        seats: Vec<Competitor>,
        seed: u64,
    ) -> Self {
        MatchSetup {
            match_id: match_id.into(),
            event: "match".into(),
            round: None,
            game_id: game_id.into(),
            spec,
            seats,
            regime: Regime::ForwardModel,
            clock: TimeControl::default(),
            seed,
            timestamp: Timestamp::Wall,
            index: 0,
            training: Vec::new(),
            move_cap: DEFAULT_MOVE_CAP,
        }
    }
}

enum Request {
    Train(Vec<TrainingGame>, Duration),
    Move {
        seq: u64,
        obs: Observation,
        budget: Budget,
    },
}

enum Reply {
    Trained,
    Move {
        seq: u64,
        result: Result<Move, AgentError>,
    },
    Panicked(String),
}

enum Answer {
    Move(Move),
    Failed(String),
    Timeout,
}

/// An agent running on its own thread so the caller can enforce the clock.
struct Seat {
    tx: Sender<Request>,
    rx: Receiver<Reply>,
    next: u64,
}

impl Seat {
    fn spawn(agent: Box<dyn Agent>) -> Seat {
        let (req_tx, req_rx) = mpsc::channel::<Request>();
        let (rep_tx, rep_rx) = mpsc::channel::<Reply>();
        thread::spawn(move || {
            let mut agent = agent;
            for req in req_rx {
                let out = catch_unwind(AssertUnwindSafe(|| match req {
                    Request::Train(games, budget) => {
                        agent.train(&games, budget);
                        Reply::Trained
                    }
                    Request::Move { seq, obs, budget } => Reply::Move {
                        seq,
                        result: agent.select_move(&obs, &budget),
                    },
                }));
                match out {
                    Ok(reply) => {
                        if rep_tx.send(reply).is_err() {
                            break;
                        }
                    }
                    Err(payload) => {
                        let msg = payload
                            .downcast_ref::<&str>()
                            .map(|s| s.to_string())
                            .or_else(|| payload.downcast_ref::<String>().cloned())
                            .unwrap_or_else(|| "panic".into());
                        let _ = rep_tx.send(Reply::Panicked(msg));
                        break;
                    }
                }
            }
        });
        Seat {
            tx: req_tx,
            rx: rep_rx,
            next: 0,
        }
    }

    fn train(&mut self, games: Vec<TrainingGame>, limit: Duration) -> Result<bool, String> {
        if self.tx.send(Request::Train(games, limit)).is_err() {
            return Err("agent stopped".into());
        }
        let deadline = Instant::now() + limit;
        loop {
            match self
                .rx
                .recv_timeout(deadline.saturating_duration_since(Instant::now()))
            {
                Ok(Reply::Trained) => return Ok(true),
                Ok(Reply::Panicked(m)) => return Err(format!("crashed: {m}")),
                Ok(Reply::Move { .. }) => continue,
                Err(RecvTimeoutError::Timeout) => return Ok(false),
                Err(RecvTimeoutError::Disconnected) => return Err("crashed".into()),
            }
        }
    }

    fn ask(&mut self, obs: Observation, budget: Budget, limit: Duration) -> Answer {
        let seq = self.next;
        self.next += 1;
        if self.tx.send(Request::Move { seq, obs, budget }).is_err() {
            return Answer::Failed("crashed".into());
        }
        let deadline = Instant::now() + limit;
        loop {
            match self
                .rx
                .recv_timeout(deadline.saturating_duration_since(Instant::now()))
            {
                Ok(Reply::Move { seq: s, result }) if s == seq => {
                    return match result {
                        Ok(mv) => Answer::Move(mv),
                        Err(e) => Answer::Failed(e.to_string()),
                    }
                }
                // Late answers to earlier, already substituted requests.
                Ok(Reply::Move { .. }) | Ok(Reply::Trained) => continue,
                Ok(Reply::Panicked(m)) => return Answer::Failed(format!("crashed: {m}")),
                Err(RecvTimeoutError::Timeout) => return Answer::Timeout,
                Err(RecvTimeoutError::Disconnected) => return Answer::Failed("crashed".into()),
            }
        }
    }
}

struct Feed<'a> {
    observer: Option<&'a dyn MatchObserver>,
    match_id: &'a str,
    seq: u64,
}

impl Feed<'_> {
    fn send(&mut self, kind: EventKind, payload: serde_json::Value) {
        if let Some(o) = self.observer {
            o.event(LiveEvent {
                match_id: self.match_id.to_string(),
                kind,
                payload,
                seq: self.seq,
            });
            self.seq += 1;
        }
    }
}

/// Plays one clocked match and returns its record. Agent failures
/// (crashes, errors, illegal moves, repeated overruns) end the match as a
/// forfeit loss for that seat; they never abort the caller.
pub fn run_match(setup: &MatchSetup, observer: Option<&dyn MatchObserver>) -> MatchRecord {
    let spec = &setup.spec;
    let players = spec.players();
    assert_eq!(setup.seats.len(), players, "one competitor per seat");
    let started_wall = Timestamp::now_ms();
    let mut feed = Feed {
        observer,
        match_id: &setup.match_id,
        seq: 0,
    };
    feed.send(
        EventKind::Snapshot,
        json!({
            "game_id": setup.game_id,
            "agents": setup.seats.iter().map(|c| c.id.clone()).collect::<Vec<_>>(),
            "moves": Vec::<String>::new(),
        }),
    );

    let mut violations = vec![0u32; players];
    let mut moves: Vec<String> = Vec::new();
    let mut forfeit: Option<(usize, String)> = None;

    let mut seats = Vec::new();
    for (i, c) in setup.seats.iter().enumerate() {
        let agent = c.instantiate(derive_seed(setup.seed, i as u64));
        if forfeit.is_none() && !agent.supports(setup.regime) {
            forfeit = Some((
                i,
                format!(
                    "{} does not support the {} regime",
                    agent.name(),
                    setup.regime
                ),
            ));
        }
        seats.push(Seat::spawn(agent));
    }

    if forfeit.is_none() {
        for (i, seat) in seats.iter_mut().enumerate() {
            match seat.train(
                setup.training.clone(),
                Duration::from_millis(setup.clock.setup_ms),
            ) {
                Ok(true) => {}
                Ok(false) => violations[i] += 1,
                Err(reason) => {
                    forfeit = Some((i, reason));
                    break;
                }
            }
        }
    }

    let mut state = spec.initial_state();
    let mut status = spec.status(&state);
    let mut rng = seeded(derive_seed(setup.seed, 0xc10c));
    while forfeit.is_none() && !status.is_terminal() && moves.len() < setup.move_cap {
        let seat = state.mover().index();
        let obs = Observation::for_regime(spec, &state, setup.regime)
            .expect("ongoing game has legal moves");
        let legal = obs.legal_moves().to_vec();
        let mut substituted = false;
        let mv = match seats[seat].ask(obs, setup.clock.agent_budget(), setup.clock.per_move()) {
            Answer::Move(mv) if legal.contains(&mv) => mv,
            Answer::Move(mv) => {
                forfeit = Some((seat, format!("illegal move {}", describe(spec, mv))));
                break;
            }
            Answer::Failed(reason) => {
                forfeit = Some((seat, reason));
                break;
            }
            Answer::Timeout => {
                violations[seat] += 1;
                feed.send(
                    EventKind::Clock,
                    json!({ "seat": seat, "violations": violations[seat], "limit_ms": setup.clock.per_move_ms }),
                );
                substituted = true;
                legal[rng.random_range(0..legal.len())]
            }
        };
        status = spec.advance(&mut state, mv);
        let label = spec.label(mv).to_string();
        feed.send(
            EventKind::Move,
            json!({ "ply": moves.len(), "seat": seat, "move": label, "substituted": substituted }),
        );
        moves.push(label);
        if substituted && violations[seat] >= setup.clock.max_violations && !status.is_terminal() {
            forfeit = Some((seat, format!("{} clock violations", violations[seat])));
        }
    }

    let (result, rule, termination) = match (forfeit, &status) {
        (Some((seat, reason)), _) => {
            let result = (0..players)
                .map(|i| {
                    if i == seat {
                        Outcome::Loss
                    } else {
                        Outcome::Win
                    }
                })
                .collect();
            (result, None, Termination::Forfeit { seat, reason })
        }
        (None, Status::Over(t)) => (t.outcomes.clone(), t.rule, Termination::Normal),
        (None, Status::Ongoing) => (vec![Outcome::Draw; players], None, Termination::MoveCap),
    };

    let (started_at, ended_at) = match setup.timestamp {
        Timestamp::Wall => (started_wall, Timestamp::now_ms()),
        Timestamp::Logical => (setup.index, setup.index + moves.len() as u64),
    };
    let record = MatchRecord {
        match_id: setup.match_id.clone(),
        game_id: setup.game_id.clone(),
        agents: setup.seats.iter().map(|c| c.id.clone()).collect(),
        regime: setup.regime,
        moves,
        result,
        rule,
        seed: setup.seed,
        violations,
        started_at,
        ended_at,
        termination,
        agent_versions: setup.seats.iter().map(|c| c.version.clone()).collect(),
        event: setup.event.clone(),
        round: setup.round,
    };
    feed.send(
        EventKind::Result,
        json!({ "result": record.result, "rule": record.rule, "termination": record.termination }),
    );
    record
}

fn describe(spec: &GameSpec, mv: Move) -> String {
    if mv.0 < spec.cell_count() {
        spec.label(mv).to_string()
    } else {
        format!("#{}", mv.0)
    }
}

/// Plays matches on a pool of `workers` threads (0 means one per core)
/// and returns their records in input order.
pub(crate) fn play_all(
    setups: &[MatchSetup],
    workers: usize,
    observer: Option<&dyn MatchObserver>,
) -> Vec<MatchRecord> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    pool.install(|| setups.par_iter().map(|s| run_match(s, observer)).collect())
}

/// Settings shared by every match of an event.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct MatchSettings {
    pub regime: Regime,
    pub clock: TimeControl,
    pub timestamp: Timestamp,
    /// Concurrent matches; 0 uses every core.
    pub workers: usize,
    pub move_cap: usize,
}

impl Default for MatchSettings {
    fn default() -> Self {
        MatchSettings {
            regime: Regime::ForwardModel,
            clock: TimeControl::default(),
            timestamp: Timestamp::Logical,
            workers: 0,
            move_cap: DEFAULT_MOVE_CAP,
        }
    }
}

impl MatchSettings {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn setup(
        &self,
        event: &str,
        round: Option<u32>,
        index: u64,
        game_id: &str,
        spec: &Arc<GameSpec>,
        seats: Vec<Competitor>,
        seed: u64,
    ) -> MatchSetup {
        MatchSetup {
            match_id: format!("{event}-{index:05}"),
            event: event.to_string(),
            round,
            game_id: game_id.to_string(),
            spec: spec.clone(),
            seats,
            regime: self.regime,
            clock: self.clock,
            seed,
            timestamp: self.timestamp,
            index,
            training: Vec::new(),
            move_cap: self.move_cap,
        }
    }
}
