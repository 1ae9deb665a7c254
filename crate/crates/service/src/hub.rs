use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock, TryLockError};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use ludeme::agents::{Agent, AgentConfig, Budget, Observation, Regime};
use ludeme::engine::{GameSpec, GameState, Outcome, Player, Status};
use ludeme_arena::{
    replay, run_match, Competitor, EventKind, GameCatalog, Leaderboard, LeaderboardConfig,
    MatchRecord, MatchSetup, RecordStore, Termination, TimeControl, Timestamp, HUMAN_PREFIX,
};
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::feed::{Feed, Feeds};

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    BadRequest(String),
    /// Rejected because of the session's current state.
    #[error("{0}")]
    Conflict(String),
    #[error("{0}")]
    Internal(String),
}

/// How long a human may think.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum HumanClock {
    /// Time is shown but never enforced.
    Advisory,
    /// Late moves count as violations; the third forfeits.
    Strict { per_move_ms: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ServiceConfig {
    /// Thinking time the agent gets for each reply.
    pub agent_move_ms: u64,
    pub human_clock: HumanClock,
    pub default_agent: String,
    pub leaderboard: LeaderboardConfig,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            agent_move_ms: 1_000,
            human_clock: HumanClock::Advisory,
            default_agent: "uct?iters=2000".into(),
            leaderboard: LeaderboardConfig::default(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct NewSession {
    pub game: String,
    #[serde(default)]
    pub agent: Option<String>,
    /// 1 or 2.
    #[serde(default = "first_seat")]
    pub human_seat: usize,
    pub handle: String,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn first_seat() -> usize {
    1
}

#[derive(Clone, Debug, Deserialize)]
pub struct SubmitMove {
    #[serde(rename = "move")]
    pub cell: String,
    /// Moves played so far as the client saw them; a mismatch is rejected.
    #[serde(default)]
    pub ply: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct NewMatch {
    pub game: String,
    pub agents: Vec<String>,
    #[serde(default)]
    pub per_move_ms: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellView {
    pub label: String,
    pub row: usize,
    pub col: usize,
    pub owner: Option<Player>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegionView {
    pub owner: Player,
    pub edge: String,
    pub cells: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoardView {
    pub family: String,
    pub side: usize,
    pub cells: Vec<CellView>,
    pub regions: Vec<RegionView>,
}

impl BoardView {
    pub fn new(spec: &GameSpec, state: &GameState) -> Self {
        let board = spec.board();
        BoardView {
            family: format!("{:?}", board.family()).to_lowercase(),
            side: board.side(),
            cells: (0..board.cell_count())
                .map(|c| {
                    let (row, col) = board.coords(c);
                    CellView {
                        label: board.label(c).to_string(),
                        row,
                        col,
                        owner: state.cells()[c],
                    }
                })
                .collect(),
            regions: board
                .regions()
                .iter()
                .map(|r| RegionView {
                    owner: r.owner,
                    edge: format!("{:?}", r.edge),
                    cells: r
                        .cells
                        .iter()
                        .map(|&c| board.label(c).to_string())
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GameInfo {
    pub id: String,
    pub name: String,
    pub players: usize,
    pub category: String,
    pub cells: usize,
    pub family: String,
    pub side: usize,
    pub description: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClockView {
    pub mode: HumanClock,
    /// Time since the human was put on move.
    pub human_elapsed_ms: u64,
    pub violations: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub game_id: String,
    pub handle: String,
    pub agent: String,
    /// 1 or 2.
    pub human_seat: usize,
    pub board: BoardView,
    pub moves: Vec<String>,
    pub to_move: Option<usize>,
    pub legal: Vec<String>,
    pub status: String,
    pub result: Option<Vec<Outcome>>,
    pub termination: Option<Termination>,
    pub clock: ClockView,
}

struct Session {
    id: String,
    game_id: String,
    spec: Arc<GameSpec>,
    handle: String,
    competitor: Competitor,
    agent: Box<dyn Agent>,
    human: usize,
    seed: u64,
    state: GameState,
    status: Status,
    moves: Vec<String>,
    violations: [u32; 2],
    termination: Option<Termination>,
    result: Option<Vec<Outcome>>,
    rule: Option<usize>,
    started_at: u64,
    human_since: Instant,
    feed: Arc<Feed>,
}

impl Session {
    fn ids(&self) -> Vec<String> {
        let mut ids = vec![self.competitor.id.clone(); 2];
        ids[self.human] = format!("{HUMAN_PREFIX}{}", self.handle);
        ids
    }

    fn over(&self) -> bool {
        self.termination.is_some()
    }

    fn view(&self, clock: HumanClock) -> SessionView {
        let legal = if self.over() {
            Vec::new()
        } else {
            self.state
                .empty_cells()
                .map(|c| self.spec.board().label(c).to_string())
                .collect()
        };
        SessionView {
            id: self.id.clone(),
            game_id: self.game_id.clone(),
            handle: self.handle.clone(),
            agent: self.competitor.id.clone(),
            human_seat: self.human + 1,
            board: BoardView::new(&self.spec, &self.state),
            moves: self.moves.clone(),
            to_move: (!self.over()).then(|| self.state.mover().index() + 1),
            legal,
            status: if self.over() { "over" } else { "ongoing" }.into(),
            result: self.result.clone(),
            termination: self.termination.clone(),
            clock: ClockView {
                mode: clock,
                human_elapsed_ms: if self.over() {
                    0
                } else {
                    self.human_since.elapsed().as_millis() as u64
                },
                violations: self.violations[self.human],
            },
        }
    }

    fn play(&mut self, seat: usize, cell: usize) {
        let mv = ludeme::engine::Move(cell);
        self.status = self.spec.advance(&mut self.state, mv);
        let label = self.spec.label(mv).to_string();
        self.feed.publish(
            EventKind::Move,
            json!({ "ply": self.moves.len(), "seat": seat, "move": label, "substituted": false }),
        );
        self.moves.push(label);
        if let Status::Over(t) = &self.status {
            self.result = Some(t.outcomes.clone());
            self.rule = t.rule;
            self.termination = Some(Termination::Normal);
        }
    }

    fn forfeit(&mut self, seat: usize, termination: Termination) {
        self.result = Some(
            (0..2)
                .map(|i| {
                    if i == seat {
                        Outcome::Loss
                    } else {
                        Outcome::Win
                    }
                })
                .collect(),
        );
        self.rule = None;
        self.termination = Some(termination);
    }

    /// Lets the agent move while it is on turn.
    fn agent_turn(&mut self, think: Duration) {
        while !self.over() && self.state.mover().index() != self.human {
            let seat = 1 - self.human;
            let picked = Observation::for_regime(&self.spec, &self.state, Regime::ForwardModel)
                .map_err(|e| e.to_string())
                .and_then(|obs| {
                    let agent = &mut self.agent;
                    catch_unwind(AssertUnwindSafe(|| {
                        agent.select_move(&obs, &Budget::time(think))
                    }))
                    .map_err(|_| "crashed".to_string())?
                    .map_err(|e| e.to_string())
                    .and_then(|mv| {
                        if obs.legal_moves().contains(&mv) {
                            Ok(mv)
                        } else {
                            Err(format!("illegal move #{}", mv.0))
                        }
                    })
                });
            match picked {
                Ok(mv) => self.play(seat, mv.0),
                Err(reason) => self.forfeit(seat, Termination::Forfeit { seat, reason }),
            }
        }
        self.human_since = Instant::now();
    }

    fn record(&self) -> MatchRecord {
        let mut versions = vec![self.competitor.version.clone(); 2];
        versions[self.human] = "human".into();
        MatchRecord {
            match_id: self.id.clone(),
            game_id: self.game_id.clone(),
            agents: self.ids(),
            regime: Regime::ForwardModel,
            moves: self.moves.clone(),
            result: self.result.clone().unwrap_or_default(),
            rule: self.rule,
            seed: self.seed,
            violations: self.violations.to_vec(),
            started_at: self.started_at,
            ended_at: now_ms(),
            termination: self.termination.clone().unwrap_or(Termination::Normal),
            agent_versions: versions,
            event: "session".into(),
            round: None,
        }
    }
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

/// Shared service state: catalog, sessions, feeds and the record store.
pub struct Hub {
    catalog: GameCatalog,
    store: RecordStore,
    config: ServiceConfig,
    feeds: Feeds,
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
    counter: AtomicU64,
    boot: u64,
    board: RwLock<Leaderboard>,
    /// Serialises store appends with the leaderboard refresh.
    writer: Mutex<()>,
}

impl Hub {
    pub fn new(
        catalog: GameCatalog,
        store: RecordStore,
        config: ServiceConfig,
    ) -> Result<Self, ServiceError> {
        let records = store
            .records()
            .map_err(|e| ServiceError::Internal(e.to_string()))?;
        let board = Leaderboard::compute(&records, &catalog, &config.leaderboard)
            .map_err(|e| ServiceError::Internal(e.to_string()))?;
        Ok(Hub {
            catalog,
            store,
            config,
            feeds: Feeds::default(),
            sessions: Mutex::new(HashMap::new()),
            counter: AtomicU64::new(0),
            boot: now_ms(),
            board: RwLock::new(board),
            writer: Mutex::new(()),
        })
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.config
    }

    pub fn store(&self) -> &RecordStore {
        &self.store
    }

    pub fn feeds(&self) -> &Feeds {
        &self.feeds
    }

    fn next_id(&self, prefix: &str) -> String {
        let n = self.counter.fetch_add(1, Ordering::Relaxed);
        format!("{prefix}-{:x}-{n}", self.boot)
    }

    pub fn games(&self) -> Vec<GameInfo> {
        self.catalog
            .iter()
            .map(|(id, spec)| GameInfo {
                id: id.to_string(),
                name: spec.name().to_string(),
                players: spec.players(),
                category: spec.category().to_string(),
                cells: spec.cell_count(),
                family: format!("{:?}", spec.board().family()).to_lowercase(),
                side: spec.board().side(),
                description: ludeme::grammar::print(spec.description()),
            })
            .collect()
    }

    pub fn leaderboard(&self) -> Leaderboard {
        self.board.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    /// Appends a finished record and refreshes the table.
    fn commit(&self, record: &MatchRecord) -> Result<(), ServiceError> {
        let _w = self.writer.lock().unwrap_or_else(|e| e.into_inner());
        let spec = self
            .catalog
            .get(&record.game_id)
            .map_err(|e| ServiceError::Internal(e.to_string()))?;
        if let Err(reason) = replay(record, spec) {
            let _ = self.store.quarantine(&record.to_json_line(), &reason);
            return Err(ServiceError::Internal(format!(
                "record failed replay: {reason}"
            )));
        }
        self.store
            .append(record)
            .map_err(|e| ServiceError::Internal(e.to_string()))?;
        let records = self
            .store
            .records()
            .map_err(|e| ServiceError::Internal(e.to_string()))?;
        let board = Leaderboard::compute(&records, &self.catalog, &self.config.leaderboard)
            .map_err(|e| ServiceError::Internal(e.to_string()))?;
        *self.board.write().unwrap_or_else(|e| e.into_inner()) = board;
        Ok(())
    }

    fn finish(&self, session: &Session) -> Result<(), ServiceError> {
        let record = session.record();
        session.feed.publish(
            EventKind::Result,
            json!({ "result": record.result, "rule": record.rule, "termination": record.termination }),
        );
        self.commit(&record)
    }

    fn competitor(&self, spec: Option<&str>) -> Result<Competitor, ServiceError> {
        let text = spec.unwrap_or(&self.config.default_agent);
        let config: AgentConfig = text
            .parse()
            .map_err(|e: ludeme::agents::AgentError| ServiceError::BadRequest(e.to_string()))?;
        Competitor::builtin(&config.to_string(), config)
            .map_err(|e| ServiceError::BadRequest(e.to_string()))
    }

    /// Opens a human-vs-agent session. If the agent has the first move it
    /// is already played in the returned view.
    pub fn create_session(&self, req: NewSession) -> Result<SessionView, ServiceError> {
        let spec = self
            .catalog
            .get(&req.game)
            .map_err(|e| ServiceError::NotFound(e.to_string()))?
            .clone();
        if spec.players() != 2 {
            return Err(ServiceError::BadRequest(format!(
                "`{}` is not a two-player game",
                req.game
            )));
        }
        if !(1..=2).contains(&req.human_seat) {
            return Err(ServiceError::BadRequest("human_seat must be 1 or 2".into()));
        }
        let handle = req.handle.trim().to_string();
        if handle.is_empty() || handle.len() > 40 || handle.chars().any(|c| c.is_control()) {
            return Err(ServiceError::BadRequest(
                "handle must be 1 to 40 printable characters".into(),
            ));
        }
        let competitor = self.competitor(req.agent.as_deref())?;
        let id = self.next_id("s");
        let seed = req
            .seed
            .unwrap_or_else(|| self.counter.load(Ordering::Relaxed) ^ self.boot);
        let feed = self.feeds.open(&id);
        let mut session = Session {
            id: id.clone(),
            game_id: req.game.clone(),
            state: spec.initial_state(),
            status: spec.status(&spec.initial_state()),
            spec,
            handle,
            agent: competitor.instantiate(seed),
            competitor,
            human: req.human_seat - 1,
            seed,
            moves: Vec::new(),
            violations: [0, 0],
            termination: None,
            result: None,
            rule: None,
            started_at: now_ms(),
            human_since: Instant::now(),
            feed,
        };
        session.feed.publish(
            EventKind::Snapshot,
            json!({ "game_id": session.game_id, "agents": session.ids(), "moves": [] }),
        );
        session.agent_turn(Duration::from_millis(self.config.agent_move_ms));
        if session.over() {
            self.finish(&session)?;
        }
        let view = session.view(self.config.human_clock);
        self.sessions
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .insert(id, Arc::new(Mutex::new(session)));
        Ok(view)
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ServiceError> {
        self.sessions
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::NotFound(format!("unknown session `{id}`")))
    }

    pub fn get_session(&self, id: &str) -> Result<SessionView, ServiceError> {
        let s = self.session(id)?;
        let s = s.lock().unwrap_or_else(|e| e.into_inner());
        Ok(s.view(self.config.human_clock))
    }

    fn lock_for_update(
        session: &Mutex<Session>,
    ) -> Result<std::sync::MutexGuard<'_, Session>, ServiceError> {
        match session.try_lock() {
            Ok(g) => Ok(g),
            Err(TryLockError::Poisoned(e)) => Ok(e.into_inner()),
            Err(TryLockError::WouldBlock) => Err(ServiceError::Conflict(
                "another move is being processed".into(),
            )),
        }
    }

    /// Plays the human's move and the agent's reply. A session handles one
    /// submission at a time; overlapping ones are rejected, not queued.
    pub fn submit_move(&self, id: &str, req: SubmitMove) -> Result<SessionView, ServiceError> {
        let handle = self.session(id)?;
        let mut s = Self::lock_for_update(&handle)?;
        if s.over() {
            return Err(ServiceError::Conflict("the game is over".into()));
        }
        if s.state.mover().index() != s.human {
            return Err(ServiceError::Conflict("not your turn".into()));
        }
        if let Some(ply) = req.ply {
            if ply != s.moves.len() {
                return Err(ServiceError::Conflict(format!(
                    "stale view: {} moves played, not {ply}",
                    s.moves.len()
                )));
            }
        }
        let cell = s
            .spec
            .parse_move(req.cell.trim())
            .map_err(|e| ServiceError::BadRequest(e.to_string()))?;
        if s.state.cells()[cell.0].is_some() {
            return Err(ServiceError::BadRequest(format!(
                "cell {} is occupied",
                req.cell.trim()
            )));
        }
        let human = s.human;
        if let HumanClock::Strict { per_move_ms } = self.config.human_clock {
            let used = s.human_since.elapsed().as_millis() as u64;
            if used > per_move_ms {
                s.violations[human] += 1;
                let v = s.violations[human];
                s.feed.publish(
                    EventKind::Clock,
                    json!({ "seat": human, "violations": v, "limit_ms": per_move_ms }),
                );
            }
        }
        s.play(human, cell.0);
        if !s.over() && s.violations[human] >= 3 {
            let reason = format!("{} clock violations", s.violations[human]);
            s.forfeit(
                human,
                Termination::Forfeit {
                    seat: human,
                    reason,
                },
            );
        }
        s.agent_turn(Duration::from_millis(self.config.agent_move_ms));
        if s.over() {
            self.finish(&s)?;
        }
        Ok(s.view(self.config.human_clock))
    }

    pub fn resign(&self, id: &str) -> Result<SessionView, ServiceError> {
        let handle = self.session(id)?;
        let mut s = Self::lock_for_update(&handle)?;
        if s.over() {
            return Err(ServiceError::Conflict("the game is over".into()));
        }
        let seat = s.human;
        s.forfeit(seat, Termination::Resigned { seat });
        self.finish(&s)?;
        Ok(s.view(self.config.human_clock))
    }

    /// Starts an agent-vs-agent match in the background; spectate it at
    /// the returned match id. The record is stored when it ends.
    pub fn start_match(self: &Arc<Self>, req: NewMatch) -> Result<String, ServiceError> {
        let spec = self
            .catalog
            .get(&req.game)
            .map_err(|e| ServiceError::NotFound(e.to_string()))?
            .clone();
        if req.agents.len() != spec.players() {
            return Err(ServiceError::BadRequest(format!(
                "`{}` needs {} agents",
                req.game,
                spec.players()
            )));
        }
        let seats = req
            .agents
            .iter()
            .map(|a| self.competitor(Some(a)))
            .collect::<Result<Vec<_>, _>>()?;
        let id = self.next_id("m");
        let mut setup = MatchSetup::new(&id, &req.game, spec, seats, req.seed.unwrap_or(self.boot));
        setup.event = "exhibition".into();
        setup.clock =
            TimeControl::new(10_000, req.per_move_ms.unwrap_or(self.config.agent_move_ms))
                .map_err(ServiceError::BadRequest)?;
        setup.timestamp = Timestamp::Wall;
        let feed = self.feeds.open(&id);
        feed.publish(
            EventKind::Snapshot,
            json!({ "game_id": req.game, "agents": req.agents, "moves": [] }),
        );
        let hub = Arc::clone(self);
        std::thread::spawn(move || {
            let record = run_match(&setup, Some(feed.as_ref()));
            let _ = hub.commit(&record);
        });
        Ok(id)
    }
}
