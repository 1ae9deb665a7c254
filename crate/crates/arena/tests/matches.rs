use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use ludeme::agents::{Agent, AgentConfig, AgentError, Budget, Observation, Regime};
use ludeme::engine::{library, Move, Outcome};
use ludeme_arena::{
    replay, run_match, Competitor, EventKind, GameCatalog, LiveEvent, MatchObserver, MatchSetup,
    Termination, TimeControl, Timestamp,
};

struct Scripted {
    sleep: Duration,
    behaviour: fn(&Observation) -> Move,
}

impl Agent for Scripted {
    fn name(&self) -> String {
        "scripted".into()
    }

    fn supports(&self, _: Regime) -> bool {
        true
    }

    fn select_move(&mut self, obs: &Observation, _: &Budget) -> Result<Move, AgentError> {
        std::thread::sleep(self.sleep);
        Ok((self.behaviour)(obs))
    }
}

fn first(obs: &Observation) -> Move {
    obs.legal_moves()[0]
}

fn scripted(id: &str, sleep_ms: u64, behaviour: fn(&Observation) -> Move) -> Competitor {
    Competitor::custom(id, "1", move |_| {
        Box::new(Scripted {
            sleep: Duration::from_millis(sleep_ms),
            behaviour,
        })
    })
}

fn builtin(id: &str, spec: &str) -> Competitor {
    Competitor::builtin(id, spec.parse::<AgentConfig>().unwrap()).unwrap()
}

fn setup(game: &str, seats: Vec<Competitor>, seed: u64) -> MatchSetup {
    let spec = Arc::new(library::game(game).unwrap());
    let mut s = MatchSetup::new("m", game, spec, seats, seed);
    s.clock = TimeControl::new(1_000, 2_000).unwrap();
    s
}

#[derive(Default)]
struct Collect(Mutex<Vec<LiveEvent>>);

impl MatchObserver for Collect {
    fn event(&self, e: LiveEvent) {
        self.0.lock().unwrap().push(e);
    }
}

#[test]
fn hex_match_replays_to_its_result() {
    let catalog = GameCatalog::library();
    let s = setup(
        "hex5",
        vec![builtin("uct", "uct?iters=200"), builtin("random", "random")],
        11,
    );
    let record = run_match(&s, None);
    assert_eq!(record.termination, Termination::Normal);
    assert_eq!(record.violations, [0, 0]);
    assert!(record.rule.is_some());
    assert_eq!(replay(&record, catalog.get("hex5").unwrap()), Ok(()));
    assert_eq!(record.agent_versions.len(), 2);
}

#[test]
fn seeded_matches_repeat_exactly() {
    let mk = || {
        let mut s = setup(
            "tictactoe",
            vec![builtin("a", "flat-mc?iters=50"), builtin("b", "random")],
            3,
        );
        s.timestamp = Timestamp::Logical;
        run_match(&s, None)
    };
    assert_eq!(mk().to_json_line(), mk().to_json_line());
}

#[test]
fn slow_agent_is_substituted_then_forfeits() {
    let budget = 100;
    let mut s = setup(
        "hex5",
        vec![
            scripted("sleepy", 10 * budget, first),
            builtin("r", "random"),
        ],
        5,
    );
    s.clock = TimeControl::new(1_000, budget).unwrap();
    let observer = Collect::default();
    let start = Instant::now();
    let record = run_match(&s, Some(&observer));
    let elapsed = start.elapsed();
    assert_eq!(record.violations, [3, 0]);
    assert!(matches!(
        record.termination,
        Termination::Forfeit { seat: 0, .. }
    ));
    assert_eq!(record.result, [Outcome::Loss, Outcome::Win]);
    assert_eq!(
        record.moves.len(),
        5,
        "three substitutes with two replies between"
    );
    // Three overruns, each cut off at the budget rather than the agent's sleep.
    assert!(
        elapsed < Duration::from_millis(3 * 2 * budget),
        "{elapsed:?}"
    );
    let events = observer.0.lock().unwrap();
    let clocks: Vec<_> = events
        .iter()
        .filter(|e| e.kind == EventKind::Clock)
        .collect();
    assert_eq!(clocks.len(), 3);
    let subs = events
        .iter()
        .filter(|e| e.kind == EventKind::Move && e.payload["substituted"] == true)
        .count();
    assert_eq!(subs, 3);
    assert_eq!(replay(&record, &s.spec), Ok(()));
}

#[test]
fn a_single_overrun_is_caught_within_twice_the_budget() {
    let budget = 150;
    let mut s = setup(
        "tictactoe",
        vec![
            scripted("sleepy", 10 * budget, first),
            builtin("r", "random"),
        ],
        5,
    );
    s.clock = TimeControl::new(1_000, budget).unwrap();
    let observer = Collect::default();
    let start = Instant::now();
    std::thread::scope(|scope| {
        scope.spawn(|| run_match(&s, Some(&observer)));
        loop {
            if observer
                .0
                .lock()
                .unwrap()
                .iter()
                .any(|e| e.kind == EventKind::Clock)
            {
                break;
            }
            assert!(
                start.elapsed() < Duration::from_millis(2 * budget),
                "no violation after {:?}",
                start.elapsed()
            );
            std::thread::sleep(Duration::from_millis(2));
        }
    });
}

#[test]
fn crashes_and_illegal_moves_forfeit() {
    fn boom(_: &Observation) -> Move {
        panic!("agent bug")
    }
    fn off_board(_: &Observation) -> Move {
        Move(10_000)
    }
    fn occupied(obs: &Observation) -> Move {
        (0..obs.state().cells().len())
            .map(Move)
            .find(|m| !obs.legal_moves().contains(m))
            .unwrap_or(Move(10_000))
    }
    let cases: [(fn(&Observation) -> Move, &str); 3] = [
        (boom, "crashed"),
        (off_board, "illegal"),
        (occupied, "illegal"),
    ];
    for (behaviour, reason) in cases {
        let s = setup(
            "tictactoe",
            vec![builtin("r", "random"), scripted("bad", 0, behaviour)],
            1,
        );
        let record = run_match(&s, None);
        match &record.termination {
            Termination::Forfeit { seat: 1, reason: r } => assert!(r.contains(reason), "{r}"),
            other => panic!("{other:?}"),
        }
        assert_eq!(record.result, [Outcome::Win, Outcome::Loss]);
        assert_eq!(replay(&record, &s.spec), Ok(()));
    }
}

#[test]
fn agents_outside_their_regime_forfeit() {
    let mut s = setup(
        "tictactoe",
        vec![builtin("r", "random"), builtin("u", "uct?iters=10")],
        1,
    );
    s.regime = Regime::Blind;
    let record = run_match(&s, None);
    assert!(matches!(
        record.termination,
        Termination::Forfeit { seat: 1, .. }
    ));
    assert!(record.moves.is_empty());
}

#[test]
fn puzzles_are_played_solo() {
    let catalog = GameCatalog::library();
    let (id, spec) = catalog
        .iter()
        .find(|(_, s)| s.players() == 1)
        .expect("a puzzle in the library");
    let s = MatchSetup::new("p", id, spec.clone(), vec![builtin("r", "random")], 2);
    let record = run_match(&s, None);
    assert_eq!(record.result.len(), 1);
    assert_ne!(record.result[0], Outcome::Draw);
    assert_eq!(replay(&record, spec), Ok(()));
}

#[test]
fn live_feed_is_ordered_and_complete() {
    let observer = Collect::default();
    let s = setup(
        "tictactoe",
        vec![builtin("a", "random"), builtin("b", "random")],
        9,
    );
    let record = run_match(&s, Some(&observer));
    let events = observer.0.lock().unwrap();
    assert_eq!(events[0].kind, EventKind::Snapshot);
    assert_eq!(events.last().unwrap().kind, EventKind::Result);
    for (i, e) in events.iter().enumerate() {
        assert_eq!(e.seq, i as u64);
        assert_eq!(e.match_id, "m");
    }
    let moves: Vec<_> = events
        .iter()
        .filter(|e| e.kind == EventKind::Move)
        .map(|e| e.payload["move"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(moves, record.moves);
}
